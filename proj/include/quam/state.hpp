#pragma once

/**
 * @file
 * Dense state-vector register and the generic gate kernels that act on it.
 *
 * Qubits are numbered from 0. Qubit 0 is the most significant bit of the
 * basis index, so for n = 4 the amplitudes run |0000>, |0001>, ... |1111>.
 *
 * Reductions (norms, means, cumulative sums) always run in ascending index
 * order so that results are bit-reproducible for a given build.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <initializer_list>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quam/error.hpp"
#include "quam/patterns.hpp"

namespace quam {

/// Registers wider than this are rejected outright (2^26 amplitudes = 1 GiB).
inline constexpr std::size_t kMaxQubits = 26;

inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-10;

/// Square gate acting on Dim basis states, stored row-major.
template <std::size_t Dim, std::floating_point Real = double> struct GateMatrix {
    using value_type = std::complex<Real>;
    static constexpr std::size_t dimension = Dim;

    std::array<value_type, Dim * Dim> entries{};

    static GateMatrix identity() {
        GateMatrix g;
        for (std::size_t i = 0; i < Dim; ++i) {
            g(i, i) = Real{1};
        }
        return g;
    }

    value_type &operator()(std::size_t row, std::size_t col) {
        return entries[row * Dim + col];
    }
    const value_type &operator()(std::size_t row, std::size_t col) const {
        return entries[row * Dim + col];
    }

    [[nodiscard]] GateMatrix adjoint() const {
        GateMatrix out;
        for (std::size_t r = 0; r < Dim; ++r) {
            for (std::size_t c = 0; c < Dim; ++c) {
                out(r, c) = std::conj((*this)(c, r));
            }
        }
        return out;
    }

    friend GateMatrix operator*(const GateMatrix &a, const GateMatrix &b) {
        GateMatrix out;
        for (std::size_t r = 0; r < Dim; ++r) {
            for (std::size_t c = 0; c < Dim; ++c) {
                value_type acc{};
                for (std::size_t k = 0; k < Dim; ++k) {
                    acc += a(r, k) * b(k, c);
                }
                out(r, c) = acc;
            }
        }
        return out;
    }

    /// Largest entry of |G^dagger G - I|.
    [[nodiscard]] Real unitarity_error() const {
        const GateMatrix prod = adjoint() * *this;
        Real worst = 0;
        for (std::size_t r = 0; r < Dim; ++r) {
            for (std::size_t c = 0; c < Dim; ++c) {
                const value_type expect = r == c ? Real{1} : Real{0};
                worst = std::max(worst, std::abs(prod(r, c) - expect));
            }
        }
        return worst;
    }

    [[nodiscard]] bool is_unitary(Real tol = kUnitaryTolerance) const {
        return unitarity_error() <= tol;
    }
};

using Gate2 = GateMatrix<2>;
using Gate4 = GateMatrix<4>;

/// One control line: the gate fires only where `qubit` holds `value`.
struct Control {
    std::size_t qubit;
    bool value;
};

using ControlSpec = std::vector<Control>;

template <std::floating_point Real = double> class BasicQuantumState {
  public:
    using value_type = std::complex<Real>;

    /// |0...0> on n qubits.
    explicit BasicQuantumState(std::size_t qubit_count)
        : qubit_count_{checked_width(qubit_count)},
          amplitudes_(std::size_t{1} << qubit_count) {
        amplitudes_[0] = Real{1};
    }

    /// Takes ownership of a full amplitude vector; it must already be
    /// normalized.
    BasicQuantumState(std::size_t qubit_count,
                      std::vector<value_type> amplitudes)
        : qubit_count_{checked_width(qubit_count)},
          amplitudes_{std::move(amplitudes)} {
        if (amplitudes_.size() != (std::size_t{1} << qubit_count_)) {
            throw InputError("amplitude vector has " +
                             std::to_string(amplitudes_.size()) +
                             " entries, expected 2^" +
                             std::to_string(qubit_count_));
        }
        if (std::abs(norm_squared() - Real{1}) > kNormTolerance) {
            throw InputError("amplitude vector is not normalized");
        }
    }

    [[nodiscard]] std::size_t qubit_count() const noexcept {
        return qubit_count_;
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return amplitudes_.size();
    }

    [[nodiscard]] std::span<const value_type> amplitudes() const noexcept {
        return amplitudes_;
    }
    /// Raw mutable view for kernels. Callers own the normalization invariant.
    [[nodiscard]] std::span<value_type> amplitudes() noexcept {
        return amplitudes_;
    }

    [[nodiscard]] const value_type &operator[](BasisIndex i) const {
        return amplitudes_[i];
    }

    /// Index mask of qubit q.
    [[nodiscard]] BasisIndex mask_of(std::size_t q) const {
        if (q >= qubit_count_) {
            throw InputError("qubit index " + std::to_string(q) +
                             " out of range for a " +
                             std::to_string(qubit_count_) + "-qubit register");
        }
        return BasisIndex{1} << (qubit_count_ - 1 - q);
    }

    [[nodiscard]] Real norm_squared() const noexcept {
        Real acc = 0;
        for (const auto &c : amplitudes_) {
            acc += std::norm(c);
        }
        return acc;
    }

    /// Replace the register with a single basis state.
    void collapse_to(BasisIndex i) {
        std::fill(amplitudes_.begin(), amplitudes_.end(), value_type{});
        amplitudes_.at(i) = Real{1};
    }

  private:
    static std::size_t checked_width(std::size_t n) {
        if (n < 1 || n > kMaxQubits) {
            throw InputError("qubit count must be in 1.." +
                             std::to_string(kMaxQubits) + ", got " +
                             std::to_string(n));
        }
        return n;
    }

    std::size_t qubit_count_;
    std::vector<value_type> amplitudes_;
};

using QuantumState = BasicQuantumState<double>;

/// Basis state |label> on n qubits.
inline QuantumState new_basis_state(std::size_t n, const BasisPattern &label) {
    if (label.width() != n) {
        throw InputError("label '" + label.str() + "' does not have " +
                         std::to_string(n) + " bits");
    }
    QuantumState s(n);
    s.collapse_to(label.index());
    return s;
}

namespace detail {

/// Mask/value pair for a control list, validated against the register and
/// the qubits the gate itself acts on.
template <typename Real>
std::pair<BasisIndex, BasisIndex>
control_masks(const BasicQuantumState<Real> &state, const ControlSpec &controls,
              std::initializer_list<std::size_t> targets) {
    BasisIndex mask = 0;
    BasisIndex value = 0;
    for (const auto &c : controls) {
        const BasisIndex bit = state.mask_of(c.qubit);
        if (mask & bit) {
            throw InputError("qubit " + std::to_string(c.qubit) +
                             " appears twice among the controls");
        }
        for (std::size_t t : targets) {
            if (t == c.qubit) {
                throw InputError("qubit " + std::to_string(t) +
                                 " is both a target and a control");
            }
        }
        mask |= bit;
        if (c.value) {
            value |= bit;
        }
    }
    return {mask, value};
}

} // namespace detail

/// Applies a one-qubit gate to `target` on the subspace where every control
/// holds.
template <typename Real>
void apply_controlled_1q(BasicQuantumState<Real> &state,
                         const GateMatrix<2, Real> &gate, std::size_t target,
                         const ControlSpec &controls = {}) {
    if (!gate.is_unitary()) {
        throw InputError("gate is not unitary");
    }
    const BasisIndex tbit = state.mask_of(target);
    const auto [cmask, cval] = detail::control_masks(state, controls, {target});
    auto amp = state.amplitudes();
    const auto g00 = gate(0, 0), g01 = gate(0, 1);
    const auto g10 = gate(1, 0), g11 = gate(1, 1);
    for (BasisIndex i = 0; i < amp.size(); ++i) {
        if ((i & tbit) || (i & cmask) != cval) {
            continue;
        }
        const auto a0 = amp[i];
        const auto a1 = amp[i | tbit];
        amp[i] = g00 * a0 + g01 * a1;
        amp[i | tbit] = g10 * a0 + g11 * a1;
    }
}

/// Applies a two-qubit gate to the ordered pair (high, low): the gate's basis
/// |ab> has `a` on qubit `high` and `b` on qubit `low`.
template <typename Real>
void apply_2q(BasicQuantumState<Real> &state, const GateMatrix<4, Real> &gate,
              std::size_t high, std::size_t low,
              const ControlSpec &controls = {}) {
    if (!gate.is_unitary()) {
        throw InputError("gate is not unitary");
    }
    if (high == low) {
        throw InputError("two-qubit gate needs two distinct qubits");
    }
    const BasisIndex hbit = state.mask_of(high);
    const BasisIndex lbit = state.mask_of(low);
    const auto [cmask, cval] =
        detail::control_masks(state, controls, {high, low});
    auto amp = state.amplitudes();
    for (BasisIndex i = 0; i < amp.size(); ++i) {
        if ((i & (hbit | lbit)) || (i & cmask) != cval) {
            continue;
        }
        const std::array<BasisIndex, 4> idx{i, i | lbit, i | hbit,
                                            i | hbit | lbit};
        std::array<std::complex<Real>, 4> in{};
        for (std::size_t k = 0; k < 4; ++k) {
            in[k] = amp[idx[k]];
        }
        for (std::size_t r = 0; r < 4; ++r) {
            std::complex<Real> acc{};
            for (std::size_t k = 0; k < 4; ++k) {
                acc += gate(r, k) * in[k];
            }
            amp[idx[r]] = acc;
        }
    }
}

/// Total probability of the basis states matching `query`.
template <typename Real>
Real probability_of(const BasicQuantumState<Real> &state, const Query &query) {
    if (query.width() != state.qubit_count()) {
        throw InputError("query '" + query.str() + "' does not have " +
                         std::to_string(state.qubit_count()) + " symbols");
    }
    const auto amp = state.amplitudes();
    Real acc = 0;
    if (query.wildcard_count() < state.qubit_count() / 2) {
        for (BasisIndex i : query.matching_indices()) {
            acc += std::norm(amp[i]);
        }
        return acc;
    }
    for (BasisIndex i = 0; i < amp.size(); ++i) {
        if (query.matches(i)) {
            acc += std::norm(amp[i]);
        }
    }
    return acc;
}

/// Seeded generator used for every sampling routine.
using Rng = std::mt19937_64;

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_draw(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// First index whose cumulative weight exceeds u * total.
template <typename Real>
BasisIndex pick(std::span<const Real> cumulative, double u) {
    const Real threshold = static_cast<Real>(u) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), threshold);
    // upper_bound never lands on a zero-probability state: those share the
    // cumulative value of their predecessor.
    if (it == cumulative.end()) {
        --it;
    }
    return static_cast<BasisIndex>(it - cumulative.begin());
}

template <typename Real>
std::vector<Real> cumulative_probabilities(const BasicQuantumState<Real> &s) {
    std::vector<Real> cdf(s.size());
    Real acc = 0;
    const auto amp = s.amplitudes();
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        acc += std::norm(amp[i]);
        cdf[i] = acc;
    }
    return cdf;
}

} // namespace detail

/// Born-rule measurement of every qubit. The register collapses onto the
/// returned label. Consumes exactly one draw from `rng`.
template <typename Real>
BasisPattern measure_all(BasicQuantumState<Real> &state, Rng &rng) {
    if (std::abs(state.norm_squared() - Real{1}) > kNormTolerance) {
        throw InputError("cannot measure an unnormalized state");
    }
    const auto cdf = detail::cumulative_probabilities(state);
    const BasisIndex i =
        detail::pick(std::span<const Real>(cdf), detail::unit_draw(rng));
    state.collapse_to(i);
    return BasisPattern::from_index(i, state.qubit_count());
}

using Histogram = std::map<std::string, std::uint64_t>;

/// Repeated non-collapsing measurement. One draw per shot, so splitting a
/// run across calls on the same generator reproduces a single call.
template <typename Real>
Histogram sample(const BasicQuantumState<Real> &state, std::uint64_t shots,
                 Rng &rng) {
    if (shots == 0) {
        throw InputError("shots must be positive");
    }
    const auto cdf = detail::cumulative_probabilities(state);
    std::map<BasisIndex, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++counts[detail::pick(std::span<const Real>(cdf),
                              detail::unit_draw(rng))];
    }
    Histogram out;
    for (const auto &[idx, count] : counts) {
        out.emplace(BasisPattern::from_index(idx, state.qubit_count()).str(),
                    count);
    }
    return out;
}

template <typename Real>
Histogram sample(const BasicQuantumState<Real> &state, std::uint64_t shots,
                 std::uint64_t seed) {
    Rng rng(seed);
    return sample(state, shots, rng);
}

} // namespace quam
