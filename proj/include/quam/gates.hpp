#pragma once

// Named operators of the associative-memory algorithms: Walsh-Hadamard,
// phase inversion over a set of basis states, inversion about the mean, the
// pattern-splitting rotation S^p and the conditional flips used by storage.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "quam/error.hpp"
#include "quam/patterns.hpp"
#include "quam/state.hpp"

namespace quam {

/// Sorted, duplicate-free set of basis indices to phase-invert.
class MarkSet {
  public:
    MarkSet() = default;

    explicit MarkSet(std::vector<BasisIndex> indices)
        : indices_{std::move(indices)} {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()),
                       indices_.end());
    }

    /// Union of two mark sets.
    [[nodiscard]] MarkSet merged(const MarkSet &other) const {
        std::vector<BasisIndex> out;
        out.reserve(indices_.size() + other.indices_.size());
        std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                       other.indices_.end(), std::back_inserter(out));
        MarkSet m;
        m.indices_ = std::move(out);
        return m;
    }

    [[nodiscard]] bool contains(BasisIndex i) const {
        return std::binary_search(indices_.begin(), indices_.end(), i);
    }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return indices_.end(); }
    [[nodiscard]] const std::vector<BasisIndex> &indices() const noexcept {
        return indices_;
    }

  private:
    std::vector<BasisIndex> indices_;
};

/// (1/sqrt 2) [[1, 1], [1, -1]]
template <std::floating_point Real = double> GateMatrix<2, Real> hadamard() {
    const Real h = Real{1} / std::sqrt(Real{2});
    GateMatrix<2, Real> g;
    g(0, 0) = h;
    g(0, 1) = h;
    g(1, 0) = h;
    g(1, 1) = -h;
    return g;
}

template <std::floating_point Real = double> GateMatrix<2, Real> pauli_x() {
    GateMatrix<2, Real> g;
    g(0, 1) = Real{1};
    g(1, 0) = Real{1};
    return g;
}

/// Two-qubit conditional NOT: flips the low qubit when the high qubit equals
/// `control_value`. control_value = 0 gives F^0, 1 gives F^1.
template <std::floating_point Real = double>
GateMatrix<4, Real> conditional_flip(bool control_value) {
    auto g = GateMatrix<4, Real>::identity();
    const std::size_t base = control_value ? 2 : 0;
    g(base, base) = g(base + 1, base + 1) = Real{0};
    g(base, base + 1) = g(base + 1, base) = Real{1};
    return g;
}

/// F^v on (control, target): flips `target` where `control` holds `value`.
template <typename Real>
void apply_conditional_flip(BasicQuantumState<Real> &state, std::size_t control,
                            bool value, std::size_t target) {
    apply_controlled_1q(state, pauli_x<Real>(), target, {{control, value}});
}

/// A^{v1 v2}: flips `target` iff (first, second) == (v1, v2).
template <typename Real>
void apply_and_flip(BasicQuantumState<Real> &state, std::size_t first, bool v1,
                    std::size_t second, bool v2, std::size_t target) {
    apply_controlled_1q(state, pauli_x<Real>(), target,
                        {{first, v1}, {second, v2}});
}

/// Hadamard on every qubit.
template <typename Real> void walsh_all(BasicQuantumState<Real> &state) {
    const auto h = hadamard<Real>();
    for (std::size_t q = 0; q < state.qubit_count(); ++q) {
        apply_controlled_1q(state, h, q);
    }
}

/// c_i <- -c_i for every i in marks.
template <typename Real>
void phase_invert(BasicQuantumState<Real> &state, const MarkSet &marks) {
    auto amp = state.amplitudes();
    if (!marks.empty() && marks.indices().back() >= amp.size()) {
        throw InputError("mark index " + std::to_string(marks.indices().back()) +
                         " out of range");
    }
    for (BasisIndex i : marks) {
        amp[i] = -amp[i];
    }
}

/// Mean amplitude, summed in ascending index order.
template <typename Real>
std::complex<Real> mean_amplitude(const BasicQuantumState<Real> &state) {
    std::complex<Real> acc{};
    for (const auto &c : state.amplitudes()) {
        acc += c;
    }
    return acc / static_cast<Real>(state.size());
}

/// Grover diffusion: c_i <- 2m - c_i with m the mean amplitude.
template <typename Real>
void invert_about_mean(BasicQuantumState<Real> &state) {
    const std::complex<Real> twice_mean = Real{2} * mean_amplitude(state);
    for (auto &c : state.amplitudes()) {
        c = twice_mean - c;
    }
}

/// Pattern-splitting rotation on the two control qubits, basis order
/// |00>, |01>, |10>, |11>. Identity on the upper block; the lower block
/// sends |10> to sqrt((p-1)/p)|10> + (1/sqrt p)|11>.
template <std::floating_point Real = double>
GateMatrix<4, Real> s_matrix(std::int64_t p) {
    if (p < 1) {
        throw InputError("S^p requires p >= 1");
    }
    const Real pr = static_cast<Real>(p);
    const Real keep = std::sqrt((pr - Real{1}) / pr);
    const Real split = Real{1} / std::sqrt(pr);
    auto g = GateMatrix<4, Real>::identity();
    g(2, 2) = keep;
    g(2, 3) = -split;
    g(3, 2) = split;
    g(3, 3) = keep;
    return g;
}

} // namespace quam
