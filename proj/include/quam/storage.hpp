#pragma once

/**
 * @file
 * Loading a pattern set into a register as an equal-weight superposition.
 *
 * Two routes produce the same x-register state:
 *  - store_fast writes 1/sqrt(m) directly at every stored index;
 *  - store_circuit runs the FLIP / S^p / SAVE loop over an (n+2)-qubit
 *    register laid out as |x, c1 c2>, with x on qubits 0..n-1, c1 on qubit n
 *    and c2 on qubit n+1.
 *
 * The garbage register that a gate-level SAVE would need is not modelled.
 * SAVE is applied as an amplitude transfer c1 -> 0, which is exact on every
 * state the loop can reach when the patterns are distinct.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "quam/error.hpp"
#include "quam/gates.hpp"
#include "quam/patterns.hpp"
#include "quam/state.hpp"

namespace quam {

/// Width limit of the direct construction (2^24 amplitudes).
inline constexpr std::size_t kMaxFastWidth = 24;
/// Width limit of the gate-sequence construction (n + 2 qubits).
inline constexpr std::size_t kMaxCircuitWidth = 12;

/// x register plus the two control qubits, with a count of the register
/// operations applied so far.
class StorageState {
  public:
    explicit StorageState(std::size_t pattern_width)
        : width_{pattern_width}, state_{pattern_width + 2} {}

    [[nodiscard]] std::size_t pattern_width() const noexcept { return width_; }
    [[nodiscard]] std::size_t c1() const noexcept { return width_; }
    [[nodiscard]] std::size_t c2() const noexcept { return width_ + 1; }

    [[nodiscard]] const QuantumState &state() const noexcept { return state_; }
    [[nodiscard]] QuantumState &state() noexcept { return state_; }

    /// Full-register index of |x, c>.
    [[nodiscard]] BasisIndex index_of(BasisIndex x, unsigned c) const noexcept {
        return (x << 2) | (c & 3U);
    }

    /// Amplitude of |x, c> with c in 0..3 (c1 is the high bit).
    [[nodiscard]] std::complex<double> amplitude(BasisIndex x,
                                                 unsigned c) const {
        return state_[index_of(x, c)];
    }

    [[nodiscard]] std::uint64_t op_count() const noexcept { return ops_; }
    void count_op() noexcept { ++ops_; }

  private:
    std::size_t width_;
    QuantumState state_;
    std::uint64_t ops_ = 0;
};

using StorageTrace =
    std::function<void(std::string_view step, const StorageState &)>;

/// x-register state with amplitude 1/sqrt(m) on every stored pattern.
inline QuantumState store_fast(const PatternSet &patterns) {
    const std::size_t n = patterns.width();
    if (n > kMaxFastWidth) {
        throw InputError("direct storage supports at most " +
                         std::to_string(kMaxFastWidth) + " bits per pattern");
    }
    QuantumState s(n);
    auto amp = s.amplitudes();
    amp[0] = 0.0;
    const double weight = 1.0 / std::sqrt(static_cast<double>(patterns.size()));
    for (const auto &p : patterns) {
        amp[p.index()] = weight;
    }
    return s;
}

/// Where c2 = 0: flip x_j for every set bit of diff_mask, then flip c1.
inline void flip_step(StorageState &s, const BasisPattern &diff_mask) {
    if (diff_mask.width() != s.pattern_width()) {
        throw InputError("FLIP mask '" + diff_mask.str() + "' does not have " +
                         std::to_string(s.pattern_width()) + " bits");
    }
    const auto x = pauli_x();
    for (std::size_t j = 0; j < diff_mask.width(); ++j) {
        if (diff_mask.bit(j)) {
            apply_controlled_1q(s.state(), x, j, {{s.c2(), false}});
            s.count_op();
        }
    }
    apply_controlled_1q(s.state(), x, s.c1(), {{s.c2(), false}});
    s.count_op();
}

/// S^p on the (c1, c2) pair.
inline void split_step(StorageState &s, std::int64_t p) {
    apply_2q(s.state(), s_matrix(p), s.c1(), s.c2());
    s.count_op();
}

/// Moves every c1 = 1 amplitude to the same x and c2 with c1 = 0.
inline void save_step(StorageState &s) {
    constexpr double kOccupied = 1e-14;
    auto amp = s.state().amplitudes();
    const BasisIndex c1_bit = 2;
    for (BasisIndex i = 0; i < amp.size(); ++i) {
        if (!(i & c1_bit)) {
            continue;
        }
        const BasisIndex dest = i & ~c1_bit;
        if (std::abs(amp[i]) > kOccupied && std::abs(amp[dest]) > kOccupied) {
            throw InvariantError(
                "SAVE would overwrite a populated basis state; are the "
                "patterns distinct?");
        }
        amp[dest] += amp[i];
        amp[i] = 0.0;
    }
    s.count_op();
}

/// Runs the storage loop for p = m down to 1. Pattern k (1-based) is reached
/// from pattern k-1 with diff_mask = p_k XOR p_{k-1}, starting from all zeros.
/// `trace`, if set, sees the state after every FLIP, S^p and SAVE.
inline StorageState store_circuit(const PatternSet &patterns,
                                  const StorageTrace &trace = {}) {
    const std::size_t n = patterns.width();
    if (n > kMaxCircuitWidth) {
        throw InputError("circuit storage supports at most " +
                         std::to_string(kMaxCircuitWidth) +
                         " bits per pattern");
    }
    StorageState s(n);
    const auto m = static_cast<std::int64_t>(patterns.size());
    BasisIndex previous = 0;
    for (std::int64_t p = m; p >= 1; --p) {
        const BasisPattern &target = patterns[static_cast<std::size_t>(m - p)];
        flip_step(s, BasisPattern::from_index(target.index() ^ previous, n));
        if (trace) {
            trace("FLIP", s);
        }
        split_step(s, p);
        if (trace) {
            trace("S", s);
        }
        save_step(s);
        if (trace) {
            trace("SAVE", s);
        }
        previous = target.index();
    }
    return s;
}

/// Drops the control register once it is in a product state with x.
///
/// The (x, c) amplitude matrix must have rank 1 within 1e-10. The returned
/// x-register state is rescaled so its largest amplitude is real and
/// positive.
inline QuantumState reduce_registers(const StorageState &s) {
    constexpr double kRankTolerance = 1e-10;
    const std::size_t n = s.pattern_width();
    const BasisIndex rows = BasisIndex{1} << n;

    BasisIndex pivot_x = 0;
    unsigned pivot_c = 0;
    double pivot_mag = -1.0;
    for (BasisIndex x = 0; x < rows; ++x) {
        for (unsigned c = 0; c < 4; ++c) {
            const double mag = std::abs(s.amplitude(x, c));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_x = x;
                pivot_c = c;
            }
        }
    }
    const auto pivot = s.amplitude(pivot_x, pivot_c);
    // Every 2x2 minor through the pivot vanishes iff the matrix has rank 1.
    for (BasisIndex x = 0; x < rows; ++x) {
        for (unsigned c = 0; c < 4; ++c) {
            const auto minor = s.amplitude(x, c) * pivot -
                               s.amplitude(x, pivot_c) *
                                   s.amplitude(pivot_x, c);
            if (std::abs(minor) > kRankTolerance) {
                throw InvariantError(
                    "control register is entangled with the x register");
            }
        }
    }

    std::vector<std::complex<double>> column(rows);
    double norm2 = 0.0;
    for (BasisIndex x = 0; x < rows; ++x) {
        column[x] = s.amplitude(x, pivot_c);
        norm2 += std::norm(column[x]);
    }
    const auto phase = pivot / std::abs(pivot);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &c : column) {
        c = c / phase * scale;
    }
    return QuantumState(n, std::move(column));
}

} // namespace quam
