#pragma once

/**
 * @file
 * Closed-form accuracy model of associative recall.
 *
 * After the two-oracle preamble (I_tau, G, I_rho, G) the register has four
 * amplitude classes, marked/unmarked crossed with stored/spurious. The
 * class amplitudes k0, k1, l0, l1 and the averages k_bar, l_bar are kept in
 * units of the initial stored amplitude 1/sqrt(p); every probability
 * computed here multiplies squared amplitudes by 1/p.
 *
 * Further rounds of (I_tau, G) only move the two class averages, via the
 * linear recurrence in evolve_averages. Deviations from the averages are
 * preserved, which is why P_max bounds every later success probability.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "quam/error.hpp"
#include "quam/gates.hpp"
#include "quam/patterns.hpp"

namespace quam {

/// N basis states, p stored patterns, r0 marked spurious states and r1
/// marked stored states.
struct RecallParameters {
    std::uint64_t N = 0;
    std::uint64_t p = 0;
    std::uint64_t r0 = 0;
    std::uint64_t r1 = 0;

    [[nodiscard]] std::uint64_t marked() const noexcept { return r0 + r1; }

    void validate() const {
        if (p < 1 || p > N || r1 > p || r0 + r1 > N || r0 > N - p) {
            throw InputError("inconsistent recall parameters (N=" +
                             std::to_string(N) + ", p=" + std::to_string(p) +
                             ", r0=" + std::to_string(r0) +
                             ", r1=" + std::to_string(r1) + ")");
        }
    }

    friend bool operator==(const RecallParameters &,
                           const RecallParameters &) = default;
};

struct FirstRound {
    double a = 0, b = 0;
    double k0 = 0, k1 = 0, l0 = 0, l1 = 0;
};

struct ClassAverages {
    double k_bar = 0;
    double l_bar = 0;
};

struct TheoryPoint {
    std::uint64_t t = 0;
    double p = 0;
};

struct TheoryReport {
    RecallParameters params;
    FirstRound first;
    ClassAverages averages;
    double p_max = 0;
    bool p_max_clamped = false;
    double t_raw = 0;
    std::uint64_t T = 0;
    std::vector<TheoryPoint> p_table;
};

inline RecallParameters derive_parameters(const PatternSet &patterns,
                                          const Query &query) {
    if (query.width() != patterns.width()) {
        throw InputError("query '" + query.str() + "' does not have " +
                         std::to_string(patterns.width()) + " symbols");
    }
    RecallParameters out;
    out.N = std::uint64_t{1} << patterns.width();
    out.p = patterns.size();
    for (const auto &pat : patterns) {
        if (query.matches(pat.index())) {
            ++out.r1;
        }
    }
    out.r0 = query.match_count() - out.r1;
    return out;
}

inline FirstRound first_round(const RecallParameters &rp) {
    rp.validate();
    const double N = static_cast<double>(rp.N);
    const double p = static_cast<double>(rp.p);
    const double r0 = static_cast<double>(rp.r0);
    const double r1 = static_cast<double>(rp.r1);
    FirstRound f;
    f.a = 2.0 * (p - 2.0 * r1) / N;
    f.b = 4.0 * (p + r0) / N;
    const double ab = f.a * f.b;
    f.k0 = 4.0 * f.a - ab;
    f.k1 = 4.0 * f.a - ab + 1.0;
    f.l0 = 2.0 * f.a - ab;
    f.l1 = 4.0 * f.a - ab - 1.0;
    return f;
}

/// Average marked and unmarked amplitudes after the preamble. With every
/// state marked there is no unmarked class and l_bar is reported as 0.
inline ClassAverages averages(const RecallParameters &rp) {
    rp.validate();
    if (rp.marked() == 0) {
        throw InputError("class averages need at least one marked state");
    }
    const FirstRound f = first_round(rp);
    const double N = static_cast<double>(rp.N);
    const double p = static_cast<double>(rp.p);
    const double r0 = static_cast<double>(rp.r0);
    const double r1 = static_cast<double>(rp.r1);
    ClassAverages out;
    out.k_bar = 4.0 * f.a - f.a * f.b + r1 / (r0 + r1);
    const double unmarked = N - r0 - r1;
    if (unmarked > 0) {
        out.l_bar = -f.a * f.b +
                    2.0 * f.a * (N + p - r0 - 2.0 * r1) / unmarked -
                    (p - r1) / unmarked;
    }
    return out;
}

/// Upper bound before clamping to [0, 1].
inline double p_max_unclamped(const RecallParameters &rp) {
    const FirstRound f = first_round(rp);
    const ClassAverages avg = averages(rp);
    const double N = static_cast<double>(rp.N);
    const double p = static_cast<double>(rp.p);
    const double r0 = static_cast<double>(rp.r0);
    const double r1 = static_cast<double>(rp.r1);
    const double d0 = f.l0 - avg.l_bar;
    const double d1 = f.l1 - avg.l_bar;
    return 1.0 - ((N - p - r0) * d0 * d0 + (p - r1) * d1 * d1) / p;
}

inline double p_max(const RecallParameters &rp) {
    return std::clamp(p_max_unclamped(rp), 0.0, 1.0);
}

/// Bound for plain Grover iteration from an arbitrary start:
/// 1 - sum over undesired j of |l_j - l_bar|^2.
inline double p_max_arbitrary_start(std::span<const std::complex<double>> amplitudes,
                          const MarkSet &desired) {
    if (!desired.empty() && desired.indices().back() >= amplitudes.size()) {
        throw InputError("desired index out of range");
    }
    const std::size_t undesired = amplitudes.size() - desired.size();
    if (undesired == 0) {
        return 1.0;
    }
    std::complex<double> sum{};
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (!desired.contains(i)) {
            sum += amplitudes[i];
        }
    }
    const std::complex<double> mean = sum / static_cast<double>(undesired);
    double variance = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (!desired.contains(i)) {
            variance += std::norm(amplitudes[i] - mean);
        }
    }
    return 1.0 - variance;
}

/// Advances (k_bar, l_bar) through t rounds of phase inversion of the marked
/// states followed by inversion about the mean.
inline ClassAverages evolve_averages(const RecallParameters &rp,
                                     ClassAverages start, std::uint64_t t) {
    rp.validate();
    const double N = static_cast<double>(rp.N);
    const double r = static_cast<double>(rp.marked());
    const double kk = 1.0 - 2.0 * r / N;
    const double kl = 2.0 * (N - r) / N;
    const double lk = -2.0 * r / N;
    const double ll = (N - 2.0 * r) / N;
    for (std::uint64_t i = 0; i < t; ++i) {
        const ClassAverages next{kk * start.k_bar + kl * start.l_bar,
                                 lk * start.k_bar + ll * start.l_bar};
        start = next;
    }
    return start;
}

/// Probability of observing a marked state after t extra rounds.
inline double p_at(const RecallParameters &rp, std::uint64_t t) {
    const ClassAverages l_t = evolve_averages(rp, averages(rp), t);
    const double unmarked = static_cast<double>(rp.N - rp.marked());
    return p_max_unclamped(rp) -
           unmarked * l_t.l_bar * l_t.l_bar / static_cast<double>(rp.p);
}

/// Real-valued optimum before rounding.
inline double optimal_T_raw(const RecallParameters &rp) {
    rp.validate();
    const std::uint64_t r = rp.marked();
    if (r == 0 || r == rp.N) {
        throw InputError("iteration count is undefined when no state or "
                         "every state is marked");
    }
    const ClassAverages avg = averages(rp);
    const double N = static_cast<double>(rp.N);
    const double rr = static_cast<double>(r);
    double angle = 0.0;
    if (avg.l_bar == 0.0) {
        angle = avg.k_bar == 0.0 ? 0.0
                                 : std::copysign(std::numbers::pi / 2.0,
                                                 avg.k_bar);
    } else {
        angle = std::atan(avg.k_bar / avg.l_bar * std::sqrt(rr / (N - rr)));
    }
    return (std::numbers::pi / 2.0 - angle) / std::acos(1.0 - 2.0 * rr / N);
}

/// Nearest integer (halves away from zero), never negative.
inline std::uint64_t optimal_T(const RecallParameters &rp) {
    const double rounded = std::round(optimal_T_raw(rp));
    return rounded <= 0.0 ? 0 : static_cast<std::uint64_t>(rounded);
}

/// Iterations in one full cycle of the success probability.
inline std::uint64_t rotation_period(const RecallParameters &rp) {
    const double r = static_cast<double>(rp.marked());
    const double N = static_cast<double>(rp.N);
    return static_cast<std::uint64_t>(
        std::ceil(std::numbers::pi / std::acos(1.0 - 2.0 * r / N)));
}

/// Full report with P(t) tabulated for t = 0..t_max.
inline TheoryReport theory_report(const RecallParameters &rp,
                                  std::uint64_t t_max) {
    TheoryReport rep;
    rep.params = rp;
    rep.first = first_round(rp);
    rep.averages = averages(rp);
    const double raw = p_max_unclamped(rp);
    rep.p_max = std::clamp(raw, 0.0, 1.0);
    rep.p_max_clamped = raw != rep.p_max;
    rep.t_raw = optimal_T_raw(rp);
    rep.T = optimal_T(rp);
    rep.p_table.reserve(t_max + 1);
    for (std::uint64_t t = 0; t <= t_max; ++t) {
        rep.p_table.push_back({t, p_at(rp, t)});
    }
    return rep;
}

} // namespace quam
