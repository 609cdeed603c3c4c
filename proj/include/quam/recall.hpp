#pragma once

/**
 * @file
 * Grover search and associative recall.
 *
 * grover_classic is the textbook search from the uniform superposition.
 * quam_recall_state is the modified search used for pattern completion:
 *
 *     I_tau, G, I_rho, G, then T rounds of (I_tau, G)
 *
 * where I_tau inverts every state matching the query and I_rho inverts every
 * stored pattern together with every query match. The second oracle gives
 * the spurious and the stored non-matching states the same phase, so the
 * remaining rounds behave like ordinary Grover iterations.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quam/analysis.hpp"
#include "quam/error.hpp"
#include "quam/gates.hpp"
#include "quam/patterns.hpp"
#include "quam/state.hpp"
#include "quam/storage.hpp"

namespace quam {

using StateTrace =
    std::function<void(std::string_view step, const QuantumState &)>;

/// All basis indices matching `query`. All-wildcard queries cover the whole
/// register and are refused unless `allow_all_wildcards` is set.
inline MarkSet query_marks(const Query &query, std::size_t n,
                           bool allow_all_wildcards = false) {
    if (query.width() != n) {
        throw InputError("query '" + query.str() + "' does not have " +
                         std::to_string(n) + " symbols");
    }
    if (query.all_wildcards() && !allow_all_wildcards) {
        throw InputError("query must fix at least one bit");
    }
    return MarkSet(query.matching_indices());
}

inline MarkSet stored_marks(const PatternSet &patterns) {
    return MarkSet(patterns.sorted_indices());
}

/// round(pi/4 * sqrt(N)).
inline std::uint64_t grover_iterations(std::size_t n) {
    const double N = std::ldexp(1.0, static_cast<int>(n));
    return static_cast<std::uint64_t>(
        std::round(std::numbers::pi / 4.0 * std::sqrt(N)));
}

struct GroverRun {
    QuantumState state;
    /// success[t] is the target probability after t iterations, t = 0..T.
    std::vector<double> success;
};

/// Standard search for `target` from |0...0>: Walsh on every qubit, then
/// (I_target, G) repeated `iterations` times (default round(pi/4 sqrt N)).
inline GroverRun grover_classic(std::size_t n, const BasisPattern &target,
                                std::optional<std::uint64_t> iterations = {},
                                const StateTrace &trace = {}) {
    QuantumState s = new_basis_state(n, BasisPattern::from_index(0, n));
    if (target.width() != n) {
        throw InputError("target '" + target.str() + "' does not have " +
                         std::to_string(n) + " bits");
    }
    walsh_all(s);
    if (trace) {
        trace("W", s);
    }
    const MarkSet marks({target.index()});
    const Query exact = Query::exact(target);
    const std::uint64_t rounds = iterations.value_or(grover_iterations(n));
    GroverRun run{std::move(s), {}};
    run.success.reserve(rounds + 1);
    run.success.push_back(probability_of(run.state, exact));
    for (std::uint64_t t = 0; t < rounds; ++t) {
        phase_invert(run.state, marks);
        if (trace) {
            trace("I_tau", run.state);
        }
        invert_about_mean(run.state);
        if (trace) {
            trace("G", run.state);
        }
        run.success.push_back(probability_of(run.state, exact));
    }
    return run;
}

struct OpCounts {
    std::uint64_t storage = 0;
    std::uint64_t oracle = 0;
    std::uint64_t diffusion = 0;

    friend bool operator==(const OpCounts &, const OpCounts &) = default;
};

struct RecallRun {
    QuantumState state;
    std::uint64_t iterations = 0;
    OpCounts ops;
};

/// Applies the two-oracle preamble to `stored` and then the Grover rounds.
/// The round count comes from the closed-form optimum unless overridden.
inline RecallRun quam_recall_state(QuantumState stored,
                                   const PatternSet &patterns,
                                   const Query &query,
                                   std::optional<std::uint64_t> rounds = {},
                                   const StateTrace &trace = {}) {
    const std::size_t n = patterns.width();
    if (stored.qubit_count() != n) {
        throw InputError("stored state width does not match the patterns");
    }
    const MarkSet tau = query_marks(query, n);
    const MarkSet rho = stored_marks(patterns).merged(tau);
    const std::uint64_t T =
        rounds ? *rounds : optimal_T(derive_parameters(patterns, query));

    RecallRun run{std::move(stored), T, {}};
    auto step = [&](std::string_view name, auto &&op) {
        op();
        if (trace) {
            trace(name, run.state);
        }
    };
    auto oracle = [&](const MarkSet &marks) {
        phase_invert(run.state, marks);
        ++run.ops.oracle;
    };
    auto diffuse = [&] {
        invert_about_mean(run.state);
        ++run.ops.diffusion;
    };

    step("I_tau", [&] { oracle(tau); });
    step("G", diffuse);
    step("I_rho", [&] { oracle(rho); });
    step("G", diffuse);
    for (std::uint64_t t = 0; t < T; ++t) {
        step("I_tau", [&] { oracle(tau); });
        step("G", diffuse);
    }
    return run;
}

enum class StorageMethod { fast, circuit };

struct RecallOptions {
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> rounds;
    StorageMethod method = StorageMethod::fast;
};

struct RecallOutcome {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string query;
    /// Exact probability of every basis state, by index.
    std::vector<double> distribution;
    /// Majority vote among query-matching observations; empty when no
    /// observation matched.
    std::optional<BasisPattern> answer;
    /// Observation counts of the query-matching labels.
    std::map<std::string, std::uint64_t> votes;
    std::uint64_t shots = 0;
    std::uint64_t matching_shots = 0;
    std::uint64_t T = 0;
    double success_probability = 0.0;
    OpCounts ops;

    [[nodiscard]] bool failed() const noexcept { return !answer.has_value(); }
};

/// Builds the stored state with the chosen method.
inline QuantumState build_memory(const PatternSet &patterns,
                                 StorageMethod method, OpCounts &ops) {
    if (method == StorageMethod::circuit) {
        const StorageState s = store_circuit(patterns);
        ops.storage = s.op_count();
        return reduce_registers(s);
    }
    // One amplitude write per pattern.
    ops.storage = patterns.size();
    return store_fast(patterns);
}

/// Store, recall, observe `shots` times and vote.
inline RecallOutcome quam_recall(const PatternSet &patterns, const Query &query,
                                 const RecallOptions &opt = {}) {
    OpCounts storage_ops;
    QuantumState stored = build_memory(patterns, opt.method, storage_ops);
    RecallRun run = quam_recall_state(std::move(stored), patterns, query,
                                      opt.rounds);

    RecallOutcome out;
    out.n = patterns.width();
    out.m = patterns.size();
    out.query = query.str();
    out.T = run.iterations;
    out.ops = run.ops;
    out.ops.storage = storage_ops.storage;
    out.shots = opt.shots;
    out.success_probability = probability_of(run.state, query);

    out.distribution.reserve(run.state.size());
    for (const auto &c : run.state.amplitudes()) {
        out.distribution.push_back(std::norm(c));
    }

    const Histogram observed = sample(run.state, opt.shots, opt.seed);
    const BasisPattern *best = nullptr;
    std::uint64_t best_count = 0;
    std::vector<BasisPattern> labels;
    for (const auto &[label, count] : observed) {
        BasisPattern p(label);
        if (!query.matches(p.index())) {
            continue;
        }
        out.votes.emplace(label, count);
        out.matching_shots += count;
        labels.push_back(p);
    }
    // Histogram keys are ordered, so the first label reaching the maximum
    // wins ties lexicographically.
    for (const auto &p : labels) {
        const std::uint64_t count = out.votes.at(p.str());
        if (best == nullptr || count > best_count) {
            best = &p;
            best_count = count;
        }
    }
    if (best != nullptr) {
        out.answer = *best;
    }
    return out;
}

} // namespace quam
