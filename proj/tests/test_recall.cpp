#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "quam/quam.hpp"

using namespace quam;
using namespace quam::testing;

namespace {

const double kRootSix = std::sqrt(6.0);

PatternSet six() {
    return PatternSet({"0000", "0011", "0110", "1001", "1100", "1111"});
}

RecallOptions options(std::uint64_t shots, std::uint64_t seed) {
    RecallOptions opt;
    opt.shots = shots;
    opt.seed = seed;
    return opt;
}

} // namespace

TEST(QueryMarks, WildcardsExpand) {
    EXPECT_EQ(query_marks(Query("011?"), 4).indices(),
              (std::vector<BasisIndex>{6, 7}));
    EXPECT_EQ(query_marks(Query("?0?1"), 4).indices(),
              (std::vector<BasisIndex>{1, 3, 9, 11}));
    EXPECT_THROW(query_marks(Query("01"), 4), InputError);
    EXPECT_THROW(query_marks(Query("????"), 4), InputError);
    EXPECT_EQ(query_marks(Query("??"), 2, true).size(), 4U);
}

TEST(Grover, DefaultIterationCounts) {
    EXPECT_EQ(grover_iterations(2), 2U);
    EXPECT_EQ(grover_iterations(4), 3U);
    EXPECT_EQ(grover_iterations(10), 25U);
}

TEST(Grover, SixteenStateGoldenAmplitudes) {
    std::vector<std::string> steps;
    const auto run = grover_classic(
        4, BasisPattern("0110"), {},
        [&](std::string_view name, const QuantumState &) {
            steps.emplace_back(name);
        });
    expect_amplitudes(run.state, scaled(sixteen(-13, {{6, 251}}), 256.0),
                      1e-12);
    ASSERT_EQ(run.success.size(), 4U);
    EXPECT_NEAR(run.success[0], 1.0 / 16, 1e-12);
    EXPECT_NEAR(run.success[1], 121.0 / 256, 1e-12);
    EXPECT_NEAR(run.success[2], 0.908, 1e-3);
    EXPECT_NEAR(run.success[3], 0.9613, 1e-4);
    EXPECT_EQ(steps, (std::vector<std::string>{"W", "I_tau", "G", "I_tau", "G",
                                               "I_tau", "G"}));
}

TEST(Grover, OvershootFallsBack) {
    const auto run = grover_classic(4, BasisPattern("0110"), 4);
    EXPECT_NEAR(run.success[4], 0.58, 0.01);
}

TEST(Grover, MatchesRotationFormula) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const double N = std::ldexp(1.0, static_cast<int>(n));
        const double theta = std::asin(1.0 / std::sqrt(N));
        const auto target = BasisPattern::from_index((N - 1) / 3, n);
        const auto run = grover_classic(n, target, 3 * grover_iterations(n));
        for (std::size_t k = 0; k < run.success.size(); ++k) {
            const double want = std::pow(std::sin((2.0 * k + 1) * theta), 2);
            EXPECT_NEAR(run.success[k], want, 1e-10) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Grover, DefaultCountSucceedsWithHighProbability) {
    for (std::size_t n = 3; n <= 12; ++n) {
        const auto run = grover_classic(n, BasisPattern::from_index(1, n));
        EXPECT_GE(run.success.back(), 0.94) << "n=" << n;
        const double peak = *std::max_element(run.success.begin(),
                                              run.success.end());
        EXPECT_GE(run.success.back(), peak - 0.05) << "n=" << n;
    }
}

TEST(Grover, FirstMaximumLocation) {
    for (std::size_t n = 2; n <= 10; ++n) {
        const double N = std::ldexp(1.0, static_cast<int>(n));
        const double theta = std::asin(1.0 / std::sqrt(N));
        const auto peak_k = static_cast<std::size_t>(
            std::round(std::numbers::pi / (4 * theta) - 0.5));
        const auto run = grover_classic(n, BasisPattern::from_index(0, n),
                                        2 * grover_iterations(n));
        const auto best = std::max_element(run.success.begin(),
                                           run.success.begin() + 2 * peak_k + 1);
        EXPECT_EQ(static_cast<std::size_t>(best - run.success.begin()), peak_k)
            << "n=" << n;
    }
    // The default count misses the peak by one for these widths.
    for (std::size_t n : {2U, 7U, 8U, 9U}) {
        const auto run = grover_classic(n, BasisPattern::from_index(0, n));
        const auto peak = grover_classic(n, BasisPattern::from_index(0, n),
                                         grover_iterations(n) - 1);
        EXPECT_LT(run.success.back(), peak.success.back()) << "n=" << n;
    }
}

TEST(QuamRecall, SixPatternsWildcardQueryTrace) {
    std::vector<std::string> steps;
    std::vector<QuantumState> states;
    const auto run = quam_recall_state(
        store_fast(six()), six(), Query("011?"), {},
        [&](std::string_view name, const QuantumState &s) {
            steps.emplace_back(name);
            states.push_back(s);
        });
    EXPECT_EQ(run.iterations, 0U);
    ASSERT_EQ(steps, (std::vector<std::string>{"I_tau", "G", "I_rho", "G"}));
    expect_amplitudes(
        states[1],
        scaled({-1, 1, 1, -1, 1, 1, 3, 1, 1, -1, 1, 1, -1, 1, 1, -1},
               2 * kRootSix),
        1e-12, "after first G");
    expect_amplitudes(states[2],
                      scaled(sixteen(1, {{6, -3}, {7, -1}}), 2 * kRootSix),
                      1e-12, "after I_rho");
    expect_amplitudes(run.state,
                      scaled(sixteen(1, {{6, 17}, {7, 9}}), 8 * kRootSix),
                      1e-12, "final");
    EXPECT_NEAR(probability_of(run.state, Query("011?")), 370.0 / 384, 1e-12);
    EXPECT_EQ(run.ops, (OpCounts{0, 2, 2}));
}

TEST(QuamRecall, ExactQueryTakesOneRound) {
    const auto run =
        quam_recall_state(store_fast(six()), six(), Query("0110"));
    EXPECT_EQ(run.iterations, 1U);
    expect_amplitudes(run.state, scaled(sixteen(-1, {{6, 39}}), 16 * kRootSix),
                      1e-12);
    EXPECT_NEAR(std::norm(run.state[6]), 1521.0 / 1536, 1e-12);
}

TEST(QuamRecall, RoundOverrideAndTraceLength) {
    std::size_t calls = 0;
    const auto run = quam_recall_state(
        store_fast(six()), six(), Query("011?"), 3,
        [&](std::string_view, const QuantumState &) { ++calls; });
    EXPECT_EQ(run.iterations, 3U);
    EXPECT_EQ(calls, 4U + 2 * 3);
    EXPECT_EQ(run.ops, (OpCounts{0, 5, 5}));
}

TEST(QuamRecall, SingleStoredPatternRecalled) {
    const PatternSet one({"1010"});
    const auto out = quam_recall(one, Query("1???"), options(500, 7));
    ASSERT_FALSE(out.failed());
    EXPECT_EQ(out.answer->str(), "1010");
}

TEST(QuamRecall, QueryMissingEveryStoredPattern) {
    const auto out = quam_recall(six(), Query("01?1"), options(2000, 3));
    EXPECT_EQ(out.T, optimal_T({16, 6, 2, 0}));
    EXPECT_NEAR(out.success_probability,
                p_at({16, 6, 2, 0}, out.T), 1e-12);
    double total = 0.0;
    for (double p : out.distribution) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(QuamRecall, VotesSplitBetweenMatches) {
    RecallOptions opt;
    opt.shots = 20000;
    opt.seed = 11;
    const auto out = quam_recall(six(), Query("011?"), opt);
    ASSERT_FALSE(out.failed());
    EXPECT_EQ(out.answer->str(), "0110");
    const double share = static_cast<double>(out.votes.at("0110")) /
                         static_cast<double>(out.matching_shots);
    EXPECT_NEAR(share, 289.0 / 370, 0.02);
    EXPECT_NEAR(out.distribution[6], 289.0 / 384, 1e-12);
    EXPECT_NEAR(out.distribution[7], 81.0 / 384, 1e-12);
}

TEST(QuamRecall, CircuitAndFastMethodsAgree) {
    RecallOptions fast = options(400, 5);
    RecallOptions circuit = options(400, 5);
    circuit.method = StorageMethod::circuit;
    const auto a = quam_recall(six(), Query("011?"), fast);
    const auto b = quam_recall(six(), Query("011?"), circuit);
    ASSERT_EQ(a.distribution.size(), b.distribution.size());
    for (std::size_t i = 0; i < a.distribution.size(); ++i) {
        EXPECT_NEAR(a.distribution[i], b.distribution[i], 1e-10);
    }
    EXPECT_EQ(a.votes, b.votes);
    EXPECT_EQ(a.ops.storage, 6U);
    EXPECT_GT(b.ops.storage, 6U);
}

TEST(QuamRecall, SameSeedSameOutcome) {
    const auto a = quam_recall(six(), Query("??1?"), options(1000, 99));
    const auto b = quam_recall(six(), Query("??1?"), options(1000, 99));
    EXPECT_EQ(a.votes, b.votes);
    EXPECT_EQ(a.answer, b.answer);
}
