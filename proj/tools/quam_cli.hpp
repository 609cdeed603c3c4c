#pragma once

// Command-line front end. Kept in a header so the test suite can drive the
// commands in-process with string streams.
//
// Exit codes: 0 success, 1 usage error, 2 data or format error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quam/quam.hpp"

namespace quam::cli {

using json = nlohmann::ordered_json;

enum class Format { text, json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Probabilities below this are left out of rendered distributions.
inline constexpr double kPrintFloor = 1e-12;

struct RunConfig {
    std::string command;
    std::string patterns_path;
    std::string query;
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> iterations;
    StorageMethod method = StorageMethod::fast;
    Format format = Format::text;
    // hopfield
    std::size_t neurons = 16;
    std::vector<std::size_t> m_values{1, 2, 3, 4, 5, 6, 7, 8};
    std::size_t trials = 100;
};

namespace detail {

inline std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

inline json theory_json(const TheoryReport &rep) {
    json table = json::array();
    for (const auto &pt : rep.p_table) {
        table.push_back({{"t", pt.t}, {"p", pt.p}});
    }
    return {{"N", rep.params.N},
            {"p", rep.params.p},
            {"r0", rep.params.r0},
            {"r1", rep.params.r1},
            {"a", rep.first.a},
            {"b", rep.first.b},
            {"k0", rep.first.k0},
            {"k1", rep.first.k1},
            {"l0", rep.first.l0},
            {"l1", rep.first.l1},
            {"k_bar", rep.averages.k_bar},
            {"l_bar", rep.averages.l_bar},
            {"p_max", rep.p_max},
            {"p_max_clamped", rep.p_max_clamped},
            {"T_raw", rep.t_raw},
            {"T", rep.T},
            {"p_table", table}};
}

inline TheoryReport theory_for(const PatternSet &patterns, const Query &q) {
    const RecallParameters rp = derive_parameters(patterns, q);
    return theory_report(rp, 2 * grover_iterations(patterns.width()));
}

inline std::uint64_t sweep_limit(std::size_t n) {
    const double N = std::ldexp(1.0, static_cast<int>(n));
    return static_cast<std::uint64_t>(
        std::ceil(std::numbers::pi / 2.0 * std::sqrt(N)));
}

inline void text_theory(std::ostream &out, const TheoryReport &rep) {
    out << "theory: N=" << rep.params.N << " p=" << rep.params.p
        << " r0=" << rep.params.r0 << " r1=" << rep.params.r1 << "\n"
        << "  a=" << fixed(rep.first.a) << " b=" << fixed(rep.first.b)
        << "\n"
        << "  k0=" << fixed(rep.first.k0) << " k1=" << fixed(rep.first.k1)
        << " l0=" << fixed(rep.first.l0) << " l1=" << fixed(rep.first.l1)
        << "\n"
        << "  k_bar=" << fixed(rep.averages.k_bar)
        << " l_bar=" << fixed(rep.averages.l_bar) << "\n"
        << "  p_max=" << fixed(rep.p_max)
        << (rep.p_max_clamped ? " (clamped)" : "") << "\n"
        << "  T=" << rep.T << " (raw " << fixed(rep.t_raw) << ")\n";
}

} // namespace detail

inline int cmd_store(const RunConfig &cfg, std::ostream &out) {
    const PatternSet patterns = parse_pattern_file(cfg.patterns_path);
    OpCounts ops;
    const QuantumState s = build_memory(patterns, cfg.method, ops);
    const std::size_t n = patterns.width();
    if (cfg.format == Format::json) {
        json amps = json::object();
        for (BasisIndex i = 0; i < s.size(); ++i) {
            if (std::norm(s[i]) >= kPrintFloor) {
                amps[BasisPattern::from_index(i, n).str()] = s[i].real();
            }
        }
        json doc = {{"n", n},
                    {"m", patterns.size()},
                    {"method", cfg.method == StorageMethod::fast ? "fast"
                                                                 : "circuit"},
                    {"storage_ops", ops.storage},
                    {"amplitudes", amps}};
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    if (cfg.format == Format::csv) {
        out << "pattern,amplitude\n";
    } else {
        out << "stored " << patterns.size() << " patterns of " << n
            << " bits (" << ops.storage << " storage ops)\n";
    }
    for (BasisIndex i = 0; i < s.size(); ++i) {
        if (std::norm(s[i]) < kPrintFloor) {
            continue;
        }
        const std::string label = BasisPattern::from_index(i, n).str();
        if (cfg.format == Format::csv) {
            out << label << "," << detail::fixed(s[i].real(), 12) << "\n";
        } else {
            out << "  |" << label << ">  " << detail::fixed(s[i].real())
                << "\n";
        }
    }
    return kExitOk;
}

inline int cmd_recall(const RunConfig &cfg, std::ostream &out) {
    const PatternSet patterns = parse_pattern_file(cfg.patterns_path);
    const Query query(cfg.query);
    if (query.width() != patterns.width()) {
        throw InputError("query '" + query.str() + "' does not have " +
                         std::to_string(patterns.width()) + " symbols");
    }
    RecallOptions opt;
    opt.shots = cfg.shots;
    opt.seed = cfg.seed;
    opt.rounds = cfg.iterations;
    opt.method = cfg.method;
    const RecallOutcome res = quam_recall(patterns, query, opt);
    const TheoryReport rep = detail::theory_for(patterns, query);
    const RecallParameters rp = rep.params;
    const double p_theory = p_at(rp, res.T);
    const std::size_t n = res.n;

    if (cfg.format == Format::json) {
        json dist = json::object();
        for (BasisIndex i = 0; i < res.distribution.size(); ++i) {
            if (res.distribution[i] >= kPrintFloor) {
                dist[BasisPattern::from_index(i, n).str()] =
                    res.distribution[i];
            }
        }
        json votes = json::object();
        for (const auto &[label, count] : res.votes) {
            votes[label] = count;
        }
        json doc = {
            {"n", n},
            {"m", res.m},
            {"query", res.query},
            {"method",
             cfg.method == StorageMethod::fast ? "fast" : "circuit"},
            {"shots", res.shots},
            {"seed", cfg.seed},
            {"T", res.T},
            {"T_overridden", cfg.iterations.has_value()},
            {"p_max", rep.p_max},
            {"p_success", res.success_probability},
            {"p_theory", p_theory},
            {"distribution", dist},
            {"answer", res.answer ? json(res.answer->str()) : json(nullptr)},
            {"recall_failed", res.failed()},
            {"votes", votes},
            {"matching_shots", res.matching_shots},
            {"op_counts",
             {{"storage", res.ops.storage},
              {"oracle", res.ops.oracle},
              {"diffusion", res.ops.diffusion}}},
            {"theory", detail::theory_json(rep)}};
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    if (cfg.format == Format::csv) {
        out << "pattern,probability,votes\n";
        for (BasisIndex i = 0; i < res.distribution.size(); ++i) {
            if (res.distribution[i] < kPrintFloor) {
                continue;
            }
            const std::string label = BasisPattern::from_index(i, n).str();
            const auto it = res.votes.find(label);
            out << label << "," << detail::fixed(res.distribution[i], 12)
                << "," << (it == res.votes.end() ? 0 : it->second) << "\n";
        }
        return kExitOk;
    }
    out << "query " << res.query << " against " << res.m
        << " stored patterns of " << n << " bits\n"
        << "answer: " << (res.answer ? res.answer->str() : "<none>")
        << (res.failed() ? "  (recall failed: no matching observation)" : "")
        << "\n"
        << "T=" << res.T << (cfg.iterations ? " (override)" : "")
        << "  p_success=" << detail::fixed(res.success_probability)
        << "  p_theory=" << detail::fixed(p_theory)
        << "  p_max=" << detail::fixed(rep.p_max) << "\n"
        << "votes (" << res.matching_shots << " of " << res.shots
        << " shots matched):\n";
    for (const auto &[label, count] : res.votes) {
        out << "  " << label << "  " << count << "\n";
    }
    out << "ops: storage=" << res.ops.storage << " oracle=" << res.ops.oracle
        << " diffusion=" << res.ops.diffusion << "\n";
    detail::text_theory(out, rep);
    return kExitOk;
}

inline int cmd_theory(const RunConfig &cfg, std::ostream &out) {
    const PatternSet patterns = parse_pattern_file(cfg.patterns_path);
    const TheoryReport rep = detail::theory_for(patterns, Query(cfg.query));
    if (cfg.format == Format::json) {
        out << detail::theory_json(rep).dump(2) << "\n";
    } else if (cfg.format == Format::csv) {
        out << "t,p_theory\n";
        for (const auto &pt : rep.p_table) {
            out << pt.t << "," << detail::fixed(pt.p, 12) << "\n";
        }
    } else {
        detail::text_theory(out, rep);
    }
    return kExitOk;
}

/// Exact success probability against iteration count. Without a pattern
/// file this is plain Grover search from the uniform superposition; with one
/// it is associative recall after the two-oracle preamble.
inline int cmd_sweep(const RunConfig &cfg, std::ostream &out) {
    const Query query(cfg.query);
    std::vector<std::pair<std::uint64_t, double>> rows;
    if (cfg.patterns_path.empty()) {
        const std::size_t n = query.width();
        const MarkSet marks = query_marks(query, n);
        QuantumState s(n);
        walsh_all(s);
        const std::uint64_t limit = detail::sweep_limit(n);
        for (std::uint64_t t = 0; t <= limit; ++t) {
            if (t > 0) {
                phase_invert(s, marks);
                invert_about_mean(s);
            }
            rows.emplace_back(t, probability_of(s, query));
        }
    } else {
        const PatternSet patterns = parse_pattern_file(cfg.patterns_path);
        const MarkSet marks = query_marks(query, patterns.width());
        RecallRun run =
            quam_recall_state(store_fast(patterns), patterns, query, 0);
        const std::uint64_t limit = detail::sweep_limit(patterns.width());
        for (std::uint64_t t = 0; t <= limit; ++t) {
            if (t > 0) {
                phase_invert(run.state, marks);
                invert_about_mean(run.state);
            }
            rows.emplace_back(t, probability_of(run.state, query));
        }
    }
    if (cfg.format == Format::json) {
        json arr = json::array();
        for (const auto &[t, p] : rows) {
            arr.push_back({{"t", t}, {"p_success", p}});
        }
        out << arr.dump(2) << "\n";
        return kExitOk;
    }
    out << "t,p_success\n";
    for (const auto &[t, p] : rows) {
        out << t << "," << detail::fixed(p, 12) << "\n";
    }
    return kExitOk;
}

inline int cmd_hopfield(const RunConfig &cfg, std::ostream &out) {
    const auto rows = hopfield::capacity_sweep(cfg.neurons, cfg.m_values,
                                               cfg.trials, cfg.seed);
    if (cfg.format == Format::json) {
        json arr = json::array();
        for (const auto &r : rows) {
            arr.push_back({{"m", r.m}, {"recall_fraction", r.recall_fraction}});
        }
        out << arr.dump(2) << "\n";
        return kExitOk;
    }
    if (cfg.format == Format::csv) {
        out << "m,recall_fraction\n";
        for (const auto &r : rows) {
            out << r.m << "," << detail::fixed(r.recall_fraction) << "\n";
        }
        return kExitOk;
    }
    out << "Hopfield capacity, n=" << cfg.neurons << ", " << cfg.trials
        << " trials per m\n";
    for (const auto &r : rows) {
        out << "  m=" << std::setw(3) << r.m << "  exact recall "
            << detail::fixed(r.recall_fraction, 3) << "\n";
    }
    return kExitOk;
}

/// Parses `args` (without the program name) and runs the chosen command.
inline int run(const std::vector<std::string> &args, std::ostream &out,
               std::ostream &err) {
    CLI::App app{"Quantum associative memory simulator", "quam"};
    app.require_subcommand(1);
    RunConfig cfg;

    const std::map<std::string, Format> formats{
        {"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};
    const std::map<std::string, StorageMethod> methods{
        {"fast", StorageMethod::fast}, {"circuit", StorageMethod::circuit}};

    auto add_format = [&](CLI::App *sub) {
        sub->add_option("--format", cfg.format, "text, json or csv")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };
    auto add_patterns = [&](CLI::App *sub, bool required) {
        auto *opt = sub->add_option("--patterns", cfg.patterns_path,
                                    "pattern file, one pattern per line");
        if (required) {
            opt->required();
        }
    };
    auto add_method = [&](CLI::App *sub) {
        sub->add_option("--method", cfg.method, "fast or circuit")
            ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    };

    auto *store = app.add_subcommand("store", "load patterns into a register");
    add_patterns(store, true);
    add_method(store);
    add_format(store);

    auto *recall = app.add_subcommand("recall", "complete a partial pattern");
    add_patterns(recall, true);
    recall->add_option("--query", cfg.query, "pattern over 0, 1 and ?")
        ->required();
    recall->add_option("--shots", cfg.shots, "observations to vote over")
        ->check(CLI::PositiveNumber);
    recall->add_option("--seed", cfg.seed, "sampling seed");
    std::uint64_t iterations = 0;
    auto *iterations_opt = recall->add_option(
        "--iterations", iterations, "override the number of Grover rounds");
    add_method(recall);
    add_format(recall);

    auto *theory = app.add_subcommand("theory", "closed-form accuracy report");
    add_patterns(theory, true);
    theory->add_option("--query", cfg.query, "pattern over 0, 1 and ?")
        ->required();
    add_format(theory);

    auto *sweep =
        app.add_subcommand("sweep", "success probability per iteration");
    add_patterns(sweep, false);
    sweep->add_option("--query", cfg.query, "target pattern over 0, 1 and ?")
        ->required();
    add_format(sweep);

    auto *hop = app.add_subcommand("hopfield", "classical capacity baseline");
    hop->add_option("--n", cfg.neurons, "neurons")->check(CLI::PositiveNumber);
    hop->add_option("--m", cfg.m_values, "pattern counts to test")
        ->check(CLI::PositiveNumber);
    hop->add_option("--trials", cfg.trials, "networks per pattern count")
        ->check(CLI::PositiveNumber);
    hop->add_option("--seed", cfg.seed, "random seed");
    add_format(hop);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (iterations_opt->count() > 0) {
            cfg.iterations = iterations;
        }
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*store) {
            return cmd_store(cfg, out);
        }
        if (*recall) {
            return cmd_recall(cfg, out);
        }
        if (*theory) {
            return cmd_theory(cfg, out);
        }
        if (*sweep) {
            return cmd_sweep(cfg, out);
        }
        return cmd_hopfield(cfg, out);
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

} // namespace quam::cli
