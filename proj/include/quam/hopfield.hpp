#pragma once

// Classical Hopfield associative memory, used as a capacity baseline.
// Hebbian weights w_ij = (1/n) sum_p x_i^p x_j^p with a zero diagonal and
// asynchronous sign updates in a seeded random order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "quam/error.hpp"
#include "quam/patterns.hpp"
#include "quam/state.hpp"

namespace quam::hopfield {

/// A +1/-1 neuron configuration.
using Spins = std::vector<int>;

inline Spins to_spins(const BasisPattern &p) {
    Spins s(p.width());
    for (std::size_t i = 0; i < p.width(); ++i) {
        s[i] = p.bit(i) ? 1 : -1;
    }
    return s;
}

inline std::string to_bits(std::span<const int> spins) {
    std::string out(spins.size(), '0');
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] > 0) {
            out[i] = '1';
        }
    }
    return out;
}

class Network {
  public:
    explicit Network(std::size_t n) : n_{n}, w_(n * n, 0.0) {
        if (n == 0) {
            throw InputError("network needs at least one neuron");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double weight(std::size_t i, std::size_t j) const {
        return w_[i * n_ + j];
    }

    /// Adds one pattern's Hebbian outer product.
    void imprint(std::span<const int> x) {
        if (x.size() != n_) {
            throw InputError("pattern length does not match the network");
        }
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (i != j) {
                    w_[i * n_ + j] += scale * x[i] * x[j];
                }
            }
        }
    }

    /// Local field sum_j w_ij x_j.
    [[nodiscard]] double field(std::span<const int> x, std::size_t i) const {
        double h = 0.0;
        const double *row = &w_[i * n_];
        for (std::size_t j = 0; j < n_; ++j) {
            h += row[j] * x[j];
        }
        return h;
    }

    /// -1/2 x^T W x
    [[nodiscard]] double energy(std::span<const int> x) const {
        double e = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            e += x[i] * field(x, i);
        }
        return -0.5 * e;
    }

    /// Sets neuron i to the sign of its field. A zero field leaves it as is.
    /// Returns true if the neuron changed.
    bool update(std::span<int> x, std::size_t i) const {
        const double h = field(x, i);
        const int next = h > 0.0 ? 1 : (h < 0.0 ? -1 : x[i]);
        const bool changed = next != x[i];
        x[i] = next;
        return changed;
    }

  private:
    std::size_t n_;
    std::vector<double> w_;
};

inline Network train(const PatternSet &patterns) {
    Network net(patterns.width());
    for (const auto &p : patterns) {
        net.imprint(to_spins(p));
    }
    return net;
}

inline Network train(std::span<const Spins> patterns) {
    if (patterns.empty()) {
        throw InputError("cannot train on an empty pattern list");
    }
    Network net(patterns.front().size());
    for (const auto &p : patterns) {
        net.imprint(p);
    }
    return net;
}

struct RecallResult {
    Spins state;
    bool converged = false;
    std::size_t sweeps = 0;
};

/// Asynchronous updates from `probe` until a full sweep changes nothing.
inline RecallResult recall(const Network &net, Spins probe,
                           std::size_t max_sweeps, Rng &rng) {
    if (probe.size() != net.size()) {
        throw InputError("probe length does not match the network");
    }
    RecallResult out{std::move(probe), false, 0};
    std::vector<std::size_t> order(net.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    while (out.sweeps < max_sweeps) {
        std::shuffle(order.begin(), order.end(), rng);
        ++out.sweeps;
        bool changed = false;
        for (std::size_t i : order) {
            changed = net.update(out.state, i) || changed;
        }
        if (!changed) {
            out.converged = true;
            break;
        }
    }
    return out;
}

/// Query probe: wildcard positions are filled with random bits first.
inline RecallResult recall(const Network &net, const Query &probe,
                           std::size_t max_sweeps, std::uint64_t seed) {
    if (probe.width() != net.size()) {
        throw InputError("probe length does not match the network");
    }
    Rng rng(seed);
    Spins x(probe.width());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const char ch = probe.str()[i];
        if (ch == '?') {
            x[i] = (rng() & 1U) ? 1 : -1;
        } else {
            x[i] = ch == '1' ? 1 : -1;
        }
    }
    return recall(net, std::move(x), max_sweeps, rng);
}

struct CapacityRow {
    std::size_t m = 0;
    double recall_fraction = 0.0;
};

inline constexpr std::size_t kDefaultMaxSweeps = 100;

/// For each m: `trials` networks trained on m random patterns; every stored
/// pattern is used as a probe, and the row reports the fraction that settle
/// back onto the exact pattern.
inline std::vector<CapacityRow>
capacity_sweep(std::size_t n, std::span<const std::size_t> m_values,
               std::size_t trials, std::uint64_t seed) {
    if (n == 0) {
        throw InputError("network size must be positive");
    }
    if (trials == 0) {
        throw InputError("trials must be positive");
    }
    Rng rng(seed);
    std::vector<CapacityRow> rows;
    rows.reserve(m_values.size());
    for (std::size_t m : m_values) {
        if (m == 0) {
            throw InputError("pattern count must be positive");
        }
        std::size_t recalled = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<Spins> patterns(m, Spins(n));
            for (auto &p : patterns) {
                for (auto &s : p) {
                    s = (rng() & 1U) ? 1 : -1;
                }
            }
            const Network net = train(patterns);
            for (const auto &p : patterns) {
                const RecallResult r = recall(net, p, kDefaultMaxSweeps, rng);
                if (r.converged && r.state == p) {
                    ++recalled;
                }
            }
        }
        rows.push_back({m, static_cast<double>(recalled) /
                               static_cast<double>(m * trials)});
    }
    return rows;
}

} // namespace quam::hopfield
