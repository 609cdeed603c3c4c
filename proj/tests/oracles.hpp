#pragma once

// Test-only reference constructions. Nothing here calls the kernels it is
// used to check: matrices are built entry by entry from their definitions.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "quam/quam.hpp"

namespace quam::testing {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;

/// numerators / denominator as a real amplitude vector.
inline std::vector<cplx> scaled(const std::vector<double> &numerators,
                                double denominator) {
    std::vector<cplx> out;
    out.reserve(numerators.size());
    for (double v : numerators) {
        out.emplace_back(v / denominator, 0.0);
    }
    return out;
}

/// Length-16 vector with `fill` everywhere except listed positions.
inline std::vector<double> sixteen(double fill,
                                   std::initializer_list<std::pair<int, double>>
                                       overrides) {
    std::vector<double> v(16, fill);
    for (auto [i, x] : overrides) {
        v[static_cast<std::size_t>(i)] = x;
    }
    return v;
}

inline void expect_amplitudes(const QuantumState &s,
                              const std::vector<cplx> &expected, double tol,
                              const std::string &what = "") {
    ASSERT_EQ(s.size(), expected.size()) << what;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_NEAR(s[i].real(), expected[i].real(), tol)
            << what << " index " << i;
        EXPECT_NEAR(s[i].imag(), expected[i].imag(), tol)
            << what << " index " << i;
    }
}

inline double max_abs_diff(const QuantumState &s,
                           const std::vector<cplx> &expected) {
    double worst = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        worst = std::max(worst, std::abs(s[i] - expected[i]));
    }
    return worst;
}

/// Matrix of a linear map on n qubits, one column per basis input.
inline Matrix matrix_of(std::size_t n,
                        const std::function<void(QuantumState &)> &op) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix m(dim, std::vector<cplx>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        QuantumState s = new_basis_state(n, BasisPattern::from_index(col, n));
        op(s);
        for (std::size_t row = 0; row < dim; ++row) {
            m[row][col] = s[row];
        }
    }
    return m;
}

inline Matrix multiply(const Matrix &a, const Matrix &b) {
    const std::size_t dim = a.size();
    Matrix out(dim, std::vector<cplx>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t j = 0; j < dim; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

/// W^{(x)n} from its closed form (-1)^{popcount(i & j)} / sqrt(N).
inline Matrix walsh_matrix(std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    Matrix m(dim, std::vector<cplx>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m[i][j] = (std::popcount(i & j) % 2 ? -scale : scale);
        }
    }
    return m;
}

/// Random normalized complex state.
inline QuantumState random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> amps(std::size_t{1} << n);
    double norm2 = 0.0;
    for (auto &a : amps) {
        a = {g(rng), g(rng)};
        norm2 += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm2);
    }
    return QuantumState(n, std::move(amps));
}

/// Random unitary 2x2: a phase times an SU(2) element.
inline Gate2 random_unitary2(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979);
    const double theta = u(rng) / 2, a = u(rng), b = u(rng), g = u(rng);
    const cplx ea = std::polar(1.0, a), eb = std::polar(1.0, b),
               eg = std::polar(1.0, g);
    Gate2 m;
    m(0, 0) = eg * ea * std::cos(theta);
    m(0, 1) = eg * eb * std::sin(theta);
    m(1, 0) = -eg * std::conj(eb) * std::sin(theta);
    m(1, 1) = eg * std::conj(ea) * std::cos(theta);
    return m;
}

/// m distinct random patterns of width n.
inline PatternSet random_patterns(std::size_t n, std::size_t m,
                                  std::mt19937_64 &rng) {
    const std::uint64_t N = std::uint64_t{1} << n;
    std::set<std::uint64_t> chosen;
    std::vector<BasisPattern> out;
    std::uniform_int_distribution<std::uint64_t> pick(0, N - 1);
    while (out.size() < m) {
        const std::uint64_t x = pick(rng);
        if (chosen.insert(x).second) {
            out.push_back(BasisPattern::from_index(x, n));
        }
    }
    return PatternSet(std::move(out));
}

/// Random query of width n with at least one fixed bit.
inline Query random_query(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> sym(0, 2);
    while (true) {
        std::string q(n, '0');
        for (auto &c : q) {
            c = "01?"[sym(rng)];
        }
        Query out(q);
        if (!out.all_wildcards()) {
            return out;
        }
    }
}

} // namespace quam::testing
