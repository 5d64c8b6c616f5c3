#pragma once

// Independent reference computations used as test oracles. None of these call
// into the library; they use different algorithms (direct sums, Gaussian
// elimination, long double) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace voicepilot::testing::oracle {

inline double relative_error(double got, double want) {
    const double scale = std::max(std::abs(got), std::abs(want));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

// x(n) = a1 x(n-1) + a2 x(n-2) + e(n), e ~ N(0, 1), after a burn-in.
inline std::vector<double> ar2_process(double a1, double a2, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> e(0.0, 1.0);
    std::vector<double> x;
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t i = 0; i < n + 500; ++i) {
        const double v = a1 * x1 + a2 * x2 + e(rng);
        x2 = x1;
        x1 = v;
        if (i >= 500) x.push_back(v);
    }
    return x;
}

// ||R a - r(1..p)|| / ||r(1..p)|| with R(i,j) = r(|i-j|).
inline double toeplitz_relative_residual(std::span<const double> r, std::span<const double> a) {
    const std::size_t p = a.size();
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < p; ++i) {
        long double row = 0.0L;
        for (std::size_t j = 0; j < p; ++j) {
            row += static_cast<long double>(r[i > j ? i - j : j - i]) * a[j];
        }
        const long double diff = row - r[i + 1];
        num += diff * diff;
        den += static_cast<long double>(r[i + 1]) * r[i + 1];
    }
    if (den == 0.0L) return static_cast<double>(std::sqrt(num) / r[0]);
    return static_cast<double>(std::sqrt(num / den));
}

// c(n) = a(n) + sum_{j=1}^{n-1} (j/n) c(j) a(n-j), evaluated in long double.
// Substituting j = n - k turns this into the recursion with weights (1 - k/n)
// on c(n-k) a(k), so both must agree.
inline std::vector<double> lpcc_direct(std::span<const double> a) {
    const std::size_t p = a.size();
    std::vector<long double> c(p + 1, 0.0L);
    for (std::size_t n = 1; n <= p; ++n) {
        long double acc = a[n - 1];
        for (std::size_t j = 1; j < n; ++j) {
            acc += (static_cast<long double>(j) / static_cast<long double>(n)) * c[j] * a[n - j - 1];
        }
        c[n] = acc;
    }
    return std::vector<double>(c.begin() + 1, c.end());
}

// Solves R a = r(1..p) by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_normal_equations(std::span<const long double> r, std::size_t p) {
    std::vector<std::vector<long double>> m(p, std::vector<long double>(p + 1));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) m[i][j] = r[i > j ? i - j : j - i];
        m[i][p] = r[i + 1];
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < p; ++i) {
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
        }
        std::swap(m[col], m[piv]);
        for (std::size_t i = col + 1; i < p; ++i) {
            const long double f = m[i][col] / m[col][col];
            for (std::size_t j = col; j <= p; ++j) m[i][j] -= f * m[col][j];
        }
    }
    std::vector<long double> x(p);
    for (std::size_t i = p; i-- > 0;) {
        long double s = m[i][p];
        for (std::size_t j = i + 1; j < p; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }
    return std::vector<double>(x.begin(), x.end());
}

// Hamming window, autocorrelation, dense solve and LPCC, all in long double.
inline std::vector<double> frame_lpcc_reference(std::span<const std::int16_t> frame, std::size_t p) {
    const std::size_t n = frame.size();
    std::vector<long double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double h =
            0.54L - 0.46L * std::cos(2.0L * std::numbers::pi_v<long double> * static_cast<long double>(i) /
                                     static_cast<long double>(n - 1));
        w[i] = h * frame[i];
    }
    std::vector<long double> r(p + 1, 0.0L);
    for (std::size_t k = 0; k <= p; ++k) {
        for (std::size_t i = k; i < n; ++i) r[k] += w[i] * w[i - k];
    }
    const auto a = solve_normal_equations(r, p);
    return lpcc_direct(a);
}

} // namespace voicepilot::testing::oracle
