#pragma once

// Real-axis evaluation of the Riemann zeta function, the Moebius function
// and the prime zeta function P(s) = sum_p p^{-s}, with explicit error bounds.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "treezeta/error.hpp"

namespace treezeta {

/// A binary64 value together with a bound on |value - exact|.
struct EvalResult {
    double value = 0.0;
    double error_bound = 0.0;
};

/// Smallest accepted truncation target; below it binary64 rounding dominates.
inline constexpr double min_tolerance = 0x1p-48;

struct Tolerance {
    double target = 1e-12;
    std::size_t max_terms = 1 << 16;     // Moebius terms in P(s)
    std::uint64_t max_exponent = 1 << 14;  // exponent-sum truncation in tree zeta

    void validate() const {
        if (!(target >= min_tolerance) || !std::isfinite(target))
            throw domain_error("tolerance target must be a finite value >= 2^-48");
        if (max_terms == 0 || max_exponent == 0) throw domain_error("tolerance caps must be positive");
    }
};

/// The requested tolerance could not be met within the caps; carries the
/// best partial result.
struct tolerance_unachievable : std::runtime_error {
    tolerance_unachievable(const std::string& what, EvalResult partial)
        : std::runtime_error(what), partial(partial) {}
    EvalResult partial;
};

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();

// B_2 .. B_10 divided by (2j)!
inline constexpr double bernoulli_over_factorial[5] = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
};

/// Euler-Maclaurin tail sum_{n >= N} n^{-s} with corrections through B_8;
/// bound is twice the B_10 term.
inline EvalResult euler_maclaurin_tail(double s, double N) {
    const double npow = std::pow(N, -s);
    double value = N * npow / (s - 1.0) + 0.5 * npow;
    double rising = s;      // s (s+1) ... (s+2j-2)
    double npw = npow / N;  // N^{-s-2j+1}
    for (int j = 0; j < 4; ++j) {
        value += bernoulli_over_factorial[j] * rising * npw;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        npw /= N * N;
    }
    const double omitted = std::fabs(bernoulli_over_factorial[4] * rising * npw);
    return {value, 2.0 * omitted};
}

/// zeta(s) - 1 for real s > 1, accurate in relative terms even for large s.
inline EvalResult zeta_minus_one(double s) {
    for (std::uint64_t N = 16;; N *= 2) {
        const EvalResult tail = euler_maclaurin_tail(s, static_cast<double>(N));
        double head = 0.0;
        for (std::uint64_t n = N - 1; n >= 2; --n) head += std::pow(static_cast<double>(n), -s);
        const double value = head + tail.value;
        const double rounding = 4.0 * eps * (head + std::fabs(tail.value)) * 4.0;
        if (tail.error_bound <= 0.25 * eps * value || N >= (1u << 14))
            return {value, tail.error_bound + rounding};
    }
}

}  // namespace detail

/// zeta(sigma) for real sigma > 1 (Euler-Maclaurin).
inline EvalResult riemann_zeta(double sigma) {
    if (!(sigma > 1.0) || !std::isfinite(sigma)) throw domain_error("riemann_zeta: requires real sigma > 1");
    const EvalResult m1 = detail::zeta_minus_one(sigma);
    const double value = 1.0 + m1.value;
    return {value, m1.error_bound + detail::eps * value};
}

/// mu(0..limit); entry 0 is 0.
inline std::vector<int> mobius_table(std::uint64_t limit) {
    if (limit < 1) throw domain_error("mobius_table: limit must be >= 1");
    std::vector<int> mu(limit + 1, 1);
    std::vector<char> composite(limit + 1, 0);
    std::vector<std::uint64_t> primes;
    mu[0] = 0;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            mu[i] = -1;
        }
        for (auto p : primes) {
            if (p * i > limit) break;
            composite[p * i] = 1;
            if (i % p == 0) {
                mu[p * i] = 0;
                break;
            }
            mu[p * i] = -mu[i];
        }
    }
    return mu;
}

namespace detail {

/// log zeta(t) for t > 1.
inline EvalResult log_zeta(double t) {
    const EvalResult m1 = zeta_minus_one(t);
    const double value = std::log1p(m1.value);
    const double lower = 1.0 + m1.value - m1.error_bound;
    return {value, m1.error_bound / lower + 2.0 * eps * std::fabs(value)};
}

/// Bound on sum_{n > N} |mu(n)/n log zeta(n sigma)| using |log zeta(t)| <= 2^{1-t}, t >= 2.
inline double prime_zeta_tail(double sigma, std::uint64_t N) {
    const double n1 = static_cast<double>(N + 1);
    return 2.0 * std::exp2(-n1 * sigma) / (n1 * (1.0 - std::exp2(-sigma)));
}

/// Upper bound on P(s) for real s > 1 that needs no evaluation:
/// P(s) <= 2^{-s} + int_2^inf t^{-s} dt.
inline double prime_zeta_majorant(double s) { return std::exp2(-s) * (1.0 + 2.0 / (s - 1.0)); }

}  // namespace detail

/// P(sigma) = sum_{n >= 1} mu(n)/n log zeta(n sigma), truncated once the
/// remaining terms are provably below half the target.
inline EvalResult prime_zeta(double sigma, const Tolerance& tol = {}) {
    if (!(sigma > 1.0) || !std::isfinite(sigma)) throw domain_error("prime_zeta: requires real sigma > 1");
    tol.validate();

    std::uint64_t N = 1;
    while (detail::prime_zeta_tail(sigma, N) > 0.5 * tol.target && N < tol.max_terms) ++N;
    const double tail = detail::prime_zeta_tail(sigma, N);
    const auto mu = mobius_table(N);

    double value = 0.0, err = 0.0, magnitude = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        if (mu[n] == 0) continue;
        const double t = sigma * static_cast<double>(n);
        if (t > 1000.0) break;  // |log zeta(t)| < 2^-999: below any admissible target
        const EvalResult lz = detail::log_zeta(t);
        const double term = mu[n] * lz.value / static_cast<double>(n);
        value += term;
        magnitude += std::fabs(term);
        err += lz.error_bound / static_cast<double>(n);
    }
    const EvalResult result{value, err + tail + 4.0 * detail::eps * magnitude};
    if (tail > 0.5 * tol.target)
        throw tolerance_unachievable("prime_zeta: term cap reached before tolerance", result);
    return result;
}

}  // namespace treezeta
