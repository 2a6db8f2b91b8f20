#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "treezeta/error.hpp"
#include "treezeta/factor.hpp"
#include "treezeta/tree.hpp"

namespace treezeta {

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// All primes <= limit (segmented Eratosthenes over odd numbers).
inline std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    if (limit >= (std::uint64_t{1} << 32)) throw resource_error("primes_up_to: limit must be below 2^32");
    primes.push_back(2);

    const std::uint64_t root = isqrt(limit);
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint32_t> base;
    for (std::uint64_t i = 3; i <= root; i += 2) {
        if (!small[i]) continue;
        base.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
    }

    constexpr std::uint64_t segment = 1 << 18;
    std::vector<char> mark(segment);
    for (std::uint64_t lo = 3; lo <= limit; lo += 2 * segment) {
        // mark[i] stands for lo + 2i
        const std::uint64_t hi = std::min(limit, lo + 2 * segment - 1);
        std::fill(mark.begin(), mark.end(), 1);
        for (std::uint32_t p : base) {
            const std::uint64_t pp = std::uint64_t{p} * p;
            if (pp > hi) break;
            std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
            if (start % 2 == 0) start += p;
            for (std::uint64_t j = start; j <= hi; j += 2 * p) mark[(j - lo) / 2] = 0;
        }
        for (std::uint64_t n = lo; n <= hi; n += 2)
            if (mark[(n - lo) / 2]) primes.push_back(static_cast<std::uint32_t>(n));
    }
    return primes;
}

/// Smallest-prime-factor table; entry 1 is the sentinel 1, entry 0 unused.
struct SpfTable {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> spf;

    std::uint32_t operator[](std::uint64_t n) const { return spf[n]; }
};

inline constexpr std::uint64_t default_spf_memory_bytes = std::uint64_t{1} << 31;

/// Linear sieve over [0, limit]. Throws resource_error when the table would
/// exceed `max_bytes`; use spf_segment for larger ranges.
inline SpfTable build_spf(std::uint64_t limit, std::uint64_t max_bytes = default_spf_memory_bytes) {
    if (limit < 1) throw domain_error("build_spf: limit must be >= 1");
    if (limit >= (std::uint64_t{1} << 32) || (limit + 1) * sizeof(std::uint32_t) > max_bytes)
        throw resource_error("build_spf: limit " + std::to_string(limit) + " exceeds memory budget of " +
                             std::to_string(max_bytes) + " bytes");
    SpfTable t;
    t.limit = limit;
    try {
        t.spf.assign(limit + 1, 0);
    } catch (const std::bad_alloc&) {
        throw resource_error("build_spf: allocation failed");
    }
    t.spf[1] = 1;
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            t.spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            if (p > t.spf[i] || std::uint64_t{p} * i > limit) break;
            t.spf[std::uint64_t{p} * i] = p;
        }
    }
    return t;
}

/// Smallest prime factors for [lo, hi): entry i is spf(lo + i), with
/// spf(1) = 1. `base_primes` must cover every prime <= sqrt(hi - 1).
inline std::vector<std::uint64_t> spf_segment(std::uint64_t lo, std::uint64_t hi,
                                              std::span<const std::uint32_t> base_primes) {
    std::vector<std::uint64_t> out(hi > lo ? hi - lo : 0, 0);
    for (std::uint32_t p : base_primes) {
        const std::uint64_t pp = std::uint64_t{p} * p;
        if (pp >= hi) break;
        for (std::uint64_t j = std::max(pp, (lo + p - 1) / p * p); j < hi; j += p)
            if (out[j - lo] == 0) out[j - lo] = p;
    }
    for (std::uint64_t i = 0; i < out.size(); ++i)
        if (out[i] == 0) out[i] = lo + i;
    return out;
}

inline FactorView factorize(std::uint64_t n, const SpfTable& table) {
    if (n == 0) throw domain_error("factorize: n must be positive");
    if (n > table.limit) throw domain_error("factorize: n beyond spf table limit");
    FactorView out;
    while (n > 1) {
        const std::uint32_t p = table[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.pairs.push_back({p, e});
    }
    return out;
}

inline Tree tree_of(std::uint64_t n, const SpfTable& table) {
    if (n == 1) return Tree{};
    const FactorView f = factorize(n, table);
    std::vector<Tree> children;
    children.reserve(f.omega());
    for (const auto& pp : f.pairs) children.push_back(tree_of(pp.exponent, table));
    return Tree(std::move(children));
}

}  // namespace treezeta
