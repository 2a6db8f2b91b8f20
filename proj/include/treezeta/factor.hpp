#pragma once

#include <cstdint>
#include <vector>

#include "treezeta/error.hpp"
#include "treezeta/tree.hpp"

namespace treezeta {

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with primes strictly increasing; empty for n = 1.
struct FactorView {
    std::vector<PrimePower> pairs;

    std::size_t omega() const noexcept { return pairs.size(); }
    friend bool operator==(const FactorView&, const FactorView&) = default;
};

/// Trial division. Intended for one-off calls; bulk work goes through the sieve.
inline FactorView factorize(std::uint64_t n) {
    if (n == 0) throw domain_error("factorize: n must be positive");
    FactorView out;
    auto take = [&](std::uint64_t p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.pairs.push_back({p, e});
    };
    take(2);
    take(3);
    for (std::uint64_t p = 5; p <= n / p; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) out.pairs.push_back({n, 1});
    return out;
}

/// t(n): root children are t(alpha) for every exponent alpha of n.
inline Tree tree_of(std::uint64_t n) {
    if (n == 0) throw domain_error("tree_of: n must be positive");
    if (n == 1) return Tree{};
    const FactorView f = factorize(n);
    std::vector<Tree> children;
    children.reserve(f.omega());
    for (const auto& pp : f.pairs) children.push_back(tree_of(pp.exponent));
    return Tree(std::move(children));
}

}  // namespace treezeta
