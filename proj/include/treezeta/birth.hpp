#pragma once

// Dates of birth (the least n with t(n) = T) and the signature
// decomposition T = e^{T0} o ... o e^{T0} (k times) o T'.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "treezeta/error.hpp"
#include "treezeta/factor.hpp"
#include "treezeta/tree.hpp"

namespace treezeta {

using BigNat = boost::multiprecision::cpp_int;

inline constexpr std::size_t default_birth_bits = 1'000'000;

struct Birth {
    BigNat value;

    std::string str() const { return value.str(); }
    friend bool operator==(const Birth&, const Birth&) = default;
    friend std::strong_ordering operator<=>(const Birth& a, const Birth& b) {
        return a.value < b.value ? std::strong_ordering::less
                                 : (a.value > b.value ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
};

namespace detail {

inline std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> primes;
    primes.reserve(count);
    for (std::uint64_t n = 2; primes.size() < count; ++n) {
        bool prime = true;
        for (auto p : primes) {
            if (p * p > n) break;
            if (n % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(n);
    }
    return primes;
}

inline std::size_t max_degree(const Tree& t) {
    std::size_t d = t.degree();
    for (const auto& c : t.children()) d = std::max(d, max_degree(c));
    return d;
}

inline std::size_t bit_length(const BigNat& v) { return v == 0 ? 0 : boost::multiprecision::msb(v) + 1; }

// Largest child birth goes on 2, the next on 3, and so on.
inline BigNat birth_value(const Tree& t, std::size_t bits, const std::vector<std::uint64_t>& primes) {
    if (t.is_root()) return BigNat(1);
    std::vector<BigNat> exps;
    exps.reserve(t.degree());
    for (const auto& c : t.children()) exps.push_back(birth_value(c, bits, primes));
    std::sort(exps.begin(), exps.end(), std::greater<>());

    BigNat result = 1;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const std::uint64_t p = primes[i];
        if (exps[i] > BigNat(bits)) throw birth_overflow("birth exceeds bit budget of " + std::to_string(bits));
        const auto e = exps[i].convert_to<std::uint64_t>();
        if (static_cast<double>(e) * std::log2(static_cast<double>(p)) > static_cast<double>(bits) + 1.0)
            throw birth_overflow("birth exceeds bit budget of " + std::to_string(bits));
        result *= boost::multiprecision::pow(BigNat(p), static_cast<unsigned>(e));
        if (bit_length(result) > bits) throw birth_overflow("birth exceeds bit budget of " + std::to_string(bits));
    }
    return result;
}

}  // namespace detail

/// Exact least n with t(n) = t. Throws birth_overflow past `bit_budget` bits.
inline Birth birth(const Tree& t, std::size_t bit_budget = default_birth_bits) {
    const auto primes = detail::first_primes(detail::max_degree(t));
    return Birth{detail::birth_value(t, bit_budget, primes)};
}

struct Decomposition {
    Tree t0;
    std::uint64_t k = 0;
    Birth m;
    Tree t_prime;

    /// Reassembles (e^{t0})^k o t_prime.
    Tree reconstruct() const {
        std::vector<Tree> children(k, t0);
        children.insert(children.end(), t_prime.children().begin(), t_prime.children().end());
        return Tree(std::move(children));
    }
};

/// Splits off the oldest root-child subtree t0 with multiplicity k.
inline Decomposition decompose(const Tree& t, std::size_t bit_budget = default_birth_bits) {
    if (t.is_root()) throw domain_error("decompose: requires a tree with at least one edge (got r)");
    const auto kids = t.children();

    // Equal children are adjacent in canonical order.
    std::size_t best = 0;
    std::size_t best_count = 0;
    Birth best_birth;
    for (std::size_t i = 0; i < kids.size();) {
        std::size_t j = i;
        while (j < kids.size() && kids[j] == kids[i]) ++j;
        Birth b = birth(kids[i], bit_budget);
        if (best_count == 0 || b < best_birth) {
            best = i;
            best_count = j - i;
            best_birth = std::move(b);
        }
        i = j;
    }

    std::vector<Tree> rest;
    rest.reserve(kids.size() - best_count);
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (i < best || i >= best + best_count) rest.push_back(kids[i]);
    return Decomposition{kids[best], best_count, std::move(best_birth), Tree(std::move(rest))};
}

struct BirthEntry {
    Birth birth;
    Tree tree;
};

/// All trees first occurring at some n <= bound, in birth order.
inline std::vector<BirthEntry> births_up_to(std::uint64_t bound) {
    std::vector<BirthEntry> out;
    std::unordered_set<Tree> seen;
    for (std::uint64_t n = 1; n <= bound; ++n) {
        Tree t = tree_of(n);
        if (seen.insert(t).second) out.push_back({Birth{BigNat(n)}, std::move(t)});
    }
    return out;
}

/// The first `count` trees in birth order, found by scanning n = 1..search_bound.
inline std::vector<BirthEntry> enumerate_births(std::size_t count, std::uint64_t search_bound) {
    if (count == 0) throw domain_error("enumerate_births: count must be positive");
    std::vector<BirthEntry> out;
    std::unordered_set<Tree> seen;
    for (std::uint64_t n = 1; n <= search_bound && out.size() < count; ++n) {
        Tree t = tree_of(n);
        if (seen.insert(t).second) out.push_back({Birth{BigNat(n)}, std::move(t)});
    }
    if (out.size() < count)
        throw insufficient_bound("only " + std::to_string(out.size()) + " distinct trees below " +
                                 std::to_string(search_bound) + ", requested " + std::to_string(count));
    return out;
}

}  // namespace treezeta
