#pragma once

// pi_T(x) for every tree T realized below x, by one pass of a segmented
// factor sieve.
//
// Every exponent below 2^63 is at most 62, and t(1..62) takes only ten
// distinct shapes. The tree of n is therefore the multiset of those shapes
// over its prime exponents, packed into a 64-bit key as ten 4-bit
// multiplicities (omega(n) <= 15 below 2^63, so no field overflows).

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <new>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treezeta/birth.hpp"
#include "treezeta/error.hpp"
#include "treezeta/factor.hpp"
#include "treezeta/sieve.hpp"
#include "treezeta/tree.hpp"

namespace treezeta {

inline constexpr std::uint64_t census_max_limit = (std::uint64_t{1} << 63) - 1;

class ExponentKeyCodec {
public:
    static constexpr unsigned max_exponent = 63;
    static constexpr unsigned field_bits = 4;

    ExponentKeyCodec() {
        std::unordered_map<Tree, std::uint8_t> ids;
        weight_[0] = 0;
        for (unsigned e = 1; e <= max_exponent; ++e) {
            Tree t = tree_of(e);
            auto [it, inserted] = ids.try_emplace(t, static_cast<std::uint8_t>(shapes_.size()));
            if (inserted) shapes_.push_back(std::move(t));
            weight_[e] = std::uint64_t{1} << (field_bits * it->second);
        }
        for (unsigned e = 1; e <= max_exponent; ++e) delta_[e] = weight_[e] - weight_[e - 1];
    }

    /// Key increment when a prime's exponent in n grows from e-1 to e.
    std::uint64_t delta(unsigned e) const { return delta_[e]; }
    std::uint64_t weight(unsigned e) const { return weight_[e]; }
    std::size_t shape_count() const { return shapes_.size(); }

    Tree tree(std::uint64_t key) const {
        std::vector<Tree> children;
        for (std::size_t id = 0; id < shapes_.size(); ++id) {
            const auto mult = (key >> (field_bits * id)) & ((1u << field_bits) - 1);
            children.insert(children.end(), mult, shapes_[id]);
        }
        return Tree(std::move(children));
    }

private:
    std::vector<Tree> shapes_;
    std::array<std::uint64_t, max_exponent + 1> weight_{};
    std::array<std::uint64_t, max_exponent + 1> delta_{};
};

namespace detail {

inline const ExponentKeyCodec& key_codec() {
    static const ExponentKeyCodec codec;
    return codec;
}

/// Tree keys for n in [lo, hi); `base` must hold every prime <= sqrt(hi - 1).
inline void sieve_keys(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint32_t> base,
                       const ExponentKeyCodec& codec, std::vector<std::uint64_t>& key,
                       std::vector<std::uint64_t>& prod) {
    const std::uint64_t len = hi - lo;
    key.assign(len, 0);
    prod.assign(len, 1);
    const std::uint64_t top = hi - 1;
    for (std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        if (p > top / p) break;
        std::uint64_t pk = p;
        for (unsigned e = 1;; ++e) {
            const std::uint64_t d = codec.delta(e);
            for (std::uint64_t j = (lo + pk - 1) / pk * pk; j < hi; j += pk) {
                prod[j - lo] *= p;
                key[j - lo] += d;
            }
            if (pk > top / p) break;
            pk *= p;
        }
    }
    const std::uint64_t lone = codec.weight(1);
    for (std::uint64_t i = 0; i < len; ++i)
        if (prod[i] != lo + i) key[i] += lone;
}

}  // namespace detail

/// Trees of every n in [lo, hi) via the sieve path (used to cross-check tree_of).
inline std::vector<Tree> sieve_trees(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0 || hi <= lo) throw domain_error("sieve_trees: need 1 <= lo < hi");
    const auto base = primes_up_to(isqrt(hi - 1));
    std::vector<std::uint64_t> key, prod;
    const auto& codec = detail::key_codec();
    detail::sieve_keys(lo, hi, base, codec, key, prod);
    std::vector<Tree> out;
    out.reserve(key.size());
    for (auto k : key) out.push_back(codec.tree(k));
    return out;
}

struct CensusRow {
    Tree tree;
    Birth birth;
    std::uint64_t count = 0;
};

class CensusTable {
public:
    CensusTable() = default;
    CensusTable(std::uint64_t limit, std::vector<CensusRow> rows) : limit_(limit), rows_(std::move(rows)) {
        std::sort(rows_.begin(), rows_.end(), [](const CensusRow& a, const CensusRow& b) { return a.birth < b.birth; });
        for (std::size_t i = 0; i < rows_.size(); ++i) index_.emplace(rows_[i].tree, i);
    }

    std::uint64_t limit() const noexcept { return limit_; }
    /// Rows sorted by birth ascending.
    std::span<const CensusRow> rows() const noexcept { return rows_; }

    std::uint64_t count(const Tree& t) const {
        auto it = index_.find(t);
        return it == index_.end() ? 0 : rows_[it->second].count;
    }

    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (const auto& r : rows_) s += r.count;
        return s;
    }

private:
    std::uint64_t limit_ = 0;
    std::vector<CensusRow> rows_;
    std::unordered_map<Tree, std::size_t> index_;
};

struct CensusOptions {
    std::uint64_t segment_size = std::uint64_t{1} << 18;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Exact pi_T(x) for all T with birth <= x.
inline CensusTable census(std::uint64_t x, const CensusOptions& options = {}) {
    if (x < 1) throw domain_error("census: x must be >= 1");
    if (x > census_max_limit) throw domain_error("census: x must be below 2^63");
    if (options.segment_size == 0) throw domain_error("census: segment size must be positive");

    const auto& codec = detail::key_codec();
    using Counts = std::unordered_map<std::uint64_t, std::uint64_t>;
    std::vector<Counts> partial;
    try {
        const auto base = primes_up_to(isqrt(x));
        const std::uint64_t seg = options.segment_size;
        const std::uint64_t segments = (x + seg - 1) / seg;  // covers [1, x]
        unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, segments));

        partial.resize(threads);
        std::atomic<std::uint64_t> next{0};
        auto worker = [&](unsigned w) {
            std::vector<std::uint64_t> key, prod;
            Counts& counts = partial[w];
            for (std::uint64_t s; (s = next.fetch_add(1)) < segments;) {
                const std::uint64_t lo = 1 + s * seg;
                const std::uint64_t hi = std::min(x, lo + seg - 1) + 1;
                detail::sieve_keys(lo, hi, base, codec, key, prod);
                std::uint64_t run_key = key[0], run = 0;
                for (auto k : key) {
                    if (k == run_key) {
                        ++run;
                        continue;
                    }
                    counts[run_key] += run;
                    run_key = k;
                    run = 1;
                }
                counts[run_key] += run;
            }
        };
        if (threads == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            std::exception_ptr failure;
            std::atomic<bool> failed{false};
            for (unsigned w = 0; w < threads; ++w)
                pool.emplace_back([&, w] {
                    try {
                        worker(w);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                        next = segments;
                    }
                });
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);
        }
    } catch (const std::bad_alloc&) {
        throw resource_error("census: out of memory");
    }

    Counts merged;
    for (const auto& c : partial)
        for (const auto& [k, v] : c) merged[k] += v;
    std::vector<CensusRow> rows;
    rows.reserve(merged.size());
    for (const auto& [k, v] : merged) {
        Tree t = codec.tree(k);
        Birth b = birth(t);
        rows.push_back({std::move(t), std::move(b), v});
    }
    return CensusTable(x, std::move(rows));
}

inline std::uint64_t count_tree(const CensusTable& table, const Tree& t) { return table.count(t); }

namespace detail {

inline std::uint64_t count_full_from(std::uint64_t c, std::size_t start, std::uint64_t x, unsigned power,
                                     std::span<const std::uint32_t> primes) {
    std::uint64_t total = 0;
    for (std::size_t i = start; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        // smallest admissible factor p^power must fit
        std::uint64_t pk = 1;
        bool fits = true;
        for (unsigned e = 0; e < power; ++e) {
            if (pk > (x / c) / p) {
                fits = false;
                break;
            }
            pk *= p;
        }
        if (!fits) break;
        for (;;) {
            total += 1 + count_full_from(c * pk, i + 1, x, power, primes);
            if (pk > (x / c) / p) break;
            pk *= p;
        }
    }
    return total;
}

inline std::uint64_t iroot(std::uint64_t x, unsigned k) {
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 1.0 / k));
    auto pow_le = [&](std::uint64_t b) {
        std::uint64_t v = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (b != 0 && v > x / b) return false;
            v *= b;
        }
        return v <= x;
    };
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

}  // namespace detail

/// Number of d <= x (d = 1 included) whose every prime exponent exceeds m.
inline std::uint64_t count_min_exponent(std::uint64_t x, unsigned m) {
    if (x < 1) throw domain_error("count_min_exponent: x must be >= 1");
    if (m < 1) throw domain_error("count_min_exponent: m must be >= 1");
    if (m + 1 >= 64) return 1;
    const auto primes = primes_up_to(detail::iroot(x, m + 1));
    return 1 + detail::count_full_from(1, 0, x, m + 1, primes);
}

}  // namespace treezeta
