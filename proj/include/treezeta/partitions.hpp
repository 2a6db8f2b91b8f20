#pragma once

// Set partitions of [k] with blocks listed by increasing minima, and the
// partition-based inclusion-exclusion identity
//
//   sum over distinct (p_1..p_k) of F
//     = sum over partitions {A_1..A_l} of (-1)^{k-l} prod (|A_i|-1)!
//         * sum over (q_1..q_l) of F(p) with p_j = q_v for j in A_v.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treezeta/error.hpp"

namespace treezeta {

inline constexpr unsigned default_partition_cap = 12;

struct SetPartition {
    /// Blocks of 1-based indices; block i has a smaller minimum than block i+1.
    std::vector<std::vector<unsigned>> blocks;

    std::size_t block_count() const noexcept { return blocks.size(); }
};

struct IEWeight {
    int sign = 1;
    std::uint64_t coefficient = 1;
};

/// Calls f(const SetPartition&) for every partition of [k], via
/// restricted-growth sequences (so block order follows minima by construction).
template <class F>
void for_each_partition(unsigned k, F&& f, unsigned cap = default_partition_cap) {
    if (k < 1) throw domain_error("partitions: k must be >= 1");
    if (k > cap) throw domain_error("partitions: k = " + std::to_string(k) + " exceeds cap " + std::to_string(cap));

    // rgs[i] = block of element i+1; maxes[i] = max(rgs[0..i])
    std::vector<unsigned> rgs(k, 0), maxes(k, 0);
    SetPartition part;
    for (;;) {
        part.blocks.assign(maxes[k - 1] + 1, {});
        for (unsigned i = 0; i < k; ++i) part.blocks[rgs[i]].push_back(i + 1);
        f(static_cast<const SetPartition&>(part));

        // next RGS in lexicographic order
        unsigned i = k - 1;
        while (i > 0 && rgs[i] == maxes[i - 1] + 1) --i;
        if (i == 0) return;
        ++rgs[i];
        maxes[i] = std::max(maxes[i - 1], rgs[i]);
        for (unsigned j = i + 1; j < k; ++j) {
            rgs[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

inline std::vector<SetPartition> enumerate_partitions(unsigned k, unsigned cap = default_partition_cap) {
    std::vector<SetPartition> out;
    for_each_partition(k, [&](const SetPartition& p) { out.push_back(p); }, cap);
    return out;
}

inline IEWeight weight(const SetPartition& p, unsigned k) {
    IEWeight w;
    w.sign = ((k - p.block_count()) % 2 == 0) ? 1 : -1;
    for (const auto& b : p.blocks)
        for (std::uint64_t f = 2; f < b.size(); ++f) w.coefficient *= f;
    return w;
}

/// Sum of f over k-tuples of pairwise-distinct domain elements, evaluated
/// through the partition expansion. `Number` needs +, *, and construction
/// from long long; f is called as f(std::span<const Value>).
template <class Number, class Value, class F>
Number sum_distinct(F&& f, std::span<const Value> domain, unsigned k, unsigned cap = default_partition_cap) {
    Number total(0LL);
    if (domain.empty()) return total;
    std::vector<Value> tuple(k);
    for_each_partition(
        k,
        [&](const SetPartition& part) {
            const std::size_t l = part.block_count();
            std::vector<std::size_t> q(l, 0);
            Number inner(0LL);
            for (;;) {
                for (std::size_t v = 0; v < l; ++v)
                    for (unsigned j : part.blocks[v]) tuple[j - 1] = domain[q[v]];
                inner = inner + f(std::span<const Value>(tuple));
                std::size_t v = 0;
                while (v < l && ++q[v] == domain.size()) q[v++] = 0;
                if (v == l) break;
            }
            const IEWeight w = weight(part, k);
            total = total + Number(static_cast<long long>(w.sign) * static_cast<long long>(w.coefficient)) * inner;
        },
        cap);
    return total;
}

inline constexpr std::uint64_t brute_force_tuple_cap = 10'000'000;

/// Direct sum over tuples with pairwise-distinct entries.
template <class Number, class Value, class F>
Number brute_force_distinct(F&& f, std::span<const Value> domain, unsigned k) {
    std::uint64_t tuples = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (domain.size() != 0 && tuples > brute_force_tuple_cap / domain.size())
            throw resource_error("brute_force_distinct: more than 1e7 tuples");
        tuples *= domain.size();
    }
    Number total(0LL);
    if (domain.empty() || k == 0) return total;
    std::vector<std::size_t> idx(k, 0);
    std::vector<Value> tuple(k);
    for (;;) {
        bool distinct = true;
        for (unsigned i = 0; i < k && distinct; ++i)
            for (unsigned j = i + 1; j < k; ++j)
                if (idx[i] == idx[j]) {
                    distinct = false;
                    break;
                }
        if (distinct) {
            for (unsigned i = 0; i < k; ++i) tuple[i] = domain[idx[i]];
            total = total + f(std::span<const Value>(tuple));
        }
        unsigned i = 0;
        while (i < k && ++idx[i] == domain.size()) idx[i++] = 0;
        if (i == k) break;
    }
    return total;
}

}  // namespace treezeta
