#pragma once

// Tree zeta functions zeta_T(sigma) = sum_{t(n) = T} n^{-sigma} on the real
// axis, by two independent routes:
//
//  * direct:    enumerate every n <= budget with t(n) = T and add a rigorous
//               majorant for n > budget;
//  * partition: expand over set partitions of the root children, each block
//               reducing to a sum of prime zeta values P(sigma * v).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "treezeta/birth.hpp"
#include "treezeta/error.hpp"
#include "treezeta/factor.hpp"
#include "treezeta/partitions.hpp"
#include "treezeta/sieve.hpp"
#include "treezeta/tree.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta {

/// All v <= bound with t(v) = t, increasing.
inline std::vector<std::uint64_t> exponents_with_tree(const Tree& t, std::uint64_t bound) {
    if (bound < 1) throw domain_error("exponents_with_tree: bound must be >= 1");
    std::vector<std::uint64_t> out;
    if (t.is_root()) {
        out.push_back(1);
        return out;
    }
    const std::size_t degree = t.degree();
    auto matches = [&](const FactorView& f) {
        if (f.omega() != degree) return false;
        std::vector<Tree> kids;
        kids.reserve(degree);
        for (const auto& pp : f.pairs) kids.push_back(tree_of(pp.exponent));
        return Tree(std::move(kids)) == t;
    };
    if (bound <= (1u << 16)) {
        for (std::uint64_t v = 2; v <= bound; ++v)
            if (matches(factorize(v))) out.push_back(v);
    } else {
        const SpfTable spf = build_spf(bound);
        for (std::uint64_t v = 2; v <= bound; ++v)
            if (matches(factorize(v, spf))) out.push_back(v);
    }
    return out;
}

namespace detail {

inline double birth_as_double(const Birth& b) {
    if (bit_length(b.value) > 1000) return std::numeric_limits<double>::infinity();
    return b.value.convert_to<double>();
}

/// Oldest-child birth m; the series converges for sigma > 1/m.
inline double convergence_order(const Tree& t) {
    return birth_as_double(decompose(t).m);
}

inline void require_convergent(const Tree& t, double sigma, const char* who) {
    if (!std::isfinite(sigma)) throw domain_error(std::string(who) + ": sigma must be finite");
    const double m = convergence_order(t);
    if (!(sigma * m > 1.0))
        throw domain_error(std::string(who) + ": sigma must exceed 1/m = 1/" + decompose(t).m.str() +
                           " (series not absolutely convergent)");
}

// Neumaier compensated sum.
struct CompensatedSum {
    double sum = 0.0, comp = 0.0, magnitude = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
        magnitude += std::fabs(x);
    }
    double value() const { return sum + comp; }
};

/// Rosser-Schoenfeld pi(t) < 1.25506 t / log t gives
/// sum_{p > z} p^{-s} <= 1.25506 s / ((s - 1) z^{s-1} log z) for z >= 2, s > 1.
inline double prime_tail_majorant(double z, double s) {
    return 1.25506 * s / ((s - 1.0) * std::pow(z, s - 1.0) * std::log(z));
}

/// sum_{v >= v0} P(v sigma) <= sum_{v >= v0} 2^{-v sigma} (1 + 2/(v sigma - 1)).
inline double prime_zeta_exponent_tail(double v0, double sigma) {
    const double s0 = v0 * sigma;
    return std::exp2(-s0) * (1.0 + 2.0 / (s0 - 1.0)) / (1.0 - std::exp2(-sigma));
}

/// sum_{n >= n0} n^a 2^{-sigma n} (1 + 2/(sigma n - 1)); requires sigma n0 > 1.
inline double block_tail_majorant(double n0, unsigned a, double sigma) {
    double sum = 0.0;
    for (double n = n0;; n += 1.0) {
        const double s = sigma * n;
        const double f = std::pow(n, a) * std::exp2(-s) * (1.0 + 2.0 / (s - 1.0));
        sum += f;
        const double r = std::pow((n + 1.0) / n, a) * std::exp2(-sigma);
        if (f == 0.0) break;
        if (r < 1.0) {
            const double rest = f * r / (1.0 - r);
            if (rest <= 1e-3 * sum || n - n0 > 1e6) return sum + rest;
        }
    }
    return sum;
}

struct ChildType {
    Tree tree;
    unsigned count = 0;
    std::vector<std::uint64_t> exponents;  // v <= 63 with t(v) = tree
    std::uint64_t min_exponent = 0;        // 0 when none fits
};

inline std::vector<ChildType> child_types(const Tree& t) {
    std::vector<ChildType> types;
    const auto kids = t.children();
    for (std::size_t i = 0; i < kids.size();) {
        std::size_t j = i;
        while (j < kids.size() && kids[j] == kids[i]) ++j;
        ChildType ct{kids[i], static_cast<unsigned>(j - i), exponents_with_tree(kids[i], 63), 0};
        if (!ct.exponents.empty()) ct.min_exponent = ct.exponents.front();
        types.push_back(std::move(ct));
        i = j;
    }
    return types;
}

// c * p^v <= limit, updating c on success.
inline bool times_power_fits(std::uint64_t& c, std::uint64_t p, std::uint64_t v, std::uint64_t limit) {
    std::uint64_t r = c;
    for (std::uint64_t i = 0; i < v; ++i) {
        if (r > limit / p) return false;
        r *= p;
    }
    c = r;
    return true;
}

struct DirectEnumerator {
    std::span<const std::uint32_t> primes;
    std::vector<ChildType>& types;
    std::uint64_t budget;
    double sigma;
    CompensatedSum acc{};

    void run(std::uint64_t c, std::size_t start, std::uint64_t remaining, std::uint64_t min_total) {
        for (std::size_t i = start; i < primes.size(); ++i) {
            const std::uint64_t p = primes[i];
            std::uint64_t probe = c;
            if (!times_power_fits(probe, p, min_total, budget)) break;
            for (auto& ty : types) {
                if (ty.count == 0) continue;
                --ty.count;
                for (std::uint64_t v : ty.exponents) {
                    std::uint64_t next = c;
                    if (!times_power_fits(next, p, v, budget)) break;
                    if (remaining == 1) {
                        acc.add(std::pow(static_cast<double>(next), -sigma));
                    } else {
                        run(next, i + 1, remaining - 1, min_total - ty.min_exponent);
                    }
                }
                ++ty.count;
            }
        }
    }
};

}  // namespace detail

/// Sum of n^{-sigma} over n <= budget with t(n) = t, plus a majorant for the
/// omitted n > budget.
///
/// Tail: if n = prod p_i^{v_i} > budget with K factors, some p_i^{v_i} exceeds
/// Y = budget^{1/K}. Dropping distinctness gives
///   tail <= sum_i [sum_{v in V_i} sum_{p^v > Y} p^{-v sigma}] * prod_{j != i} sum_{v in V_j} P(v sigma),
/// with the inner prime tails bounded through Rosser-Schoenfeld and the
/// full sums through prime_zeta.
inline EvalResult tree_zeta_direct(const Tree& t, double sigma, std::uint64_t budget, const Tolerance& ptol = {}) {
    if (t.is_root()) return {1.0, 0.0};
    if (budget < 1) throw domain_error("tree_zeta_direct: budget must be >= 1");
    detail::require_convergent(t, sigma, "tree_zeta_direct");

    auto types = detail::child_types(t);
    const auto K = static_cast<std::uint64_t>(t.degree());

    detail::CompensatedSum acc;
    const bool reachable =
        std::all_of(types.begin(), types.end(), [](const detail::ChildType& ty) { return ty.min_exponent > 0; });
    if (reachable) {
        std::uint64_t min_total = 0;
        for (const auto& ty : types) min_total += ty.count * ty.min_exponent;
        // Largest prime any factor can use: the others take at least 2^{their minimum}.
        double prime_limit = 1.0;
        for (const auto& ty : types) {
            const double rest = static_cast<double>(min_total - ty.min_exponent);
            const double room = std::log2(static_cast<double>(budget)) - rest;
            if (room >= 0) prime_limit = std::max(prime_limit, std::exp2(room / static_cast<double>(ty.min_exponent)));
        }
        if (prime_limit >= 4294967295.0) throw resource_error("tree_zeta_direct: budget needs primes beyond 2^32");
        const auto primes = primes_up_to(static_cast<std::uint64_t>(prime_limit) + 1);
        detail::DirectEnumerator e{primes, types, budget, sigma};
        e.run(1, 0, K, min_total);
        acc = e.acc;
    }

    // Majorant for n > budget.
    Tolerance pt = ptol;
    pt.target = std::max(min_tolerance, std::min(ptol.target, 1e-12));
    std::map<std::uint64_t, double> p_upper;
    auto P_upper = [&](std::uint64_t v) {
        auto it = p_upper.find(v);
        if (it != p_upper.end()) return it->second;
        const EvalResult r = prime_zeta(static_cast<double>(v) * sigma, pt);
        return p_upper[v] = r.value + r.error_bound;
    };
    const double Y = std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(K));
    std::vector<double> full, partial_tail;
    for (const auto& ty : types) {
        double f = 0.0, pt_sum = 0.0;
        for (std::uint64_t v : ty.exponents) {
            const double s = static_cast<double>(v) * sigma;
            const double pu = P_upper(v);
            f += pu;
            const double z = std::pow(Y, 1.0 / static_cast<double>(v));
            pt_sum += z < 2.0 ? pu : std::min(pu, detail::prime_tail_majorant(z, s));
        }
        const double beyond = detail::prime_zeta_exponent_tail(64.0, sigma);
        f += beyond;
        pt_sum += beyond;
        for (unsigned c = 0; c < ty.count; ++c) {
            full.push_back(f);
            partial_tail.push_back(pt_sum);
        }
    }
    double tail = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        double term = partial_tail[i];
        for (std::size_t j = 0; j < full.size(); ++j)
            if (j != i) term *= full[j];
        tail += term;
    }

    const double value = acc.value();
    const double rounding = 8.0 * detail::eps * acc.magnitude;
    return {value, tail + rounding};
}

namespace detail {

struct PartitionEvaluation {
    EvalResult result;
    bool converged = false;
};

inline PartitionEvaluation tree_zeta_partition_at(const Tree& t, double sigma, std::uint64_t V, const Tolerance& tol,
                                                  std::map<std::uint64_t, EvalResult>& p_cache) {
    const auto kids = t.children();
    const unsigned K = static_cast<unsigned>(kids.size());

    // indicator[i][v] = [t(v) = T_i], v <= V
    std::vector<Tree> exponent_trees(V + 1);
    for (std::uint64_t v = 1; v <= V; ++v) exponent_trees[v] = tree_of(v);
    std::vector<std::vector<double>> indicator(K, std::vector<double>(V + 1, 0.0));
    std::vector<double> child_birth(K);
    for (unsigned i = 0; i < K; ++i) {
        child_birth[i] = birth_as_double(birth(kids[i]));
        for (std::uint64_t v = 1; v <= V; ++v)
            if (exponent_trees[v] == kids[i]) indicator[i][v] = 1.0;
    }

    Tolerance pt = tol;
    pt.target = std::max(min_tolerance, tol.target * 1e-3);
    auto P = [&](std::uint64_t n) -> const EvalResult& {
        auto it = p_cache.find(n);
        if (it != p_cache.end()) return it->second;
        return p_cache[n] = prime_zeta(sigma * static_cast<double>(n), pt);
    };

    // Block values keyed by membership mask.
    std::unordered_map<std::uint32_t, EvalResult> blocks;
    auto block_value = [&](const std::vector<unsigned>& block) -> EvalResult {
        std::uint32_t mask = 0;
        for (unsigned j : block) mask |= 1u << (j - 1);
        if (auto it = blocks.find(mask); it != blocks.end()) return it->second;

        // q(n) = #{(v_a)_{a in block} : t(v_a) = T_a, sum v_a = n}
        std::vector<double> q(V + 1, 0.0);
        q[0] = 1.0;
        double min_sum = 0.0;
        for (unsigned j : block) {
            std::vector<double> next(V + 1, 0.0);
            for (std::uint64_t a = 0; a <= V; ++a) {
                if (q[a] == 0.0) continue;
                for (std::uint64_t v = 1; a + v <= V; ++v)
                    if (indicator[j - 1][v] != 0.0) next[a + v] += q[a];
            }
            q.swap(next);
            min_sum += child_birth[j - 1];
        }
        CompensatedSum s;
        double err = 0.0;
        for (std::uint64_t n = 1; n <= V; ++n) {
            if (q[n] == 0.0) continue;
            const EvalResult& pn = P(n);
            s.add(q[n] * pn.value);
            err += q[n] * pn.error_bound;
        }
        const double n0 = std::max(static_cast<double>(V + 1), min_sum);
        const double tail = std::isfinite(n0) ? block_tail_majorant(n0, static_cast<unsigned>(block.size()), sigma) : 0.0;
        const EvalResult r{s.value(), err + tail + 4.0 * eps * s.magnitude};
        blocks.emplace(mask, r);
        return r;
    };

    CompensatedSum total;
    double err = 0.0;
    for_each_partition(K, [&](const SetPartition& part) {
        const IEWeight w = weight(part, K);
        double prod = 1.0, prod_upper = 1.0;
        for (const auto& b : part.blocks) {
            const EvalResult bv = block_value(b);
            prod *= bv.value;
            prod_upper *= std::fabs(bv.value) + bv.error_bound;
        }
        const double coeff = static_cast<double>(w.coefficient);
        total.add(w.sign * coeff * prod);
        err += coeff * ((prod_upper - std::fabs(prod)) + 4.0 * eps * K * std::fabs(prod));
    });
    // Ordered tuples visit each n once per permutation of equal children.
    double symmetry = 1.0;
    for (unsigned i = 0; i < K;) {
        unsigned j = i;
        while (j < K && kids[j] == kids[i]) ++j;
        symmetry *= std::tgamma(static_cast<double>(j - i) + 1.0);
        i = j;
    }
    const EvalResult r{total.value() / symmetry, (err + 4.0 * eps * total.magnitude) / symmetry};
    return {r, r.error_bound <= tol.target};
}

}  // namespace detail

/// zeta_T(sigma) through the partition expansion over root children, with
/// exponent sums truncated at a bound V doubled until the error bound meets
/// tol.target. The expansion sums over ordered prime tuples; the result is
/// divided by prod (multiplicity)! over groups of equal children.
inline EvalResult tree_zeta_partition(const Tree& t, double sigma, const Tolerance& tol = {}) {
    if (t.is_root()) throw domain_error("tree_zeta_partition: requires a tree with at least one edge");
    tol.validate();
    detail::require_convergent(t, sigma, "tree_zeta_partition");
    if (t.degree() > default_partition_cap)
        throw domain_error("tree_zeta_partition: root degree exceeds partition cap");

    std::map<std::uint64_t, EvalResult> p_cache;
    EvalResult best{};
    for (std::uint64_t V = 64;; V *= 2) {
        const std::uint64_t Vc = std::min<std::uint64_t>(V, tol.max_exponent);
        const auto ev = detail::tree_zeta_partition_at(t, sigma, Vc, tol, p_cache);
        best = ev.result;
        if (ev.converged) return best;
        if (Vc >= tol.max_exponent) break;
    }
    throw tolerance_unachievable("tree_zeta_partition: exponent cap reached before tolerance", best);
}

/// zeta_T with the convention zeta_r = 1.
inline EvalResult tree_zeta(const Tree& t, double sigma, const Tolerance& tol = {}) {
    if (t.is_root()) return {1.0, 0.0};
    return tree_zeta_partition(t, sigma, tol);
}

}  // namespace treezeta
