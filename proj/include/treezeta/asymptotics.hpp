#pragma once

// Main-term prediction for pi_T(x), census comparison, and real-axis probes
// of the logarithmic singularity of zeta_T at 1/m.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treezeta/birth.hpp"
#include "treezeta/census.hpp"
#include "treezeta/error.hpp"
#include "treezeta/tree.hpp"
#include "treezeta/tree_zeta.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta {

struct missing_census : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t min_prediction_x = 16;
inline constexpr double default_probe_floor = 1e-6;

struct Signature {
    std::uint64_t m = 0;
    unsigned k = 0;
};

inline Signature signature(const Decomposition& d) {
    if (d.m.value > std::numeric_limits<std::uint64_t>::max())
        throw domain_error("signature: m = " + d.m.str() + " does not fit in 64 bits");
    return {d.m.value.convert_to<std::uint64_t>(), static_cast<unsigned>(d.k)};
}

struct Prediction {
    TreeCode tree;
    std::uint64_t m = 0;
    unsigned k = 0;
    EvalResult constant;  // zeta_{T'}(1/m)
    std::uint64_t x = 0;
    double main_term = 0.0;
    std::string remainder_class;
};

inline std::string remainder_class(unsigned k) {
    return k == 1 ? "x^{1/m} loglog x / log^2 x" : "x^{1/m} (loglog x)^{k-2} / log x";
}

/// zeta_{T'}(1/m), exactly 1 when T' = r.
inline EvalResult main_term_constant(const Decomposition& d, const Tolerance& tol = {}) {
    if (d.t_prime.is_root()) return {1.0, 0.0};
    return tree_zeta_partition(d.t_prime, 1.0 / static_cast<double>(signature(d).m), tol);
}

inline double main_term_value(std::uint64_t m, unsigned k, double constant, double x) {
    const double lx = std::log(x);
    const double md = static_cast<double>(m);
    return md * std::pow(x, 1.0 / md) / lx * std::pow(std::log(lx), k - 1.0) / std::tgamma(static_cast<double>(k)) *
           constant;
}

/// m x^{1/m} / log x * (loglog x)^{k-1} / (k-1)! * zeta_{T'}(1/m).
inline Prediction main_term(const Tree& t, std::uint64_t x, const Tolerance& tol = {}) {
    const Decomposition d = decompose(t);
    if (x < min_prediction_x) throw domain_error("main_term: x must be >= 16");
    const Signature sg = signature(d);
    Prediction p;
    p.tree = encode(t);
    p.m = sg.m;
    p.k = sg.k;
    p.constant = main_term_constant(d, tol);
    p.x = x;
    p.main_term = main_term_value(sg.m, sg.k, p.constant.value, static_cast<double>(x));
    p.remainder_class = remainder_class(sg.k);
    return p;
}

struct ComparisonRow {
    std::uint64_t x = 0;
    std::uint64_t empirical = 0;
    double predicted = 0.0;
    double ratio = 0.0;
};

/// Rows (x, pi_T(x), main term, ratio) in the order of xs; `tables` must
/// contain a census with limit x for every x.
inline std::vector<ComparisonRow> compare_census(const Tree& t, std::span<const std::uint64_t> xs,
                                                 std::span<const CensusTable> tables, const Tolerance& tol = {}) {
    const Decomposition d = decompose(t);
    const Signature sg = signature(d);
    std::optional<EvalResult> constant;
    std::vector<ComparisonRow> rows;
    for (std::uint64_t x : xs) {
        if (x < min_prediction_x) throw domain_error("compare_census: x must be >= 16");
        const CensusTable* table = nullptr;
        for (const auto& c : tables)
            if (c.limit() == x) table = &c;
        if (!table) throw missing_census("compare_census: no census for x = " + std::to_string(x));
        if (!constant) constant = main_term_constant(d, tol);
        ComparisonRow r;
        r.x = x;
        r.empirical = table->count(t);
        r.predicted = main_term_value(sg.m, sg.k, constant->value, static_cast<double>(x));
        r.ratio = static_cast<double>(r.empirical) / r.predicted;
        rows.push_back(r);
    }
    return rows;
}

struct ProbeRow {
    double epsilon = 0.0;
    EvalResult zeta;
    double ratio = 0.0;
    std::string status;  // empty on success; otherwise the evaluation failure
};

struct ProbeReport {
    TreeCode tree;
    std::uint64_t m = 0;
    unsigned k = 0;
    EvalResult constant;
    std::vector<ProbeRow> rows;
};

/// zeta_T(1/m + eps) against zeta_{T'}(1/m) (log 1/eps)^k for each eps.
inline ProbeReport singularity_probe(const Tree& t, std::span<const double> epsilons, const Tolerance& tol = {},
                                     double floor = default_probe_floor) {
    const Decomposition d = decompose(t);
    const Signature sg = signature(d);
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        const double e = epsilons[i];
        if (!(e > 0.0) || !std::isfinite(e)) throw domain_error("singularity_probe: epsilons must be positive");
        if (e < floor) throw domain_error("singularity_probe: epsilon below the probe floor");
        if (e >= 1.0) throw domain_error("singularity_probe: epsilon must be < 1");
        if (i > 0 && !(e < epsilons[i - 1])) throw domain_error("singularity_probe: epsilons must strictly decrease");
    }
    ProbeReport rep;
    rep.tree = encode(t);
    rep.m = sg.m;
    rep.k = sg.k;
    rep.constant = main_term_constant(d, tol);
    const double center = 1.0 / static_cast<double>(sg.m);
    for (double e : epsilons) {
        ProbeRow row;
        row.epsilon = e;
        try {
            row.zeta = tree_zeta_partition(t, center + e, tol);
        } catch (const tolerance_unachievable& ex) {
            row.zeta = ex.partial;
            row.status = ex.what();
        }
        row.ratio = row.zeta.value / (rep.constant.value * std::pow(std::log(1.0 / e), sg.k));
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace treezeta
