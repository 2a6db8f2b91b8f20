#pragma once

// Command-line front end. run() takes the argument list without the program
// name and writes the report to `out` (or --out) and diagnostics to `err`.
// Exit codes: 0 ok, 2 parse error, 3 domain error, 4 resource or tolerance error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "treezeta/treezeta.hpp"

namespace treezeta::cli {

enum exit_code : int { ok = 0, parse_failure = 2, domain_failure = 3, resource_failure = 4 };

struct RunConfig {
    std::string format = "csv";
    std::string out_path;
    double tol = 1e-12;
    std::uint64_t segment = std::uint64_t{1} << 18;
    unsigned threads = 0;
    std::size_t birth_bits = default_birth_bits;
};

using Cell = std::variant<std::monostate, std::string, std::uint64_t, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string csv_field(const Cell& c) {
    struct {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    } visit;
    return std::visit(visit, c);
}

inline nlohmann::ordered_json json_field(const Cell& c) {
    struct {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return nullptr;
            return v;
        }
        nlohmann::ordered_json operator()(bool v) const { return v; }
    } visit;
    return std::visit(visit, c);
}

inline void write_table(const Table& t, const std::string& format, std::ostream& os) {
    if (format == "json") {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_field(row[i]);
            arr.push_back(std::move(obj));
        }
        os << arr.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << '\n';
    }
}

/// A decimal integer n means t(n); text starting with '(' is a tree code.
inline Tree parse_tree_arg(const std::string& text) {
    if (!text.empty() && text.front() == '(') return decode(text);
    std::uint64_t n = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, n);
    if (text.empty() || ec == std::errc::invalid_argument) throw parse_error("expected a decimal integer or tree code", 0);
    if (ec == std::errc::result_out_of_range) throw parse_error("integer out of range", 0);
    if (ptr != end) throw parse_error("unexpected character in integer", static_cast<std::size_t>(ptr - text.data()));
    return tree_of(n);
}

inline Tolerance make_tolerance(const RunConfig& cfg) {
    Tolerance tol;
    tol.target = cfg.tol;
    tol.validate();
    return tol;
}

inline CensusOptions make_census_options(const RunConfig& cfg) { return {cfg.segment, cfg.threads}; }

inline Table cmd_census(std::uint64_t x, const RunConfig& cfg) {
    const CensusTable table = census(x, make_census_options(cfg));
    Table t{{"tree_code", "birth", "count"}, {}};
    for (const auto& r : table.rows()) t.rows.push_back({r.tree.code().str(), r.birth.str(), r.count});
    return t;
}

inline Table cmd_count(std::uint64_t x, const Tree& tree, const RunConfig& cfg) {
    const CensusTable table = census(x, make_census_options(cfg));
    return Table{{"x", "tree_code", "count"}, {{x, tree.code().str(), count_tree(table, tree)}}};
}

inline std::vector<BirthEntry> seq_entries(std::size_t count, std::uint64_t bound) {
    if (bound) return enumerate_births(count, bound);
    for (std::uint64_t b = 1024;; b *= 2) {
        try {
            return enumerate_births(count, b);
        } catch (const insufficient_bound&) {
            if (b >= (std::uint64_t{1} << 32)) throw;
        }
    }
}

inline Table cmd_seq(std::size_t count, std::uint64_t bound) {
    Table t{{"index", "birth", "tree_code"}, {}};
    std::uint64_t i = 0;
    for (const auto& e : seq_entries(count, bound)) t.rows.push_back({++i, e.birth.str(), e.tree.code().str()});
    return t;
}

inline Table cmd_fullcount(std::uint64_t x, unsigned m) {
    return Table{{"x", "m", "count"}, {{x, std::uint64_t{m}, count_min_exponent(x, m)}}};
}

inline Table cmd_zeta(const Tree& tree, double sigma, const std::string& method, std::uint64_t budget,
                      const RunConfig& cfg, bool& agree) {
    const Tolerance tol = make_tolerance(cfg);
    Table t{{"tree_code", "sigma", "method", "value", "error_bound", "status"}, {}};
    std::optional<EvalResult> direct, partition;
    if (method == "direct" || method == "both") {
        direct = tree_zeta_direct(tree, sigma, budget, tol);
        t.rows.push_back({tree.code().str(), sigma, std::string("direct"), direct->value, direct->error_bound, std::string("ok")});
    }
    if (method == "partition" || method == "both") {
        partition = tree_zeta(tree, sigma, tol);
        t.rows.push_back(
            {tree.code().str(), sigma, std::string("partition"), partition->value, partition->error_bound, std::string("ok")});
    }
    agree = true;
    if (direct && partition) {
        const double diff = std::fabs(direct->value - partition->value);
        const double bound = direct->error_bound + partition->error_bound;
        agree = diff <= bound;
        t.rows.push_back({tree.code().str(), sigma, std::string("difference"), diff, bound,
                          std::string(agree ? "agree" : "disagree")});
    }
    return t;
}

inline Table cmd_predict(const Tree& tree, std::uint64_t x, const RunConfig& cfg) {
    const Prediction p = main_term(tree, x, make_tolerance(cfg));
    return Table{{"tree_code", "m", "k", "x", "constant", "constant_error", "main_term", "remainder_class"},
                 {{p.tree.str(), p.m, std::uint64_t{p.k}, p.x, p.constant.value, p.constant.error_bound, p.main_term,
                   p.remainder_class}}};
}

inline Table cmd_verify(const Tree& tree, const std::vector<std::uint64_t>& xs, const RunConfig& cfg) {
    decompose(tree, cfg.birth_bits);
    for (auto x : xs)
        if (x < min_prediction_x) throw domain_error("verify: x must be >= 16");
    std::vector<CensusTable> tables;
    for (auto x : xs) tables.push_back(census(x, make_census_options(cfg)));
    Table t{{"x", "empirical", "predicted", "ratio"}, {}};
    for (const auto& r : compare_census(tree, xs, tables, make_tolerance(cfg)))
        t.rows.push_back({r.x, r.empirical, r.predicted, r.ratio});
    return t;
}

inline Table cmd_probe(const Tree& tree, const std::vector<double>& eps, double floor, const RunConfig& cfg,
                       std::ostream& err) {
    const ProbeReport rep = singularity_probe(tree, eps, make_tolerance(cfg), floor);
    Table t{{"epsilon", "zeta", "error_bound", "ratio"}, {}};
    for (const auto& r : rep.rows) {
        if (!r.status.empty()) err << "warning: epsilon " << format_double(r.epsilon) << ": " << r.status << '\n';
        t.rows.push_back({r.epsilon, r.zeta.value, r.zeta.error_bound, r.ratio});
    }
    return t;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Prime tower trees: births, censuses, tree zeta functions and main-term checks", "treezeta"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out_path, "Output path (default: standard output)");
    app.add_option("--tol", cfg.tol, "Tolerance target for zeta evaluations")->check(CLI::PositiveNumber);
    app.add_option("--segment", cfg.segment, "Census segment size")->check(CLI::PositiveNumber);
    app.add_option("--threads", cfg.threads, "Census worker threads (default: hardware)")->check(CLI::PositiveNumber);
    app.add_option("--birth-bits", cfg.birth_bits, "Bit budget for exact births")->check(CLI::PositiveNumber);

    std::string tree_arg;
    std::uint64_t x = 0, bound = 0, budget = 10'000'000;
    std::size_t count = 0;
    unsigned m = 0;
    double sigma = 0.0, floor = default_probe_floor;
    std::string method = "both";
    std::vector<std::uint64_t> xs;
    std::vector<double> eps;

    auto* tree_cmd = app.add_subcommand("tree", "Code, birth and signature of a tree");
    tree_cmd->add_option("tree", tree_arg, "Integer n or tree code")->required();

    auto* census_cmd = app.add_subcommand("census", "Counts of n <= x per tree");
    census_cmd->add_option("x", x)->required()->check(CLI::PositiveNumber);

    auto* count_cmd = app.add_subcommand("count", "pi_T(x) for one tree");
    count_cmd->add_option("x", x)->required()->check(CLI::PositiveNumber);
    count_cmd->add_option("tree", tree_arg)->required();

    auto* seq_cmd = app.add_subcommand("seq", "First trees in birth order");
    seq_cmd->add_option("count", count)->required()->check(CLI::PositiveNumber);
    seq_cmd->add_option("--bound", bound, "Scan bound (default: doubled until enough trees)")
        ->check(CLI::PositiveNumber);

    auto* full_cmd = app.add_subcommand("fullcount", "Integers <= x with every prime exponent > m");
    full_cmd->add_option("x", x)->required()->check(CLI::PositiveNumber);
    full_cmd->add_option("m", m)->required()->check(CLI::PositiveNumber);

    auto* zeta_cmd = app.add_subcommand("zeta", "Tree zeta function at a real point");
    zeta_cmd->add_option("tree", tree_arg)->required();
    zeta_cmd->add_option("sigma", sigma)->required();
    zeta_cmd->add_option("method", method)->check(CLI::IsMember({"direct", "partition", "both"}));
    zeta_cmd->add_option("--budget", budget, "Enumeration bound for the direct method")->check(CLI::PositiveNumber);

    auto* predict_cmd = app.add_subcommand("predict", "Main term for pi_T(x)");
    predict_cmd->add_option("tree", tree_arg)->required();
    predict_cmd->add_option("x", x)->required()->check(CLI::PositiveNumber);

    auto* verify_cmd = app.add_subcommand("verify", "Census counts against the main term");
    verify_cmd->add_option("tree", tree_arg)->required();
    verify_cmd->add_option("xs", xs)->required()->check(CLI::PositiveNumber);

    auto* probe_cmd = app.add_subcommand("probe", "Tree zeta near its singularity 1/m");
    probe_cmd->add_option("tree", tree_arg)->required();
    probe_cmd->add_option("epsilons", eps)->required();
    probe_cmd->add_option("--floor", floor, "Smallest admissible epsilon")->check(CLI::PositiveNumber);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return parse_failure;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    auto open_sink = [&] {
        if (cfg.out_path.empty()) return;
        file.open(cfg.out_path);
        if (!file) throw resource_error("cannot open output file " + cfg.out_path);
        sink = &file;
    };
    auto emit = [&](const Table& t) {
        open_sink();
        write_table(t, cfg.format, *sink);
        sink->flush();
        if (!*sink) throw resource_error("write failed");
    };

    try {
        if (*tree_cmd) {
            const Tree t = parse_tree_arg(tree_arg);
            const Birth b = birth(t, cfg.birth_bits);
            Table table{{"tree_code", "birth", "m", "k", "t0", "t_prime"}, {}};
            if (t.is_root()) {
                table.rows.push_back({t.code().str(), b.str(), {}, {}, {}, {}});
                emit(table);
                decompose(t, cfg.birth_bits);  // r has no signature
            }
            const Decomposition d = decompose(t, cfg.birth_bits);
            table.rows.push_back({t.code().str(), b.str(), d.m.str(), d.k, d.t0.code().str(), d.t_prime.code().str()});
            emit(table);
        } else if (*census_cmd) {
            emit(cmd_census(x, cfg));
        } else if (*count_cmd) {
            emit(cmd_count(x, parse_tree_arg(tree_arg), cfg));
        } else if (*seq_cmd) {
            emit(cmd_seq(count, bound));
        } else if (*full_cmd) {
            emit(cmd_fullcount(x, m));
        } else if (*zeta_cmd) {
            bool agree = true;
            emit(cmd_zeta(parse_tree_arg(tree_arg), sigma, method, budget, cfg, agree));
            if (!agree) {
                err << "error: direct and partition values disagree beyond their error bounds\n";
                return domain_failure;
            }
        } else if (*predict_cmd) {
            emit(cmd_predict(parse_tree_arg(tree_arg), x, cfg));
        } else if (*verify_cmd) {
            emit(cmd_verify(parse_tree_arg(tree_arg), xs, cfg));
        } else if (*probe_cmd) {
            emit(cmd_probe(parse_tree_arg(tree_arg), eps, floor, cfg, err));
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return parse_failure;
    } catch (const tolerance_unachievable& e) {
        err << "error: " << e.what() << " (partial value " << format_double(e.partial.value) << " +/- "
            << format_double(e.partial.error_bound) << ")\n";
        return resource_failure;
    } catch (const resource_error& e) {
        err << "error: " << e.what() << '\n';
        return resource_failure;
    } catch (const birth_overflow& e) {
        err << "error: " << e.what() << '\n';
        return resource_failure;
    } catch (const insufficient_bound& e) {
        err << "error: " << e.what() << '\n';
        return resource_failure;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return domain_failure;
    } catch (const missing_census& e) {
        err << "error: " << e.what() << '\n';
        return domain_failure;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return resource_failure;
    }
    return ok;
}

}  // namespace treezeta::cli
