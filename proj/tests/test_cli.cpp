#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = treezeta::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) cells.push_back(std::exchange(cell, {}));
            else cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(CliTree, Examples) {
    auto r = run({"tree", "300"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"tree_code", "birth", "m", "k", "t0", "t_prime"}));
    EXPECT_EQ(rows[1][0], "(()(())(()))");
    EXPECT_EQ(rows[1][1], "180");  // t(300) = t(180)
    EXPECT_EQ(rows[1][2], "1");
    EXPECT_EQ(rows[1][3], "1");

    rows = csv_rows(run({"tree", "16"}).out);
    EXPECT_EQ(rows[1][2], "4");
    EXPECT_EQ(rows[1][3], "1");

    r = run({"tree", "()"});
    EXPECT_EQ(r.code, 3);
    rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][0], "()");
    EXPECT_EQ(rows[1][1], "1");
    EXPECT_NE(r.err.find("at least one edge"), std::string::npos);

    r = run({"tree", "((())(()))"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(csv_rows(r.out)[1][1], "36");
    r = run({"tree", "(()())"});
    EXPECT_EQ(csv_rows(r.out)[1][1], "6");
}

TEST(CliSeq, BirthSequence) {
    auto r = run({"seq", "13"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 14u);
    const std::vector<std::string> expected = {"1", "2", "4", "6", "12", "16", "30", "36", "48", "60", "64", "144", "180"};
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(rows[i + 1][1], expected[i]);
    EXPECT_EQ(run({"seq", "1000", "--bound", "10"}).code, 4);
}

TEST(CliCount, Examples) {
    auto r = run({"count", "100", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(csv_rows(r.out)[1], (std::vector<std::string>{"100", "(())", "25"}));
    r = run({"count", "100", "(((())))"});
    EXPECT_EQ(csv_rows(r.out)[1][2], "2");  // 16 and 81
}

TEST(CliCensus, TenSumsToTen) {
    auto r = run({"census", "10"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"tree_code", "birth", "count"}));
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) total += std::stoull(rows[i][2]);
    EXPECT_EQ(total, 10u);
    EXPECT_EQ(rows[1][0], "()");
    EXPECT_EQ(rows[4][1], "6");
}

TEST(CliCensus, DeterministicAcrossThreadsAndSegments) {
    const auto a = run({"census", "200000", "--threads", "1"});
    const auto b = run({"census", "200000", "--threads", "4", "--segment", "1000"});
    const auto c = run({"--threads", "2", "census", "200000", "--segment", "65536"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}

TEST(CliZeta, BothMethodsAgree) {
    auto r = run({"zeta", "2", "2.0", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1][2], "direct");
    EXPECT_EQ(rows[2][2], "partition");
    EXPECT_EQ(rows[3][2], "difference");
    EXPECT_EQ(rows[3][5], "agree");
    EXPECT_NEAR(std::stod(rows[2][3]), 0.45224742004106549851, 1e-12);

    r = run({"zeta", "(())", "2", "partition"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(csv_rows(r.out).size(), 2u);
    EXPECT_EQ(run({"zeta", "2", "1.0"}).code, 3);
    EXPECT_EQ(run({"zeta", "2", "2", "sideways"}).code, 2);
}

TEST(CliPredict, Edge) {
    auto r = run({"predict", "2", "1000000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    EXPECT_NEAR(std::stod(rows[1][6]), 72382.4, 0.05);
    EXPECT_EQ(rows[1][7], "x^{1/m} loglog x / log^2 x");
    EXPECT_EQ(run({"predict", "2", "10"}).code, 3);
    EXPECT_EQ(run({"predict", "1", "100"}).code, 3);
}

TEST(CliVerify, EdgeRows) {
    auto r = run({"verify", "2", "10000", "1000000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "empirical", "predicted", "ratio"}));
    EXPECT_EQ(rows[2][1], "78498");
    EXPECT_GT(std::stod(rows[1][3]), std::stod(rows[2][3]));
}

TEST(CliProbe, ChainRatiosTrendToOne) {
    auto r = run({"probe", "4", "1e-2", "1e-3", "1e-4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"epsilon", "zeta", "error_bound", "ratio"}));
    double prev = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double d = std::fabs(std::stod(rows[i][3]) - 1.0);
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_EQ(run({"probe", "4", "1e-3", "1e-2"}).code, 3);
    EXPECT_EQ(run({"probe", "4", "1e-8"}).code, 3);
    EXPECT_EQ(run({"probe", "4", "1e-7", "--floor", "1e-8"}).code, 0);
}

TEST(CliFullcount, Powerful) {
    auto r = run({"fullcount", "100", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(csv_rows(r.out)[1][2], "14");
}

TEST(CliFormat, JsonMirrorsCsvFields) {
    auto r = run({"census", "10", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 4u);
    EXPECT_EQ(j[0]["tree_code"], "()");
    EXPECT_EQ(j[0]["birth"], "1");
    EXPECT_EQ(j[0]["count"], 1);
    EXPECT_EQ(j[3]["count"], 2);

    r = run({"--format", "json", "probe", "2", "1e-2"});
    ASSERT_EQ(r.code, 0);
    const auto p = nlohmann::json::parse(r.out);
    for (const char* key : {"epsilon", "zeta", "error_bound", "ratio"}) EXPECT_TRUE(p[0].contains(key)) << key;

    r = run({"tree", "()", "--format", "json"});
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(nlohmann::json::parse(r.out)[0]["m"].is_null());
}

TEST(CliOutput, WritesFile) {
    const auto path = std::filesystem::temp_directory_path() / "treezeta_cli_test.csv";
    auto r = run({"seq", "4", "--out", path.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "index,birth,tree_code\n1,1,()\n2,2,(())\n3,4,((()))\n4,6,(()())\n");
    std::filesystem::remove(path);
    EXPECT_EQ(run({"seq", "4", "--out", "/nonexistent/dir/x.csv"}).code, 4);
}

TEST(CliExitCodes, Classes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"seq", "3", "--unknown"}).code, 2);
    EXPECT_EQ(run({"tree", "((()"}).code, 2);
    EXPECT_EQ(run({"tree", "12a"}).code, 2);
    EXPECT_EQ(run({"tree", "99999999999999999999999"}).code, 2);
    EXPECT_EQ(run({"seq", "-3"}).code, 2);
    EXPECT_EQ(run({"seq", "3", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"census", "100", "--threads", "0"}).code, 2);
    EXPECT_EQ(run({"zeta", "2", "2", "--tol", "-1"}).code, 2);
    EXPECT_EQ(run({"tree", "0"}).code, 3);
    EXPECT_EQ(run({"zeta", "2", "2", "--tol", "1e-20"}).code, 3);
    EXPECT_EQ(run({"tree", "(((((((())))))))", "--birth-bits", "64"}).code, 4);
    EXPECT_EQ(run({"--help"}).code, 0);
}
