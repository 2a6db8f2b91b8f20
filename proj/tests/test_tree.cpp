#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "treezeta/birth.hpp"
#include "treezeta/factor.hpp"
#include "treezeta/tree.hpp"

using namespace treezeta;

namespace {

const Tree r{};
const Tree edge = lift(r);
const Tree chain2 = lift(edge);
const Tree star2 = product(edge, edge);

// Plain Eratosthenes, independent of the library sieve.
std::vector<bool> prime_flags(std::size_t n) {
    std::vector<bool> is(n + 1, true);
    is[0] = false;
    if (n >= 1) is[1] = false;
    for (std::size_t i = 2; i * i <= n; ++i)
        if (is[i])
            for (std::size_t j = i * i; j <= n; j += i) is[j] = false;
    return is;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) a = std::exchange(b, a % b);
    return a;
}

}  // namespace

TEST(TreeOf, Examples) {
    EXPECT_EQ(tree_of(1).code(), "()");
    EXPECT_TRUE(tree_of(1).is_root());
    EXPECT_EQ(tree_of(16).code(), "(((())))");
    EXPECT_EQ(tree_of(300).code(), "(()(())(()))");
    EXPECT_EQ(tree_of(8), tree_of(4));
    EXPECT_THROW(tree_of(0), domain_error);
}

TEST(Factorize, Examples) {
    EXPECT_TRUE(factorize(1).pairs.empty());
    const auto f = factorize(4800);
    ASSERT_EQ(f.omega(), 3u);
    EXPECT_EQ(f.pairs[0].prime, 2u);
    EXPECT_EQ(f.pairs[0].exponent, 6u);
    EXPECT_EQ(f.pairs[1].prime, 3u);
    EXPECT_EQ(f.pairs[1].exponent, 1u);
    EXPECT_EQ(f.pairs[2].prime, 5u);
    EXPECT_EQ(f.pairs[2].exponent, 2u);
    const auto p = factorize(97);
    ASSERT_EQ(p.omega(), 1u);
    EXPECT_EQ(p.pairs[0].prime, 97u);
    EXPECT_EQ(p.pairs[0].exponent, 1u);
    EXPECT_THROW(factorize(0), domain_error);
}

TEST(Factorize, Reconstructs) {
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        std::uint64_t prod = 1, last = 0;
        for (const auto& pp : factorize(n).pairs) {
            EXPECT_GT(pp.prime, last);
            EXPECT_GE(pp.exponent, 1u);
            last = pp.prime;
            for (unsigned i = 0; i < pp.exponent; ++i) prod *= pp.prime;
        }
        ASSERT_EQ(prod, n);
    }
    const std::uint64_t big = 18446744073709551557ull;  // largest prime below 2^64
    EXPECT_EQ(factorize(big).pairs.at(0).prime, big);
}

TEST(Product, Examples) {
    EXPECT_EQ(product(tree_of(300), r), tree_of(300));
    EXPECT_EQ(product(r, tree_of(300)), tree_of(300));
    EXPECT_EQ(product(tree_of(2), tree_of(2)), tree_of(6));
    EXPECT_EQ(product(tree_of(4), tree_of(3)), tree_of(12));
    EXPECT_EQ(product(tree_of(12), tree_of(5)), product(tree_of(5), tree_of(12)));
}

TEST(Lift, Examples) {
    EXPECT_EQ(lift(r).code(), "(())");
    EXPECT_EQ(lift(lift(r)), tree_of(4));
    EXPECT_EQ(lift(tree_of(4)), tree_of(16));
}

TEST(Codec, Examples) {
    EXPECT_EQ(encode(r).str(), "()");
    EXPECT_EQ(decode("()"), r);
    EXPECT_EQ(encode(tree_of(6)).str(), "(()())");
    EXPECT_EQ(decode("(()())"), tree_of(6));
    EXPECT_EQ(encode(tree_of(36)).str(), "((())(()))");
    EXPECT_EQ(decode("((())(()))"), tree_of(36));
    EXPECT_THROW(decode("((()"), parse_error);
}

TEST(Codec, RejectsMalformed) {
    for (const char* bad : {"", ")", "(", "(()", "())", "()()", "(x)", "(() )", "((())())"}) {
        EXPECT_THROW(decode(bad), parse_error) << bad;
    }
    try {
        decode("((())())");  // children out of canonical order
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.position, 5u);
    }
    try {
        decode("(()x)");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.position, 3u);
    }
}

TEST(Codec, CanonicalOrderIndependentOfInput) {
    const Tree a(std::vector<Tree>{chain2, r, star2});
    const Tree b(std::vector<Tree>{star2, chain2, r});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.code(), b.code());
    EXPECT_EQ(a.code(), "(()((()))(()()))");
}

TEST(Codec, DeepChainRoundTrip) {
    Tree t = r;
    for (int i = 0; i < 3000; ++i) t = lift(t);
    EXPECT_EQ(decode(t.code().str()), t);
    EXPECT_EQ(t.vertex_count(), 3001u);
}

TEST(Birth, Examples) {
    EXPECT_EQ(birth(r).value, 1);
    EXPECT_EQ(birth(edge).value, 2);
    EXPECT_EQ(birth(chain2).value, 4);
    EXPECT_EQ(birth(star2).value, 6);
    EXPECT_EQ(birth(tree_of(331776)).value, 331776);
    EXPECT_EQ(birth(tree_of(300)).value, 180);
    EXPECT_EQ(tree_of(300), tree_of(180));
}

TEST(Birth, ScanConfirms331776IsFirst) {
    const Tree t = tree_of(331776);
    for (std::uint64_t n = 1; n < 331776; ++n) ASSERT_NE(tree_of(n), t) << n;
}

TEST(Birth, OverflowOnDeepChains) {
    Tree t = r;
    for (int i = 0; i < 6; ++i) t = lift(t);  // births 1,2,4,16,65536,2^65536,2^(2^65536)
    EXPECT_EQ(birth(lift(lift(lift(lift(r))))).value, 65536);
    EXPECT_THROW(birth(t), birth_overflow);
    EXPECT_NO_THROW(birth(lift(lift(lift(lift(lift(r))))), 70000));
    EXPECT_THROW(birth(lift(lift(lift(lift(lift(r))))), 1000), birth_overflow);
}

TEST(Decompose, Examples) {
    const auto d16 = decompose(tree_of(16));
    EXPECT_EQ(d16.t0, chain2);
    EXPECT_EQ(d16.k, 1u);
    EXPECT_EQ(d16.m.value, 4);
    EXPECT_TRUE(d16.t_prime.is_root());

    const auto d729 = decompose(tree_of(729000000));
    EXPECT_EQ(d729.t0, star2);
    EXPECT_EQ(d729.k, 3u);
    EXPECT_EQ(d729.m.value, 6);
    EXPECT_TRUE(d729.t_prime.is_root());

    const auto d186 = decompose(tree_of(18662400));
    EXPECT_EQ(d186.t0, edge);
    EXPECT_EQ(d186.k, 1u);
    EXPECT_EQ(d186.m.value, 2);
    EXPECT_EQ(d186.t_prime, Tree(std::vector<Tree>{tree_of(10), tree_of(6)}));

    const auto d207 = decompose(tree_of(207360000));
    EXPECT_EQ(d207.m.value, 4);
    EXPECT_EQ(d207.k, 2u);

    EXPECT_THROW(decompose(r), domain_error);
}

TEST(Decompose, SignatureTable) {
    const std::vector<std::tuple<std::uint64_t, int, std::uint64_t>> table = {
        {16, 4, 1},     {300, 1, 1},       {4800, 1, 1},      {307200, 1, 1},
        {18662400, 2, 1}, {192000000, 1, 1}, {729000000, 6, 3},
    };
    for (const auto& [n, m, k] : table) {
        const auto d = decompose(tree_of(n));
        EXPECT_EQ(d.m.value, m) << n;
        EXPECT_EQ(d.k, k) << n;
    }
}

TEST(EnumerateBirths, Examples) {
    const auto e13 = enumerate_births(13, 1000);
    // 90 = 2 * 3^2 * 5 shares the exponent multiset of 60, so it is not a birth
    EXPECT_EQ(tree_of(90), tree_of(60));
    const std::vector<int> expected = {1, 2, 4, 6, 12, 16, 30, 36, 48, 60, 64, 144, 180};
    ASSERT_EQ(e13.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(e13[i].birth.value, expected[i]);
        EXPECT_EQ(tree_of(expected[i]), e13[i].tree);
    }
    const auto e1 = enumerate_births(1, 1);
    ASSERT_EQ(e1.size(), 1u);
    EXPECT_EQ(e1[0].birth.value, 1);
    EXPECT_EQ(e1[0].tree, r);
    const auto e3 = enumerate_births(3, 10);
    ASSERT_EQ(e3.size(), 3u);
    EXPECT_EQ(e3[1].tree, edge);
    EXPECT_EQ(e3[2].tree, chain2);
    EXPECT_THROW(enumerate_births(13, 100), insufficient_bound);
}

TEST(Properties, RoundTripAndPrimes) {
    const auto is_prime = prime_flags(100000);
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        const Tree t = tree_of(n);
        ASSERT_EQ(decode(encode(t).str()), t) << n;
        if (is_prime[n]) {
            ASSERT_EQ(t, lift(r)) << n;
        }
    }
}

TEST(Properties, CoprimeMultiplicativity) {
    for (std::uint64_t a = 1; a <= 1000; ++a)
        for (std::uint64_t b = 1; b <= 1000; ++b)
            if (gcd(a, b) == 1) {
                ASSERT_EQ(tree_of(a * b), product(tree_of(a), tree_of(b))) << a << "*" << b;
            }
}

TEST(Properties, BirthsBelow1e5) {
    std::unordered_map<Tree, std::uint64_t> first;
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        const Tree t = tree_of(n);
        first.try_emplace(t, n);
        const Birth b = birth(t);
        ASSERT_LE(b.value, n);
        ASSERT_EQ(b.value == n, first.at(t) == n) << n;
    }
    std::map<BigNat, std::string> seen;
    for (const auto& [t, n] : first) {
        const Birth b = birth(t);
        EXPECT_EQ(b.value, n);
        EXPECT_EQ(tree_of(n), t);
        EXPECT_TRUE(seen.emplace(b.value, t.code().str()).second) << "birth collision at " << b.str();
    }
}

TEST(Properties, DecompositionReconstructs) {
    std::unordered_set<Tree> trees;
    for (std::uint64_t n = 2; n <= 100000; ++n) trees.insert(tree_of(n));
    for (const Tree& t : trees) {
        const auto d = decompose(t);
        ASSERT_EQ(d.reconstruct(), t) << t.code();
        Tree glued = d.t_prime;
        for (std::uint64_t i = 0; i < d.k; ++i) glued = product(glued, lift(d.t0));
        ASSERT_EQ(glued, t);
        EXPECT_EQ(birth(d.t0), d.m);
        for (const Tree& c : d.t_prime.children()) EXPECT_LT(d.m, birth(c)) << t.code();
    }
}

TEST(TreeValue, SharedAcrossThreadsIsSafe) {
    const Tree t = tree_of(729000000);
    std::vector<std::thread> pool;
    std::atomic<int> ok{0};
    for (int i = 0; i < 4; ++i)
        pool.emplace_back([&] {
            Tree copy = t;
            if (decode(copy.code().str()) == t) ++ok;
        });
    for (auto& th : pool) th.join();
    EXPECT_EQ(ok.load(), 4);
}
