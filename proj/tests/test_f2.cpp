#include <gtest/gtest.h>

#include <random>

#include "unst/f2.hpp"

using namespace unst::f2;

namespace {

BitMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double density = 0.5)
{
    std::bernoulli_distribution bit(density);
    BitMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, bit(rng));
    return m;
}

BitVector random_vector(std::mt19937_64& rng, std::size_t n)
{
    std::bernoulli_distribution bit(0.5);
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        v.set(i, bit(rng));
    return v;
}

} // namespace

TEST(BitVector, BasicOps)
{
    BitVector v(130);
    v.set(0);
    v.set(64);
    v.set(129);
    EXPECT_EQ(v.popcount(), 3u);
    EXPECT_EQ(v.first_set(), 0u);
    EXPECT_EQ(v.support(), (std::vector<std::size_t>{0, 64, 129}));
    v.flip(0);
    EXPECT_EQ(v.first_set(), 64u);
    BitVector w = BitVector::unit(130, 64);
    EXPECT_TRUE(v.dot(w));
    v ^= w;
    EXPECT_EQ(v.support(), (std::vector<std::size_t>{129}));
    EXPECT_EQ(BitVector(5).first_set(), 5u);
}

TEST(BitVector, ConcatSliceResize)
{
    std::mt19937_64 rng(7);
    auto a = random_vector(rng, 70);
    auto b = random_vector(rng, 61);
    auto c = a.concat(b);
    ASSERT_EQ(c.size(), 131u);
    EXPECT_EQ(c.slice(0, 70), a);
    EXPECT_EQ(c.slice(70, 131), b);
    c.resize(70);
    EXPECT_EQ(c, a);
    c.resize(200);
    EXPECT_EQ(c.slice(0, 70), a);
    EXPECT_TRUE(c.slice(70, 200).is_zero());
}

TEST(BitMatrix, ProductAndTranspose)
{
    std::mt19937_64 rng(1);
    auto a = random_matrix(rng, 13, 70);
    auto b = random_matrix(rng, 70, 9);
    auto x = random_vector(rng, 9);
    EXPECT_EQ((a * b).apply(x), a.apply(b.apply(x)));
    EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
    EXPECT_EQ(BitMatrix::identity(70) * b, b);
}

TEST(BitMatrix, Blocks)
{
    std::mt19937_64 rng(2);
    auto a = random_matrix(rng, 3, 4);
    auto b = random_matrix(rng, 5, 4);
    auto s = a.stack_below(b);
    EXPECT_EQ(s.block(0, 0, 3, 4), a);
    EXPECT_EQ(s.block(3, 0, 5, 4), b);
    auto c = random_matrix(rng, 3, 66);
    auto r = a.stack_right(c);
    EXPECT_EQ(r.block(0, 4, 3, 66), c);
    for (std::size_t j = 0; j < 66; ++j)
        EXPECT_EQ(r.column(4 + j), c.column(j));
}

TEST(Elimination, KernelAndRank)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = 1 + rng() % 40, c = 1 + rng() % 90;
        auto m = random_matrix(rng, r, c, 0.3);
        auto ker = kernel_basis(m);
        EXPECT_EQ(ker.size() + rank(m), c);
        for (const auto& v : ker)
            EXPECT_TRUE(m.apply(v).is_zero());
        Subspace span(c);
        for (const auto& v : ker)
            EXPECT_TRUE(span.insert(v));
        auto cols = std::vector<BitVector>{};
        for (std::size_t j = 0; j < c; ++j)
            cols.push_back(m.column(j));
        EXPECT_EQ(kernel_of_images(cols, r), ker);
    }
}

TEST(Elimination, SolveConsistentAndInconsistent)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_matrix(rng, 20, 15, 0.3);
        auto x = random_vector(rng, 15);
        auto b = m.apply(x);
        auto y = solve(m, b);
        ASSERT_TRUE(y.has_value());
        EXPECT_EQ(m.apply(*y), b);
    }
    BitMatrix z(2, 2);
    EXPECT_FALSE(solve(z, BitVector::unit(2, 1)).has_value());
    EXPECT_THROW(solve(z, BitVector(3)), std::invalid_argument);
}

TEST(Subspace, ExpressOverGenerators)
{
    std::mt19937_64 rng(5);
    Subspace s(50);
    std::vector<BitVector> gens;
    for (int i = 0; i < 20; ++i) {
        gens.push_back(random_vector(rng, 50));
        s.insert(gens.back());
    }
    gens.push_back(gens[0] ^ gens[3]);
    EXPECT_FALSE(s.insert(gens.back()));
    EXPECT_EQ(s.generators(), 21u);
    for (int t = 0; t < 10; ++t) {
        BitVector target(50);
        for (auto& g : gens)
            if (rng() & 1)
                target ^= g;
        auto c = s.express(target);
        ASSERT_TRUE(c.has_value());
        BitVector sum(50);
        for (auto i : c->support())
            sum ^= gens[i];
        EXPECT_EQ(sum, target);
    }
}

TEST(QuotientMap, ProjectKillsSubspace)
{
    std::mt19937_64 rng(6);
    Subspace s(30);
    std::vector<BitVector> gens;
    for (int i = 0; i < 8; ++i) {
        gens.push_back(random_vector(rng, 30));
        s.insert(gens.back());
    }
    QuotientMap q(s);
    EXPECT_EQ(q.dim(), 30 - s.dim());
    for (auto& g : gens)
        EXPECT_TRUE(q.project(g).is_zero());
    for (std::size_t i = 0; i < q.dim(); ++i)
        EXPECT_EQ(q.project(q.lift(i)), BitVector::unit(q.dim(), i));
}
