#include <gtest/gtest.h>

#include <random>

#include "unst/steenrod.hpp"

using namespace unst::steenrod;

namespace {

// Number of admissible sequences of degree d: partitions of d into parts
// 2^j - 1 (j >= 1), counted by an independent dynamic program.
std::vector<long> admissible_counts(int max_degree)
{
    std::vector<long> c(static_cast<std::size_t>(max_degree) + 1, 0);
    c[0] = 1;
    for (int part = 1; part <= max_degree; part = 2 * part + 1)
        for (int d = part; d <= max_degree; ++d)
            c[static_cast<std::size_t>(d)] += c[static_cast<std::size_t>(d - part)];
    return c;
}

} // namespace

TEST(Admissible, Validation)
{
    EXPECT_TRUE(is_admissible(std::vector<int>{4, 2, 1}));
    EXPECT_FALSE(is_admissible(std::vector<int>{2, 2}));
    EXPECT_FALSE(is_admissible(std::vector<int>{3, 0}));
    EXPECT_THROW(Admissible({1, 1}), std::invalid_argument);
    Admissible m{6, 1};
    EXPECT_EQ(m.degree(), 7);
    EXPECT_EQ(m.excess(), 5);
    EXPECT_EQ(m.tail(), Admissible{1});
    EXPECT_EQ(Admissible{1}.prepend(6), m);
    EXPECT_EQ(to_string(m), "Sq^{6,1}");
    EXPECT_EQ(to_string(Admissible{}), "1");
}

TEST(Adem, SmallRelations)
{
    EXPECT_TRUE(adem_normalize({1, 1}).is_zero());
    EXPECT_EQ(adem_normalize({1, 2}), parse_element("Sq^3"));
    EXPECT_EQ(adem_normalize({2, 2}), parse_element("Sq^{3,1}"));
    EXPECT_TRUE(adem_normalize({3, 2}).is_zero());
    EXPECT_EQ(adem_normalize({2, 3}), parse_element("Sq^5 + Sq^{4,1}"));
    EXPECT_EQ(adem_normalize({0, 3, 0}), Element::sq(3));
    EXPECT_THROW(adem_normalize({-1, 2}), std::invalid_argument);
    EXPECT_THROW(adem_relation(2, 1), std::invalid_argument);
}

TEST(Adem, ResultsAreAdmissibleAndHomogeneous)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Word w;
        const int len = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < len; ++i)
            w.push_back(static_cast<int>(rng() % 9));
        int degree = 0;
        for (int x : w)
            degree += x;
        auto e = adem_normalize(w);
        for (const auto& t : e.terms()) {
            EXPECT_TRUE(is_admissible(t.exponents()));
            EXPECT_EQ(t.degree(), degree);
        }
    }
}

TEST(Adem, Associativity)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        Word a{1 + static_cast<int>(rng() % 7)}, b{1 + static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 3)};
        Word c{1 + static_cast<int>(rng() % 7)};
        auto x = adem_normalize(a), y = adem_normalize(b), z = adem_normalize(c);
        EXPECT_EQ(multiply(multiply(x, y), z), multiply(x, multiply(y, z)));
    }
}

TEST(AdmissibleBasis, CountsMatchPartitions)
{
    const auto expected = admissible_counts(60);
    for (int d = 0; d <= 60; ++d)
        EXPECT_EQ(static_cast<long>(admissible_basis(d).size()), expected[static_cast<std::size_t>(d)]) << d;
}

TEST(AdmissibleBasis, ExcessPrefixAndIndex)
{
    for (int d = 0; d <= 30; ++d) {
        const auto& b = admissible_basis(d);
        for (std::size_t i = 0; i < b.size(); ++i) {
            EXPECT_EQ(admissible_index(b[i]), i);
            if (i > 0)
                EXPECT_LE(b[i - 1].excess(), b[i].excess());
        }
        for (int n = 0; n <= d; ++n) {
            std::size_t count = 0;
            for (const auto& m : b)
                count += m.excess() <= n;
            EXPECT_EQ(admissible_count(d, n), count);
        }
    }
}

TEST(Parse, RoundTripAndErrors)
{
    auto e = parse_element("Sq^2 Sq^3");
    EXPECT_EQ(to_string(e), "Sq^{5} + Sq^{4,1}");
    EXPECT_EQ(parse_element(to_string(e)), e);
    EXPECT_EQ(parse_element("Sq2Sq2"), parse_element("Sq^{2,2}"));
    EXPECT_EQ(parse_element("1"), Element::unit());
    EXPECT_TRUE(parse_element("0").is_zero());
    EXPECT_EQ(parse_word("Sq^2 Sq^{2,1}"), (Word{2, 2, 1}));
    EXPECT_THROW(parse_element("Sq^2 + Sq^3"), std::invalid_argument);
    EXPECT_THROW(parse_element("Sq^"), std::invalid_argument);
    EXPECT_THROW(parse_element("Sq^{2,"), std::invalid_argument);
    EXPECT_THROW(parse_element("foo"), std::invalid_argument);
}

TEST(Wall, BasisSizesMatchAdmissible)
{
    for (int d = 0; d <= 24; ++d) {
        auto basis = wall_basis(d);
        EXPECT_EQ(basis.size(), admissible_basis(d).size()) << d;
        // Wall monomials are linearly independent.
        unst::f2::Subspace span(admissible_basis(d).size());
        for (const auto& w : basis) {
            EXPECT_TRUE(w.is_ordered());
            EXPECT_EQ(w.degree(), d);
            unst::f2::BitVector v(admissible_basis(d).size());
            const Element e = w.expand();
            for (const auto& t : e.terms())
                v.set(admissible_index(t));
            EXPECT_TRUE(span.insert(v)) << d;
        }
    }
}

TEST(Wall, MDecompositionReassembles)
{
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= i; ++j) {
            if (!(j <= i - 2 || j == i))
                continue;
            auto parts = wall_m_decomposition(i, j);
            ASSERT_EQ(parts.size(), static_cast<std::size_t>(i));
            Element sum = Element::zero((1 << i) + (1 << j));
            for (const auto& [t, m] : parts)
                sum += multiply(Element::sq(1 << (i - t)), m);
            EXPECT_EQ(sum, adem_normalize({1 << i, 1 << j}));
        }
    }
    EXPECT_THROW(wall_m_decomposition(3, 2), std::invalid_argument);
}

TEST(Subalgebra, SmallDimensions)
{
    // A(0) = E[Sq^1]; A(1) has dimension 8 with Poincare series
    // 1 + t + t^2 + 2t^3 + t^4 + t^5 + t^6.
    SubalgebraSpan a0(0, 6), a1(1, 8);
    EXPECT_EQ(a0.dim(0), 1u);
    EXPECT_EQ(a0.dim(1), 1u);
    EXPECT_EQ(a0.dim(2), 0u);
    const std::size_t expected[] = {1, 1, 1, 2, 1, 1, 1, 0, 0};
    for (int t = 0; t <= 8; ++t)
        EXPECT_EQ(a1.dim(t), expected[t]) << t;
    EXPECT_TRUE(a1.contains(parse_element("Sq^{2,1}")));
    EXPECT_FALSE(a1.contains(Element::sq(4)));
}

TEST(FreeAct, AgreesWithNormalizeAndFilter)
{
    for (int n = 1; n <= 6; ++n) {
        for (int d = 0; d <= 14; ++d) {
            for (const auto& J : admissible_basis(d)) {
                if (J.excess() > n)
                    continue;
                for (int a = 0; a <= 16; ++a) {
                    Element expected = Element::zero(a + d);
                    for (const auto& t : sq_times(a, J).terms())
                        if (t.excess() <= n)
                            expected.toggle(t);
                    EXPECT_EQ(free_act(a, J, n), expected) << a << " on " << to_string(J) << " in F(" << n << ")";
                }
            }
        }
    }
}
