#include <gtest/gtest.h>

#include "unst/poly.hpp"

using namespace unst;
using namespace unst::poly;

TEST(Poly, GeneratorRules)
{
    Ring r(2, 8);
    const auto u1 = r.monomial(std::vector<int>{1, 0});
    const auto u1u2 = r.monomial(std::vector<int>{1, 1});
    EXPECT_EQ(sq_monomial(r, 1, u1), (Polynomial{r.monomial(std::vector<int>{2, 0})}));
    EXPECT_TRUE(sq_monomial(r, 2, u1).empty());
    EXPECT_EQ(sq_monomial(r, 2, u1u2), (Polynomial{r.monomial(std::vector<int>{2, 2})}));
    EXPECT_EQ(act_on_polynomials(steenrod::Element::unit(), r, {u1u2}), (Polynomial{u1u2}));
}

TEST(Poly, BinomialRuleOneVariable)
{
    Ring r(1, 40);
    for (int n = 0; n <= 20; ++n)
        for (int a = 0; a <= n; ++a) {
            auto p = sq_monomial(r, a, r.monomial(std::vector<int>{n}));
            if (steenrod::binom2(n, a))
                EXPECT_EQ(p, (Polynomial{r.monomial(std::vector<int>{n + a})}));
            else
                EXPECT_TRUE(p.empty());
        }
}

TEST(Poly, TruncationOverflowRejected)
{
    Ring r(2, 4);
    const auto m = r.monomial(std::vector<int>{2, 1});
    EXPECT_THROW(act_word(r, std::vector<int>{2}, {m}), std::invalid_argument);
    EXPECT_THROW(Ring(12, 40), std::invalid_argument);
}

TEST(Poly, NormalFormsActLikeWords)
{
    // Spot check of the property exercised exhaustively by the acceptance
    // suite.
    Ring r(4, 20);
    ActionCache cache(r);
    const std::vector<steenrod::Word> words{{1, 1}, {2, 2}, {2, 3}, {1, 2, 4}, {3, 5}, {2, 6}, {4, 4}};
    for (const auto& w : words) {
        const auto e = steenrod::adem_normalize(w);
        int total = 0;
        for (int x : w)
            total += x;
        for (int d = 0; d + total <= 20 && d <= 6; ++d)
            for (auto m : r.monomials(d))
                EXPECT_EQ(act_word(r, w, {m}, &cache), act_on_polynomials(e, r, {m}, &cache));
    }
}
