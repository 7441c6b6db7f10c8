#include <gtest/gtest.h>

#include "unst/umod.hpp"

using namespace unst;
using namespace unst::umod;

namespace {

// Same dims and action matrices, labels ignored.
bool same_structure(const GradedModule& a, const GradedModule& b)
{
    if (a.window() != b.window() || a.dims() != b.dims())
        return false;
    for (int n = 0; n <= a.window(); ++n)
        for (int k = 1; n + k <= a.window(); ++k)
            if (a.sq(k, n) != b.sq(k, n))
                return false;
    return true;
}

std::vector<std::size_t> dims_between(const GradedModule& m, int lo, int hi)
{
    std::vector<std::size_t> out;
    for (int n = lo; n <= hi; ++n)
        out.push_back(m.dim(n));
    return out;
}

} // namespace

TEST(Validate, ConstructorsPass)
{
    EXPECT_TRUE(validate(*brown_gitler(4)).empty());
    EXPECT_TRUE(validate(*free_module(1, 16)).empty());
    EXPECT_TRUE(validate(*free_module(3, 24)).empty());
    EXPECT_TRUE(validate(*cohomology_BV(2, 12)).empty());
    for (int n = 0; n <= 32; ++n)
        EXPECT_TRUE(validate(*sigma_simple(n)).empty());
}

TEST(Validate, DetectsInstabilityAndAdemFailures)
{
    GradedModule j4 = *brown_gitler(4);
    BitMatrix bad(1, 1);
    bad.set(0, 0);
    j4.set_sq(2, 1, bad);
    auto v = validate(j4);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().kind, Violation::Kind::Instability);

    // Sq^1 made nonzero on degrees 2 and 3 of J(4) breaks Sq^1 Sq^1 = 0.
    GradedModule j4b = *brown_gitler(4);
    BitMatrix one(1, 1);
    one.set(0, 0);
    j4b.set_sq(1, 2, one);
    j4b.set_sq(1, 3, one);
    bool adem = false;
    for (const auto& x : validate(j4b))
        adem |= x.kind == Violation::Kind::Adem;
    EXPECT_TRUE(adem);
}

TEST(FreeModule, SmallDims)
{
    auto f1 = free_module(1, 16);
    for (int n = 0; n <= 16; ++n)
        EXPECT_EQ(f1->dim(n), (n == 1 || n == 2 || n == 4 || n == 8 || n == 16) ? 1u : 0u) << n;
    auto f2m = free_module(2, 8);
    EXPECT_EQ(dims_between(*f2m, 2, 4), (std::vector<std::size_t>{1, 1, 1}));
    EXPECT_EQ(f2m->label(2, 0), "i_2");
    EXPECT_EQ(f2m->label(4, 0), "Sq[2]i_2");
    EXPECT_EQ(f2m->label(3, 0), "Sq[1]i_2");
}

TEST(BrownGitler, J4)
{
    auto j4 = brown_gitler(4);
    EXPECT_EQ(dims_between(*j4, 0, 4), (std::vector<std::size_t>{0, 1, 1, 1, 1}));
    EXPECT_EQ(j4->label(1, 0), "x2");
    EXPECT_EQ(j4->label(2, 0), "x1^2");
    EXPECT_EQ(j4->label(3, 0), "x0^2*x1");
    EXPECT_EQ(j4->label(4, 0), "x0^4");
    EXPECT_TRUE(j4->sq(1, 1).get(0, 0)); // Sq^1 x2 = x1^2
    EXPECT_FALSE(j4->truncated());
    EXPECT_EQ(j4->top_degree(), 4);
}

TEST(BrownGitler, HomDualToFreeModules)
{
    // dim J(m)^n = dim F(n)^m: both count admissibles of degree m-n and
    // excess <= n.
    for (int m = 1; m <= 24; ++m) {
        auto j = brown_gitler(m);
        EXPECT_TRUE(validate(*j).empty()) << m;
        for (int n = 1; n <= m; ++n)
            EXPECT_EQ(j->dim(n), steenrod::admissible_count(m - n, n)) << m << " " << n;
    }
}

TEST(Suspension, Basics)
{
    EXPECT_EQ(*sigma_simple(1), *brown_gitler(1));
    auto m = brown_gitler(3);
    EXPECT_TRUE(same_structure(*suspension(*suspension(*m, 1), 1), *suspension(*m, 2)));
    EXPECT_EQ(sigma_simple(5)->dim(5), 1u);
}

TEST(Frobenius, Basics)
{
    for (int n = 0; n <= 16; ++n)
        EXPECT_TRUE(same_structure(*frobenius(*sigma_simple(n)), *sigma_simple(2 * n)));
    auto j4 = brown_gitler(4);
    EXPECT_TRUE(validate(*frobenius(*j4)).empty());
    auto f1 = free_module(1, 32);
    auto phi = frobenius(*f1);
    for (int n = 1; n <= 32; n += 2)
        EXPECT_EQ(phi->dim(n), 0u);
    // lambda identifies Phi F(1) with span{u^{2^j}, j >= 1}.
    auto l = lambda(f1);
    EXPECT_TRUE(validate(l).empty());
    EXPECT_TRUE(l.is_injective());
    auto img = image(l);
    for (int n = 0; n <= 32; ++n)
        EXPECT_EQ(img.module->dim(n), (n == 2 || n == 4 || n == 8 || n == 16 || n == 32) ? 1u : 0u) << n;
}

TEST(Lambda, ZeroOnSuspensionAndIterates)
{
    EXPECT_TRUE(lambda(sigma_simple(1)).is_zero());
    auto f1 = free_module(1, 16);
    auto l2 = lambda_power(f1, 2);
    EXPECT_TRUE(validate(l2).empty());
    // Phi^2 u in degree 4 goes to Sq_0 Sq_0 u = u^4.
    EXPECT_TRUE(l2.block(4).get(0, 0));
    EXPECT_TRUE(l2.is_injective());
    for (int n = 0; 4 * n <= 16; ++n) {
        const auto expect = f1->sq(2 * n, 2 * n) * f1->sq(n, n);
        EXPECT_EQ(l2.block(4 * n), expect);
    }
}

TEST(Tensor, CartanAndDims)
{
    auto f1 = free_module(1, 16);
    auto t = tensor(*f1, *f1);
    EXPECT_TRUE(validate(*t).empty());
    EXPECT_EQ(t->window(), 17);
    // Degree t: ordered pairs of powers of two summing to t.
    EXPECT_EQ(dims_between(*t, 2, 4), (std::vector<std::size_t>{1, 2, 1}));
    // Sq^2 (u|u) = u^2|u^2.
    auto s = t->sq(2, 2);
    ASSERT_EQ(s.rows(), 1u);
    EXPECT_TRUE(s.get(0, 0));
    EXPECT_EQ(t->label(4, 0), "Sq[1]i_1|Sq[1]i_1");
    EXPECT_TRUE(same_structure(*tensor(*sigma_simple(1), *sigma_simple(1)), *sigma_simple(2)));
    // Symmetry up to swapping factors: dims agree.
    auto a = brown_gitler(3), b = brown_gitler(4);
    EXPECT_EQ(tensor(*a, *b)->dims(), tensor(*b, *a)->dims());
    EXPECT_TRUE(validate(*tensor(*a, *b)).empty());
}

TEST(Quotient, HModules)
{
    auto h3 = h_module(3);
    EXPECT_EQ(dims_between(*h3, 0, 4), (std::vector<std::size_t>{0, 1, 1, 0, 1}));
    EXPECT_TRUE(validate(*h3).empty());
    EXPECT_FALSE(h3->truncated());
    auto j2 = brown_gitler(2);
    auto q0 = quotient(ModuleMap(make_module(GradedModule(2, {0, 0, 0}, false)), j2));
    EXPECT_TRUE(same_structure(*q0.module, *j2));
    // J(2) / <x0^2> = Sigma F2.
    auto sub = make_module(*truncate(*sigma_simple(2), 2));
    ModuleMap inc(sub, j2);
    BitMatrix one(1, 1);
    one.set(0, 0);
    inc.set_block(2, one);
    EXPECT_TRUE(validate(inc).empty());
    auto q = quotient(inc);
    EXPECT_EQ(dims_between(*q.module, 0, 2), (std::vector<std::size_t>{0, 1, 0}));
    EXPECT_THROW(quotient(ModuleMap(j2, sigma_simple(1))), std::invalid_argument);
}

TEST(Socle, Examples)
{
    for (int n = 1; n <= 12; ++n) {
        auto s = socle(*brown_gitler(n));
        for (int d = 0; d <= n; ++d)
            EXPECT_EQ(s[static_cast<std::size_t>(d)].dim(), d == n ? 1u : 0u) << n << " " << d;
    }
    auto h4 = h_module(4);
    auto s = socle(*h4);
    for (int d = 0; d <= 8; ++d)
        EXPECT_EQ(s[static_cast<std::size_t>(d)].dim(), d == 8 ? 1u : 0u);
    EXPECT_EQ(socle(*sigma_simple(3))[3].dim(), 1u);
    EXPECT_THROW(socle(*free_module(1, 8)), std::invalid_argument);
}

TEST(Top, Examples)
{
    for (int n = 1; n <= 4; ++n) {
        auto t = top(*free_module(n, 20));
        for (int d = 0; d <= 20; ++d)
            EXPECT_EQ(t[static_cast<std::size_t>(d)].dim(), d == n ? 1u : 0u);
    }
    auto t = top(*h_module(3));
    EXPECT_EQ(t[1].dim(), 1u);
    EXPECT_EQ(t[2].dim() + t[4].dim(), 0u);
    EXPECT_EQ(top(*sigma_simple(4))[4].dim(), 1u);
}

TEST(NilpotentReduced, Examples)
{
    for (int n = 1; n <= 16; ++n)
        EXPECT_TRUE(is_nilpotent(*brown_gitler(n)));
    EXPECT_TRUE(is_reduced(*free_module(1, 32)));
    EXPECT_FALSE(is_nilpotent(*free_module(1, 32)));
    auto sum = direct_sum({sigma_simple(1), free_module(1, 32)});
    EXPECT_TRUE(validate(*sum).empty());
    EXPECT_FALSE(is_nilpotent(*sum));
    EXPECT_FALSE(is_reduced(*sum));
    EXPECT_FALSE(is_nilpotent(*ground_field()));
}

TEST(HomToJ, Examples)
{
    auto maps = hom_to_J(sigma_simple(1), 1);
    ASSERT_EQ(maps.size(), 1u);
    EXPECT_TRUE(maps[0].block(1).get(0, 0));

    auto j2 = brown_gitler(2);
    auto to_j1 = hom_to_J(j2, 1);
    ASSERT_EQ(to_j1.size(), 1u);
    EXPECT_TRUE(validate(to_j1[0]).empty());
    EXPECT_FALSE(to_j1[0].is_zero());

    auto h4 = h_module(4);
    auto emb = hom_to_J(h4, 8);
    ASSERT_EQ(emb.size(), 1u);
    EXPECT_TRUE(validate(emb[0]).empty());
    EXPECT_TRUE(emb[0].is_injective());
}

TEST(HomToJ, DimensionMatchesAndMapsIndependent)
{
    for (int m = 1; m <= 8; ++m) {
        auto jm = brown_gitler(m);
        for (int n = 1; n <= 8; ++n) {
            auto maps = hom_to_J(jm, n);
            EXPECT_EQ(maps.size(), jm->dim(n));
            for (const auto& f : maps)
                EXPECT_TRUE(validate(f).empty());
        }
    }
}

TEST(CohomologyBV, OneVariable)
{
    auto bv = cohomology_BV(1, 32);
    EXPECT_TRUE(validate(*bv).empty());
    EXPECT_TRUE(is_reduced(*bv));
    for (int n = 1; n < 32; ++n)
        EXPECT_EQ(bv->sq(1, n).get(0, 0), n % 2 == 1) << n;
    // Sq^1 complex on the positive degrees is acyclic in 1..30.
    for (int d = 1; d <= 30; ++d) {
        const auto out = bv->sq(1, d), in = bv->sq(1, d - 1);
        const std::size_t ker = bv->dim(d) - f2::rank(out);
        const std::size_t im = d - 1 >= 1 ? f2::rank(in) : 0;
        EXPECT_EQ(ker, im) << d;
    }
}

TEST(Json, ModuleEmission)
{
    auto j = to_json(*brown_gitler(2));
    EXPECT_EQ(j["window"], 2);
    EXPECT_EQ(j["labels"][1][0], "x1");
    EXPECT_EQ(j["action"].size(), 1u);
    EXPECT_EQ(bg_name({6, 7}), "J(7,6)");
    EXPECT_EQ(bg_name({}), "0");
}
