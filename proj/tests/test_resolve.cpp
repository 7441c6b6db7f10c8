#include <gtest/gtest.h>

#include "unst/resolve.hpp"

using namespace unst;
using namespace unst::resolve;
using steenrod::Element;

namespace {

// dim Hom(M, N) by brute force: unknown blocks f_t : M^t -> N^t subject to
// f_{t+k} Sq^k = Sq^k f_t for every k >= 1 inside the window.
std::size_t brute_hom_dim(const GradedModule& m, const GradedModule& n, int window)
{
    std::vector<std::size_t> start{0};
    for (int t = 0; t <= window; ++t)
        start.push_back(start.back() + m.dim(t) * n.dim(t));
    const std::size_t unknowns = start.back();
    // Entry (r, c) of f_t is unknown start[t] + r * dim M^t + c.
    auto var = [&](int t, std::size_t r, std::size_t c) { return start[static_cast<std::size_t>(t)] + r * m.dim(t) + c; };
    std::vector<f2::BitVector> equations;
    for (int t = 0; t <= window; ++t) {
        for (int k = 1; t + k <= window; ++k) {
            const auto sm = m.sq(k, t), sn = n.sq(k, t);
            // (f_{t+k} Sq^k_M - Sq^k_N f_t)[r][c] = 0
            for (std::size_t r = 0; r < n.dim(t + k); ++r)
                for (std::size_t c = 0; c < m.dim(t); ++c) {
                    f2::BitVector eq(unknowns);
                    for (std::size_t j = 0; j < m.dim(t + k); ++j)
                        if (sm.get(j, c))
                            eq.flip(var(t + k, r, j));
                    for (std::size_t j = 0; j < n.dim(t); ++j)
                        if (sn.get(r, j))
                            eq.flip(var(t, j, c));
                    if (!eq.is_zero())
                        equations.push_back(eq);
                }
        }
    }
    if (equations.empty())
        return unknowns;
    return unknowns - f2::rank(f2::BitMatrix::from_rows(equations, unknowns));
}

ModulePtr phi_f1(int r, int D) { return umod::frobenius_power(*umod::free_module(1, D), r); }

} // namespace

TEST(FreeSum, CoordinatesAndAction)
{
    FreeSum p(12);
    p.add_generator(1);
    p.add_generator(2);
    // F(1) + F(2) in degree 4: Sq^2 Sq^1 i_1, Sq^2 i_2.
    EXPECT_EQ(p.dim(4), 2u);
    EXPECT_EQ(p.label(4, 0), "Sq^{2,1} g0");
    EXPECT_EQ(p.label(4, 1), "Sq^{2} g1");
    // Sq^1 Sq^2 i_2 = Sq^3 i_2 in F(2) vanishes by instability.
    const auto v = p.act(2, 2, p.generator_vector(1));
    EXPECT_TRUE(p.act(1, 4, v).is_zero());
    EXPECT_THROW(p.add_generator(1), std::invalid_argument);
}

TEST(Projective, FreeModuleIsItsOwnResolution)
{
    ProjectiveResolution p(umod::free_module(3, 24), 24);
    p.extend(3);
    EXPECT_EQ(p.term(0).generator_degrees(), std::vector<int>{3});
    EXPECT_EQ(p.term(1).generators(), 0u);
    const auto c = p.certify();
    EXPECT_TRUE(c.exact);
    EXPECT_TRUE(c.minimal);
}

TEST(Projective, SuspensionCoverAndCertificates)
{
    ProjectiveResolution p(umod::sigma_simple(1), 32);
    p.extend(5);
    // Cover F(1) -> Sigma F2, kernel generated by Sq^1 i_1 in degree 2.
    EXPECT_EQ(p.term(0).generator_degrees(), std::vector<int>{1});
    EXPECT_EQ(p.term(1).generator_degrees(), std::vector<int>{2});
    for (int s = 1; s < p.length(); ++s)
        for (int t = 0; t <= 32; ++t)
            EXPECT_TRUE((p.differential(s - 1, t) * p.differential(s, t)).is_zero());
    const auto c = p.certify();
    EXPECT_TRUE(c.exact);
    EXPECT_TRUE(c.minimal);
}

TEST(Projective, PhiF1SecondGeneratorInDegreeThree)
{
    // Sq^1 Phi u = 0 forces a relation on Sq^1 i_2.
    ProjectiveResolution p(phi_f1(1, 64), 64);
    p.extend(6);
    EXPECT_EQ(p.term(0).generator_degrees(), std::vector<int>{2});
    EXPECT_EQ(p.term(1).generator_degrees(), std::vector<int>{3});
    const auto c = p.certify();
    EXPECT_TRUE(c.exact) << (c.failures.empty() ? "" : c.failures.front());
    EXPECT_TRUE(c.minimal);
}

TEST(Ext, ZerothGroupIsHom)
{
    struct Case {
        ModulePtr m, n;
    };
    const std::vector<Case> cases = {
        {umod::sigma_simple(1), umod::brown_gitler(1)},
        {umod::brown_gitler(2), umod::brown_gitler(1)},
        {umod::brown_gitler(3), umod::brown_gitler(2)},
        {umod::h_module(3), umod::brown_gitler(4)},
        {umod::h_module(3), umod::brown_gitler(3)},
        {umod::brown_gitler(4), umod::brown_gitler(4)},
        {umod::brown_gitler(5), umod::brown_gitler(3)},
        {umod::h_module(4), umod::brown_gitler(7)},
    };
    for (const auto& c : cases) {
        const int D = 2 * c.m->window() + 2;
        const auto table = ext_groups(c.m, c.n, 0, D);
        EXPECT_EQ(static_cast<std::size_t>(table.value(0)), brute_hom_dim(*c.m, *c.n, D));
    }
}

TEST(Ext, ProjectiveSourceAndInjectiveTarget)
{
    const int D = 32;
    const auto f1 = umod::free_module(1, D);
    const auto t = ext_groups(f1, f1, 6, D);
    EXPECT_EQ(t.value(0), 1);
    for (int d = 1; d <= 6; ++d)
        EXPECT_EQ(t.value(d), 0) << d;
    // J(n) is injective.
    for (int n : {2, 4, 5}) {
        const auto e = ext_groups(umod::h_module(3), umod::brown_gitler(n), 3, 16);
        for (int d = 1; d <= 3; ++d)
            EXPECT_EQ(e.value(d), 0) << n << " " << d;
    }
}

TEST(Ext, DimensionShiftAlongFreeCover)
{
    // 0 -> Phi^r F(1) -> F(1) -> H_r -> 0 with F(1) projective.
    const int D = 32;
    for (int r = 1; r <= 2; ++r) {
        const auto n = umod::free_module(1, D);
        const auto sub = ext_groups(phi_f1(r, D), n, 4, D);
        ProjectiveResolution q(umod::h_module(r), D);
        const auto quot = ext_groups(q, n, 5);
        for (int d = 1; d <= 4; ++d)
            EXPECT_EQ(sub.value(d), quot.value(d + 1)) << r << " " << d;
    }
}

TEST(Ext, TwistedFreeModules)
{
    const int D = 64;
    const auto n = umod::free_module(1, D);
    const auto t1 = ext_groups(phi_f1(1, D), n, 4, D);
    EXPECT_EQ(t1.value(2), 1);
    EXPECT_EQ(t1.value(4), 0);
    const auto t2 = ext_groups(phi_f1(2, D), n, 4, D);
    EXPECT_EQ(t2.value(4), 1);
}

TEST(Ext, WindowStability)
{
    const auto m = umod::sigma_simple(1);
    const auto a = ext_groups(m, umod::free_module(1, 32), 4, 32);
    const auto b = ext_groups(m, umod::free_module(1, 64), 4, 64);
    for (int d = 0; d <= 4; ++d)
        for (int t = 0; t <= 32; ++t)
            EXPECT_EQ(a.at(d, t), b.at(d, t)) << d << " " << t;
}

TEST(Ext, SuspensionThirdGroupNonzero)
{
    ProjectiveResolution p(umod::sigma_simple(1), 32);
    const auto t = ext_groups(p, umod::free_module(1, 32), 3);
    EXPECT_GT(t.value(3), 0);
}

TEST(Ext, DualityRoutesAgree)
{
    for (int k = 2; k <= 4; ++k) {
        ProjectiveResolution p(umod::h_module(k), 20);
        for (int n = 0; n <= 16; ++n)
            for (int d = 0; d <= 4; ++d) {
                const auto c = duality_check(p, n, d);
                EXPECT_EQ(c.via_cochains, c.via_slice) << k << " " << n << " " << d;
            }
    }
}

TEST(ExtMaps, IdentityInducesIdentity)
{
    const int D = 32;
    const auto m = phi_f1(1, D);
    ProjectiveResolution p(m, D);
    p.extend(5);
    const auto n = umod::free_module(1, D);
    for (int d = 0; d <= 3; ++d) {
        const auto f = induced_ext_map(p, p, umod::identity_map(m), n, d);
        EXPECT_EQ(f.matrix, f2::BitMatrix::identity(f.matrix.rows())) << d;
    }
}

TEST(ExtMaps, PushforwardAlongIdentity)
{
    const int D = 32;
    ProjectiveResolution p(umod::sigma_simple(1), D);
    p.extend(4);
    const auto n = umod::free_module(1, D);
    const auto f = pushforward_ext_map(p, umod::identity_map(n), 2);
    EXPECT_EQ(f.matrix, f2::BitMatrix::identity(f.matrix.rows()));
}

TEST(ExtMaps, FrobeniusOnSuspensionHasKernel)
{
    ProjectiveResolution p(umod::sigma_simple(1), 32);
    ProjectiveResolution q(umod::frobenius(*umod::sigma_simple(1)), 64);
    p.extend(5);
    q.extend(5);
    const auto f = ext_frobenius_map(p, q, umod::free_module(1, 64), 3);
    EXPECT_GT(f.matrix.cols(), 0u);
    EXPECT_FALSE(f.injective());
}

TEST(Injective, HullOfSimpleIsBrownGitler)
{
    for (int n = 1; n <= 12; ++n) {
        const auto h = injective_hull(umod::sigma_simple(n));
        EXPECT_EQ(h.term.name(), umod::bg_name({n}));
        EXPECT_TRUE(h.injective);
        EXPECT_TRUE(h.essential);
    }
    EXPECT_THROW(injective_hull(umod::free_module(1, 8)), std::invalid_argument);
    // Degree-0 classes split off into copies of J(0) = F2.
    const auto h0 = injective_hull(umod::ground_field());
    EXPECT_EQ(h0.term.name(), "J(0)");
    EXPECT_TRUE(h0.injective && h0.essential);
    const auto h2 = injective_hull(umod::direct_sum({umod::ground_field(), umod::brown_gitler(2)}));
    EXPECT_EQ(h2.term.name(), "J(2,0)");
    EXPECT_TRUE(h2.injective && h2.essential);
}

TEST(Injective, ResolutionsOfHModules)
{
    const auto h2 = minimal_injective_resolution(umod::h_module(2), 6);
    EXPECT_EQ(h2.summary(), "J(2)");
    EXPECT_TRUE(h2.complete);
    const auto h3 = minimal_injective_resolution(umod::h_module(3), 8);
    EXPECT_EQ(h3.summary(), "J(4) ; J(3) ; J(2) ; J(1)");
    EXPECT_TRUE(h3.complete);
    EXPECT_TRUE(h3.exact);
    EXPECT_TRUE(h3.minimal);
    const auto h4 = minimal_injective_resolution(umod::h_module(4), 3);
    EXPECT_EQ(h4.summary(), "J(8) ; J(7,6) ; J(6,4)");
    EXPECT_TRUE(h4.exact);
    EXPECT_TRUE(h4.minimal);
}

TEST(Operations, BulletAndMatrix)
{
    // The nonzero map J(2) -> J(1) is bullet Sq^1.
    const auto b = bullet(Element::sq(1), 2, 1);
    EXPECT_FALSE(b.is_zero());
    EXPECT_TRUE(umod::validate(b).empty());
    const auto ops = operation_matrix(b, {2}, {1});
    EXPECT_EQ(steenrod::to_string(ops[0][0]), "Sq^{1}");
    const ModuleMap zero(umod::brown_gitler(5), brown_gitler_sum({4, 3}));
    for (const auto& row : operation_matrix(zero, {5}, {4, 3}))
        EXPECT_TRUE(row[0].is_zero());
}

TEST(Operations, FirstDifferentialOfH4)
{
    const auto r = minimal_injective_resolution(umod::h_module(4), 2);
    ASSERT_EQ(r.differentials.size(), 1u);
    const auto& g = r.differentials[0];
    const std::vector<int> source = r.terms[0].indices, target = r.terms[1].indices;
    const auto expected = bullet_matrix({{Element::sq(1)}, {Element::sq(2)}}, source, target);
    EXPECT_TRUE(equal_up_to_target_automorphism(g, expected, target));
}
