#include "helpers.hpp"
#include "refinery/refinement.hpp"

#include <doctest.h>

using namespace refinery;
using testutil::R;

namespace {

Vector unit(std::size_t n, std::size_t i) {
    Vector e(n, Scalar(0));
    e[i] = Scalar(1);
    return e;
}

// 100 random rational convex combinations: bilinearity carries vertex-pair
// compatibility to the whole domains.
void check_compatibility_on_random_combinations(const Refinement& Rf, const StatisticalModel& M,
                                                std::mt19937_64& rng) {
    const auto& averts = Rf.f.domain().vertices();
    const auto& wverts = Rf.g.domain().vertices();
    std::uniform_int_distribution<int> num(1, 4);
    for (int it = 0; it < 100; ++it) {
        auto combo = [&](const std::vector<Vector>& vs) {
            Vector w(vs.size());
            Scalar tot;
            for (auto& v : w) {
                v = R(num(rng));
                tot += v;
            }
            Vector p(vs.front().size(), Scalar(0));
            for (std::size_t i = 0; i < vs.size(); ++i)
                p = vec_add(p, vec_scale(w[i] / tot, vs[i]));
            return p;
        };
        Vector a = combo(averts);
        Vector w = combo(wverts);
        Scalar lhs = M.omega.value_at_point(Rf.g.apply_formula(w), Rf.f.apply_formula(a));
        Scalar rhs = Rf.omegaT.value_at_point(w, a);
        CHECK(lhs == rhs);
    }
}

} // namespace

TEST_CASE("trivial self-refinement of a simplicial model") {
    StatisticalModel M = make_model(Polytope::simplex(2));
    Refinement Rf = holevo_refinement(M);
    auto rep = verify_refinement(Rf, M);
    CHECK(rep.all_pass());
    // simplicial model: g is total (domain = whole parallelotope)
    CHECK(Rf.g.domain().equals(Rf.omegaT.space()));
    CHECK(Rf.f.is_injective_on_domain());
}

TEST_CASE("holevo refinement of the square") {
    StatisticalModel M = make_model(Polytope::parallelotope(2));
    Refinement Rf = holevo_refinement(M);
    auto rep = verify_refinement(Rf, M);
    CHECK(rep.simplex.pass);
    CHECK(rep.f_partial_onto.pass);
    CHECK(rep.g_partial_onto.pass);
    CHECK(rep.compatibility.pass);
    CHECK(Rf.T.equals(Polytope::simplex(3)));
    CHECK(Rf.omegaT.space().vertices().size() == 16); // hypercube
    // dim(dom g) = dim Omega_C = dim C + 1
    CHECK(Rf.g.domain().dim() == M.C.dim() + 1);
    // dom(g) meets the hypercube's vertex set exactly at the pullbacks of the
    // 0/1-valued extreme forms of Omega_C: the four нnontrivial ones plus both
    // constants for the square
    std::size_t extreme_in_domain = 0;
    for (const auto& w : Rf.omegaT.space().vertices())
        if (Rf.g.domain().contains(w)) ++extreme_in_domain;
    CHECK(extreme_in_domain == 6);
}

TEST_CASE("holevo refinement of the pentagon") {
    StatisticalModel M = make_model(Polytope::pentagon());
    Refinement Rf = holevo_refinement(M);
    auto rep = verify_refinement(Rf, M);
    CHECK(rep.all_pass());
    CHECK(Rf.T.equals(Polytope::simplex(4)));
    // affine-dependency count: 5 planar points have 2 independent dependencies
    CHECK(Rf.g.domain().dim() == 3);
    CHECK(Rf.g.domain().dim() == M.C.dim() + 1);
    // pentagon extreme forms are not 0/1-valued, so no non-constant extreme
    // form of Omega_T survives into dom(g)
    for (const auto& w : Rf.omegaT.space().vertices()) {
        bool constant = true;
        for (const auto& v : w)
            if (v != w.front()) constant = false;
        if (!constant) CHECK(!Rf.g.domain().contains(w));
    }
}

TEST_CASE("holevo refinement verifies on random models") {
    std::mt19937_64 rng(314159);
    int done = 0;
    while (done < 6) {
        std::uniform_int_distribution<int> npts(4, 7), dim(2, 3);
        std::size_t d = static_cast<std::size_t>(dim(rng));
        std::vector<Vector> pts;
        int n = npts(rng);
        for (int i = 0; i < n; ++i) {
            Vector p(d);
            for (auto& v : p) v = testutil::random_rational(rng, 4);
            pts.push_back(p);
        }
        Polytope C = Polytope::from_vertices(pts);
        if (C.dim() < 2) continue;
        StatisticalModel M = make_model(C);
        Refinement Rf = holevo_refinement(M);
        auto rep = verify_refinement(Rf, M);
        CHECK(rep.all_pass());
        CHECK(Rf.g.domain().dim() == M.C.dim() + 1);
        ++done;
    }
}

TEST_CASE("worked example: parallelogram") {
    auto [M, Rf] = example_parallelogram();
    auto rep = verify_refinement(Rf, M);
    CHECK(rep.all_pass());

    // the listed domain (six pullbacks) coincides with the maximal domain
    MaximalG mg = maximal_g(M, Rf.T, Rf.f);
    CHECK(Rf.g.domain().equals(mg.g.domain()));
    CHECK(mg.onto);

    // g maps constants to constants
    CHECK(vec_eq(Rf.g.apply_formula(Vector(4, Scalar(0))), Vector(3, Scalar(0))));
    CHECK(vec_eq(Rf.g.apply_formula(Vector(4, Scalar(1))), Vector(3, Scalar(1))));

    // each nontrivial extreme form of the octahedron is g of a 0/1 form on T
    std::size_t nontrivial_hit = 0;
    for (const auto& w : Rf.g.domain().vertices()) {
        bool is01 = true, constant = true;
        for (const auto& v : w) {
            if (!v.is_zero() && v != Scalar(1)) is01 = false;
            if (v != w.front()) constant = false;
        }
        if (is01 && !constant) {
            Vector img = Rf.g.apply_formula(w);
            bool extreme = false;
            for (const auto& z : M.omega.space().vertices())
                if (vec_eq(z, img)) extreme = true;
            CHECK(extreme);
            ++nontrivial_hit;
        }
    }
    CHECK(nontrivial_hit == 4);

    // the extreme-fiber shortcut agrees with the general preimage here,
    // where the domain is small enough for the H-route
    for (const auto& z : M.omega.space().vertices()) {
        auto fib = extreme_value_fiber(Rf.g, M.omega.space(), z);
        auto pre = Rf.g.preimage(Polytope::from_vertices({z}));
        REQUIRE(fib.has_value());
        REQUIRE(pre.has_value());
        CHECK(fib->equals(*pre));
    }

    std::mt19937_64 rng(111);
    check_compatibility_on_random_combinations(Rf, M, rng);
}

TEST_CASE("worked example: pentagon via midpoints") {
    const auto& [M, Rf] = testutil::midpoint_example();
    auto rep = verify_refinement(Rf, M);
    CHECK(rep.simplex.pass);
    CHECK(rep.f_partial_onto.pass);
    CHECK(rep.g_partial_onto.pass);
    CHECK(rep.compatibility.pass);

    // feature: dom(f) is a 4-simplex of non-extreme points; f undefined at e_i
    CHECK(Rf.f.domain().dim() == 4);
    CHECK(Rf.f.domain().vertices().size() == 5);
    for (std::size_t j = 0; j < 10; ++j) CHECK(!Rf.f.apply(unit(10, j)).has_value());

    // feature: each extreme form v_i has a one-dimensional g-preimage
    const auto s = pentagon_points();
    const Scalar alpha = golden_section();
    std::size_t one_dimensional = 0;
    for (const auto& z : M.omega.space().vertices()) {
        Vector row(5);
        for (std::size_t j = 0; j < 5; ++j) row[j] = M.omega.value_at_point(z, s[j]);
        bool constant = true;
        for (const auto& v : row)
            if (v != row.front()) constant = false;
        if (constant) continue;
        auto pre = extreme_value_fiber(Rf.g, M.omega.space(), z);
        REQUIRE(pre.has_value());
        CHECK(pre->dim() == 1);
        ++one_dimensional;
    }
    CHECK(one_dimensional == 10);

    // endpoint evaluation: beta = 1 member of rho_1 at the midpoint
    // (e3+e4)/2 gives (1 + (2 alpha - 1))/2 = alpha
    Vector w(10, Scalar(0));
    w[0] = w[1] = Scalar(1);
    w[2] = w[8] = Scalar(1);                       // beta = 1 on d3, d9
    w[3] = w[9] = Scalar(2) * alpha - Scalar(1);   // c = 2 alpha - 1 on d4, d10
    Vector mid34(10, Scalar(0));
    mid34[2] = mid34[3] = R(1, 2);
    CHECK((w[2] + w[3]) * R(1, 2) == alpha); // direct evaluation oracle

    // the same through the form-space machinery: written values become
    // coordinates over the canonical vertex order
    Vector wcoords(10);
    for (std::size_t k = 0; k < 10; ++k) {
        const Vector& v = Rf.omegaT.base().vertices()[k];
        for (std::size_t j = 0; j < 10; ++j)
            if (vec_eq(v, unit(10, j))) wcoords[k] = w[j];
    }
    CHECK(Rf.omegaT.value_at_point(wcoords, mid34) == alpha);
    CHECK(Rf.g.domain().contains(wcoords));
    // g sends the whole segment member to v_1 (value row 1, a, 0, 0, a)
    Vector img = Rf.g.apply_formula(wcoords);
    Vector expect_row = {Scalar(1), alpha, Scalar(0), Scalar(0), alpha};
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(M.omega.value_at_point(img, s[j]) == expect_row[j]);

    std::mt19937_64 rng(222);
    check_compatibility_on_random_combinations(Rf, M, rng);
}

TEST_CASE("worked example: pentagon via edge collapse") {
    const auto& [M, Rf] = testutil::edges_example();
    auto rep = verify_refinement(Rf, M);
    CHECK(rep.all_pass());

    // f is total: its domain is all of T
    CHECK(Rf.f.domain().equals(Rf.T));
    // f(e1) = f(e2) = s1
    const auto s = pentagon_points();
    CHECK(vec_eq(*Rf.f.apply(unit(10, 0)), s[0]));
    CHECK(vec_eq(*Rf.f.apply(unit(10, 1)), s[0]));

    // g-preimages of the nontrivial extreme forms are single points
    std::size_t zero_dimensional = 0;
    for (const auto& z : M.omega.space().vertices()) {
        Vector row = M.omega.value_row(z);
        bool constant = true;
        for (const auto& v : row)
            if (v != row.front()) constant = false;
        if (constant) continue;
        auto pre = extreme_value_fiber(Rf.g, M.omega.space(), z);
        REQUIRE(pre.has_value());
        CHECK(pre->dim() == 0);
        ++zero_dimensional;
    }
    CHECK(zero_dimensional == 10);

    // the written form d1+d2+a(d3+d9)+a(d4+d10) evaluates to alpha at e3
    const Scalar alpha = golden_section();
    Vector w(10, Scalar(0));
    w[0] = w[1] = Scalar(1);
    w[2] = w[3] = w[8] = w[9] = alpha;
    CHECK(w[2] == alpha); // coefficient read-off at e3

    std::mt19937_64 rng(333);
    check_compatibility_on_random_combinations(Rf, M, rng);
}

TEST_CASE("broken bundles fail verification with witnesses") {
    StatisticalModel M = make_model(Polytope::parallelotope(2));
    Refinement good = holevo_refinement(M);

    // replace g by the identity-embedding attempt from the counter-example:
    // a map whose image misses the nontrivial extreme forms
    std::vector<Vector> constants = {Vector(4, Scalar(0)), Vector(4, Scalar(1))};
    PartialAffineMap small_g(good.g.linear(), good.g.offset(),
                             Polytope::from_vertices(constants));
    Refinement bad{good.T, good.omegaT, good.f, small_g};
    auto rep = verify_refinement(bad, M);
    CHECK(rep.simplex.pass);
    CHECK(rep.f_partial_onto.pass);
    CHECK(!rep.g_partial_onto.pass);
    CHECK(!rep.g_partial_onto.witnesses.empty()); // uncovered extreme form

    // non-simplex T fails axiom I with an affine dependency witness
    Refinement notsimplex{Polytope::parallelotope(2), FormSpace::build(Polytope::parallelotope(2)),
                          PartialAffineMap::identity(Polytope::parallelotope(2)),
                          PartialAffineMap::identity(FormSpace::build(Polytope::parallelotope(2)).space())};
    StatisticalModel M2 = make_model(Polytope::parallelotope(2));
    auto rep2 = verify_refinement(notsimplex, M2);
    CHECK(!rep2.simplex.pass);
    REQUIRE(!rep2.simplex.witnesses.empty());
    // the witness is a genuine affine dependency among T's vertices
    const Vector& dep = rep2.simplex.witnesses.front();
    Vector combo(2, Scalar(0));
    Scalar total;
    for (std::size_t j = 0; j < 4; ++j) {
        combo = vec_add(combo, vec_scale(dep[j], notsimplex.T.vertices()[j]));
        total += dep[j];
    }
    CHECK(vec_is_zero(combo));
    CHECK(total.is_zero());

    // compatibility breaks when g is twisted by the complement involution
    Matrix neg = good.g.linear();
    for (auto& v : neg.data) v = -v;
    Vector ones(3, Scalar(1));
    PartialAffineMap twisted(neg, ones, good.g.domain()); // w -> 1 - g(w)
    Refinement bad2{good.T, good.omegaT, good.f, twisted};
    auto rep3 = verify_refinement(bad2, M);
    CHECK(!rep3.compatibility.pass);
    CHECK(rep3.compatibility.witnesses.size() == 2);
}

TEST_CASE("counter-example: the section map admits no surjective g") {
    CounterexampleReport rep = counterexample_section();
    CHECK(rep.section.dim() == 2);
    CHECK(rep.section.vertices().size() == 4);

    std::size_t infeasible = 0, feasible = 0;
    for (const auto& e : rep.entries) {
        if (e.feasible) {
            ++feasible;
            CHECK(lp::satisfies(e.problem, e.witness));
        } else {
            ++infeasible;
            CHECK(lp::verify_infeasibility_certificate(e.problem, e.certificate));
        }
    }
    CHECK(infeasible == 4);           // the four nontrivial extreme forms
    CHECK(feasible == 3);             // null form, unit form, central form
    CHECK(rep.infeasible_count() == 4);
}

TEST_CASE("section checks agree with the no-injective-refinement theorem") {
    // parallelogram as a section of the tetrahedron
    {
        CounterexampleReport ce = counterexample_section();
        StatisticalModel M = make_model(ce.section);
        Polytope T = Polytope::simplex(3);
        PartialAffineMap f = PartialAffineMap::identity(M.C);
        auto rep = linusson_check(M, T, f);
        CHECK(rep.non_extendable == 4);
        CHECK(!rep.surjective_g_possible);
        for (const auto& e : rep.extensions)
            if (!e.extendable) CHECK(lp::verify_infeasibility_certificate(e.problem, e.certificate));
    }
    // pentagon as a section of the 4-simplex
    {
        StatisticalModel M = make_model(Polytope::pentagon());
        auto [T, f] = section_embedding(M.C);
        CHECK(T.equals(Polytope::simplex(4)));
        CHECK(f.is_injective_on_domain());
        CHECK(f.is_onto(M.C));
        auto rep = linusson_check(M, T, f);
        CHECK(rep.non_extendable > 0);
        CHECK(!rep.surjective_g_possible);
        for (const auto& e : rep.extensions)
            if (!e.extendable) CHECK(lp::verify_infeasibility_certificate(e.problem, e.certificate));
    }
    // simplicial C sectioned as itself: everything extends
    {
        StatisticalModel M = make_model(Polytope::simplex(2));
        Polytope T = Polytope::simplex(2);
        PartialAffineMap f = PartialAffineMap::identity(T);
        auto rep = linusson_check(M, T, f);
        CHECK(rep.non_extendable == 0);
        CHECK(rep.surjective_g_possible);
    }
    // precondition violations are argument errors
    {
        StatisticalModel M = make_model(Polytope::parallelotope(2));
        Refinement Rf = holevo_refinement(M);
        CHECK_THROWS_AS(linusson_check(M, Rf.T, Rf.f), std::invalid_argument); // not injective
    }
}
