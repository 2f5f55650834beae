#include "helpers.hpp"
#include "refinery/conjectures.hpp"

#include <doctest.h>

using namespace refinery;
using testutil::R;

TEST_CASE("g exists for the worked projections, not for the section") {
    // projection of the tetrahedron onto the square
    {
        StatisticalModel M = make_model(Polytope::parallelotope(2));
        Polytope T = Polytope::simplex(3);
        PartialAffineMap f = PartialAffineMap::from_images(T, T.vertices(), M.C.vertices());
        auto res = g_exists_for_f(M, T, f);
        CHECK(res.yes);
        CHECK(res.lp_calls == 6);
    }
    // the identity section of the square inside the tetrahedron
    {
        CounterexampleReport ce = counterexample_section();
        StatisticalModel M = make_model(ce.section);
        auto res = g_exists_for_f(M, Polytope::simplex(3), PartialAffineMap::identity(M.C));
        CHECK(!res.yes);
        CHECK(res.failures.size() == 4);
        for (const auto& e : res.failures)
            CHECK(lp::verify_infeasibility_certificate(e.problem, e.certificate));
    }
    // the midpoint map on the decatope
    {
        const auto& [M, Rf] = testutil::midpoint_example();
        auto res = g_exists_for_f(M, Rf.T, Rf.f);
        CHECK(res.yes);
    }
    // non-onto f is an argument error
    {
        StatisticalModel M = make_model(Polytope::parallelotope(2));
        Polytope T = Polytope::simplex(3);
        Polytope corner = Polytope::from_vertices({T.vertices()[0]});
        CHECK_THROWS_AS(
            g_exists_for_f(M, T, PartialAffineMap::from_images(corner, {T.vertices()[0]},
                                                               {M.C.vertices()[0]})),
            std::invalid_argument);
    }
}

TEST_CASE("search finds the projection refinement of the square at q = 1") {
    SearchSpec spec{make_model(Polytope::parallelotope(2)), 4, 1, UINT64_MAX};
    auto res = search_refinement(spec);
    REQUIRE(res.verdict == SearchResult::Verdict::Found);
    REQUIRE(res.witness.has_value());
    StatisticalModel M = make_model(Polytope::parallelotope(2));
    CHECK(verify_refinement(*res.witness, M).all_pass());
    // the found map is total on the tetrahedron and vertex-to-vertex
    CHECK(res.witness->f.domain().equals(res.witness->T));

    // determinism: same spec, same verdict and statistics
    auto res2 = search_refinement(SearchSpec{make_model(Polytope::parallelotope(2)), 4, 1, UINT64_MAX});
    CHECK(res2.verdict == res.verdict);
    CHECK(res2.stats.candidates == res.stats.candidates);
    CHECK(res2.stats.consistent == res.stats.consistent);
    CHECK(res2.stats.lp_calls == res.stats.lp_calls);
}

TEST_CASE("search exhausts the pentagon family with no witness") {
    SearchSpec spec{make_model(Polytope::pentagon()), 4, 2, UINT64_MAX};
    auto res = search_refinement(spec);
    CHECK(res.verdict == SearchResult::Verdict::ExhaustedNoWitness);
    CHECK(!res.witness.has_value());
    // 10 grid points with denominators 1..2 on the tetrahedron, tuples of 5
    CHECK(res.stats.candidates == 100000);
    CHECK(res.stats.consistent == 0); // no rational 5-tuple matches the golden dependencies
    CHECK(res.stats.lp_calls == 0);
}

TEST_CASE("zero budget reports exhaustion of the budget") {
    SearchSpec spec{make_model(Polytope::parallelotope(2)), 4, 1, 0};
    auto res = search_refinement(spec);
    CHECK(res.verdict == SearchResult::Verdict::BudgetExhausted);
    CHECK(res.stats.candidates == 0);
}

TEST_CASE("holevo refinements factor through the projection with h = identity") {
    StatisticalModel M = make_model(Polytope::parallelotope(2));
    Refinement Rf = holevo_refinement(M);
    auto res = factor_through_projection(M, Rf);
    REQUIRE(res.yes);
    REQUIRE(res.h.has_value());
    for (const auto& v : Rf.T.vertices()) CHECK(vec_eq(res.h->apply_formula(v), v));
}

TEST_CASE("pentagon-edges refinement factors through the projection") {
    const auto& [M, Rf] = testutil::edges_example();
    auto res = factor_through_projection(M, Rf);
    REQUIRE(res.yes);
    REQUIRE(res.h.has_value());
    // h collapses each pair edge onto a vertex of the 4-simplex
    Polytope T5 = Polytope::simplex(4);
    for (const auto& v : Rf.T.vertices()) {
        Vector hv = res.h->apply_formula(v);
        CHECK(T5.contains(hv));
        bool is_vertex = false;
        for (const auto& e : T5.vertices())
            if (vec_eq(e, hv)) is_vertex = true;
        CHECK(is_vertex);
    }
}

TEST_CASE("pentagon-midpoint refinement: factorization outcome is recorded") {
    const auto& [M, Rf] = testutil::midpoint_example();
    auto res = factor_through_projection(M, Rf);
    // LP decides; a yes must ship a verified witness, a no a certificate
    if (res.yes) {
        CHECK(res.h.has_value());
    } else {
        CHECK(lp::verify_infeasibility_certificate(res.problem, res.certificate));
    }
    CHECK(res.yes); // the five forced vertex images extend affinely here
}

TEST_CASE("factorization rejects unverified bundles") {
    StatisticalModel M = make_model(Polytope::parallelotope(2));
    Refinement Rf = holevo_refinement(M);
    // break g by shrinking its domain to the constants only
    PartialAffineMap small_g(Rf.g.linear(), Rf.g.offset(),
                             Polytope::from_vertices({Vector(4, Scalar(0)), Vector(4, Scalar(1))}));
    Refinement bad{Rf.T, Rf.omegaT, Rf.f, small_g};
    CHECK_THROWS_AS(factor_through_projection(M, bad), std::invalid_argument);
    CHECK_THROWS_AS(conjecture3_check(M, bad), std::invalid_argument);
}

TEST_CASE("disjoint minimal faces over all built-in refinements") {
    {
        auto [M, Rf] = example_parallelogram();
        auto rep = conjecture3_check(M, Rf);
        CHECK(rep.violations == 0);
        CHECK(rep.pairs.size() == 6);
        for (const auto& e : rep.pairs) CHECK(e.face_a_dim == 0); // vertex fibres
    }
    {
        const auto& [M, Rf] = testutil::midpoint_example();
        auto rep = conjecture3_check(M, Rf);
        CHECK(rep.violations == 0);
        CHECK(rep.pairs.size() == 10);
        for (const auto& e : rep.pairs) {
            CHECK(e.disjoint);
            CHECK(e.face_a_dim == 1); // midpoints sit on edges of T
            CHECK(e.face_b_dim == 1);
        }
    }
    {
        const auto& [M, Rf] = testutil::edges_example();
        auto rep = conjecture3_check(M, Rf);
        CHECK(rep.violations == 0);
        for (const auto& e : rep.pairs) {
            CHECK(e.face_a_dim == 1); // whole edges are the fibres
            CHECK(e.face_b_dim == 1);
        }
    }
}

TEST_CASE("disjoint faces for holevo refinements of random models") {
    std::mt19937_64 rng(987654);
    int done = 0;
    while (done < 4) {
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
        auto rep = conjecture3_check(M, Rf);
        CHECK(rep.violations == 0);
        for (const auto& e : rep.pairs) CHECK(e.face_a_dim == 0);
        ++done;
    }
}
