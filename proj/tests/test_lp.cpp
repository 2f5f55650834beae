#include "helpers.hpp"

#include <doctest.h>

using namespace refinery;
using namespace refinery::lp;
using testutil::R;

TEST_CASE("maximize x on the unit interval") {
    LinearProgram p;
    p.variables = 1;
    p.add_le({R(1)}, R(1));
    p.add_le({R(-1)}, R(0));
    p.objective = Vector{R(1)};
    auto out = solve(p);
    CHECK(out.status == LpStatus::Optimal);
    CHECK(out.value == R(1));
    CHECK(vec_eq(out.point, {R(1)}));
}

TEST_CASE("infeasible interval yields the unit Farkas pair") {
    LinearProgram p;
    p.variables = 1;
    p.add_le({R(1)}, R(0));  // x <= 0
    p.add_ge({R(1)}, R(1));  // x >= 1
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Infeasible);
    CHECK(verify_infeasibility_certificate(p, out.certificate));
    REQUIRE(!out.certificate[0].is_zero());
    Scalar s = out.certificate[0].inverse();
    CHECK(out.certificate[0] * s == R(1));
    CHECK(out.certificate[1] * s == R(1));
}

TEST_CASE("unbounded ray is certified") {
    LinearProgram p;
    p.variables = 2;
    p.add_ge({R(1), R(0)}, R(0));
    p.objective = Vector{R(1), R(1)};
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Unbounded);
    CHECK(verify_unbounded_ray(p, out.certificate));
}

TEST_CASE("equalities handled by substitution") {
    LinearProgram p;
    p.variables = 3;
    p.add_eq({R(1), R(1), R(1)}, R(1));
    p.add_ge({R(1), R(0), R(0)}, R(0));
    p.add_ge({R(0), R(1), R(0)}, R(0));
    p.add_ge({R(0), R(0), R(1)}, R(0));
    p.objective = Vector{R(2), R(1), R(0)};
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == R(2));
    CHECK(vec_eq(out.point, {R(1), R(0), R(0)}));
}

TEST_CASE("inconsistent equalities give an exact certificate") {
    LinearProgram p;
    p.variables = 2;
    p.add_eq({R(1), R(1)}, R(0));
    p.add_eq({R(2), R(2)}, R(1));
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Infeasible);
    CHECK(verify_infeasibility_certificate(p, out.certificate));
}

TEST_CASE("fully pinned point checked against inequalities") {
    LinearProgram p;
    p.variables = 2;
    p.add_eq({R(1), R(0)}, R(2));
    p.add_eq({R(0), R(1)}, R(3));
    p.add_le({R(1), R(1)}, R(4)); // violated: 5 > 4
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Infeasible);
    CHECK(verify_infeasibility_certificate(p, out.certificate));
}

TEST_CASE("pure feasibility returns a point that satisfies everything") {
    LinearProgram p;
    p.variables = 3;
    p.add_le({R(1), R(1), R(1)}, R(1));
    p.add_ge({R(1), R(-1), R(0)}, R(-2));
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Feasible);
    CHECK(satisfies(p, out.point));
}

TEST_CASE("optimal values agree with brute-force vertex enumeration") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> nvars(2, 5);
    std::uniform_int_distribution<int> nextra(0, 4);
    int optimal_seen = 0;
    for (int it = 0; it < 25; ++it) {
        std::size_t n = static_cast<std::size_t>(nvars(rng));
        LinearProgram p;
        p.variables = n;
        HRep h;
        for (std::size_t j = 0; j < n; ++j) {
            Vector a(n, Scalar(0));
            a[j] = R(1);
            p.add_le(a, R(2));
            h.inequalities.emplace_back(a, R(2));
            for (auto& v : a) v = -v;
            p.add_le(a, R(2));
            h.inequalities.emplace_back(a, R(2));
        }
        int extra = nextra(rng);
        for (int e = 0; e < extra; ++e) {
            Vector a(n);
            for (auto& v : a) v = testutil::random_rational(rng, 3);
            Scalar b = testutil::random_rational(rng, 3);
            p.add_le(a, b);
            h.inequalities.emplace_back(a, b);
        }
        Vector c(n);
        for (auto& v : c) v = testutil::random_rational(rng, 3);
        p.objective = c;

        auto out = solve(p);
        auto verts = testutil::brute_force_vertices(h, n);
        if (out.status == LpStatus::Infeasible) {
            CHECK(verify_infeasibility_certificate(p, out.certificate));
            CHECK(verts.empty());
            continue;
        }
        REQUIRE(out.status == LpStatus::Optimal);
        REQUIRE(!verts.empty());
        Scalar best = dot(c, verts[0]);
        for (const auto& v : verts) {
            Scalar val = dot(c, v);
            if (val > best) best = val;
        }
        CHECK(out.value == best);
        CHECK(satisfies(p, out.point));
        ++optimal_seen;
    }
    CHECK(optimal_seen > 10);
}

TEST_CASE("quadratic-field coefficients work in the simplex") {
    Scalar a = (Scalar::sqrt_of(5) - Scalar(1)) * R(1, 2);
    LinearProgram p;
    p.variables = 1;
    p.add_le({R(1)}, a); // x <= alpha
    p.add_ge({R(1)}, R(0));
    p.objective = Vector{R(1)};
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == a);
}
