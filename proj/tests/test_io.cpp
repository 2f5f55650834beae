#include "helpers.hpp"
#include "refinery/io.hpp"

#include <doctest.h>

using namespace refinery;
using testutil::R;

TEST_CASE("polytope files round-trip byte-exactly") {
    for (const Polytope& P : {Polytope::parallelotope(2), Polytope::simplex(3), Polytope::pentagon()}) {
        std::string text = io::write_polytope(P);
        Polytope Q = io::parse_polytope(text);
        CHECK(P.equals(Q));
        CHECK(io::write_polytope(Q) == text);
    }
}

TEST_CASE("H-section files build the same polytope") {
    std::string text =
        "ambient 3 field Q\n"
        "H\n"
        "1 0 0 <= 1\n"
        "-1 0 0 <= 0\n"
        "0 1 0 <= 1\n"
        "0 -1 0 <= 0\n"
        "0 0 1 <= 1\n"
        "0 0 -1 <= 0\n";
    Polytope P = io::parse_polytope(text);
    CHECK(P.equals(Polytope::parallelotope(3)));

    std::string tri =
        "ambient 3 field Q\n"
        "H\n"
        "-1 0 0 <= 0\n"
        "0 -1 0 <= 0\n"
        "0 0 -1 <= 0\n"
        "1 1 1 == 1\n";
    CHECK(io::parse_polytope(tri).equals(Polytope::simplex(2)));
}

TEST_CASE("quadratic field scalars survive the file format") {
    Polytope P = Polytope::pentagon();
    std::string text = io::write_polytope(P);
    CHECK(text.find("Qsqrt(5)") != std::string::npos);
    CHECK(io::parse_polytope(text).equals(P));
}

TEST_CASE("parse errors carry line information") {
    auto expect_error = [](const std::string& text, std::size_t line) {
        try {
            io::parse_polytope(text);
            FAIL("expected parse_error");
        } catch (const io::parse_error& e) {
            CHECK(e.line == line);
        }
    };
    expect_error("", 0);
    expect_error("ambient 2 field Z\nV\n0 0\n", 1);
    expect_error("ambient 2 field Q\nV\n0 0 0\n", 3);
    expect_error("ambient 2 field Q\nV\n0 x\n", 3);
    expect_error("ambient 2 field Q\nH\n1 0 < 1\n", 3);
    // scalar outside the declared field
    expect_error("ambient 1 field Q\nV\nsqrt(5)\n", 3);
}

TEST_CASE("map files round-trip byte-exactly") {
    auto [M, Rf] = example_parallelogram();
    for (const PartialAffineMap* m : {&Rf.f, &Rf.g}) {
        std::string text = io::write_map(*m);
        PartialAffineMap parsed = io::parse_map(text);
        CHECK(io::write_map(parsed) == text);
        CHECK(parsed.domain().equals(m->domain()));
        for (const auto& v : m->domain().vertices())
            CHECK(vec_eq(parsed.apply_formula(v), m->apply_formula(v)));
    }
}

TEST_CASE("refinement files reassemble into verifying bundles") {
    auto [M, Rf] = example_parallelogram();
    std::string text = io::write_refinement(Rf);
    io::RefinementFile file = io::parse_refinement(text);
    Refinement rebuilt = io::assemble_refinement(M, std::move(file));
    CHECK(verify_refinement(rebuilt, M).all_pass());
    CHECK(io::write_refinement(rebuilt) == text);
}

TEST_CASE("refinement files survive the quadratic examples") {
    const auto& [M, Rf] = testutil::edges_example();
    std::string text = io::write_refinement(Rf);
    Refinement rebuilt = io::assemble_refinement(M, io::parse_refinement(text));
    CHECK(verify_refinement(rebuilt, M).all_pass());
    CHECK(io::write_refinement(rebuilt) == text);
}

TEST_CASE("OFF export of the octahedron") {
    FormSpace F = FormSpace::build(Polytope::parallelotope(2));
    std::string off = io::export_off(F.space());
    std::istringstream in(off);
    std::string magic;
    std::size_t v, f, e;
    in >> magic >> v >> f >> e;
    CHECK(magic == "OFF");
    CHECK(v == 6);
    CHECK(f == 8);
    CHECK(e == 12);
}

TEST_CASE("OFF export of the pentagonal trapezohedron") {
    FormSpace F = FormSpace::build(Polytope::pentagon());
    std::string off = io::export_off(F.space());
    std::istringstream in(off);
    std::string magic;
    std::size_t v, f, e;
    in >> magic >> v >> f >> e;
    CHECK(v == 12);
    CHECK(f == 10);
    CHECK(e == 20);
}

TEST_CASE("OFF export of the projected hypercube") {
    FormSpace F = FormSpace::build(Polytope::simplex(3));
    CHECK_THROWS_AS(io::export_off(F.space()), std::invalid_argument); // 4-dim without flag
    std::string off = io::export_off(F.space(), true);
    std::istringstream in(off);
    std::string magic;
    std::size_t v, f, e;
    in >> magic >> v >> f >> e;
    CHECK(v == 16);
    CHECK(f == 24); // all 2-faces of the 4-parallelotope
    CHECK(e == 32);
    CHECK_THROWS_AS(io::export_off(Polytope::parallelotope(2), true), std::invalid_argument);
}

TEST_CASE("digest is a deterministic function of the bytes") {
    CHECK(io::fnv1a_digest("") == io::fnv1a_digest(""));
    CHECK(io::fnv1a_digest("a") != io::fnv1a_digest("b"));
    CHECK(io::fnv1a_digest("refinery").size() == 16);
}
