#pragma once

#include "refinery/refinement.hpp"

#include <cstdint>

namespace refinery {

/// Bounded search family for candidate refinements of a model: candidate f's
/// assign each extreme point of C either a barycentric grid point of T
/// (denominators 1..grid_q) or, for T with more vertices than C, a collapsed
/// vertex pattern. Exhausting the family is evidence at this scale only.
struct SearchSpec {
    StatisticalModel model;
    std::size_t simplex_vertex_count = 2;
    unsigned grid_q = 1;
    std::uint64_t budget = UINT64_MAX;
};

struct SearchStats {
    std::uint64_t candidates = 0; // enumerated candidate maps
    std::uint64_t consistent = 0; // survived the affine-consistency filter
    std::uint64_t lp_calls = 0;   // extension LPs run
};

struct SearchResult {
    enum class Verdict { Found, ExhaustedNoWitness, BudgetExhausted } verdict;
    std::optional<Refinement> witness; // verified when present
    SearchStats stats;
};

SearchResult search_refinement(const SearchSpec& spec);

/// Decide whether a surjective compatible g exists for the given f; yes
/// returns the maximal g, no returns the non-extendable extreme forms with
/// their Farkas certificates.
struct GExistsResult {
    bool yes = false;
    std::optional<PartialAffineMap> g;
    std::optional<FormSpace> omegaT;
    std::vector<FormExtension> failures;
    std::size_t lp_calls = 0;
};

GExistsResult g_exists_for_f(const StatisticalModel& M, const Polytope& T,
                             const PartialAffineMap& f);

/// Factorization test for a verified refinement: find affine h with
/// f = f_p o h and h(dom f) inside the projection simplex.
struct FactorResult {
    bool yes = false;
    std::optional<PartialAffineMap> h;
    Vector certificate;        // LP infeasibility certificate when no
    lp::LinearProgram problem; // the decided LP
};

FactorResult factor_through_projection(const StatisticalModel& M, const Refinement& R);

/// Minimal faces of T over the f-preimages of every pair of extreme points
/// of C; a meeting pair is a violation of the disjointness conjecture.
struct FacePairEntry {
    std::size_t a_index = 0, b_index = 0;
    std::size_t face_a_dim = 0, face_b_dim = 0;
    bool disjoint = false;
};

struct Conjecture3Report {
    std::vector<FacePairEntry> pairs;
    std::size_t violations = 0;
};

Conjecture3Report conjecture3_check(const StatisticalModel& M, const Refinement& R);

} // namespace refinery
