#pragma once

#include "refinery/affmap.hpp"

#include <string>
#include <utility>

namespace refinery {

/// A convex polytope together with its convex-form space.
struct StatisticalModel {
    Polytope C;
    FormSpace omega;
};

StatisticalModel make_model(Polytope C);

/// Refinement bundle (T, Omega_T, f, g): T a simplex, f: T -> C partial onto
/// affine on the ambient spaces, g between the form-space coordinate
/// polytopes. Validity is established by verify_refinement.
struct Refinement {
    Polytope T;
    FormSpace omegaT;
    PartialAffineMap f;
    PartialAffineMap g;
};

struct AxiomCheck {
    bool pass = true;
    std::string detail;
    std::vector<Vector> witnesses; // exact failure witnesses, empty on pass
};

struct VerificationReport {
    AxiomCheck simplex;       // I:   T is a simplex
    AxiomCheck f_partial_onto;// II:  f partial, affine, onto C
    AxiomCheck g_partial_onto;// III: g partial, affine, onto Omega_C
    AxiomCheck compatibility; // IV:  g(w).f(a) = w.a on the domains

    bool all_pass() const {
        return simplex.pass && f_partial_onto.pass && g_partial_onto.pass && compatibility.pass;
    }
};

VerificationReport verify_refinement(const Refinement& R, const StatisticalModel& M);

/// One extreme form of Omega_C and the exact decision whether it extends
/// through f to a convex form on T.
struct FormExtension {
    std::size_t form_index = 0; // index into M.omega.space().vertices()
    bool extendable = false;
    Vector witness;             // extending form's coordinates when extendable
    Vector certificate;         // Farkas multipliers when not
    lp::LinearProgram problem;  // the decided LP, kept for re-verification
};

/// The maximal compatible g for a partial onto f: its domain is every form on
/// T whose restriction to dom(f) factors through f, and g(w) is the unique
/// form on C the factoring produces.
struct MaximalG {
    PartialAffineMap g;
    FormSpace omegaT;
    std::vector<FormExtension> extensions; // one per extreme form of Omega_C
    bool onto = false;                     // true iff every extreme form extends
    std::size_t lp_calls = 0;
};

MaximalG maximal_g(const StatisticalModel& M, const Polytope& T, const PartialAffineMap& f);

/// Canonical projection refinement: T the (m-1)-simplex, f vertex-to-vertex,
/// g the maximal compatible map.
Refinement holevo_refinement(const StatisticalModel& M);

std::pair<StatisticalModel, Refinement> example_parallelogram();
std::pair<StatisticalModel, Refinement> example_pentagon_midpoint();
std::pair<StatisticalModel, Refinement> example_pentagon_edges();

/// Pentagon vertices in the fixed working order used by the built-in
/// examples (s1..s5 of the value matrix).
std::vector<Vector> pentagon_points();
/// The golden section (sqrt(5)-1)/2.
Scalar golden_section();

struct ExtensionEntry {
    std::string label;
    Vector required_values;    // values demanded at the embedded vertices
    bool feasible = false;
    Vector witness;            // form coordinates on T when feasible
    Vector certificate;        // Farkas multipliers when not
    lp::LinearProgram problem;
};

/// The square-as-section-of-a-tetrahedron construction: every nontrivial
/// extreme form of the square's form space fails to extend, with exact
/// infeasibility certificates.
struct CounterexampleReport {
    Polytope section;          // the embedded square
    std::vector<ExtensionEntry> entries;
    std::size_t infeasible_count() const {
        std::size_t n = 0;
        for (const auto& e : entries)
            if (!e.feasible) ++n;
        return n;
    }
};

CounterexampleReport counterexample_section();

/// Instance check of the no-injective-refinement theorem: for an injective
/// partial onto f from a simplex, decide extendability of every extreme form.
struct SectionCheckReport {
    std::vector<FormExtension> extensions;
    std::size_t non_extendable = 0;
    bool surjective_g_possible = false;
};

SectionCheckReport linusson_check(const StatisticalModel& M, const Polytope& T,
                                  const PartialAffineMap& f);

/// Realize a full-dimensional polytope with F facets as a section of the
/// (F-1)-simplex; returns the simplex and the injective map f: T -> C.
std::pair<Polytope, PartialAffineMap> section_embedding(const Polytope& C);

/// Fiber m^{-1}({v}) for a target v that is an extreme point of a polytope
/// containing the whole image of m: in that case any convex combination of
/// domain vertices reaching v puts mass only on vertices mapping to v, so the
/// fiber is their hull. Returns nothing when the preconditions do not hold
/// (fall back to the general preimage) or when the fiber is empty.
std::optional<Polytope> extreme_value_fiber(const PartialAffineMap& m, const Polytope& image_space,
                                            const Vector& v);

} // namespace refinery
