#pragma once

#include "refinery/linalg.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace refinery::lp {

/// Exact linear program: inequalities a.x <= b, equalities e.x == f,
/// optional objective c (maximized). No objective means pure feasibility.
struct LinearProgram {
    std::size_t variables = 0;
    std::vector<std::pair<Vector, Scalar>> inequalities;
    std::vector<std::pair<Vector, Scalar>> equalities;
    std::optional<Vector> objective;

    void add_le(Vector a, Scalar b) { inequalities.emplace_back(std::move(a), std::move(b)); }
    void add_ge(Vector a, Scalar b);
    void add_eq(Vector a, Scalar b) { equalities.emplace_back(std::move(a), std::move(b)); }
};

enum class LpStatus { Optimal, Feasible, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status;
    Vector point;       // Optimal / Feasible
    Scalar value;       // objective value when Optimal
    Vector certificate; // Infeasible: Farkas multipliers, inequalities then equalities;
                        // Unbounded: improving recession ray in x-space
};

/// Exact primal simplex with Bland's anti-cycling rule. Equalities are
/// eliminated by substitution before the tableau is built; every certificate
/// is re-checked in exact arithmetic before being returned.
LpOutcome solve(const LinearProgram& lp);

/// Nonnegative multipliers on inequalities (any sign on equalities) that
/// combine the system into the contradiction 0 <= negative.
bool verify_infeasibility_certificate(const LinearProgram& lp, const Vector& cert);

/// Ray r with A r <= 0, E r = 0 and c.r > 0.
bool verify_unbounded_ray(const LinearProgram& lp, const Vector& ray);

bool satisfies(const LinearProgram& lp, const Vector& x);

} // namespace refinery::lp
