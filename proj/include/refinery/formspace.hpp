#pragma once

#include "refinery/polytope.hpp"

namespace refinery {

/// Affine functional x -> coeffs.x + constant on the ambient space of a
/// polytope. A convex form additionally takes values in [0,1] on the polytope.
struct AffineForm {
    Vector coeffs;
    Scalar constant;

    Scalar eval(const Vector& x) const { return dot(coeffs, x) + constant; }
};

inline Scalar eval_form(const AffineForm& w, const Vector& a) { return w.eval(a); }

/// The convex-form space of a polytope C: all affine functionals with range
/// in [0,1] on C, realized as a polytope in R^{dim C + 1} whose j-th
/// coordinate is the value at the j-th affine-basis vertex of C.
class FormSpace {
  public:
    static FormSpace build(const Polytope& base);

    const Polytope& base() const { return base_; }
    const Polytope& space() const { return space_; }

    /// Value of the form with coordinates y at base vertex j (row L_j of the
    /// interpolation matrix applied to y).
    Scalar value_at_vertex(const Vector& coords, std::size_t vertex_idx) const;
    /// Values at every vertex of the base polytope.
    Vector value_row(const Vector& coords) const;
    /// Value at an arbitrary point of aff(base).
    Scalar value_at_point(const Vector& coords, const Vector& x) const;

    AffineForm to_form(const Vector& coords) const;
    Vector to_coords(const AffineForm& w) const;

    /// Weights lambda of a point of aff(base) over the affine-basis vertices:
    /// x = sum lambda_k b_k with sum lambda_k = 1; any form's value at x is
    /// then lambda . coords.
    Vector point_weights(const Vector& x) const;

    std::vector<AffineForm> extreme_forms() const;

    Vector null_coords() const { return Vector(space_.ambient_dim(), Scalar(0)); }
    Vector unit_coords() const { return Vector(space_.ambient_dim(), Scalar(1)); }

    /// Barycentric-style weights: value at base vertex j = L(j,:) . coords.
    const Matrix& vertex_weights() const { return L_; }

  private:
    Polytope base_;
    Polytope space_;
    Matrix L_;          // (#base vertices) x (dim+1)
    Matrix interp_;     // rows [b_k^T 1] over the affine-basis vertices
};

/// Number of edge-direction classes of a 2-dimensional polytope; the extreme
/// form count is then 2m+2.
std::size_t bounding_direction_count(const Polytope& C);

} // namespace refinery
