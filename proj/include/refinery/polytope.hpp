#pragma once

#include "refinery/linalg.hpp"
#include "refinery/lp.hpp"

#include <stdexcept>
#include <vector>

namespace refinery {

/// Dual halfspace description: inequalities a.x <= b plus the equalities
/// cutting out the affine hull when the set is not full-dimensional.
struct HRep {
    std::vector<std::pair<Vector, Scalar>> inequalities;
    std::vector<std::pair<Vector, Scalar>> equalities;
};

/// The described set is empty; carries Farkas multipliers over the input rows
/// (inequalities first, then equalities).
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(Vector cert)
        : std::runtime_error("halfspace system is infeasible"), certificate(std::move(cert)) {}
    Vector certificate;
};

/// The described set is unbounded; carries a recession direction.
struct unbounded_error : std::runtime_error {
    explicit unbounded_error(Vector dir)
        : std::runtime_error("halfspace system is unbounded"), direction(std::move(dir)) {}
    Vector direction;
};

/// Compact convex polytope with exact dual description. Vertices are
/// canonical (every listed point extreme, sorted); facet inequalities are
/// irredundant, normalized and sorted; equalities define exactly the affine
/// hull. Immutable after construction.
class Polytope {
  public:
    /// Empty placeholder; every usable instance comes from a factory below.
    Polytope() = default;

    static Polytope from_vertices(std::vector<Vector> points);
    static Polytope from_halfspaces(const HRep& hrep, std::size_t ambient);

    /// Convex hull of the n+1 standard basis points of R^{n+1}.
    static Polytope simplex(std::size_t n);
    /// Unit n-cube.
    static Polytope parallelotope(std::size_t n);
    /// Affinely regular pentagon over Q(sqrt(5)).
    static Polytope pentagon();

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return dim_; }
    const std::vector<Vector>& vertices() const { return verts_; }
    const HRep& hrep() const { return hrep_; }
    /// Indices of the first affinely independent spanning subset of vertices().
    const std::vector<std::size_t>& affine_basis() const { return abasis_; }

    bool contains(const Vector& x) const;
    bool equals(const Polytope& other) const;

    /// Smallest face containing S: intersection of the facets tight at every
    /// point of S. Points outside the polytope are an argument error.
    Polytope minimal_face(const std::vector<Vector>& S) const;

    /// Exhaustive consistency check used by the test suites.
    bool check_invariants() const;

  private:
    std::size_t ambient_ = 0, dim_ = 0;
    std::vector<Vector> verts_;
    HRep hrep_;
    std::vector<std::size_t> abasis_;
};

/// True iff F and G intersect (exact LP feasibility on the joint system).
bool faces_meet(const Polytope& F, const Polytope& G);

/// Extreme rays of the pointed cone {y : row.y >= 0 for all rows}.
/// Precondition: rank(rows) == dim (checked). Double description with
/// lexicographic insertion order and adjacency by rank.
std::vector<Vector> cone_extreme_rays(std::vector<Vector> rows, std::size_t dim);

/// Scale so the first nonzero entry has absolute value 1 (sign preserved).
void normalize_direction(Vector& v);

} // namespace refinery
