#pragma once

#include "refinery/formspace.hpp"
#include "refinery/polytope.hpp"

#include <optional>

namespace refinery {

/// Composition would have an empty domain.
struct empty_domain_error : std::runtime_error {
    empty_domain_error() : std::runtime_error("composite map has empty domain") {}
};

/// Partial affine map x -> linear x + offset with an explicit polytopal
/// domain of definition. Applying it outside the domain yields "undefined"
/// (an empty optional), which is a value, not an error.
class PartialAffineMap {
  public:
    PartialAffineMap(Matrix linear, Vector offset, Polytope domain);

    /// Map determined by images of points spanning the domain; the assignment
    /// must be affinely consistent on all listed points.
    static PartialAffineMap from_images(Polytope domain, const std::vector<Vector>& points,
                                        const std::vector<Vector>& images);
    static std::optional<PartialAffineMap> try_from_images(Polytope domain,
                                                           const std::vector<Vector>& points,
                                                           const std::vector<Vector>& images);
    static PartialAffineMap identity(const Polytope& domain);

    std::size_t source_ambient() const { return linear_.cols; }
    std::size_t target_ambient() const { return linear_.rows; }
    const Matrix& linear() const { return linear_; }
    const Vector& offset() const { return offset_; }
    const Polytope& domain() const { return domain_; }

    std::optional<Vector> apply(const Vector& x) const;
    /// The affine formula without the domain membership test.
    Vector apply_formula(const Vector& x) const;

    Polytope image() const;
    bool is_onto(const Polytope& target) const;
    bool is_injective_on_domain() const;

    /// {x in domain : f(x) in Q}, or nothing when empty.
    std::optional<Polytope> preimage(const Polytope& Q) const;

    /// Pullback of a form on the target: a -> v(f(a)), restricted to the
    /// domain of this map.
    AffineForm pullback_form(const AffineForm& v) const;

    /// Dimension of the freedom left when extending this map affinely from
    /// aff(domain) to aff(T); zero means the extension is unique.
    std::size_t extension_freedom_dim(const Polytope& T) const;

  private:
    Matrix linear_;
    Vector offset_;
    Polytope domain_;
};

PartialAffineMap compose(const PartialAffineMap& outer, const PartialAffineMap& inner);

} // namespace refinery
