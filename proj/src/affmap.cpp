#include "refinery/affmap.hpp"

namespace refinery {

PartialAffineMap::PartialAffineMap(Matrix linear, Vector offset, Polytope domain)
    : linear_(std::move(linear)), offset_(std::move(offset)), domain_(std::move(domain)) {
    if (linear_.rows != offset_.size())
        throw std::invalid_argument("PartialAffineMap: offset size mismatch");
    if (linear_.cols != domain_.ambient_dim())
        throw std::invalid_argument("PartialAffineMap: domain lives in the wrong space");
}

std::optional<PartialAffineMap> PartialAffineMap::try_from_images(Polytope domain,
                                                                  const std::vector<Vector>& points,
                                                                  const std::vector<Vector>& images) {
    if (points.empty() || points.size() != images.size())
        throw std::invalid_argument("from_images: point/image count mismatch");
    const std::size_t n = domain.ambient_dim();
    const std::size_t m = images.front().size();
    // Solve [p^T 1] (l_t, o_t) = image_t per output coordinate.
    Matrix sys(points.size(), n + 1);
    for (std::size_t r = 0; r < points.size(); ++r) {
        if (points[r].size() != n) throw std::invalid_argument("from_images: point size mismatch");
        for (std::size_t c = 0; c < n; ++c) sys(r, c) = points[r][c];
        sys(r, n) = Scalar(1);
    }
    Matrix linear(m, n);
    Vector offset(m);
    for (std::size_t t = 0; t < m; ++t) {
        Vector rhs(points.size());
        for (std::size_t r = 0; r < points.size(); ++r) rhs[r] = images[r][t];
        auto sol = solve_linear(sys, rhs);
        if (sol.kind == LinearSolution::Kind::Inconsistent) return std::nullopt;
        for (std::size_t c = 0; c < n; ++c) linear(t, c) = sol.particular[c];
        offset[t] = sol.particular[n];
    }
    return PartialAffineMap(std::move(linear), std::move(offset), std::move(domain));
}

PartialAffineMap PartialAffineMap::from_images(Polytope domain, const std::vector<Vector>& points,
                                               const std::vector<Vector>& images) {
    auto m = try_from_images(std::move(domain), points, images);
    if (!m) throw std::invalid_argument("from_images: assignment is not affinely consistent");
    return std::move(*m);
}

PartialAffineMap PartialAffineMap::identity(const Polytope& domain) {
    return PartialAffineMap(Matrix::identity(domain.ambient_dim()),
                            Vector(domain.ambient_dim(), Scalar(0)), domain);
}

Vector PartialAffineMap::apply_formula(const Vector& x) const {
    return vec_add(linear_.mul(x), offset_);
}

std::optional<Vector> PartialAffineMap::apply(const Vector& x) const {
    if (!domain_.contains(x)) return std::nullopt;
    return apply_formula(x);
}

Polytope PartialAffineMap::image() const {
    std::vector<Vector> imgs;
    imgs.reserve(domain_.vertices().size());
    for (const auto& v : domain_.vertices()) imgs.push_back(apply_formula(v));
    return Polytope::from_vertices(std::move(imgs));
}

bool PartialAffineMap::is_onto(const Polytope& target) const {
    if (target.ambient_dim() != target_ambient())
        throw std::invalid_argument("is_onto: target ambient mismatch");
    return image().equals(target);
}

bool PartialAffineMap::is_injective_on_domain() const {
    // ker(linear) must meet the direction space of the domain only at 0.
    const auto& basis = domain_.affine_basis();
    if (basis.size() <= 1) return true;
    std::vector<Vector> images;
    for (std::size_t k = 1; k < basis.size(); ++k)
        images.push_back(
            linear_.mul(vec_sub(domain_.vertices()[basis[k]], domain_.vertices()[basis[0]])));
    return rank(Matrix::from_rows(images)) == images.size();
}

std::optional<Polytope> PartialAffineMap::preimage(const Polytope& Q) const {
    if (Q.ambient_dim() != target_ambient())
        throw std::invalid_argument("preimage: target ambient mismatch");
    HRep h = domain_.hrep();
    auto pull = [&](const Vector& a, const Scalar& b) {
        // a.(Lx + o) <= b  becomes  (a^T L) x <= b - a.o
        Vector row(source_ambient(), Scalar(0));
        for (std::size_t c = 0; c < source_ambient(); ++c) {
            Scalar acc;
            for (std::size_t r = 0; r < linear_.rows; ++r) acc += a[r] * linear_(r, c);
            row[c] = acc;
        }
        return std::make_pair(std::move(row), b - dot(a, offset_));
    };
    for (const auto& [a, b] : Q.hrep().inequalities) h.inequalities.push_back(pull(a, b));
    for (const auto& [a, b] : Q.hrep().equalities) h.equalities.push_back(pull(a, b));
    try {
        return Polytope::from_halfspaces(h, source_ambient());
    } catch (const infeasible_error&) {
        return std::nullopt;
    }
}

AffineForm PartialAffineMap::pullback_form(const AffineForm& v) const {
    if (v.coeffs.size() != target_ambient())
        throw std::invalid_argument("pullback_form: form lives on the wrong space");
    AffineForm w;
    w.coeffs.assign(source_ambient(), Scalar(0));
    for (std::size_t c = 0; c < source_ambient(); ++c) {
        Scalar acc;
        for (std::size_t r = 0; r < linear_.rows; ++r) acc += v.coeffs[r] * linear_(r, c);
        w.coeffs[c] = acc;
    }
    w.constant = dot(v.coeffs, offset_) + v.constant;
    return w;
}

std::size_t PartialAffineMap::extension_freedom_dim(const Polytope& T) const {
    if (T.ambient_dim() != source_ambient())
        throw std::invalid_argument("extension_freedom_dim: ambient mismatch");
    return (T.dim() - domain_.dim()) * target_ambient();
}

PartialAffineMap compose(const PartialAffineMap& outer, const PartialAffineMap& inner) {
    if (inner.target_ambient() != outer.source_ambient())
        throw std::invalid_argument("compose: ambient mismatch");
    Matrix linear = outer.linear().mul(inner.linear());
    Vector offset = vec_add(outer.linear().mul(inner.offset()), outer.offset());
    // domain = inner.domain intersected with inner^{-1}(outer.domain)
    auto dom = inner.preimage(outer.domain());
    if (!dom) throw empty_domain_error();
    return PartialAffineMap(std::move(linear), std::move(offset), std::move(*dom));
}

} // namespace refinery
