#include "refinery/formspace.hpp"

#include <algorithm>

namespace refinery {

FormSpace FormSpace::build(const Polytope& base) {
    FormSpace F;
    F.base_ = base;
    const std::size_t n = base.dim();
    const std::size_t nv = base.vertices().size();
    const auto& basis = base.affine_basis();

    // Weights lambda with  s_j = sum_k lambda_k b_k,  sum lambda_k = 1.
    Matrix sys(base.ambient_dim() + 1, n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const Vector& bk = base.vertices()[basis[k]];
        for (std::size_t r = 0; r < base.ambient_dim(); ++r) sys(r, k) = bk[r];
        sys(base.ambient_dim(), k) = Scalar(1);
    }
    F.L_ = Matrix(nv, n + 1);
    for (std::size_t j = 0; j < nv; ++j) {
        Vector rhs = base.vertices()[j];
        rhs.push_back(Scalar(1));
        auto sol = solve_linear(sys, rhs);
        if (sol.kind != LinearSolution::Kind::Unique)
            throw std::logic_error("formspace: affine basis failed to resolve a vertex");
        F.L_.set_row(j, sol.particular);
    }

    // Interpolation rows [b_k^T 1] used by to_form / to_coords.
    F.interp_ = Matrix(n + 1, base.ambient_dim() + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const Vector& bk = base.vertices()[basis[k]];
        for (std::size_t c = 0; c < base.ambient_dim(); ++c) F.interp_(k, c) = bk[c];
        F.interp_(k, base.ambient_dim()) = Scalar(1);
    }

    // 0 <= value at every vertex <= 1.
    HRep h;
    for (std::size_t j = 0; j < nv; ++j) {
        Vector row = F.L_.row(j);
        h.inequalities.emplace_back(row, Scalar(1));
        for (auto& v : row) v = -v;
        h.inequalities.emplace_back(std::move(row), Scalar(0));
    }
    F.space_ = Polytope::from_halfspaces(h, n + 1);
    return F;
}

Scalar FormSpace::value_at_vertex(const Vector& coords, std::size_t j) const {
    Scalar acc;
    for (std::size_t c = 0; c < L_.cols; ++c) acc += L_(j, c) * coords[c];
    return acc;
}

Vector FormSpace::value_row(const Vector& coords) const { return L_.mul(coords); }

Scalar FormSpace::value_at_point(const Vector& coords, const Vector& x) const {
    return dot(point_weights(x), coords);
}

Vector FormSpace::point_weights(const Vector& x) const {
    Vector rhs = x;
    rhs.push_back(Scalar(1));
    auto sol = solve_linear(interp_.transposed(), rhs);
    if (sol.kind != LinearSolution::Kind::Unique)
        throw std::invalid_argument("point_weights: point not in the affine hull of the base");
    return sol.particular;
}

AffineForm FormSpace::to_form(const Vector& coords) const {
    auto sol = solve_linear(interp_, coords);
    if (sol.kind == LinearSolution::Kind::Inconsistent)
        throw std::logic_error("formspace: interpolation inconsistent");
    AffineForm w;
    w.coeffs.assign(sol.particular.begin(), sol.particular.end() - 1);
    w.constant = sol.particular.back();
    return w;
}

Vector FormSpace::to_coords(const AffineForm& w) const {
    Vector y(interp_.rows);
    for (std::size_t k = 0; k < interp_.rows; ++k) {
        Scalar acc = w.constant;
        for (std::size_t c = 0; c + 1 < interp_.cols; ++c) acc += interp_(k, c) * w.coeffs[c];
        y[k] = acc;
    }
    return y;
}

std::vector<AffineForm> FormSpace::extreme_forms() const {
    std::vector<AffineForm> out;
    out.reserve(space_.vertices().size());
    for (const auto& y : space_.vertices()) out.push_back(to_form(y));
    return out;
}

std::size_t bounding_direction_count(const Polytope& C) {
    if (C.dim() != 2) throw std::invalid_argument("bounding_direction_count: polytope must be 2-dimensional");
    std::vector<Vector> dirs;
    for (const auto& [a, b] : C.hrep().inequalities) {
        std::vector<Vector> tight;
        for (const auto& v : C.vertices())
            if ((dot(a, v) - b).is_zero()) tight.push_back(v);
        if (tight.size() != 2) throw std::logic_error("bounding_direction_count: edge with bad vertex count");
        Vector d = vec_sub(tight[1], tight[0]);
        // canonical representative up to sign and scale
        for (auto& c : d)
            if (!c.is_zero()) {
                Scalar inv = c.inverse();
                for (auto& e : d) e = e * inv;
                break;
            }
        dirs.push_back(std::move(d));
    }
    std::sort(dirs.begin(), dirs.end(), [](const Vector& x, const Vector& y) { return vec_lex_cmp(x, y) < 0; });
    dirs.erase(std::unique(dirs.begin(), dirs.end(), vec_eq), dirs.end());
    return dirs.size();
}

} // namespace refinery
