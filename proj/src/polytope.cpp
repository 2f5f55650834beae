#include "refinery/polytope.hpp"

#include <algorithm>
#include <cstdint>

namespace refinery {

void normalize_direction(Vector& v) {
    for (const auto& x : v) {
        if (x.is_zero()) continue;
        Scalar inv = x.abs().inverse();
        for (auto& y : v) y = y * inv;
        return;
    }
}

namespace {

using Bits = std::vector<std::uint64_t>;

void bit_set(Bits& b, std::size_t i) { b[i >> 6] |= (std::uint64_t{1} << (i & 63)); }

std::size_t popcount_and(const Bits& x, const Bits& y, const Bits& mask) {
    std::size_t n = 0;
    for (std::size_t w = 0; w < x.size(); ++w) n += static_cast<std::size_t>(__builtin_popcountll(x[w] & y[w] & mask[w]));
    return n;
}

struct Ray {
    Vector dir;
    Vector dots; // cached dot with every input row
    Bits tight;  // bit i set iff dots[i] == 0
};

Ray make_ray(Vector dir, const std::vector<Vector>& rows) {
    normalize_direction(dir);
    Ray r;
    r.dots.resize(rows.size());
    r.tight.assign((rows.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        r.dots[i] = dot(rows[i], dir);
        if (r.dots[i].is_zero()) bit_set(r.tight, i);
    }
    r.dir = std::move(dir);
    return r;
}

/// Canonical reduced-row-echelon basis of the row space.
std::vector<Vector> rref_basis(std::vector<Vector> rows) {
    if (rows.empty()) return rows;
    Matrix M = Matrix::from_rows(rows);
    const std::size_t m = M.rows, n = M.cols;
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t col = 0; col < n && next < m; ++col) {
        std::size_t pr = static_cast<std::size_t>(-1);
        for (std::size_t r = next; r < m; ++r)
            if (!M(r, col).is_zero()) {
                pr = r;
                break;
            }
        if (pr == static_cast<std::size_t>(-1)) continue;
        if (pr != next)
            for (std::size_t c = 0; c < n; ++c) std::swap(M(pr, c), M(next, c));
        Scalar inv = M(next, col).inverse();
        for (std::size_t c = col; c < n; ++c) M(next, c) = M(next, c) * inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == next || M(r, col).is_zero()) continue;
            Scalar f = M(r, col);
            for (std::size_t c = col; c < n; ++c) M(r, c) = M(r, c) - f * M(next, c);
        }
        pivots.push_back(col);
        ++next;
    }
    std::vector<Vector> out;
    for (std::size_t r = 0; r < pivots.size(); ++r) out.push_back(M.row(r));
    return out;
}

/// Reduce v modulo the rref rows (zero out every pivot coordinate).
Vector reduce_mod(const std::vector<Vector>& rref, Vector v) {
    for (const auto& row : rref) {
        std::size_t piv = 0;
        while (piv < row.size() && row[piv].is_zero()) ++piv;
        if (piv == row.size()) continue;
        const Scalar f = v[piv];
        if (f.is_zero()) continue;
        for (std::size_t c = piv; c < v.size(); ++c) v[c] = v[c] - f * row[c];
    }
    return v;
}

std::vector<Vector> sorted_unique(std::vector<Vector> vs) {
    std::sort(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return vec_lex_cmp(a, b) < 0; });
    vs.erase(std::unique(vs.begin(), vs.end(), vec_eq), vs.end());
    return vs;
}

Vector cat(const Vector& a, const Scalar& b) {
    Vector r = a;
    r.push_back(b);
    return r;
}

} // namespace

std::vector<Vector> cone_extreme_rays(std::vector<Vector> rows, std::size_t D) {
    for (const auto& r : rows)
        if (r.size() != D) throw std::invalid_argument("cone_extreme_rays: row size mismatch");

    // Initial simplicial subcone from the first D independent rows.
    RowBasis rb(D);
    std::vector<std::size_t> basis_idx;
    for (std::size_t i = 0; i < rows.size() && basis_idx.size() < D; ++i)
        if (rb.add(rows[i])) basis_idx.push_back(i);
    if (basis_idx.size() < D) throw std::logic_error("cone_extreme_rays: cone is not pointed");

    Matrix MB(D, D);
    for (std::size_t r = 0; r < D; ++r) MB.set_row(r, rows[basis_idx[r]]);
    auto inv = try_invert(MB);
    if (!inv) throw std::logic_error("cone_extreme_rays: singular initial basis");

    std::vector<Ray> rays;
    for (std::size_t c = 0; c < D; ++c) {
        Vector col(D);
        for (std::size_t r = 0; r < D; ++r) col[r] = (*inv)(r, c);
        rays.push_back(make_ray(std::move(col), rows));
    }

    Bits processed((rows.size() + 63) / 64, 0);
    for (auto i : basis_idx) bit_set(processed, i);

    // Remaining constraints in lexicographic insertion order.
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (std::find(basis_idx.begin(), basis_idx.end(), i) == basis_idx.end()) rest.push_back(i);
    std::sort(rest.begin(), rest.end(),
              [&](std::size_t a, std::size_t b) { return vec_lex_cmp(rows[a], rows[b]) < 0; });

    for (std::size_t ridx : rest) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            int s = rays[i].dots[ridx].sign();
            if (s > 0)
                pos.push_back(i);
            else if (s < 0)
                neg.push_back(i);
        }
        if (!neg.empty()) {
            std::vector<Ray> created;
            for (auto ip : pos) {
                for (auto in : neg) {
                    const Ray& rp = rays[ip];
                    const Ray& rn = rays[in];
                    if (popcount_and(rp.tight, rn.tight, processed) + 2 < D) continue;
                    // Adjacency by rank: common tight rows must span D-2 dims.
                    RowBasis common(D);
                    bool adjacent = false;
                    for (std::size_t w = 0; w < processed.size() && !adjacent; ++w) {
                        std::uint64_t bits = rp.tight[w] & rn.tight[w] & processed[w];
                        while (bits) {
                            std::size_t i = (w << 6) + static_cast<std::size_t>(__builtin_ctzll(bits));
                            bits &= bits - 1;
                            common.add(rows[i]);
                            if (common.rank() == D - 2) {
                                adjacent = true;
                                break;
                            }
                        }
                    }
                    if (!adjacent) continue;
                    Vector nd = vec_sub(vec_scale(rp.dots[ridx], rn.dir), vec_scale(rn.dots[ridx], rp.dir));
                    created.push_back(make_ray(std::move(nd), rows));
                }
            }
            std::vector<Ray> kept;
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (rays[i].dots[ridx].sign() >= 0) kept.push_back(std::move(rays[i]));
            for (auto& r : created) kept.push_back(std::move(r));
            rays = std::move(kept);
        }
        bit_set(processed, ridx);
    }

    std::vector<Vector> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.dir));
    return out;
}

namespace {

struct Canonical {
    std::vector<Vector> verts;
    std::vector<Vector> eq_rref; // rows (g|h) meaning g.x = h
};

Canonical canonical_hull_data(std::vector<Vector> verts, std::size_t ambient) {
    Canonical c;
    c.verts = sorted_unique(std::move(verts));
    // Affine functionals vanishing on every vertex: kernel of rows [v^T, -1].
    Matrix M(c.verts.size(), ambient + 1);
    for (std::size_t r = 0; r < c.verts.size(); ++r) {
        for (std::size_t j = 0; j < ambient; ++j) M(r, j) = c.verts[r][j];
        M(r, ambient) = Scalar(-1);
    }
    c.eq_rref = rref_basis(kernel_basis(M));
    return c;
}

std::vector<std::pair<Vector, Scalar>> split_rows(const std::vector<Vector>& rows) {
    std::vector<std::pair<Vector, Scalar>> out;
    for (const auto& r : rows) {
        Vector a(r.begin(), r.end() - 1);
        out.emplace_back(std::move(a), r.back());
    }
    return out;
}

} // namespace

Polytope Polytope::from_vertices(std::vector<Vector> points) {
    if (points.empty()) throw std::invalid_argument("from_vertices: empty point list");
    const std::size_t ambient = points.front().size();
    for (const auto& p : points)
        if (p.size() != ambient) throw std::invalid_argument("from_vertices: mixed ambient dimensions");

    Canonical canon = canonical_hull_data(std::move(points), ambient);
    auto& pts = canon.verts;

    AffineHull hull = affine_hull(pts);
    const std::size_t d = hull.dim;

    Polytope P;
    P.ambient_ = ambient;
    P.dim_ = d;
    P.hrep_.equalities = split_rows(canon.eq_rref);

    if (d == 0) {
        P.verts_ = {pts.front()};
        P.abasis_ = {0};
        return P;
    }

    // Coordinates u on the affine hull: x = base + N u, u = M (x - base).
    const Vector& base = pts[hull.basis[0]];
    std::vector<Vector> ncols;
    for (std::size_t j = 1; j <= d; ++j) ncols.push_back(vec_sub(pts[hull.basis[j]], base));
    Matrix N = Matrix::from_cols(ncols);
    Matrix Nt = N.transposed();
    auto NtN_inv = try_invert(Nt.mul(N));
    if (!NtN_inv) throw std::logic_error("from_vertices: affine basis degenerate");
    Matrix Mproj = NtN_inv->mul(Nt); // d x ambient

    std::vector<Vector> us;
    us.reserve(pts.size());
    for (const auto& p : pts) us.push_back(Mproj.mul(vec_sub(p, base)));

    // Facets = extreme rays of the valid-inequality cone {(g,h) : g.u <= h}.
    std::vector<Vector> rows;
    rows.reserve(us.size());
    for (const auto& u : us) {
        Vector r(d + 1);
        for (std::size_t j = 0; j < d; ++j) r[j] = -u[j];
        r[d] = Scalar(1);
        rows.push_back(std::move(r));
    }
    std::vector<Vector> facets_u = cone_extreme_rays(std::move(rows), d + 1);

    // Map back to ambient coordinates and canonicalize modulo the equalities.
    std::vector<Vector> facet_rows;
    for (const auto& f : facets_u) {
        Vector g(f.begin(), f.end() - 1);
        Vector a = Mproj.transposed().mul(g);
        Scalar b = f.back() + dot(a, base);
        Vector row = reduce_mod(canon.eq_rref, cat(a, b));
        normalize_direction(row);
        facet_rows.push_back(std::move(row));
    }
    facet_rows = sorted_unique(std::move(facet_rows));
    P.hrep_.inequalities = split_rows(facet_rows);

    // Keep exactly the extreme points: tight facet normals must span d dims.
    std::vector<Vector> extreme;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        RowBasis tight(d);
        for (const auto& f : facets_u) {
            Vector g(f.begin(), f.end() - 1);
            if ((dot(g, us[i]) - f.back()).is_zero()) tight.add(std::move(g));
            if (tight.rank() == d) break;
        }
        if (tight.rank() == d) extreme.push_back(pts[i]);
    }
    P.verts_ = std::move(extreme); // already sorted
    P.abasis_ = affine_hull(P.verts_).basis;
    P.dim_ = P.abasis_.size() - 1;
    return P;
}

Polytope Polytope::from_halfspaces(const HRep& hrep, std::size_t ambient) {
    for (const auto& [a, b] : hrep.inequalities)
        if (a.size() != ambient) throw std::invalid_argument("from_halfspaces: row size mismatch");
    for (const auto& [a, b] : hrep.equalities)
        if (a.size() != ambient) throw std::invalid_argument("from_halfspaces: row size mismatch");

    // The feasibility LP runs only on the paths that need its certificate;
    // bounded nonempty systems go straight to double description.
    auto feasibility = [&]() {
        lp::LinearProgram feas;
        feas.variables = ambient;
        feas.inequalities = hrep.inequalities;
        feas.equalities = hrep.equalities;
        return lp::solve(feas);
    };

    // Homogenization: a.x <= b t, t >= 0; equalities give two rows each.
    std::vector<Vector> rows;
    for (const auto& [a, b] : hrep.inequalities) {
        Vector r(ambient + 1);
        for (std::size_t j = 0; j < ambient; ++j) r[j] = -a[j];
        r[ambient] = b;
        rows.push_back(std::move(r));
    }
    for (const auto& [a, b] : hrep.equalities) {
        Vector r(ambient + 1);
        for (std::size_t j = 0; j < ambient; ++j) r[j] = -a[j];
        r[ambient] = b;
        rows.push_back(r);
        for (auto& v : r) v = -v;
        rows.push_back(std::move(r));
    }
    {
        Vector t(ambient + 1, Scalar(0));
        t[ambient] = Scalar(1);
        rows.push_back(std::move(t));
    }

    Matrix R = Matrix::from_rows(rows);
    if (rank(R) < ambient + 1) {
        // Lineality in the homogenized cone: either the set is empty, or it
        // contains a whole line.
        auto fout = feasibility();
        if (fout.status == lp::LpStatus::Infeasible) throw infeasible_error(fout.certificate);
        Vector k = kernel_basis(R).front();
        Vector dir(k.begin(), k.end() - 1);
        normalize_direction(dir);
        throw unbounded_error(std::move(dir));
    }

    std::vector<Vector> rays = cone_extreme_rays(std::move(rows), ambient + 1);
    std::vector<Vector> verts;
    Vector recession;
    for (const auto& r : rays) {
        if (r.back().is_zero()) {
            recession.assign(r.begin(), r.end() - 1);
            normalize_direction(recession);
            continue;
        }
        Scalar inv = r.back().inverse();
        Vector v(ambient);
        for (std::size_t j = 0; j < ambient; ++j) v[j] = r[j] * inv;
        verts.push_back(std::move(v));
    }
    if (verts.empty()) {
        auto fout = feasibility();
        if (fout.status != lp::LpStatus::Infeasible)
            throw std::logic_error("from_halfspaces: enumeration found no vertex of a nonempty set");
        throw infeasible_error(fout.certificate);
    }
    if (!recession.empty()) throw unbounded_error(std::move(recession));

    Canonical canon = canonical_hull_data(std::move(verts), ambient);

    Polytope P;
    P.ambient_ = ambient;
    P.verts_ = canon.verts;
    P.hrep_.equalities = split_rows(canon.eq_rref);
    P.abasis_ = affine_hull(P.verts_).basis;
    P.dim_ = P.abasis_.size() - 1;

    if (P.dim_ > 0) {
        // Facets are exactly the input rows tight on a (dim-1)-dimensional set.
        std::vector<Vector> cand;
        for (const auto& [a, b] : hrep.inequalities) {
            Vector row = reduce_mod(canon.eq_rref, cat(a, b));
            normalize_direction(row);
            if (std::none_of(row.begin(), row.end() - 1, [](const Scalar& s) { return !s.is_zero(); }))
                continue;
            cand.push_back(std::move(row));
        }
        cand = sorted_unique(std::move(cand));
        std::vector<Vector> facets;
        for (const auto& row : cand) {
            Vector a(row.begin(), row.end() - 1);
            std::vector<Vector> tight;
            for (const auto& v : P.verts_)
                if ((dot(a, v) - row.back()).is_zero()) tight.push_back(v);
            if (tight.empty()) continue;
            if (affine_hull(tight).dim == P.dim_ - 1) facets.push_back(row);
        }
        P.hrep_.inequalities = split_rows(facets);
    }
    return P;
}

Polytope Polytope::simplex(std::size_t n) {
    std::vector<Vector> pts;
    for (std::size_t i = 0; i <= n; ++i) {
        Vector e(n + 1, Scalar(0));
        e[i] = Scalar(1);
        pts.push_back(std::move(e));
    }
    return from_vertices(std::move(pts));
}

Polytope Polytope::parallelotope(std::size_t n) {
    HRep h;
    for (std::size_t i = 0; i < n; ++i) {
        Vector a(n, Scalar(0));
        a[i] = Scalar(1);
        h.inequalities.emplace_back(a, Scalar(1));
        for (auto& v : a) v = -v;
        h.inequalities.emplace_back(std::move(a), Scalar(0));
    }
    return from_halfspaces(h, n);
}

Polytope Polytope::pentagon() {
    const Scalar r5 = Scalar::sqrt_of(5);
    const Scalar quarter = Scalar::ratio(1, 4);
    const Scalar half = Scalar::ratio(1, 2);
    Scalar p = (r5 - Scalar(1)) * quarter;  // (sqrt5-1)/4
    Scalar q = -(Scalar(1) + r5) * quarter; // -(1+sqrt5)/4
    Scalar g = (r5 - Scalar(1)) * half;     // (sqrt5-1)/2
    std::vector<Vector> pts = {
        {Scalar(1), Scalar(0)}, {p, Scalar(1)}, {q, g}, {q, -g}, {p, Scalar(-1)},
    };
    return from_vertices(std::move(pts));
}

bool Polytope::contains(const Vector& x) const {
    if (x.size() != ambient_) throw std::invalid_argument("contains: ambient dimension mismatch");
    for (const auto& [a, b] : hrep_.equalities)
        if (dot(a, x) != b) return false;
    for (const auto& [a, b] : hrep_.inequalities)
        if ((dot(a, x) - b).sign() > 0) return false;
    return true;
}

bool Polytope::equals(const Polytope& other) const {
    if (ambient_ != other.ambient_) throw std::invalid_argument("equals: ambient dimension mismatch");
    if (verts_.size() != other.verts_.size()) return false;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if (!vec_eq(verts_[i], other.verts_[i])) return false;
    return true;
}

Polytope Polytope::minimal_face(const std::vector<Vector>& S) const {
    if (S.empty()) throw std::invalid_argument("minimal_face: empty point set");
    for (const auto& s : S)
        if (!contains(s)) throw std::invalid_argument("minimal_face: point outside polytope");
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < hrep_.inequalities.size(); ++i) {
        const auto& [a, b] = hrep_.inequalities[i];
        bool all = true;
        for (const auto& s : S)
            if (!(dot(a, s) - b).is_zero()) {
                all = false;
                break;
            }
        if (all) tight.push_back(i);
    }
    std::vector<Vector> fverts;
    for (const auto& v : verts_) {
        bool on = true;
        for (auto i : tight) {
            const auto& [a, b] = hrep_.inequalities[i];
            if (!(dot(a, v) - b).is_zero()) {
                on = false;
                break;
            }
        }
        if (on) fverts.push_back(v);
    }
    return from_vertices(std::move(fverts));
}

bool Polytope::check_invariants() const {
    if (verts_.empty()) return false;
    for (const auto& v : verts_)
        if (!contains(v)) return false;
    // equalities define the affine hull
    if (rank(Matrix::from_rows([&] {
            std::vector<Vector> rows;
            for (const auto& [a, b] : hrep_.equalities) rows.push_back(a);
            if (rows.empty()) rows.push_back(Vector(ambient_, Scalar(0)));
            return rows;
        }())) != ambient_ - dim_)
        return false;
    // every facet is tight on a (dim-1)-dimensional vertex set
    for (const auto& [a, b] : hrep_.inequalities) {
        std::vector<Vector> tight;
        for (const auto& v : verts_)
            if ((dot(a, v) - b).is_zero()) tight.push_back(v);
        if (tight.empty() || affine_hull(tight).dim != dim_ - 1) return false;
    }
    // every listed point is extreme: tight constraints span the ambient space
    for (const auto& v : verts_) {
        RowBasis rb(ambient_);
        for (const auto& [a, b] : hrep_.equalities) rb.add(a);
        for (const auto& [a, b] : hrep_.inequalities)
            if ((dot(a, v) - b).is_zero()) rb.add(a);
        if (rb.rank() != ambient_) return false;
    }
    for (std::size_t i = 1; i < verts_.size(); ++i)
        if (vec_lex_cmp(verts_[i - 1], verts_[i]) >= 0) return false;
    return true;
}

bool faces_meet(const Polytope& F, const Polytope& G) {
    if (F.ambient_dim() != G.ambient_dim()) throw std::invalid_argument("faces_meet: ambient mismatch");
    lp::LinearProgram p;
    p.variables = F.ambient_dim();
    auto append = [&](const Polytope& P) {
        for (const auto& [a, b] : P.hrep().inequalities) p.add_le(a, b);
        for (const auto& [a, b] : P.hrep().equalities) p.add_eq(a, b);
    };
    append(F);
    append(G);
    return lp::solve(p).status != lp::LpStatus::Infeasible;
}

} // namespace refinery
