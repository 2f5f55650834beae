#include "refinery/conjectures.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace refinery {

namespace {

std::size_t search_threads() {
    if (const char* env = std::getenv("REFINERY_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Barycentric grid points of the (k-1)-simplex with denominators 1..q,
/// each point listed once (gcd of numerators coprime to its denominator).
std::vector<std::vector<long>> grid_numerators(std::size_t k, unsigned q) {
    std::vector<std::vector<long>> out; // entry = [den, a_1..a_k]
    std::vector<long> part(k, 0);
    for (unsigned den = 1; den <= q; ++den) {
        // compositions of den into k nonnegative parts, lexicographic
        std::vector<long> a(k, 0);
        auto rec = [&](auto&& self, std::size_t pos, long rest) -> void {
            if (pos + 1 == k) {
                a[pos] = rest;
                long g = 0;
                for (long v : a) g = static_cast<long>(std::gcd(g, v));
                if (den == 1 || std::gcd(g, static_cast<long>(den)) == 1) {
                    std::vector<long> entry;
                    entry.push_back(den);
                    entry.insert(entry.end(), a.begin(), a.end());
                    out.push_back(std::move(entry));
                }
                return;
            }
            for (long v = 0; v <= rest; ++v) {
                a[pos] = v;
                self(self, pos + 1, rest - v);
            }
        };
        rec(rec, 0, static_cast<long>(den));
    }
    return out;
}

struct CandidateFamily {
    std::vector<Vector> points;     // grid points in T's ambient space
    std::size_t m = 0;              // extreme points of C
    std::uint64_t grid_total = 0;   // points.size()^m
    std::uint64_t pattern_total = 0;// m^k when k > m, else 0
    std::size_t k = 0;              // vertices of T

    std::uint64_t total() const { return grid_total + pattern_total; }
};

/// Decode flat index into an m-tuple of point indices (lexicographic).
std::vector<std::size_t> decode(std::uint64_t idx, std::size_t base, std::size_t digits) {
    std::vector<std::size_t> d(digits);
    for (std::size_t i = digits; i-- > 0;) {
        d[i] = static_cast<std::size_t>(idx % base);
        idx /= base;
    }
    return d;
}

} // namespace

GExistsResult g_exists_for_f(const StatisticalModel& M, const Polytope& T,
                             const PartialAffineMap& f) {
    if (!f.is_onto(M.C)) throw std::invalid_argument("g_exists_for_f: f is not onto C");
    MaximalG mg = maximal_g(M, T, f);
    GExistsResult res;
    res.lp_calls = mg.lp_calls;
    res.yes = mg.onto;
    if (mg.onto) {
        res.g = std::move(mg.g);
        res.omegaT = std::move(mg.omegaT);
    } else {
        for (auto& e : mg.extensions)
            if (!e.extendable) res.failures.push_back(std::move(e));
    }
    return res;
}

SearchResult search_refinement(const SearchSpec& spec) {
    if (spec.simplex_vertex_count < 2) throw std::invalid_argument("search: need at least 2 vertices");
    if (spec.grid_q < 1) throw std::invalid_argument("search: grid denominator must be >= 1");

    const StatisticalModel& M = spec.model;
    const std::size_t k = spec.simplex_vertex_count;
    const std::size_t m = M.C.vertices().size();
    Polytope T = Polytope::simplex(k - 1);

    CandidateFamily fam;
    fam.k = k;
    fam.m = m;
    auto nums = grid_numerators(k, spec.grid_q);
    for (const auto& entry : nums) {
        Vector p(k);
        for (std::size_t j = 0; j < k; ++j) p[j] = Scalar(Rational(entry[j + 1]) / Rational(entry[0]));
        fam.points.push_back(std::move(p));
    }
    fam.grid_total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (fam.grid_total > UINT64_MAX / fam.points.size())
            throw std::invalid_argument("search: family too large to index");
        fam.grid_total *= fam.points.size();
    }
    if (k > m) {
        fam.pattern_total = 1;
        for (std::size_t i = 0; i < k; ++i) fam.pattern_total *= m;
    }

    SearchResult result;
    result.verdict = SearchResult::Verdict::ExhaustedNoWitness;

    const std::uint64_t limit = std::min<std::uint64_t>(fam.total(), spec.budget);

    // Rational affine dependencies of C's extreme points, precomputed: a
    // rational lambda is a dependency iff it kills the rational and radical
    // parts of every coordinate and sums to zero.
    Matrix dep(2 * M.C.ambient_dim() + 1, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t c = 0; c < M.C.ambient_dim(); ++c) {
            const Scalar& s = M.C.vertices()[j][c];
            dep(2 * c, j) = Scalar(s.rational_part());
            dep(2 * c + 1, j) = Scalar(s.radical_part());
        }
        dep(2 * M.C.ambient_dim(), j) = Scalar(1);
    }
    const bool no_rational_dependency = kernel_basis(dep).empty();

    // Stage A filter: pure per-candidate affine-consistency check. A grid
    // candidate is consistent iff every affine dependency of its points is a
    // dependency of C's extreme points; pattern candidates are consistent by
    // construction and only need surjectivity.
    auto consistent = [&](std::uint64_t idx, std::vector<Vector>& pts_out,
                          std::vector<Vector>& imgs_out) -> bool {
        if (idx < fam.grid_total) {
            // When C has no rational dependency, a consistent candidate needs
            // m linearly independent columns in R^k, impossible for m > k.
            if (no_rational_dependency && m > k) return false;
            auto digits = decode(idx, fam.points.size(), m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    if (digits[i] == digits[j]) return false;
            std::vector<Vector> pts;
            pts.reserve(m);
            for (auto d : digits) pts.push_back(fam.points[d]);
            // kernel of the (k x m) matrix with columns p_j (the all-ones
            // affine row is implied: simplex coordinates sum to 1)
            Matrix P(k, m);
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t r = 0; r < k; ++r) P(r, c) = pts[c][r];
            for (const auto& lam : kernel_basis(P)) {
                for (std::size_t r = 0; r < dep.rows; ++r) {
                    Scalar acc;
                    for (std::size_t j = 0; j < m; ++j)
                        if (!lam[j].is_zero()) acc += dep(r, j) * lam[j];
                    if (!acc.is_zero()) return false;
                }
            }
            pts_out = std::move(pts);
            imgs_out = M.C.vertices();
            return true;
        }
        // pattern candidate: digits over targets, must be surjective
        auto digits = decode(idx - fam.grid_total, m, k);
        std::vector<bool> hit(m, false);
        for (auto d : digits) hit[d] = true;
        for (bool h : hit)
            if (!h) return false;
        bool collapse = false; // skip bijections: already in the grid family
        for (std::size_t i = 0; i < k && !collapse; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (digits[i] == digits[j]) {
                    collapse = true;
                    break;
                }
        if (!collapse) return false;
        pts_out = T.vertices();
        imgs_out.clear();
        for (std::size_t i = 0; i < k; ++i) imgs_out.push_back(M.C.vertices()[digits[i]]);
        return true;
    };

    const std::size_t nthreads = search_threads();
    const std::uint64_t block = 8192;
    std::uint64_t next = 0;

    while (next < limit) {
        std::uint64_t end = std::min<std::uint64_t>(limit, next + block * nthreads);
        std::vector<std::vector<std::uint64_t>> found(nthreads);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) {
            std::uint64_t lo = next + t * block;
            std::uint64_t hi = std::min<std::uint64_t>(end, lo + block);
            if (lo >= hi) break;
            pool.emplace_back([&, t, lo, hi] {
                std::vector<Vector> pts, imgs;
                for (std::uint64_t i = lo; i < hi; ++i)
                    if (consistent(i, pts, imgs)) found[t].push_back(i);
            });
        }
        for (auto& th : pool) th.join();

        std::vector<std::uint64_t> survivors;
        for (const auto& f : found) survivors.insert(survivors.end(), f.begin(), f.end());
        std::sort(survivors.begin(), survivors.end());

        // Stage B: ordered, sequential LP decisions on the survivors.
        for (std::uint64_t idx : survivors) {
            std::vector<Vector> pts, imgs;
            consistent(idx, pts, imgs);
            ++result.stats.consistent;
            Polytope dom = Polytope::from_vertices(pts);
            auto fcand = PartialAffineMap::try_from_images(dom, pts, imgs);
            if (!fcand) continue; // consistency filter is exact, but stay safe
            if (!fcand->is_onto(M.C)) continue;
            GExistsResult ge = g_exists_for_f(M, T, *fcand);
            result.stats.lp_calls += ge.lp_calls;
            if (ge.yes) {
                Refinement R{T, std::move(*ge.omegaT), std::move(*fcand), std::move(*ge.g)};
                if (!verify_refinement(R, M).all_pass())
                    throw std::logic_error("search: found bundle failed re-verification");
                result.verdict = SearchResult::Verdict::Found;
                result.witness = std::move(R);
                result.stats.candidates = idx + 1;
                // recount consistency deterministically up to the hit
                result.stats.consistent = 0;
                std::vector<Vector> tp, ti;
                for (std::uint64_t i = 0; i <= idx; ++i)
                    if (consistent(i, tp, ti)) ++result.stats.consistent;
                return result;
            }
        }
        next = end;
        result.stats.candidates = next;
    }

    if (limit < fam.total()) result.verdict = SearchResult::Verdict::BudgetExhausted;
    result.stats.candidates = limit;
    return result;
}

FactorResult factor_through_projection(const StatisticalModel& M, const Refinement& R) {
    if (!verify_refinement(R, M).all_pass())
        throw std::invalid_argument("factor_through_projection: refinement does not verify");

    const std::size_t m = M.C.vertices().size();
    const std::size_t ta = R.T.ambient_dim();
    Polytope Tp = Polytope::simplex(m - 1);

    // Unknown affine h: R^{ta} -> R^m given by matrix H and offset o;
    // variables H(i,j) at i*ta+j, o_i at m*ta+i.
    lp::LinearProgram p;
    p.variables = m * ta + m;
    auto hrow = [&](std::size_t i, const Vector& a) {
        Vector row(p.variables, Scalar(0));
        for (std::size_t j = 0; j < ta; ++j) row[i * ta + j] = a[j];
        row[m * ta + i] = Scalar(1);
        return row; // h(a)_i as a linear functional of the unknowns
    };
    for (const auto& a : R.f.domain().vertices()) {
        Vector fa = R.f.apply_formula(a);
        // h(a) lies in the simplex: nonnegative, sums to one
        Vector sum(p.variables, Scalar(0));
        for (std::size_t i = 0; i < m; ++i) {
            Vector row = hrow(i, a);
            for (std::size_t v = 0; v < p.variables; ++v) sum[v] += row[v];
            for (auto& c : row) c = -c;
            p.add_le(std::move(row), Scalar(0)); // h(a)_i >= 0
        }
        p.add_eq(std::move(sum), Scalar(1));
        // f_p(h(a)) = f(a): sum_i h(a)_i s_i = f(a) coordinatewise
        for (std::size_t c = 0; c < M.C.ambient_dim(); ++c) {
            Vector row(p.variables, Scalar(0));
            for (std::size_t i = 0; i < m; ++i) {
                Vector hi = hrow(i, a);
                const Scalar& sc = M.C.vertices()[i][c];
                if (sc.is_zero()) continue;
                for (std::size_t v = 0; v < p.variables; ++v) row[v] += sc * hi[v];
            }
            p.add_eq(std::move(row), fa[c]);
        }
    }

    auto out = lp::solve(p);
    FactorResult res;
    res.problem = p;
    if (out.status == lp::LpStatus::Infeasible) {
        res.yes = false;
        res.certificate = out.certificate;
        return res;
    }

    Matrix H(m, ta);
    Vector o(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < ta; ++j) H(i, j) = out.point[i * ta + j];
        o[i] = out.point[m * ta + i];
    }
    PartialAffineMap h(H, o, R.f.domain());
    // exact witness check: f = f_p o h on the domain, h lands in the simplex
    std::vector<Vector> units;
    for (std::size_t j = 0; j < m; ++j) {
        Vector e(m, Scalar(0));
        e[j] = Scalar(1);
        units.push_back(std::move(e));
    }
    PartialAffineMap fp = PartialAffineMap::from_images(Tp, units, M.C.vertices());
    for (const auto& a : R.f.domain().vertices()) {
        Vector ha = h.apply_formula(a);
        if (!Tp.contains(ha)) throw std::logic_error("factor witness leaves the simplex");
        if (!vec_eq(fp.apply_formula(ha), R.f.apply_formula(a)))
            throw std::logic_error("factor witness fails f = f_p o h");
    }
    res.yes = true;
    res.h = std::move(h);
    return res;
}

Conjecture3Report conjecture3_check(const StatisticalModel& M, const Refinement& R) {
    if (!verify_refinement(R, M).all_pass())
        throw std::invalid_argument("conjecture3_check: refinement does not verify");

    Conjecture3Report rep;
    const auto& ext = M.C.vertices();
    for (std::size_t i = 0; i < ext.size(); ++i) {
        for (std::size_t j = i + 1; j < ext.size(); ++j) {
            auto pa = R.f.preimage(Polytope::from_vertices({ext[i]}));
            auto pb = R.f.preimage(Polytope::from_vertices({ext[j]}));
            if (!pa || !pb) throw std::logic_error("conjecture3_check: onto map with empty fibre");
            Polytope A = R.T.minimal_face(pa->vertices());
            Polytope B = R.T.minimal_face(pb->vertices());
            FacePairEntry e;
            e.a_index = i;
            e.b_index = j;
            e.face_a_dim = A.dim();
            e.face_b_dim = B.dim();
            e.disjoint = !faces_meet(A, B);
            if (!e.disjoint) ++rep.violations;
            rep.pairs.push_back(std::move(e));
        }
    }
    return rep;
}

} // namespace refinery
