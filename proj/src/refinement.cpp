#include "refinery/refinement.hpp"

#include <algorithm>

namespace refinery {

namespace {

Vector unit(std::size_t n, std::size_t i) {
    Vector e(n, Scalar(0));
    e[i] = Scalar(1);
    return e;
}

std::string point_str(const Vector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + ")";
}

/// Decide whether a form on C with the given values at the dom(f) vertices
/// extends to a convex form on T. mu_rows[k] are the weights of the k-th
/// dom(f) vertex over T's vertices.
FormExtension decide_extension(const FormSpace& omegaT, const std::vector<Vector>& mu_rows,
                               const Vector& required, std::size_t form_index) {
    FormExtension ext;
    ext.form_index = form_index;
    lp::LinearProgram p;
    p.variables = omegaT.space().ambient_dim();
    for (const auto& [a, b] : omegaT.space().hrep().inequalities) p.add_le(a, b);
    for (const auto& [a, b] : omegaT.space().hrep().equalities) p.add_eq(a, b);
    for (std::size_t k = 0; k < mu_rows.size(); ++k) p.add_eq(mu_rows[k], required[k]);
    auto out = lp::solve(p);
    ext.problem = p;
    if (out.status == lp::LpStatus::Infeasible) {
        ext.extendable = false;
        ext.certificate = out.certificate;
    } else {
        ext.extendable = true;
        ext.witness = out.point;
    }
    return ext;
}

std::vector<Vector> domain_vertex_weights(const FormSpace& omegaT, const PartialAffineMap& f) {
    std::vector<Vector> mu;
    mu.reserve(f.domain().vertices().size());
    for (const auto& a : f.domain().vertices()) mu.push_back(omegaT.point_weights(a));
    return mu;
}

} // namespace

StatisticalModel make_model(Polytope C) {
    FormSpace F = FormSpace::build(C);
    return {std::move(C), std::move(F)};
}

Scalar golden_section() { return (Scalar::sqrt_of(5) - Scalar(1)) * Scalar::ratio(1, 2); }

std::vector<Vector> pentagon_points() {
    const Scalar r5 = Scalar::sqrt_of(5);
    const Scalar quarter = Scalar::ratio(1, 4);
    Scalar p = (r5 - Scalar(1)) * quarter;
    Scalar q = -(Scalar(1) + r5) * quarter;
    Scalar g = golden_section();
    return {{Scalar(1), Scalar(0)}, {p, Scalar(1)}, {q, g}, {q, -g}, {p, Scalar(-1)}};
}

MaximalG maximal_g(const StatisticalModel& M, const Polytope& T, const PartialAffineMap& f) {
    if (f.source_ambient() != T.ambient_dim())
        throw std::invalid_argument("maximal_g: f does not live on T's space");
    if (f.target_ambient() != M.C.ambient_dim())
        throw std::invalid_argument("maximal_g: f does not land in C's space");

    FormSpace omegaT = FormSpace::build(T);
    const std::size_t m = omegaT.space().ambient_dim(); // = dim T + 1
    const std::size_t nC = M.omega.space().ambient_dim();   // = dim C + 1

    // Row k: weights of f(a_k) over C's affine basis, so that a form with
    // coordinates z takes value W(k,:).z at f(a_k).
    const auto& dverts = f.domain().vertices();
    Matrix W(dverts.size(), nC);
    for (std::size_t k = 0; k < dverts.size(); ++k)
        W.set_row(k, M.omega.point_weights(f.apply_formula(dverts[k])));
    std::vector<Vector> mu = domain_vertex_weights(omegaT, f);

    // domain(g): forms on T constant on the fibres of f, i.e. the values
    // w(a_k) = mu_k . y must satisfy every left-kernel relation of W.
    HRep dom = omegaT.space().hrep();
    for (const auto& u : kernel_basis(W.transposed())) {
        Vector row(m, Scalar(0));
        for (std::size_t k = 0; k < dverts.size(); ++k)
            if (!u[k].is_zero()) row = vec_add(row, vec_scale(u[k], mu[k]));
        dom.equalities.emplace_back(std::move(row), Scalar(0));
    }
    Polytope gdomain = Polytope::from_halfspaces(dom, m);

    // Linear formula: pick dim(C)+1 independent rows of W and solve for z.
    RowBasis rb(nC);
    std::vector<std::size_t> sel;
    for (std::size_t k = 0; k < dverts.size() && sel.size() < nC; ++k)
        if (rb.add(W.row(k))) sel.push_back(k);
    if (sel.size() != nC) throw std::invalid_argument("maximal_g: f is not onto C");
    Matrix Wsub(nC, nC), Musub(nC, m);
    for (std::size_t r = 0; r < nC; ++r) {
        Wsub.set_row(r, W.row(sel[r]));
        Musub.set_row(r, mu[sel[r]]);
    }
    auto Winv = try_invert(Wsub);
    if (!Winv) throw std::logic_error("maximal_g: selected rows not invertible");
    Matrix glin = Winv->mul(Musub); // z = Wsub^{-1} (mu_sel y)

    MaximalG out{PartialAffineMap(std::move(glin), Vector(nC, Scalar(0)), std::move(gdomain)),
                 std::move(omegaT),
                 {},
                 true,
                 0};

    // Extendability of every extreme form of Omega_C.
    const auto& exforms = M.omega.space().vertices();
    for (std::size_t i = 0; i < exforms.size(); ++i) {
        Vector required(dverts.size());
        for (std::size_t k = 0; k < dverts.size(); ++k) {
            Scalar acc;
            for (std::size_t c = 0; c < nC; ++c) acc += W(k, c) * exforms[i][c];
            required[k] = acc;
        }
        out.extensions.push_back(decide_extension(out.omegaT, mu, required, i));
        ++out.lp_calls;
        if (!out.extensions.back().extendable) out.onto = false;
    }
    return out;
}

Refinement holevo_refinement(const StatisticalModel& M) {
    const std::size_t m = M.C.vertices().size();
    Polytope T = Polytope::simplex(m - 1);
    // f sends the j-th basis vector to the j-th extreme point of C.
    std::vector<Vector> units;
    for (std::size_t j = 0; j < m; ++j) units.push_back(unit(m, j));
    PartialAffineMap f = PartialAffineMap::from_images(T, units, M.C.vertices());
    MaximalG mg = maximal_g(M, T, f);
    return Refinement{std::move(T), std::move(mg.omegaT), std::move(f), std::move(mg.g)};
}

VerificationReport verify_refinement(const Refinement& R, const StatisticalModel& M) {
    if (R.f.source_ambient() != R.T.ambient_dim() || R.f.target_ambient() != M.C.ambient_dim() ||
        R.g.source_ambient() != R.omegaT.space().ambient_dim() ||
        R.g.target_ambient() != M.omega.space().ambient_dim())
        throw std::invalid_argument("verify_refinement: inconsistent ambient dimensions");

    VerificationReport rep;

    // I: T is a simplex.
    if (R.T.vertices().size() != R.T.dim() + 1) {
        rep.simplex.pass = false;
        rep.simplex.detail = "T has " + std::to_string(R.T.vertices().size()) +
                             " extreme points but dimension " + std::to_string(R.T.dim());
        Matrix A(R.T.ambient_dim() + 1, R.T.vertices().size());
        for (std::size_t j = 0; j < R.T.vertices().size(); ++j) {
            for (std::size_t r = 0; r < R.T.ambient_dim(); ++r) A(r, j) = R.T.vertices()[j][r];
            A(R.T.ambient_dim(), j) = Scalar(1);
        }
        auto kern = kernel_basis(A);
        if (!kern.empty()) rep.simplex.witnesses.push_back(kern.front()); // affine dependency
    } else {
        rep.simplex.detail = "T is a " + std::to_string(R.T.dim()) + "-simplex";
    }

    // II: f partial (domain inside T), affine by construction, onto C.
    for (const auto& v : R.f.domain().vertices())
        if (!R.T.contains(v)) {
            rep.f_partial_onto.pass = false;
            rep.f_partial_onto.detail = "dom(f) leaves T at " + point_str(v);
            rep.f_partial_onto.witnesses.push_back(v);
        }
    if (rep.f_partial_onto.pass) {
        Polytope img = R.f.image();
        if (!img.equals(M.C)) {
            rep.f_partial_onto.pass = false;
            for (const auto& v : M.C.vertices())
                if (!img.contains(v)) {
                    rep.f_partial_onto.detail = "uncovered extreme point " + point_str(v);
                    rep.f_partial_onto.witnesses.push_back(v);
                    break;
                }
            if (rep.f_partial_onto.witnesses.empty())
                for (const auto& v : img.vertices())
                    if (!M.C.contains(v)) {
                        rep.f_partial_onto.detail = "image of f leaves C at " + point_str(v);
                        rep.f_partial_onto.witnesses.push_back(v);
                        break;
                    }
        } else {
            rep.f_partial_onto.detail = "f onto C";
        }
    }

    // III: g partial (domain inside Omega_T), onto Omega_C.
    for (const auto& w : R.g.domain().vertices())
        if (!R.omegaT.space().contains(w)) {
            rep.g_partial_onto.pass = false;
            rep.g_partial_onto.detail = "dom(g) leaves Omega_T at " + point_str(w);
            rep.g_partial_onto.witnesses.push_back(w);
        }
    if (rep.g_partial_onto.pass) {
        Polytope img = R.g.image();
        if (!img.equals(M.omega.space())) {
            rep.g_partial_onto.pass = false;
            for (const auto& w : M.omega.space().vertices())
                if (!img.contains(w)) {
                    rep.g_partial_onto.detail = "extreme form without counter-image " + point_str(w);
                    rep.g_partial_onto.witnesses.push_back(w);
                    break;
                }
            if (rep.g_partial_onto.witnesses.empty())
                for (const auto& w : img.vertices())
                    if (!M.omega.space().contains(w)) {
                        rep.g_partial_onto.detail = "image of g leaves Omega_C at " + point_str(w);
                        rep.g_partial_onto.witnesses.push_back(w);
                        break;
                    }
        } else {
            rep.g_partial_onto.detail = "g onto Omega_C";
        }
    }

    // IV: compatibility at every (dom f vertex, dom g vertex) pair; both
    // sides are affine in each argument, so the vertex grid decides it.
    std::size_t pairs = 0;
    for (const auto& a : R.f.domain().vertices()) {
        Vector fa = R.f.apply_formula(a);
        Vector wa = R.omegaT.point_weights(a);
        Vector ca;
        bool fa_ok = true;
        try {
            ca = M.omega.point_weights(fa);
        } catch (const std::invalid_argument&) {
            fa_ok = false;
        }
        for (const auto& w : R.g.domain().vertices()) {
            ++pairs;
            Scalar rhs = dot(wa, w);
            if (!fa_ok) {
                rep.compatibility.pass = false;
                rep.compatibility.detail = "f(a) outside aff(C) at a = " + point_str(a);
                rep.compatibility.witnesses.push_back(a);
                break;
            }
            Scalar lhs = dot(ca, R.g.apply_formula(w));
            if (lhs != rhs) {
                rep.compatibility.pass = false;
                rep.compatibility.detail = "g(w).f(a) != w.a at a = " + point_str(a) +
                                           ", w = " + point_str(w) + " (" + lhs.str() +
                                           " vs " + rhs.str() + ")";
                rep.compatibility.witnesses.push_back(a);
                rep.compatibility.witnesses.push_back(w);
                break;
            }
        }
        if (!rep.compatibility.pass) break;
    }
    if (rep.compatibility.pass)
        rep.compatibility.detail = "exact at all " + std::to_string(pairs) + " vertex pairs";
    return rep;
}

std::pair<StatisticalModel, Refinement> example_parallelogram() {
    StatisticalModel M = make_model(Polytope::parallelotope(2));
    Polytope T = Polytope::simplex(3);
    std::vector<Vector> units;
    for (std::size_t j = 0; j < 4; ++j) units.push_back(unit(4, j));
    PartialAffineMap f = PartialAffineMap::from_images(T, units, M.C.vertices());
    MaximalG mg = maximal_g(M, T, f);

    // The domain listed in the worked example: the pullbacks v o f of the six
    // extreme forms of the octahedron (the four 0/1 forms plus both constants).
    std::vector<Vector> gens;
    for (const auto& z : M.omega.space().vertices()) {
        Vector w(T.vertices().size());
        for (std::size_t k = 0; k < T.vertices().size(); ++k)
            w[k] = M.omega.value_at_point(z, f.apply_formula(T.vertices()[k]));
        gens.push_back(std::move(w));
    }
    PartialAffineMap g(mg.g.linear(), mg.g.offset(), Polytope::from_vertices(gens));
    Refinement R{std::move(T), std::move(mg.omegaT), std::move(f), std::move(g)};
    return {std::move(M), std::move(R)};
}

namespace {

// Paired index helpers for the decatope examples: pair i (1-based, cyclic)
// covers coordinates 2i-1, 2i in the written order e_1..e_10.
struct PairedCoords {
    Polytope T = Polytope::simplex(9);
    std::vector<std::size_t> pos; // pos[j] = index of e_{j+1} in T.vertices()

    PairedCoords() {
        pos.resize(10);
        for (std::size_t j = 0; j < 10; ++j) {
            Vector e = unit(10, j);
            auto it = std::find_if(T.vertices().begin(), T.vertices().end(),
                                   [&](const Vector& v) { return vec_eq(v, e); });
            pos[j] = static_cast<std::size_t>(it - T.vertices().begin());
        }
    }

    // values given in written order -> coordinates in canonical vertex order
    Vector coords(const Vector& written) const {
        Vector y(10, Scalar(0));
        for (std::size_t j = 0; j < 10; ++j) y[pos[j]] = written[j];
        return y;
    }
};

Vector complement(const Vector& y) {
    Vector c(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) c[i] = Scalar(1) - y[i];
    return c;
}

} // namespace

std::pair<StatisticalModel, Refinement> example_pentagon_midpoint() {
    StatisticalModel M = make_model(Polytope::pentagon());
    PairedCoords pc;
    const Scalar alpha = golden_section();
    const Scalar half = Scalar::ratio(1, 2);

    // f on the five midpoints (e_{2i-1}+e_{2i})/2 (ambient coordinates).
    std::vector<Vector> mids;
    for (std::size_t i = 0; i < 5; ++i) {
        Vector m(10, Scalar(0));
        m[2 * i] = half;
        m[2 * i + 1] = half;
        mids.push_back(std::move(m));
    }
    PartialAffineMap f =
        PartialAffineMap::from_images(Polytope::from_vertices(mids), mids, pentagon_points());
    MaximalG mg = maximal_g(M, pc.T, f);

    // g on the ten segments rho_i (both endpoints), their complements, and
    // the two constants. rho_i puts 1 on pair i, beta on the odd coordinates
    // of the neighbouring pairs and 2*alpha - beta on their even coordinates.
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < 5; ++i) {
        std::size_t prev = (i + 4) % 5, next = (i + 1) % 5;
        for (const Scalar& beta : {Scalar(2) * alpha - Scalar(1), Scalar(1)}) {
            Scalar c = Scalar(2) * alpha - beta;
            Vector w(10, Scalar(0));
            w[2 * i] = Scalar(1);
            w[2 * i + 1] = Scalar(1);
            w[2 * prev] = beta;
            w[2 * next] = beta;
            w[2 * prev + 1] = c;
            w[2 * next + 1] = c;
            gens.push_back(pc.coords(w));
            gens.push_back(complement(gens.back()));
        }
    }
    gens.push_back(Vector(10, Scalar(0)));
    gens.push_back(Vector(10, Scalar(1)));

    PartialAffineMap g(mg.g.linear(), mg.g.offset(), Polytope::from_vertices(gens));
    Refinement R{pc.T, std::move(mg.omegaT), std::move(f), std::move(g)};
    return {std::move(M), std::move(R)};
}

std::pair<StatisticalModel, Refinement> example_pentagon_edges() {
    StatisticalModel M = make_model(Polytope::pentagon());
    PairedCoords pc;
    const Scalar alpha = golden_section();
    const auto s = pentagon_points();

    // Total projection collapsing the edge conv{e_{2i-1}, e_{2i}} to s_i.
    std::vector<Vector> images(10);
    for (std::size_t j = 0; j < 10; ++j) images[pc.pos[j]] = s[j / 2];
    PartialAffineMap f = PartialAffineMap::from_images(pc.T, pc.T.vertices(), images);
    MaximalG mg = maximal_g(M, pc.T, f);

    // g at the five written forms, their complements, and the constants:
    // w_i has 1 on pair i and alpha on both neighbouring pairs.
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < 5; ++i) {
        std::size_t prev = (i + 4) % 5, next = (i + 1) % 5;
        Vector w(10, Scalar(0));
        w[2 * i] = Scalar(1);
        w[2 * i + 1] = Scalar(1);
        for (std::size_t p : {prev, next}) {
            w[2 * p] = alpha;
            w[2 * p + 1] = alpha;
        }
        gens.push_back(pc.coords(w));
        gens.push_back(complement(gens.back()));
    }
    gens.push_back(Vector(10, Scalar(0)));
    gens.push_back(Vector(10, Scalar(1)));

    PartialAffineMap g(mg.g.linear(), mg.g.offset(), Polytope::from_vertices(gens));
    Refinement R{pc.T, std::move(mg.omegaT), std::move(f), std::move(g)};
    return {std::move(M), std::move(R)};
}

CounterexampleReport counterexample_section() {
    // Midpoint square inside the 3-simplex: the slice through the four edge
    // midpoints joining {e1,e2} to {e3,e4}.
    Polytope T = Polytope::simplex(3);
    const Scalar half = Scalar::ratio(1, 2);
    auto mid = [&](std::size_t i, std::size_t j) {
        Vector v(4, Scalar(0));
        v[i] = half;
        v[j] = half;
        return v;
    };
    std::vector<Vector> sq = {mid(0, 2), mid(0, 3), mid(1, 2), mid(1, 3)};
    StatisticalModel M = make_model(Polytope::from_vertices(sq));

    CounterexampleReport rep;
    rep.section = M.C;
    PartialAffineMap f = PartialAffineMap::identity(M.C);
    FormSpace omegaT = FormSpace::build(T);
    std::vector<Vector> mu = domain_vertex_weights(omegaT, f);

    auto run = [&](const Vector& coords, const std::string& label) {
        Vector required(M.C.vertices().size());
        for (std::size_t k = 0; k < M.C.vertices().size(); ++k)
            required[k] = M.omega.value_at_point(coords, M.C.vertices()[k]);
        FormExtension ext = decide_extension(omegaT, mu, required, 0);
        ExtensionEntry e;
        e.label = label;
        e.required_values = required;
        e.feasible = ext.extendable;
        e.witness = ext.witness;
        e.certificate = ext.certificate;
        e.problem = ext.problem;
        rep.entries.push_back(std::move(e));
    };

    const auto& exforms = M.omega.space().vertices();
    for (std::size_t i = 0; i < exforms.size(); ++i) {
        Vector row = M.omega.value_row(exforms[i]);
        bool constant0 = true, constant1 = true;
        for (const auto& v : row) {
            if (!v.is_zero()) constant0 = false;
            if (v != Scalar(1)) constant1 = false;
        }
        std::string label = constant0 ? "null form" : constant1 ? "unit form" : "extreme form";
        run(exforms[i], label + " #" + std::to_string(i));
    }
    // midpoint of the bicone, a non-extreme sanity entry
    Vector mid_form(M.omega.space().ambient_dim(), half);
    run(mid_form, "central form (1/2)");
    return rep;
}

SectionCheckReport linusson_check(const StatisticalModel& M, const Polytope& T,
                                  const PartialAffineMap& f) {
    if (T.vertices().size() != T.dim() + 1)
        throw std::invalid_argument("linusson_check: T is not a simplex");
    for (const auto& v : f.domain().vertices())
        if (!T.contains(v)) throw std::invalid_argument("linusson_check: dom(f) leaves T");
    if (!f.is_injective_on_domain())
        throw std::invalid_argument("linusson_check: f is not injective on its domain");
    if (!f.is_onto(M.C)) throw std::invalid_argument("linusson_check: f is not onto C");

    MaximalG mg = maximal_g(M, T, f);
    SectionCheckReport rep;
    rep.extensions = std::move(mg.extensions);
    for (const auto& e : rep.extensions)
        if (!e.extendable) ++rep.non_extendable;
    rep.surjective_g_possible = (rep.non_extendable == 0);
    return rep;
}

std::optional<Polytope> extreme_value_fiber(const PartialAffineMap& m, const Polytope& image_space,
                                            const Vector& v) {
    // v must be listed extreme in image_space and every domain vertex must
    // map into image_space; both are verified exactly.
    bool v_extreme = false;
    for (const auto& z : image_space.vertices())
        if (vec_eq(z, v)) v_extreme = true;
    if (!v_extreme) return std::nullopt;
    std::vector<Vector> fiber;
    for (const auto& p : m.domain().vertices()) {
        Vector img = m.apply_formula(p);
        if (!image_space.contains(img)) return std::nullopt;
        if (vec_eq(img, v)) fiber.push_back(p);
    }
    if (fiber.empty()) return std::nullopt;
    return Polytope::from_vertices(std::move(fiber));
}

std::pair<Polytope, PartialAffineMap> section_embedding(const Polytope& C) {
    if (C.dim() != C.ambient_dim())
        throw std::invalid_argument("section_embedding: polytope must be full-dimensional");
    const auto& facets = C.hrep().inequalities;
    const std::size_t F = facets.size();
    const std::size_t n = C.ambient_dim();

    // Positive weights c with sum c_i a_i = 0 and sum c_i b_i = 1, found by
    // maximizing the smallest weight.
    lp::LinearProgram p;
    p.variables = F + 1; // c_1..c_F, t
    for (std::size_t j = 0; j < n; ++j) {
        Vector row(F + 1, Scalar(0));
        for (std::size_t i = 0; i < F; ++i) row[i] = facets[i].first[j];
        p.add_eq(std::move(row), Scalar(0));
    }
    {
        Vector row(F + 1, Scalar(0));
        for (std::size_t i = 0; i < F; ++i) row[i] = facets[i].second;
        p.add_eq(std::move(row), Scalar(1));
    }
    for (std::size_t i = 0; i < F; ++i) {
        Vector row(F + 1, Scalar(0));
        row[i] = Scalar(-1);
        row[F] = Scalar(1);
        p.add_le(std::move(row), Scalar(0)); // t <= c_i
        Vector cap(F + 1, Scalar(0));
        cap[i] = Scalar(1);
        p.add_le(std::move(cap), Scalar(1)); // c_i <= 1
    }
    Vector obj(F + 1, Scalar(0));
    obj[F] = Scalar(1);
    p.objective = obj;
    auto out = lp::solve(p);
    if (out.status != lp::LpStatus::Optimal || out.value.sign() <= 0)
        throw std::logic_error("section_embedding: no positive facet combination");

    // phi(x)_i = c_i (b_i - a_i.x) maps C onto a section of the simplex.
    auto phi = [&](const Vector& x) {
        Vector y(F);
        for (std::size_t i = 0; i < F; ++i)
            y[i] = out.point[i] * (facets[i].second - dot(facets[i].first, x));
        return y;
    };
    std::vector<Vector> embedded;
    for (const auto& v : C.vertices()) embedded.push_back(phi(v));
    Polytope domain = Polytope::from_vertices(embedded);
    PartialAffineMap f = PartialAffineMap::from_images(std::move(domain), embedded, C.vertices());
    return {Polytope::simplex(F - 1), std::move(f)};
}

} // namespace refinery
