#include "refinery/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace refinery::io {

namespace {

struct Lines {
    std::vector<std::string> text;
    std::size_t pos = 0;

    explicit Lines(const std::string& s) {
        std::istringstream in(s);
        std::string line;
        while (std::getline(in, line)) text.push_back(line);
    }

    bool done() const { return pos >= text.size(); }
    const std::string& peek() const { return text[pos]; }
    std::size_t lineno() const { return pos + 1; }
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

bool is_data_line(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == 's';
    }
    return false;
}

[[noreturn]] void fail(const Lines& in, const std::string& msg, std::size_t col = 1) {
    throw parse_error(msg, in.done() ? in.text.size() : in.lineno(), col);
}

Scalar parse_scalar_tok(const Lines& in, const std::string& tok, unsigned field_d) {
    Scalar s;
    try {
        s = Scalar::parse(tok);
    } catch (const std::invalid_argument& e) {
        fail(in, std::string("bad scalar '") + tok + "': " + e.what());
    }
    if (!s.is_rational() && s.radicand() != field_d)
        fail(in, "scalar '" + tok + "' does not live in the declared field");
    return s;
}

struct Header {
    std::size_t ambient;
    unsigned field_d; // 0 for Q
};

Header parse_header(Lines& in) {
    while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
    if (in.done()) fail(in, "missing 'ambient' header");
    auto toks = tokens_of(in.peek());
    if (toks.size() != 4 || toks[0] != "ambient" || toks[2] != "field")
        fail(in, "expected 'ambient <n> field <Q|Qsqrt(d)>'");
    Header h{};
    try {
        h.ambient = std::stoul(toks[1]);
    } catch (...) {
        fail(in, "bad ambient dimension '" + toks[1] + "'");
    }
    if (toks[3] == "Q") {
        h.field_d = 0;
    } else if (toks[3].rfind("Qsqrt(", 0) == 0 && toks[3].back() == ')') {
        try {
            h.field_d = static_cast<unsigned>(std::stoul(toks[3].substr(6, toks[3].size() - 7)));
        } catch (...) {
            fail(in, "bad field '" + toks[3] + "'");
        }
    } else {
        fail(in, "bad field '" + toks[3] + "'");
    }
    ++in.pos;
    return h;
}

Polytope parse_polytope_block(Lines& in) {
    Header h = parse_header(in);
    while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
    if (in.done()) fail(in, "missing V or H section");
    std::string kind = in.peek();
    auto ktoks = tokens_of(kind);
    if (ktoks.size() != 1 || (ktoks[0] != "V" && ktoks[0] != "H"))
        fail(in, "expected 'V' or 'H' section marker");
    ++in.pos;

    if (ktoks[0] == "V") {
        std::vector<Vector> pts;
        while (!in.done() && is_data_line(in.peek())) {
            auto toks = tokens_of(in.peek());
            if (toks.size() != h.ambient) fail(in, "point has wrong number of coordinates");
            Vector p;
            for (const auto& t : toks) p.push_back(parse_scalar_tok(in, t, h.field_d));
            pts.push_back(std::move(p));
            ++in.pos;
        }
        if (pts.empty()) fail(in, "empty V section");
        return Polytope::from_vertices(std::move(pts));
    }

    HRep hr;
    while (!in.done() && is_data_line(in.peek())) {
        auto toks = tokens_of(in.peek());
        if (toks.size() != h.ambient + 2) fail(in, "constraint row has wrong arity");
        Vector a;
        for (std::size_t i = 0; i < h.ambient; ++i) a.push_back(parse_scalar_tok(in, toks[i], h.field_d));
        Scalar b = parse_scalar_tok(in, toks.back(), h.field_d);
        if (toks[h.ambient] == "<=")
            hr.inequalities.emplace_back(std::move(a), std::move(b));
        else if (toks[h.ambient] == "==")
            hr.equalities.emplace_back(std::move(a), std::move(b));
        else
            fail(in, "expected '<=' or '==' in constraint row");
        ++in.pos;
    }
    if (hr.inequalities.empty() && hr.equalities.empty()) fail(in, "empty H section");
    return Polytope::from_halfspaces(hr, h.ambient);
}

unsigned common_radicand(const std::vector<Vector>& vs) {
    for (const auto& v : vs)
        for (const auto& s : v)
            if (!s.is_rational()) return s.radicand();
    return 0;
}

void write_polytope_block(std::ostringstream& out, const Polytope& P) {
    unsigned d = common_radicand(P.vertices());
    out << "ambient " << P.ambient_dim() << " field ";
    if (d == 0)
        out << "Q";
    else
        out << "Qsqrt(" << d << ")";
    out << "\nV\n";
    for (const auto& v : P.vertices()) {
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i].str();
        out << "\n";
    }
}

PartialAffineMap parse_map_block(Lines& in) {
    while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
    if (in.done()) fail(in, "missing 'map' header");
    auto toks = tokens_of(in.peek());
    if (toks.size() != 5 || toks[0] != "map" || toks[1] != "source" || toks[3] != "target")
        fail(in, "expected 'map source <n> target <m>'");
    std::size_t src = 0, tgt = 0;
    try {
        src = std::stoul(toks[2]);
        tgt = std::stoul(toks[4]);
    } catch (...) {
        fail(in, "bad map dimensions");
    }
    ++in.pos;

    auto expect_kw = [&](const std::string& kw) {
        while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
        if (in.done() || tokens_of(in.peek()) != std::vector<std::string>{kw})
            fail(in, "expected '" + kw + "' marker");
        ++in.pos;
    };

    // scalars inside maps may mix Q and one quadratic field; accept any
    auto parse_row = [&](std::size_t want) {
        while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
        if (in.done() || !is_data_line(in.peek())) fail(in, "expected a row of scalars");
        auto rtoks = tokens_of(in.peek());
        if (rtoks.size() != want) fail(in, "row has wrong number of entries");
        Vector row;
        for (const auto& t : rtoks) {
            try {
                row.push_back(Scalar::parse(t));
            } catch (const std::invalid_argument& e) {
                fail(in, std::string("bad scalar '") + t + "': " + e.what());
            }
        }
        ++in.pos;
        return row;
    };

    expect_kw("linear");
    Matrix linear(tgt, src);
    for (std::size_t r = 0; r < tgt; ++r) linear.set_row(r, parse_row(src));
    expect_kw("offset");
    Vector offset = parse_row(tgt);
    expect_kw("domain");
    Polytope domain = parse_polytope_block(in);
    if (domain.ambient_dim() != src) fail(in, "map domain lives in the wrong space");
    return PartialAffineMap(std::move(linear), std::move(offset), std::move(domain));
}

void write_map_block(std::ostringstream& out, const PartialAffineMap& f) {
    out << "map source " << f.source_ambient() << " target " << f.target_ambient() << "\n";
    out << "linear\n";
    for (std::size_t r = 0; r < f.linear().rows; ++r) {
        for (std::size_t c = 0; c < f.linear().cols; ++c) out << (c ? " " : "") << f.linear()(r, c).str();
        out << "\n";
    }
    out << "offset\n";
    for (std::size_t i = 0; i < f.offset().size(); ++i) out << (i ? " " : "") << f.offset()[i].str();
    out << "\ndomain\n";
    write_polytope_block(out, f.domain());
}

} // namespace

Polytope parse_polytope(const std::string& text) {
    Lines in(text);
    Polytope P = parse_polytope_block(in);
    while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
    if (!in.done()) fail(in, "trailing content after polytope block");
    return P;
}

std::string write_polytope(const Polytope& P) {
    std::ostringstream out;
    write_polytope_block(out, P);
    return out.str();
}

PartialAffineMap parse_map(const std::string& text) {
    Lines in(text);
    PartialAffineMap f = parse_map_block(in);
    while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
    if (!in.done()) fail(in, "trailing content after map block");
    return f;
}

std::string write_map(const PartialAffineMap& f) {
    std::ostringstream out;
    write_map_block(out, f);
    return out.str();
}

RefinementFile parse_refinement(const std::string& text) {
    Lines in(text);
    auto expect_kw = [&](const std::string& kw) {
        while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
        if (in.done() || tokens_of(in.peek()) != std::vector<std::string>{kw})
            fail(in, "expected '" + kw + "' block marker");
        ++in.pos;
    };
    expect_kw("refinement");
    expect_kw("T");
    Polytope T = parse_polytope_block(in);
    expect_kw("f");
    PartialAffineMap f = parse_map_block(in);
    expect_kw("g");
    PartialAffineMap g = parse_map_block(in);
    while (!in.done() && tokens_of(in.peek()).empty()) ++in.pos;
    if (!in.done()) fail(in, "trailing content after refinement blocks");
    return RefinementFile{std::move(T), std::move(f), std::move(g)};
}

std::string write_refinement(const Refinement& R) {
    std::ostringstream out;
    out << "refinement\nT\n";
    write_polytope_block(out, R.T);
    out << "f\n";
    write_map_block(out, R.f);
    out << "g\n";
    write_map_block(out, R.g);
    return out.str();
}

Refinement assemble_refinement(const StatisticalModel& M, RefinementFile file) {
    FormSpace omegaT = FormSpace::build(file.T);
    if (file.g.source_ambient() != omegaT.space().ambient_dim() ||
        file.g.target_ambient() != M.omega.space().ambient_dim())
        throw std::invalid_argument("refinement file: g lives between the wrong form spaces");
    return Refinement{std::move(file.T), std::move(omegaT), std::move(file.f), std::move(file.g)};
}

namespace {

std::string decimal12(const Scalar& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", s.to_double());
    return buf;
}

// Cyclic order of a 2-face's vertices: exact angular sort around the
// centroid in in-plane coordinates.
std::vector<std::size_t> polygon_cycle(const std::vector<Vector>& verts) {
    AffineHull hull = affine_hull(verts);
    if (hull.dim != 2) throw std::logic_error("polygon_cycle: face is not 2-dimensional");
    const Vector& b0 = verts[hull.basis[0]];
    Vector d1 = vec_sub(verts[hull.basis[1]], b0);
    Vector d2 = vec_sub(verts[hull.basis[2]], b0);
    Matrix sys = Matrix::from_cols({d1, d2});
    Vector centroid(verts.front().size(), Scalar(0));
    for (const auto& v : verts) centroid = vec_add(centroid, v);
    Scalar inv = Scalar(static_cast<long long>(verts.size())).inverse();
    for (auto& c : centroid) c = c * inv;

    std::vector<std::pair<Scalar, Scalar>> uv(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        auto sol = solve_linear(sys, vec_sub(verts[i], centroid));
        if (sol.kind == LinearSolution::Kind::Inconsistent)
            throw std::logic_error("polygon_cycle: vertex off the face plane");
        uv[i] = {sol.particular[0], sol.particular[1]};
    }
    std::vector<std::size_t> idx(verts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto half = [](const std::pair<Scalar, Scalar>& p) {
        int sy = p.second.sign();
        return (sy > 0 || (sy == 0 && p.first.sign() > 0)) ? 0 : 1;
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        int ha = half(uv[a]), hb = half(uv[b]);
        if (ha != hb) return ha < hb;
        Scalar cross = uv[a].first * uv[b].second - uv[a].second * uv[b].first;
        return cross.sign() > 0;
    });
    return idx;
}

/// Orthogonal projection to 3-space: repeatedly drop the generic direction
/// (1, 2, ..., a), expressing points in an exact orthogonal basis of its
/// complement.
std::vector<Vector> project_to_3d(std::vector<Vector> pts) {
    while (!pts.empty() && pts.front().size() > 3) {
        const std::size_t a = pts.front().size();
        Vector u(a);
        for (std::size_t i = 0; i < a; ++i) u[i] = Scalar(static_cast<long long>(i + 1));
        // exact orthogonal basis of the complement of u
        Matrix urow(1, a);
        urow.set_row(0, u);
        std::vector<Vector> basis = kernel_basis(urow);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                Scalar num = dot(basis[i], basis[j]);
                if (num.is_zero()) continue;
                Scalar coef = num / dot(basis[j], basis[j]);
                basis[i] = vec_sub(basis[i], vec_scale(coef, basis[j]));
            }
        std::vector<Vector> next;
        next.reserve(pts.size());
        for (const auto& p : pts) {
            Vector q(basis.size());
            for (std::size_t j = 0; j < basis.size(); ++j)
                q[j] = dot(p, basis[j]) / dot(basis[j], basis[j]);
            next.push_back(std::move(q));
        }
        pts = std::move(next);
    }
    return pts;
}

} // namespace

std::string export_off(const Polytope& P, bool project) {
    if (P.dim() != 3 && !project)
        throw std::invalid_argument("export_off: polytope is not 3-dimensional (use projection)");
    if (P.dim() < 3) throw std::invalid_argument("export_off: polytope has dimension below 3");

    // Faces to draw: facets of a 3-polytope, 2-faces otherwise.
    std::vector<std::vector<std::size_t>> faces; // vertex index lists, cyclic
    const auto& verts = P.vertices();

    auto face_from_vertex_set = [&](const std::vector<std::size_t>& vset) {
        std::vector<Vector> fverts;
        for (auto i : vset) fverts.push_back(verts[i]);
        auto cycle = polygon_cycle(fverts);
        std::vector<std::size_t> out;
        for (auto c : cycle) out.push_back(vset[c]);
        return out;
    };

    if (P.dim() == 3) {
        for (const auto& [a, b] : P.hrep().inequalities) {
            std::vector<std::size_t> vset;
            for (std::size_t i = 0; i < verts.size(); ++i)
                if ((dot(a, verts[i]) - b).is_zero()) vset.push_back(i);
            faces.push_back(face_from_vertex_set(vset));
        }
    } else {
        // all 2-faces via minimal faces of vertex pairs
        std::vector<std::vector<std::size_t>> seen;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            for (std::size_t j = i + 1; j < verts.size(); ++j) {
                Polytope F = P.minimal_face({verts[i], verts[j]});
                if (F.dim() != 2) continue;
                std::vector<std::size_t> vset;
                for (const auto& fv : F.vertices())
                    for (std::size_t k = 0; k < verts.size(); ++k)
                        if (vec_eq(fv, verts[k])) vset.push_back(k);
                std::sort(vset.begin(), vset.end());
                if (std::find(seen.begin(), seen.end(), vset) != seen.end()) continue;
                seen.push_back(vset);
                faces.push_back(face_from_vertex_set(vset));
            }
        }
    }

    std::vector<Vector> coords(verts.begin(), verts.end());
    if (P.ambient_dim() > 3) coords = project_to_3d(std::move(coords));
    for (auto& c : coords) c.resize(3, Scalar(0)); // pad flat embeddings

    // distinct edges across the face cycles
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& f : faces)
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto e = std::minmax(f[i], f[(i + 1) % f.size()]);
            std::pair<std::size_t, std::size_t> p{e.first, e.second};
            if (std::find(edges.begin(), edges.end(), p) == edges.end()) edges.push_back(p);
        }

    std::ostringstream out;
    out << "OFF\n" << coords.size() << " " << faces.size() << " " << edges.size() << "\n";
    for (const auto& c : coords)
        out << decimal12(c[0]) << " " << decimal12(c[1]) << " " << decimal12(c[2]) << "\n";
    for (const auto& f : faces) {
        out << f.size();
        for (auto i : f) out << " " << i;
        out << "\n";
    }
    return out.str();
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace refinery::io
