#include "refinery/conjectures.hpp"
#include "refinery/io.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <json.hpp>

using namespace refinery;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "refinery 0.1.0";

std::string scalar_str(const Scalar& s) { return s.str(); }

json vec_json(const Vector& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(scalar_str(s));
    return a;
}

json hrep_json(const HRep& h) {
    json ineqs = json::array(), eqs = json::array();
    auto row = [](const std::pair<Vector, Scalar>& r, const char* rel) {
        std::string s;
        for (std::size_t i = 0; i < r.first.size(); ++i) s += (i ? " " : "") + r.first[i].str();
        s += std::string(" ") + rel + " " + r.second.str();
        return s;
    };
    for (const auto& r : h.inequalities) ineqs.push_back(row(r, "<="));
    for (const auto& r : h.equalities) eqs.push_back(row(r, "=="));
    return json{{"inequalities", ineqs}, {"equalities", eqs}};
}

json polytope_json(const Polytope& P) {
    json verts = json::array();
    for (const auto& v : P.vertices()) verts.push_back(vec_json(v));
    return json{{"ambient", P.ambient_dim()},
                {"dim", P.dim()},
                {"vertex_count", P.vertices().size()},
                {"vertices", verts},
                {"hrep", hrep_json(P.hrep())}};
}

json axiom_json(const AxiomCheck& a) {
    json j{{"pass", a.pass}, {"detail", a.detail}};
    if (!a.witnesses.empty()) {
        json w = json::array();
        for (const auto& v : a.witnesses) w.push_back(vec_json(v));
        j["witnesses"] = w;
    }
    return j;
}

std::string axioms_summary(const VerificationReport& r) {
    auto mark = [](bool b) { return b ? "pass" : "FAIL"; };
    if (r.all_pass()) return "I,II,III,IV pass";
    return std::string("I ") + mark(r.simplex.pass) + ", II " + mark(r.f_partial_onto.pass) +
           ", III " + mark(r.g_partial_onto.pass) + ", IV " + mark(r.compatibility.pass);
}

json verification_json(const VerificationReport& r) {
    return json{{"I", axiom_json(r.simplex)},
                {"II", axiom_json(r.f_partial_onto)},
                {"III", axiom_json(r.g_partial_onto)},
                {"IV", axiom_json(r.compatibility)},
                {"summary", axioms_summary(r)},
                {"pass", r.all_pass()}};
}

struct Report {
    std::string command;
    std::string digest_input; // raw bytes of all inputs in argument order
    json results;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    int emit(int exit_code) const {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
        json out{{"command", command},
                 {"inputs_digest", io::fnv1a_digest(digest_input)},
                 {"version", kVersion},
                 {"results", results},
                 {"timing_ms", ms}};
        std::cout << out.dump(2) << "\n";
        return exit_code;
    }
};

StatisticalModel load_model(Report& rep, const std::string& path) {
    std::string bytes = io::read_file(path);
    rep.digest_input += bytes;
    return make_model(io::parse_polytope(bytes));
}

int run_formspace(Report& rep, const std::string& file, bool matrix, const std::string& space_out) {
    StatisticalModel M = load_model(rep, file);
    const FormSpace& F = M.omega;
    json forms = json::array();
    for (const auto& y : F.space().vertices()) forms.push_back(vec_json(y));
    rep.results = {{"base", polytope_json(M.C)},
                   {"form_space_dim", F.space().dim()},
                   {"extreme_form_count", F.space().vertices().size()},
                   {"extreme_forms_coords", forms},
                   {"form_space_hrep", hrep_json(F.space().hrep())}};
    if (matrix) {
        json rows = json::array();
        for (const auto& y : F.space().vertices()) rows.push_back(vec_json(F.value_row(y)));
        rep.results["value_matrix"] = rows;
    }
    if (!space_out.empty()) {
        io::write_file(space_out, io::write_polytope(F.space()));
        rep.results["space_written"] = space_out;
    }
    std::cerr << "form space: dim " << F.space().dim() << ", " << F.space().vertices().size()
              << " extreme forms\n";
    return rep.emit(0);
}

int run_holevo(Report& rep, const std::string& file) {
    StatisticalModel M = load_model(rep, file);
    Refinement R = holevo_refinement(M);
    auto v = verify_refinement(R, M);
    rep.results = {{"T_dim", R.T.dim()},
                   {"omega_T_extreme_count", R.omegaT.space().vertices().size()},
                   {"domain_g_dim", R.g.domain().dim()},
                   {"domain_g_vertex_count", R.g.domain().vertices().size()},
                   {"axioms", verification_json(v)}};
    std::cerr << "holevo refinement: axioms: " << axioms_summary(v) << "\n";
    return rep.emit(v.all_pass() ? 0 : 1);
}

int run_verify(Report& rep, const std::string& model_file, const std::string& ref_file) {
    StatisticalModel M = load_model(rep, model_file);
    std::string bytes = io::read_file(ref_file);
    rep.digest_input += bytes;
    Refinement R = io::assemble_refinement(M, io::parse_refinement(bytes));
    auto v = verify_refinement(R, M);
    rep.results = {{"axioms", verification_json(v)}};
    std::cerr << "axioms: " << axioms_summary(v) << "\n";
    return rep.emit(v.all_pass() ? 0 : 1);
}

json counterexample_json(const CounterexampleReport& ce) {
    json entries = json::array();
    for (const auto& e : ce.entries) {
        json j{{"label", e.label},
               {"required_values", vec_json(e.required_values)},
               {"status", e.feasible ? "feasible" : "infeasible"}};
        if (e.feasible) {
            j["witness"] = vec_json(e.witness);
            j["verified"] = lp::satisfies(e.problem, e.witness);
        } else {
            j["certificate"] = vec_json(e.certificate);
            j["verified"] = lp::verify_infeasibility_certificate(e.problem, e.certificate);
        }
        entries.push_back(std::move(j));
    }
    return json{{"section", polytope_json(ce.section)},
                {"entries", entries},
                {"infeasible_count", ce.infeasible_count()}};
}

int run_counterexample(Report& rep) {
    CounterexampleReport ce = counterexample_section();
    rep.results = counterexample_json(ce);
    bool ok = ce.infeasible_count() == 4;
    for (const auto& e : ce.entries) {
        bool verified = e.feasible ? lp::satisfies(e.problem, e.witness)
                                   : lp::verify_infeasibility_certificate(e.problem, e.certificate);
        ok = ok && verified;
    }
    std::cerr << ce.infeasible_count() << " extreme forms certified non-extendable\n";
    return rep.emit(ok ? 0 : 1);
}

int run_example(Report& rep, const std::string& name, const std::string& outdir) {
    if (name == "counterexample") return run_counterexample(rep);

    StatisticalModel M = make_model(Polytope::simplex(0)); // replaced below
    Refinement R = [&]() {
        if (name == "parallelogram") {
            auto pr = example_parallelogram();
            M = std::move(pr.first);
            return std::move(pr.second);
        }
        if (name == "pentagon-midpoint") {
            auto pr = example_pentagon_midpoint();
            M = std::move(pr.first);
            return std::move(pr.second);
        }
        if (name == "pentagon-edges") {
            auto pr = example_pentagon_edges();
            M = std::move(pr.first);
            return std::move(pr.second);
        }
        throw CLI::ValidationError("example",
                                   "unknown example '" + name +
                                       "' (parallelogram|pentagon-midpoint|pentagon-edges|counterexample)");
    }();

    auto v = verify_refinement(R, M);
    json features;
    features["f_total"] = R.f.domain().equals(R.T);
    features["dom_f_dim"] = R.f.domain().dim();
    features["dom_g_dim"] = R.g.domain().dim();
    if (name != "parallelogram") {
        // fibre dimensions of the ten nontrivial extreme forms under g
        json dims = json::array();
        for (const auto& z : M.omega.space().vertices()) {
            Vector row = M.omega.value_row(z);
            bool constant = true;
            for (const auto& s : row)
                if (s != row.front()) constant = false;
            if (constant) continue;
            auto fib = extreme_value_fiber(R.g, M.omega.space(), z);
            dims.push_back(fib ? json(fib->dim()) : json(nullptr));
        }
        features["g_fiber_dims"] = dims;
        bool undef_at_pure = true;
        for (std::size_t j = 0; j < R.T.vertices().size(); ++j)
            if (R.f.apply(R.T.vertices()[j]).has_value()) undef_at_pure = false;
        features["f_undefined_at_every_pure_point"] = undef_at_pure;
    }

    rep.results = {{"name", name}, {"axioms", verification_json(v)}, {"features", features}};
    std::cerr << "example " << name << ": axioms: " << axioms_summary(v) << "\n";

    if (!outdir.empty()) {
        io::write_file(outdir + "/model.poly", io::write_polytope(M.C));
        io::write_file(outdir + "/refinement.ref", io::write_refinement(R));
        rep.results["written"] = {outdir + "/model.poly", outdir + "/refinement.ref"};
        std::cerr << "wrote " << outdir << "/model.poly and " << outdir << "/refinement.ref\n";
    }
    return rep.emit(v.all_pass() ? 0 : 1);
}

int run_search(Report& rep, const std::string& model_file, std::size_t k, unsigned q,
               std::uint64_t budget) {
    StatisticalModel M = load_model(rep, model_file);
    std::size_t m = M.C.vertices().size();
    SearchSpec spec{std::move(M), k, q, budget};
    SearchResult res = search_refinement(spec);
    const char* verdict = res.verdict == SearchResult::Verdict::Found ? "found"
                          : res.verdict == SearchResult::Verdict::ExhaustedNoWitness
                              ? "exhausted_no_witness"
                              : "budget_exhausted";
    rep.results = {{"verdict", verdict},
                   {"simplex_vertices", k},
                   {"grid", q},
                   {"stats",
                    {{"candidates", res.stats.candidates},
                     {"consistent", res.stats.consistent},
                     {"lp_calls", res.stats.lp_calls}}}};
    bool counterexample_found = false;
    if (res.witness) {
        auto v = verify_refinement(*res.witness, spec.model);
        rep.results["witness"] = {{"verified", v.all_pass()},
                                  {"axioms", verification_json(v)},
                                  {"refinement", io::write_refinement(*res.witness)}};
        counterexample_found = k < m; // fewer extreme points than C
        rep.results["fewer_extreme_points_than_C"] = counterexample_found;
    }
    std::cerr << "search: " << verdict << " after " << res.stats.candidates << " candidates\n";
    return rep.emit(counterexample_found ? 1 : 0);
}

int run_check_conjecture(Report& rep, int which, const std::string& model_file,
                         const std::string& ref_file) {
    StatisticalModel M = load_model(rep, model_file);
    std::string bytes = io::read_file(ref_file);
    rep.digest_input += bytes;
    Refinement R = io::assemble_refinement(M, io::parse_refinement(bytes));

    if (which == 1) {
        auto res = factor_through_projection(M, R);
        rep.results = {{"conjecture", 1}, {"factors_through_projection", res.yes}};
        if (res.yes) {
            json himg = json::array();
            for (const auto& a : R.f.domain().vertices())
                himg.push_back(vec_json(res.h->apply_formula(a)));
            rep.results["witness_h_on_domain_vertices"] = himg;
        } else {
            rep.results["certificate"] = vec_json(res.certificate);
            rep.results["certificate_verified"] =
                lp::verify_infeasibility_certificate(res.problem, res.certificate);
        }
        std::cerr << "conjecture 1 instance: " << (res.yes ? "factors" : "does NOT factor") << "\n";
        return rep.emit(res.yes ? 0 : 1);
    }

    auto res = conjecture3_check(M, R);
    json pairs = json::array();
    for (const auto& e : res.pairs)
        pairs.push_back(json{{"a", e.a_index},
                             {"b", e.b_index},
                             {"face_a_dim", e.face_a_dim},
                             {"face_b_dim", e.face_b_dim},
                             {"disjoint", e.disjoint}});
    rep.results = {{"conjecture", 3}, {"pairs", pairs}, {"violations", res.violations}};
    std::cerr << "conjecture 3 instance: " << res.violations << " violations\n";
    return rep.emit(res.violations == 0 ? 0 : 1);
}

int run_export_off(Report& rep, const std::string& poly_file, const std::string& out,
                   bool project) {
    std::string bytes = io::read_file(poly_file);
    rep.digest_input += bytes;
    Polytope P = io::parse_polytope(bytes);
    std::string off = io::export_off(P, project);
    io::write_file(out, off);
    std::size_t vcount = 0, fcount = 0;
    {
        std::istringstream in(off);
        std::string magic;
        in >> magic >> vcount >> fcount;
    }
    rep.results = {{"output", out}, {"vertices", vcount}, {"faces", fcount}, {"projected", project}};
    std::cerr << "wrote " << out << " (" << vcount << " vertices, " << fcount << " faces)\n";
    return rep.emit(0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact convex-form spaces and simplicial refinements"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string file, ref_file, out, outdir, example_name, space_out;
    bool matrix = false, project = false;
    std::size_t k = 4;
    unsigned q = 1;
    std::uint64_t budget = UINT64_MAX;
    int which = 1;

    auto* sc_form = app.add_subcommand("formspace", "convex-form space of a polytope");
    sc_form->add_option("polytope", file)->required();
    sc_form->add_flag("--matrix", matrix, "print the value table on all base vertices");
    sc_form->add_option("--write-space", space_out, "write the form-space polytope to a file");

    auto* sc_holevo = app.add_subcommand("holevo", "canonical projection refinement of a model");
    sc_holevo->add_option("model", file)->required();

    auto* sc_verify = app.add_subcommand("verify", "verify a refinement bundle against a model");
    sc_verify->add_option("model", file)->required();
    sc_verify->add_option("refinement", ref_file)->required();

    auto* sc_example = app.add_subcommand("example", "run a built-in worked example");
    sc_example->add_option("name", example_name)->required();
    sc_example->add_option("--write-files", outdir, "emit model.poly and refinement.ref");

    app.add_subcommand("counterexample", "section embedding with non-extendable extreme forms");

    auto* sc_search = app.add_subcommand("search", "bounded search for refinements");
    sc_search->add_option("--model", file)->required();
    sc_search->add_option("--simplex-vertices", k)->required();
    sc_search->add_option("--grid", q)->required();
    sc_search->add_option("--budget", budget);

    auto* sc_check = app.add_subcommand("check-conjecture", "instance checks of the conjectures");
    sc_check->add_option("which", which)->check(CLI::IsMember({1, 3}))->required();
    sc_check->add_option("--model", file)->required();
    sc_check->add_option("--refinement", ref_file)->required();

    auto* sc_off = app.add_subcommand("export-off", "write an OFF file for display");
    sc_off->add_option("polytope", file)->required();
    sc_off->add_option("-o,--output", out)->required();
    sc_off->add_flag("--project", project, "orthogonally project higher dimensions to 3-space");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2; help/version exit 0
    }

    Report rep;
    for (int i = 1; i < argc; ++i) rep.command += std::string(i > 1 ? " " : "") + argv[i];

    try {
        if (sc_form->parsed()) return run_formspace(rep, file, matrix, space_out);
        if (sc_holevo->parsed()) return run_holevo(rep, file);
        if (sc_verify->parsed()) return run_verify(rep, file, ref_file);
        if (sc_example->parsed()) return run_example(rep, example_name, outdir);
        if (app.get_subcommand("counterexample")->parsed()) return run_counterexample(rep);
        if (sc_search->parsed()) return run_search(rep, file, k, q, budget);
        if (sc_check->parsed()) return run_check_conjecture(rep, which, file, ref_file);
        if (sc_off->parsed()) return run_export_off(rep, file, out, project);
    } catch (const io::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
