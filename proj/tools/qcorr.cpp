// Command-line front end: membership checks, bounds, realization synthesis,
// dimension reduction, and the stabilizer verification pipeline, all over
// JSON documents.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcorr/json_io.hpp"
#include "qcorr/npa.hpp"
#include "qcorr/realization.hpp"
#include "qcorr/sdp.hpp"
#include "qcorr/stabilizer.hpp"

namespace {

using nlohmann::json;
using namespace qcorr;

constexpr int kOk = 0;
constexpr int kNegative = 1;   // well-formed input, negative verdict
constexpr int kInputError = 2;
constexpr int kSolverError = 3;

struct Options {
    double tol = 1e-8;
    std::size_t max_iter = 200000;
    std::uint64_t seed = 1;
};

BellFunctional builtin_functional(const std::string& name) {
    if (name == "chsh") return chsh_functional_zero_one();
    if (name == "chsh_pm") return chsh_functional_pm_one();
    throw std::invalid_argument("unknown builtin functional: " + name);
}

BellFunctional load_functional(const std::string& file, const std::string& builtin) {
    if (!builtin.empty()) return builtin_functional(builtin);
    if (file.empty()) throw std::invalid_argument("no functional given (file or --builtin)");
    return functional_from_json(load_json_file(file));
}

int cmd_check_nosignalling(const std::string& file, const Options& opt) {
    const CorrelationOutcome x = outcome_from_json(load_json_file(file));
    const NoSignallingReport rep = no_signalling_check(x, std::max(opt.tol, 1e-9));
    static const char* names[4] = {"x_i + x_j + x_ij <= 2", "x_i + x_j - x_ij >= 0",
                                   "x_i - x_j + x_ij >= 0", "-x_i + x_j + x_ij >= 0"};
    json viol = json::array();
    for (const auto& v : rep.violations)
        viol.push_back(json{{"i", v.i + 1},
                            {"j", v.j + 1},
                            {"inequality", names[v.inequality]},
                            {"slack", v.slack}});
    std::cout << json{{"ok", rep.ok()}, {"violations", viol}}.dump(2) << "\n";
    return rep.ok() ? kOk : kNegative;
}

int cmd_check_bellpolytope(const std::string& file, const Options& opt) {
    const CorrelationOutcome x = outcome_from_json(load_json_file(file));
    const MembershipVerdict v = bell_polytope_membership(x, std::max(opt.tol, 1e-9));
    json out{{"inside", v.inside}};
    if (!v.inside) {
        out["separation"] = v.separation;
        out["certificate"] = functional_to_json(v.certificate);
    }
    std::cout << out.dump(2) << "\n";
    return v.inside ? kOk : kNegative;
}

int cmd_check_elliptope(const std::string& file, const Options& opt) {
    const CorrelationOutcome x = outcome_from_json(load_json_file(file));
    const ElliptopeMembership v = elliptope_membership(x, opt.tol, opt.max_iter);
    std::cout << json{{"inside", v.inside}, {"margin", v.margin}, {"converged", v.converged}}
                     .dump(2)
              << "\n";
    if (!v.converged) return kSolverError;
    return v.inside ? kOk : kNegative;
}

int cmd_classical_max(const std::string& file, const std::string& builtin) {
    const BellFunctional f = load_functional(file, builtin);
    const ClassicalMax r = classical_max(f);
    std::cout << json{{"value", r.value}, {"argmax", r.argmax}}.dump(2) << "\n";
    return kOk;
}

int cmd_bound(const std::string& file, const std::string& builtin, const std::string& method,
              const std::string& level, const Options& opt) {
    const BellFunctional f = load_functional(file, builtin);
    double bound = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    if (method == "elliptope") {
        const BoundResult r = elliptope_suspension_bound(f, opt.tol, opt.max_iter);
        bound = r.value;
        converged = r.converged;
        iterations = r.iterations;
    } else if (method == "elliptope_rmet") {
        const BoundResult r = upper_bound_nc(f, opt.tol, opt.max_iter);
        bound = r.value;
        converged = r.converged;
        iterations = r.iterations;
    } else if (method == "npa") {
        const NpaBoundResult r = npa_bound(f, parse_npa_level(level), opt.tol, opt.max_iter);
        bound = r.value;
        converged = r.converged;
        iterations = r.iterations;
    } else {
        throw std::invalid_argument("unknown bound method: " + method);
    }
    std::cout << json{{"bound", bound},
                      {"method", method},
                      {"status", converged ? "converged" : "max_iterations"},
                      {"iterations", iterations}}
                     .dump(2)
              << "\n";
    return converged ? kOk : kSolverError;
}

int cmd_realize(const std::string& file, const std::string& out_file) {
    const GramSystem g = gram_from_json(load_json_file(file));
    const QuantumRealization r = realize(g);
    const double dev = verify_against_gram(r, g);
    const double entropy =
        r.nu == 0 ? 0.0 : entanglement_entropy(r.state, r.nu, r.nu);
    if (!out_file.empty()) save_json_file(out_file, realization_to_json(r));
    std::cout << json{{"nu", r.nu},
                      {"xi", r.xi},
                      {"n_qubits", r.n_qubits},
                      {"max_deviation", dev},
                      {"entanglement_entropy", entropy}}
                     .dump(2)
              << "\n";
    return kOk;
}

int cmd_verify(const std::string& realization_file, const std::string& gram_file,
               const Options& opt) {
    const QuantumRealization r = realization_from_json(load_json_file(realization_file));
    const GramSystem g = gram_from_json(load_json_file(gram_file));
    const double dev = verify_against_gram(r, g);
    const double threshold = std::max(opt.tol, 1e-9);
    std::cout << json{{"max_deviation", dev}, {"ok", dev <= threshold}}.dump(2) << "\n";
    return dev <= threshold ? kOk : kNegative;
}

int cmd_reduce(const std::string& file, double epsilon, const Options& opt,
               const std::string& out_file) {
    const GramSystem g = gram_from_json(load_json_file(file));
    const JlResult r = jl_reduce(g, epsilon, opt.seed);
    if (!out_file.empty()) save_json_file(out_file, gram_to_json(r.system));
    std::cout << json{{"target_dim", r.target_dim},
                      {"reduced", r.reduced},
                      {"seed_used", r.seed_used},
                      {"attempts", r.attempts},
                      {"max_norm_distortion", r.max_norm_distortion},
                      {"max_distance_distortion", r.max_distance_distortion},
                      {"max_inner_product_error", r.max_inner_product_error},
                      {"gram", gram_to_json(r.system)}}
                     .dump(2)
              << "\n";
    return kOk;
}

int cmd_stabilizer(std::size_t nu, bool dump) {
    const TransformReport rep = verify_transform(nu);
    json out{{"nu", nu}, {"transform_ok", rep.ok}};
    if (!rep.ok) {
        out["message"] = rep.message;
        std::cout << out.dump(2) << "\n";
        return kNegative;
    }
    // Graph state of the F-target adjacency, pushed through ℒ, must show
    // the (+ … + | − … − | +) eigen-sign pattern of the z_form generators.
    Gf2Matrix theta(2 * nu, 2 * nu);
    for (std::size_t k = 0; k < nu; ++k) {
        theta.set(k, nu + k, 1);
        theta.set(nu + k, k, 1);
    }
    const std::vector<cplx> psi =
        apply_local_clifford_L(graph_state(GraphAdjacency(theta)), nu);
    const EigenSignReport signs = eigen_sign_check(psi, weyl_brauer(nu, GeneratorForm::z_form));
    std::vector<int> expected(2 * nu + 1, 0);
    for (std::size_t k = nu; k < 2 * nu; ++k) expected[k] = 1;
    const bool pattern_ok = signs.signs == expected;
    out["signs"] = signs.signs;
    out["sign_pattern_ok"] = pattern_ok;
    out["max_residual"] = signs.max_residual;
    if (dump) {
        const GeneratorMatrix e = generator_matrix_E(nu);
        const TransformTarget t = target_F_L_R2(nu);
        out["E"] = gf2_dump(e.bits);
        out["F"] = gf2_dump(t.f);
        out["L"] = gf2_dump(t.l);
        out["R"] = gf2_dump(t.r2);
    }
    std::cout << out.dump(2) << "\n";
    return pattern_ok ? kOk : kNegative;
}

int cmd_table(const std::string& dir, const std::string& method, const Options& opt) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::invalid_argument("table: no .json functionals in " + dir);
    int rc = kOk;
    for (const auto& path : files) {
        const BellFunctional f = functional_from_json(load_json_file(path.string()));
        const BoundResult r = method == "i" ? elliptope_suspension_bound(f, opt.tol, opt.max_iter)
                                            : upper_bound_nc(f, opt.tol, opt.max_iter);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", r.value);
        std::cout << path.stem().string() << "\t" << buf << "\n";
        if (!r.converged) rc = kSolverError;
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipartite quantum correlation toolkit"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--tol", opt.tol, "solver tolerance");
    app.add_option("--max-iter", opt.max_iter, "solver iteration cap");
    app.add_option("--seed", opt.seed, "random-projection seed");

    std::string file, file2, out_file, builtin, method, level = "1";
    double epsilon = 0.5;
    std::size_t nu = 1;
    bool dump = false;

    auto* check = app.add_subcommand("check", "membership / consistency checks");
    check->require_subcommand(1);
    auto* ns = check->add_subcommand("nosignalling", "rooted-semimetric inequalities");
    ns->add_option("outcome", file, "outcome JSON")->required();
    auto* bp = check->add_subcommand("bellpolytope", "classical polytope membership");
    bp->add_option("outcome", file, "outcome JSON")->required();
    auto* el = check->add_subcommand("elliptope", "PSD-completion membership");
    el->add_option("outcome", file, "outcome JSON")->required();

    auto* cm = app.add_subcommand("classical-max", "max over deterministic strategies");
    cm->add_option("functional", file, "functional JSON");
    cm->add_option("--builtin", builtin, "built-in functional (chsh, chsh_pm)");

    auto* bd = app.add_subcommand("bound", "upper bound on the quantum value");
    bd->add_option("functional", file, "functional JSON");
    bd->add_option("--builtin", builtin, "built-in functional (chsh, chsh_pm)");
    bd->add_option("--method", method, "elliptope | elliptope_rmet | npa")->required();
    bd->add_option("--level", level, "moment-hierarchy level: 1 | 1ab | 2");

    auto* rz = app.add_subcommand("realize", "synthesize state and observables");
    rz->add_option("gram", file, "gram-system JSON")->required();
    rz->add_option("--out", out_file, "write realization JSON here");

    auto* vf = app.add_subcommand("verify", "re-check a realization against a gram system");
    vf->add_option("realization", file, "realization JSON")->required();
    vf->add_option("gram", file2, "gram-system JSON")->required();

    auto* rd = app.add_subcommand("reduce", "random-projection dimension reduction");
    rd->add_option("gram", file, "gram-system JSON")->required();
    rd->add_option("--epsilon", epsilon, "distortion bound in (0,1)")->required();
    rd->add_option("--out", out_file, "write reduced gram JSON here");

    auto* st = app.add_subcommand("stabilizer", "GF(2) transform and graph-state check");
    st->add_option("--nu", nu, "EPR pair count")->required();
    st->add_flag("--dump", dump, "dump the GF(2) matrices");

    auto* tb = app.add_subcommand("table", "bound table over a directory of functionals");
    tb->add_option("dir", file, "directory of functional JSON files")->required();
    tb->add_option("--method", method, "i (elliptope) | ii (elliptope + rmet)")->required();

    // Let global flags (--tol, --max-iter, --seed) appear after the
    // subcommand name as well.
    for (auto* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands(nullptr)) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (ns->parsed()) return cmd_check_nosignalling(file, opt);
        if (bp->parsed()) return cmd_check_bellpolytope(file, opt);
        if (el->parsed()) return cmd_check_elliptope(file, opt);
        if (cm->parsed()) return cmd_classical_max(file, builtin);
        if (bd->parsed()) return cmd_bound(file, builtin, method, level, opt);
        if (rz->parsed()) return cmd_realize(file, out_file);
        if (vf->parsed()) return cmd_verify(file, file2, opt);
        if (rd->parsed()) return cmd_reduce(file, epsilon, opt, out_file);
        if (st->parsed()) return cmd_stabilizer(nu, dump);
        if (tb->parsed()) {
            if (method != "i" && method != "ii")
                throw std::invalid_argument("table: method must be i or ii");
            return cmd_table(file, method, opt);
        }
    } catch (const json::exception& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kInputError;
    } catch (const std::runtime_error& ex) {
        std::cerr << "solver error: " << ex.what() << "\n";
        return kSolverError;
    }
    return kInputError;
}
