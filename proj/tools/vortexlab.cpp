// vortexlab: command-line laboratory for vortex profiles, their second
// variation, rearrangements, and desk-scale energy minimization on the ball.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortexlab/common.hpp"
#include "vortexlab/counterexample.hpp"
#include "vortexlab/energy.hpp"
#include "vortexlab/forms.hpp"
#include "vortexlab/io.hpp"
#include "vortexlab/report.hpp"
#include "vortexlab/spectral.hpp"
#include "vortexlab/symmetrize.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitPropertyFailure = 4;

using namespace vortexlab;

struct CommonOptions {
    int dim = 4;
    int points = 384;
    double grading = 0.0;  // 0: per-dimension default
    int kmax = 8;
    int angular_order = 0;  // 0: derived from kmax
    std::string w_kind = "half-square";
    std::vector<double> w_coeffs;
    std::string wt_kind = "linear";
    std::vector<double> wt_coeffs;
    std::uint64_t seed = 0;
    double tol = 1e-8;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    // the long names double as nested config-file keys ([profile.grid] points = ...)
    cmd->add_option("--N", opt.dim, "ball dimension")->check(CLI::Range(2, 16));
    cmd->add_option("--grid-points,--grid.points", opt.points, "radial nodes (multiple of 3)");
    cmd->add_option("--grid-grading,--grid.grading", opt.grading,
                    "grading exponent (0 = per-dimension default)");
    cmd->add_option("--angular-kmax,--angular.kmax", opt.kmax, "zonal band limit");
    cmd->add_option("--angular-order,--angular.order", opt.angular_order,
                    "angular quadrature order");
    cmd->add_option("--potential-w,--potential.W.kind", opt.w_kind, "in-plane potential kind");
    cmd->add_option("--potential-w-coeffs,--potential.W.coeffs", opt.w_coeffs,
                    "polynomial coefficients for W");
    cmd->add_option("--potential-wt,--potential.Wt.kind", opt.wt_kind,
                    "out-of-plane potential kind");
    cmd->add_option("--potential-wt-coeffs,--potential.Wt.coeffs", opt.wt_coeffs,
                    "polynomial coefficients for Wt");
    cmd->add_option("--seed", opt.seed, "random seed recorded in outputs");
    cmd->add_option("--tol", opt.tol, "generic tolerance")->check(CLI::PositiveNumber);
}

RadialGrid make_grid(const CommonOptions& opt) {
    const double grading = opt.grading > 0.0 ? opt.grading : RadialGrid::default_grading(opt.dim);
    return RadialGrid(opt.dim, opt.points, grading);
}

AngularRule make_rule(const CommonOptions& opt) {
    const int order = opt.angular_order > 0 ? opt.angular_order : 2 * opt.kmax + 4;
    return AngularRule(opt.dim, order, opt.kmax);
}

PotentialModel make_w(const CommonOptions& opt) {
    return PotentialModel::make(potential_kind_from_string(opt.w_kind), PotentialDomain::Gl,
                                opt.w_coeffs);
}

PotentialModel make_wt(const CommonOptions& opt) {
    return PotentialModel::make(potential_kind_from_string(opt.wt_kind), PotentialDomain::Mm,
                                opt.wt_coeffs);
}

std::string canonical_config(const CommonOptions& opt, const std::string& extra) {
    std::ostringstream os;
    os << "N=" << opt.dim << ";points=" << opt.points << ";grading=" << opt.grading
       << ";kmax=" << opt.kmax << ";W=" << opt.w_kind << ";Wt=" << opt.wt_kind
       << ";seed=" << opt.seed << ";" << extra;
    return os.str();
}

std::vector<double> parse_range(const std::string& text, bool geometric) {
    // a:b:n
    double a = 0.0, b = 0.0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    in >> a >> c1 >> b >> c2 >> n;
    if (!in || c1 != ':' || c2 != ':' || n < 1)
        throw PreconditionError("range must be a:b:n, got " + text);
    return geometric ? geometric_range(a, b, n) : linear_range(a, b, n);
}

int worker_count() {
    if (const char* env = std::getenv("VORTEXLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_profile(const CommonOptions& opt, const std::string& model, double eps, double eta,
                const std::string& out_path) {
    const RadialGrid grid = make_grid(opt);
    RadialProfile prof{grid, {}, {}, false, ProfileBranch::Gl, 0, 0, 0, 0, 0, false};
    if (model == "gl")
        prof = solve_gl_profile(grid, eps, make_w(opt));
    else if (model == "extended")
        prof = solve_extended_profile(grid, eps, eta, make_w(opt), make_wt(opt));
    else if (model == "mm")
        prof = solve_mm_profile(grid, eta, make_wt(opt));
    else
        throw PreconditionError("unknown profile model: " + model);

    const auto inv = check_profile_invariants(prof);
    const std::string digest =
        digest_string(config_digest(canonical_config(opt, "profile")));
    CsvWriter csv(out_path);
    csv.header({"r", "f", "g", "residual_f", "residual_g"});
    for (int i = 0; i <= grid.points(); ++i)
        csv.row_values({grid.node(i), prof.f[i], prof.g[i], prof.residual_f, prof.residual_g});
    csv.row({"# config_digest=" + digest + " seed=" + std::to_string(opt.seed)});
    csv.close();
    std::cout << "branch " << to_string(prof.branch) << ", residuals (" << prof.residual_f
              << ", " << prof.residual_g << "), invariants "
              << (inv.ok ? "ok" : ("VIOLATED: " + inv.message)) << "\n"
              << "wrote " << out_path << " (config digest "
              << digest_string(config_digest(canonical_config(opt, "profile"))) << ")\n";
    if (!inv.ok) return kExitPropertyFailure;
    return 0;
}

int run_phase(const CommonOptions& opt, const std::string& eps_range,
              const std::string& eta_range, const std::string& out_path,
              const std::string& curve_path) {
    const RadialGrid grid = make_grid(opt);
    const auto w = make_w(opt);
    const auto wt = make_wt(opt);
    const auto eps_v = parse_range(eps_range, true);
    const auto eta_v = parse_range(eta_range, true);
    const auto pd = phase_diagram(grid, w, wt, eps_v, eta_v, worker_count());

    const std::string digest = digest_string(config_digest(canonical_config(opt, "phase")));
    CsvWriter csv(out_path);
    csv.header({"eps", "eta", "ell", "tag"});
    for (const auto& pt : pd.points)
        csv.row({format_double(pt.eps), format_double(pt.eta), format_double(pt.ell),
                 to_string(pt.tag)});
    csv.row({"# config_digest=" + digest + " seed=" + std::to_string(opt.seed)});
    csv.close();
    if (!curve_path.empty()) {
        CsvWriter curve(curve_path);
        curve.header({"eps", "eta0"});
        for (const auto& [e, h] : pd.onset_curve)
            curve.row_values({e, h});
        curve.row({"# config_digest=" + digest + " seed=" + std::to_string(opt.seed)});
        curve.close();
    }
    std::cout << "phase diagram " << eps_v.size() << "x" << eta_v.size() << ", ";
    if (pd.eps0.has_root)
        std::cout << "critical radius " << pd.eps0.eps0 << " (bracket " << pd.eps0.bracket_lo
                  << ", " << pd.eps0.bracket_hi << ")";
    else
        std::cout << "no critical radius: " << pd.eps0.no_root_reason;
    std::cout << "; monotone " << (pd.monotone_in_eta() ? "yes" : "NO") << "\n";
    return pd.monotone_in_eta() ? 0 : kExitPropertyFailure;
}

int run_spectrum(const CommonOptions& opt, double eps, double eta, const std::string& out_path) {
    const RadialGrid grid = make_grid(opt);
    const auto w = make_w(opt);
    const auto wt = make_wt(opt);
    const auto prof = solve_extended_profile(grid, eps, eta, w, wt);
    const double ell = ell_of_profile(prof.branch == ProfileBranch::ExtendedNonescaping
                                          ? prof
                                          : solve_gl_profile(grid, eps, w),
                                      w);
    const auto ts = t_operator_spectrum(prof, w, wt, eps, eta);
    nlohmann::json j;
    j["branch"] = to_string(prof.branch);
    j["ell"] = ell;
    j["classification"] = to_string(classify(ell, eta, wt));
    j["t_first_eigenvalue"] = ts.first_eigenvalue;
    j["t_zero_mode_residual"] = ts.zero_mode_residual;
    j["config_digest"] = digest_string(config_digest(canonical_config(opt, "spectrum")));
    const std::string text = j.dump(2);
    if (!out_path.empty()) write_text_file(out_path, text);
    std::cout << text << "\n";
    return 0;
}

int run_forms(const CommonOptions& opt, const std::string& check, const std::string& out_path) {
    const auto w = make_w(opt);
    nlohmann::json j;
    j["check"] = check;
    bool pass = true;
    if (check == "prop24") {
        const RadialGrid grid = make_grid(opt);
        if (opt.dim < 4) throw PreconditionError("the lower bound needs dimension >= 4");
        const auto prof = solve_gl_profile(grid, 0.3, w);
        Rng rng(opt.seed + 1);
        auto& arr = j["fields"] = nlohmann::json::array();
        for (int t = 0; t < 100; ++t) {
            const auto v = random_mode_field(grid, opt.dim, {0, 1, 2, 3}, rng);
            const auto fb = quadratic_form_F(v, prof, 0.3, w);
            const double scale = std::abs(fb.total) + std::abs(fb.bound) + 1.0;
            pass = pass && fb.margin >= -1e-8 * scale;
            nlohmann::json fj;
            fj["total"] = fb.total;
            fj["bound"] = fb.bound;
            fj["margin"] = fb.margin;
            fj["per_mode_i"] = fb.term_i;
            fj["per_mode_ii"] = fb.term_ii;
            fj["per_mode_iii"] = fb.term_iii;
            arr.push_back(fj);
        }
    } else if (check == "hardy-rellich") {
        const RadialGrid grid = make_grid(opt);
        Rng rng(opt.seed + 2);
        double worst = 1e300;
        for (int t = 0; t < 100; ++t) {
            const auto v = random_mode_field(grid, opt.dim, {0, 1, 2, 3}, rng);
            worst = std::min(worst, hardy_rellich_ratio(v) - hardy_rellich_constant(opt.dim));
        }
        j["constant"] = hardy_rellich_constant(opt.dim);
        j["worst_slack"] = worst;
        pass = worst >= -1e-6;
    } else if (check == "counterexample") {
        const auto cert = find_negative_trial(opt.dim);
        const auto rep = f_eps_negativity(cert, w);
        j["log_j"] = cert.field.log_j;
        j["trial_integral"] = cert.integrals.trial;
        j["limit_form"] = rep.fstar;
        j["log_eps"] = rep.log_eps;
        j["values"] = rep.values;
        pass = cert.negative && rep.last_negative;
    } else {
        throw PreconditionError("unknown check: " + check);
    }
    j["pass"] = pass;
    j["seed"] = opt.seed;
    j["config_digest"] = digest_string(config_digest(canonical_config(opt, "forms:" + check)));
    const std::string text = j.dump(2);
    if (!out_path.empty()) write_text_file(out_path, text);
    std::cout << (pass ? "PASS" : "FAIL") << " " << check << "\n";
    if (out_path.empty()) std::cout << text << "\n";
    return pass ? 0 : kExitPropertyFailure;
}

int run_symmetrize(const CommonOptions& opt, const std::string& in_path, double q,
                   const std::string& out_path) {
    if (!std::filesystem::exists(in_path))
        throw PreconditionError("input field file does not exist: " + in_path);
    const auto field = mode_field_from_json(read_text_file(in_path));
    const AngularRule rule = AngularRule::standard(field.dim, opt.kmax);
    const auto re = symmetrize_gradient(field);
    const auto checked = rearranged_field(field);

    nlohmann::json j;
    j["input"] = in_path;
    j["q"] = q;
    j["slice_gradient_mismatch"] = slice_gradient_mismatch(field, rule);
    const auto l4 = check_lp_decrease(field, rule, std::max(q * 2.0, 4.0));
    j["gradient_decrease"] = {{"lhs", l4.lhs}, {"rhs", l4.rhs}};
    if (field.bc != BoundaryClass::RadialGradient) {
        const auto si = check_lp_increase_low(field, rule, std::min(q, 2.0));
        j["slicewise_min_margin"] = si.min_margin;
    }
    if (field.dim >= 5 || !field.has_degree_one()) {
        const auto dd = check_delta_decrease(field);
        j["bilaplacian"] = {{"lhs", dd.lhs}, {"rhs", dd.rhs}, {"gap", dd.gap}, {"bound", dd.bound}};
    } else {
        j["bilaplacian"] = "skipped: degree-one content in low dimension";
    }
    j["rearranged"] = nlohmann::json::parse(mode_field_to_json(checked));
    j["boundary_slope"] = re.boundary_slope;
    j["config_digest"] = digest_string(config_digest(canonical_config(opt, "symmetrize")));
    write_text_file(out_path, j.dump(2));
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_minimize(const CommonOptions& opt, const std::string& model, double eps, double eta,
                 double p, double lambda, double d, const std::string& init_path,
                 const std::string& out_path, const std::string& history_path) {
    const RadialGrid grid = make_grid(opt);
    const AngularRule rule = make_rule(opt);
    nlohmann::json j;
    j["model"] = model;
    j["seed"] = opt.seed;

    auto write_history = [&](const std::vector<HistoryRow>& rows) {
        if (history_path.empty()) return;
        CsvWriter csv(history_path);
        csv.header({"iter", "energy", "grad_norm", "nonradial_mass"});
        for (const auto& r : rows)
            csv.row_values({static_cast<double>(r.iteration), r.energy, r.gradient_norm,
                            r.nonradial_mass});
        csv.row({"# config_digest=" +
                 digest_string(config_digest(canonical_config(opt, "minimize:" + model))) +
                 " seed=" + std::to_string(opt.seed)});
        csv.close();
    };

    if (model == "extended" || model == "mm") {
        const auto wt = make_wt(opt);
        ZonalConfig init;
        if (!init_path.empty() && !std::filesystem::exists(init_path))
            throw PreconditionError("initial field file does not exist: " + init_path);
        if (!init_path.empty()) {
            const auto field = mode_field_from_json(read_text_file(init_path));
            const auto prof = model == "extended"
                                  ? solve_extended_profile(grid, eps, eta, make_w(opt), wt)
                                  : solve_mm_profile(grid, eta, wt);
            init = embed_profile(prof, rule, opt.kmax);
            add_perturbation(init, field, {}, 1.0);
        } else {
            const auto prof = model == "extended"
                                  ? solve_extended_profile(grid, eps, eta, make_w(opt), wt)
                                  : solve_mm_profile(grid, eta, wt);
            init = embed_profile(prof, rule, opt.kmax);
        }
        MinimizeOptions mo;
        if (model == "extended") {
            const auto res = minimize_extended(init, eps, eta, make_w(opt), wt, mo);
            j["energy"] = res.energy;
            j["nonradial_mass"] = res.nonradial_mass;
            j["converged"] = res.converged;
            write_history(res.history);
            if (!res.converged && res.gradient_norm > 1e-5) return kExitNoConvergence;
        } else {
            const auto res = minimize_mm(init, eta, wt, {0.15, 0.08, 0.04, 0.015}, mo);
            j["energy"] = res.last.energy;
            j["nonradial_mass"] = res.last.nonradial_mass;
            j["constraint_residual"] = res.constraint_residual;
            j["p_sign"] = res.p_sign;
            write_history(res.last.history);
        }
    } else if (model == "biharmonic") {
        ModeField init;
        if (!init_path.empty()) {
            init = mode_field_from_json(read_text_file(init_path));
        } else {
            init.dim = opt.dim;
            init.grid = grid;
            init.bc = BoundaryClass::ClampedZero;
            Mode mode;
            mode.degree = 0;
            mode.values.assign(grid.points() + 1, 0.0);
            for (int i = 0; i <= grid.points(); ++i)
                mode.values[i] = bump(grid.node(i), 0.45, 0.3);
            init.modes.push_back(std::move(mode));
        }
        const auto res = minimize_biharmonic_J(grid, opt.dim, p, lambda, d, init, {});
        j["j_value"] = res.j_value;
        j["multiplier"] = res.multiplier;
        j["el_residual"] = res.el_residual;
        j["nonradial_mass"] = res.nonradial_mass;
        j["sign_definite"] = res.sign_definite;
        j["monotone"] = res.monotone;
        j["minimizer"] = nlohmann::json::parse(mode_field_to_json(res.minimizer));
        if (!res.converged) return kExitNoConvergence;
    } else {
        throw PreconditionError("unknown minimize model: " + model);
    }
    j["config_digest"] = digest_string(config_digest(canonical_config(opt, "minimize:" + model)));
    if (!out_path.empty()) write_text_file(out_path, j.dump(2));
    std::cout << "minimize " << model << " done"
              << (out_path.empty() ? "" : ", wrote " + out_path) << "\n";
    return 0;
}

int run_report(const CommonOptions& opt, const std::string& out_path) {
    const auto summary = run_acceptance(opt.seed, worker_count());
    for (const auto& r : summary.results) std::cout << summary.one_line(r.id) << "\n";
    // reproducibility: a second run with the same seed must give the same summary
    const auto again = run_acceptance(opt.seed, worker_count());
    const bool reproducible = summary.to_json() == again.to_json();
    std::cout << "criterion 12 [reproducibility]: " << (reproducible ? "PASS" : "FAIL")
              << " (two runs with seed " << opt.seed << " compared byte for byte)\n";
    nlohmann::json j = nlohmann::json::parse(summary.to_json());
    j["reproducible"] = reproducible;
    if (!out_path.empty()) write_text_file(out_path, j.dump(2));
    return summary.all_pass && reproducible ? 0 : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vortexlab: vortex profiles, spectral dichotomy, rearrangements, and "
                 "energy minimization on the unit ball"};
    app.set_config("--config", "", "read options from a key=value config file (sections name the subcommand)");
    app.fallthrough();
    app.require_subcommand(1);

    CommonOptions opt;
    std::string model = "gl", out_path = "out.csv", curve_path, in_path, history_path,
                check = "prop24";
    double eps = 0.3, eta = 1.0, q = 2.0, p = 1.5, lambda = 0.0, d = 1.0;
    std::string eps_range = "0.05:0.5:8", eta_range = "0.2:5:8";

    auto* profile = app.add_subcommand("profile", "solve a radial profile");
    add_common(profile, opt);
    profile->add_option("--model", model, "gl | extended | mm");
    profile->add_option("--eps", eps, "vortex core parameter");
    profile->add_option("--eta", eta, "out-of-plane penalty parameter");
    profile->add_option("--out", out_path, "output CSV");

    auto* phase = app.add_subcommand("phase", "classify an (eps, eta) lattice");
    add_common(phase, opt);
    phase->add_option("--eps-range", eps_range, "a:b:n geometric");
    phase->add_option("--eta-range", eta_range, "a:b:n geometric");
    phase->add_option("--out", out_path, "lattice CSV");
    phase->add_option("--curve-out", curve_path, "onset curve CSV");

    auto* spectrum = app.add_subcommand("spectrum", "stability operator diagnostics");
    add_common(spectrum, opt);
    spectrum->add_option("--eps", eps, "vortex core parameter");
    spectrum->add_option("--eta", eta, "out-of-plane penalty parameter");
    spectrum->add_option("--out", out_path, "output JSON");

    auto* forms = app.add_subcommand("forms", "quadratic-form property checks");
    add_common(forms, opt);
    forms->add_option("--check", check, "prop24 | hardy-rellich | counterexample");
    forms->add_option("--out", out_path, "output JSON");

    auto* symmetrize = app.add_subcommand("symmetrize", "rearrange a stored field");
    add_common(symmetrize, opt);
    symmetrize->add_option("--in", in_path, "input field JSON")->required();
    symmetrize->add_option("--q", q, "slice exponent");
    symmetrize->add_option("--out", out_path, "output JSON");

    auto* minimize = app.add_subcommand("minimize", "energy descent");
    add_common(minimize, opt);
    minimize->add_option("--model", model, "extended | mm | biharmonic");
    minimize->add_option("--eps", eps, "vortex core parameter");
    minimize->add_option("--eta", eta, "out-of-plane penalty parameter");
    minimize->add_option("--p", p, "constraint exponent");
    minimize->add_option("--lambda", lambda, "spectral shift");
    minimize->add_option("--d", d, "constraint level");
    minimize->add_option("--init-file", in_path, "initial field JSON");
    minimize->add_option("--out", out_path, "result JSON");
    minimize->add_option("--history", history_path, "descent history CSV");

    auto* report = app.add_subcommand("report", "run the acceptance battery");
    add_common(report, opt);
    report->add_option("--out", out_path, "summary JSON");

    std::string schema_path;
    app.add_option("--write-config-schema", schema_path,
                   "write a template config file with every key and exit");
    for (auto* sub : app.get_subcommands({})) sub->configurable();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (!schema_path.empty()) {
            write_text_file(schema_path, app.config_to_str(true, true));
            std::cout << "wrote " << schema_path << "\n";
            return 0;
        }
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    if (!schema_path.empty()) {
        write_text_file(schema_path, app.config_to_str(true, true));
        std::cout << "wrote " << schema_path << "\n";
        return 0;
    }
    try {
        if (profile->parsed()) return run_profile(opt, model, eps, eta, out_path);
        if (phase->parsed()) return run_phase(opt, eps_range, eta_range, out_path, curve_path);
        if (spectrum->parsed()) return run_spectrum(opt, eps, eta, out_path);
        if (forms->parsed()) return run_forms(opt, check, out_path);
        if (symmetrize->parsed()) return run_symmetrize(opt, in_path, q, out_path);
        if (minimize->parsed())
            return run_minimize(opt, model, eps, eta, p, lambda, d, in_path, out_path,
                                history_path);
        if (report->parsed()) return run_report(opt, out_path);
    } catch (const PreconditionError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PotentialError& e) {
        std::cerr << "potential rejected: " << e.what() << " (at t = " << e.report.location
                  << ", value " << e.report.value << ")\n";
        return kExitConfig;
    } catch (const SolveError& e) {
        std::cerr << "solver did not converge: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
