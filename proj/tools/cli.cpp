#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json_writer.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/families.hpp"
#include "noiselab/interval_set.hpp"
#include "noiselab/property_suite.hpp"
#include "noiselab/sde.hpp"
#include "noiselab/set_literal.hpp"
#include "noiselab/spectral.hpp"
#include "noiselab/stability.hpp"

namespace noiselab {

namespace {

constexpr const char* kToolVersion = "0.1.0";

using KvList = std::vector<std::pair<std::string, std::string>>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Sidecar manifest written next to every file the tool produces. Everything
// in it is reproducible except wall_time_seconds, which is why payload files
// never carry timing.
void write_manifest(const std::string& payload_path,
                    const std::vector<std::string>& command,
                    const KvList& seeds, const KvList& tolerances,
                    const KvList& methods, double wall_seconds) {
    const std::string path = payload_path + ".manifest.json";
    std::ofstream f(path);
    if (!f) throw Error("cannot write manifest '" + path + "'");
    JsonWriter w(f);
    w.begin_object();
    w.key("command").begin_array();
    for (const std::string& c : command) w.value(c);
    w.end_array();
    w.field("tool_version", kToolVersion);
    w.key("seeds").begin_object();
    for (const auto& kv : seeds) w.field(kv.first, kv.second);
    w.end_object();
    w.key("tolerances").begin_object();
    for (const auto& kv : tolerances) w.field(kv.first, kv.second);
    w.end_object();
    w.key("methods").begin_object();
    for (const auto& kv : methods) w.field(kv.first, kv.second);
    w.end_object();
    w.field("wall_time_seconds", wall_seconds);
    w.end_object();
    w.finish();
}

StabilityMethod parse_method(const std::string& s) {
    if (s == "bvn") return StabilityMethod::bvn_sum;
    if (s == "quad") return StabilityMethod::quadrature;
    if (s == "spectral") return StabilityMethod::spectral;
    throw Error("unknown method '" + s + "' (expected bvn, quad or spectral)");
}

// Output rows carry the canonical method tag, not the flag spelling.
std::string method_tag(const std::string& flag) {
    if (flag == "bvn") return "bvn_sum";
    if (flag == "quad") return "quadrature";
    return flag;
}

struct ComputeArgs {
    std::string set;
    double rho = 0.0;
    double q = 2.0;
    bool q_given = false;
    std::string method = "bvn";
    double tol = 0.0;
    bool csv = false;
};

int do_compute(const ComputeArgs& args, std::ostream& out) {
    const IntervalUnion set = parse_set_literal(args.set);
    StabilityResult r;
    if (args.q_given) {
        if (args.method != "quad")
            throw Error("--q is only available with --method quad");
        r = q_stability(set, args.rho, args.q, args.tol);
    } else {
        r = noise_stability(set, args.rho, parse_method(args.method), args.tol);
    }
    const std::string canon = format_set_literal(set);
    if (args.csv) {
        out << "set,rho,method,q,value,error_estimate,converged\n";
        out << '"' << canon << "\"," << format_double(args.rho) << ','
            << method_tag(args.method) << ','
            << (args.q_given ? format_double(args.q) : "")
            << ',' << format_double(r.value) << ','
            << format_double(r.error_estimate) << ','
            << (r.converged ? "true" : "false") << '\n';
        return 0;
    }
    JsonWriter w(out);
    w.begin_object();
    w.field("command", "compute");
    w.field("set", canon);
    w.field("rho", args.rho);
    w.field("method", method_tag(args.method));
    if (args.q_given)
        w.field("q", args.q);
    else
        w.null_field("q");
    w.field("value", r.value);
    w.field("error_estimate", r.error_estimate);
    w.field("converged", r.converged);
    w.end_object();
    w.finish();
    return 0;
}

int do_deficit(const std::string& set_str, double rho, double q,
               std::ostream& out) {
    const IntervalUnion set = parse_set_literal(set_str);
    DeficitReport rep;
    bool have_ratios = true;
    try {
        rep = deficit_bounds_report(set, rho, q);
    } catch (const DegenerateEpsilon&) {
        // Sets on (or numerically at) the half-line manifold have epsilon at
        // roundoff level; the point estimates are still well defined, only
        // the normalized ratios are noise over noise.
        have_ratios = false;
        rep.rho = rho;
        rep.gamma = gaussian_measure(set);
        rep.epsilon = epsilon_metric(set);
        rep.delta = delta_metric(set);
        rep.epsilon_tilde = epsilon_tilde(set, rho);
        rep.deficit = deficit(set, rho, q);
        const IntervalUnion hs = as_interval_union(halfspace_round(set));
        rep.upper_I =
            cross_stability(hs, hs, rho) - cross_stability(hs, set, rho);
        rep.small_epsilon_regime = rho > 0.0 && rep.epsilon < std::exp(-1.0 / rho);
    }
    JsonWriter w(out);
    w.begin_object();
    w.field("command", "deficit");
    w.field("set", format_set_literal(set));
    w.field("rho", rho);
    w.field("q", q);
    w.field("gamma", rep.gamma);
    w.field("epsilon", rep.epsilon);
    w.field("delta", rep.delta);
    w.field("epsilon_tilde", rep.epsilon_tilde);
    w.field("deficit", rep.deficit);
    w.field("upper_I", rep.upper_I);
    if (have_ratios) {
        w.field("lower_expr", rep.lower_expr);
        w.field("upper_expr", rep.upper_expr);
        w.field("lower_ratio", rep.lower_ratio);
        w.field("upper_ratio", rep.upper_ratio);
    } else {
        w.null_field("lower_expr");
        w.null_field("upper_expr");
        w.null_field("lower_ratio");
        w.null_field("upper_ratio");
    }
    w.field("small_epsilon_regime", rep.small_epsilon_regime);
    w.end_object();
    w.finish();
    return 0;
}

void write_fit_row(std::ostream& f, const char* name, const SlopeFit& fit) {
    f << name << ',' << format_double(fit.slope) << ','
      << format_double(fit.intercept) << ',' << format_double(fit.max_residual)
      << ',' << fit.points << '\n';
}

void write_fit_json(JsonWriter& w, const std::string& key, const SlopeFit& fit) {
    w.key(key).begin_object();
    w.field("slope", fit.slope);
    w.field("intercept", fit.intercept);
    w.field("max_residual", fit.max_residual);
    w.field("points", fit.points);
    w.end_object();
}

int do_sweep(const std::string& family, const std::vector<double>& eps_grid,
             double rho, const std::string& out_path,
             const std::vector<std::string>& command, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    FamilySpec spec;
    spec.family_id = parse_family_id(family);
    spec.eps_grid = eps_grid;
    spec.rho = rho;
    const SweepResult res = run_family_sweep(spec);

    std::ofstream f(out_path);
    if (!f) throw Error("cannot open output file '" + out_path + "'");
    f << "eps,gamma,epsilon,delta,epsilon_tilde,deficit,lower_ratio,"
         "upper_ratio,isoperimetric_deficit\n";
    for (const SweepRow& row : res.rows) {
        f << format_double(row.eps) << ',' << format_double(row.gamma) << ','
          << format_double(row.epsilon) << ',' << format_double(row.delta) << ','
          << format_double(row.epsilon_tilde) << ','
          << format_double(row.deficit) << ','
          << format_double(row.lower_ratio) << ','
          << format_double(row.upper_ratio) << ','
          << format_double(row.isoperimetric_deficit) << '\n';
    }
    f << '\n';
    f << "fit,slope,intercept,max_residual,points\n";
    write_fit_row(f, "epsilon_vs_eps", res.epsilon_slope);
    write_fit_row(f, "delta_vs_eps", res.delta_slope);
    write_fit_row(f, "deficit_vs_eps", res.deficit_slope);
    f << '\n';
    f << "ratio,min,max\n";
    f << "epsilon_over_eps_sqrtlog," << format_double(res.tail_ratio_min) << ','
      << format_double(res.tail_ratio_max) << '\n';
    f.close();

    write_manifest(
        out_path, command, {},
        {{"stability_abs_tol", "1e-11"}, {"epsilon_tilde_abs_tol", "1e-11"}},
        {{"deficit", "bvn_sum"},
         {"epsilon_tilde", "adaptive_gauss_kronrod"},
         {"slope_fit", "least_squares_loglog"}},
        seconds_since(t0));

    JsonWriter w(out);
    w.begin_object();
    w.field("command", "sweep");
    w.field("family", family_name(res.family_id));
    w.field("rho", res.rho);
    w.field("rows", static_cast<long long>(res.rows.size()));
    w.field("out", out_path);
    write_fit_json(w, "epsilon_slope", res.epsilon_slope);
    write_fit_json(w, "delta_slope", res.delta_slope);
    write_fit_json(w, "deficit_slope", res.deficit_slope);
    w.field("tail_ratio_min", res.tail_ratio_min);
    w.field("tail_ratio_max", res.tail_ratio_max);
    w.end_object();
    w.finish();
    return 0;
}

int do_simulate(const std::string& set_str, double rho, int paths, int steps,
                std::uint64_t seed, bool couple, const std::string& export_path,
                int threads, const std::vector<std::string>& command,
                std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const IntervalUnion set = parse_set_literal(set_str);
    PathConfig cfg;
    cfg.rho = rho;
    cfg.n_steps = steps;
    cfg.n_paths = paths;
    cfg.master_seed = seed;
    EnsembleOptions opt;
    opt.q_list = {2.0};
    opt.couple = couple;
    opt.n_threads = threads;
    const EnsembleStats st = run_ensemble(set, cfg, opt);

    if (!export_path.empty()) {
        std::ofstream f(export_path);
        if (!f) throw Error("cannot open export file '" + export_path + "'");
        write_path_csv_header(f);
        // Export regenerates paths sequentially by index, so the file bytes
        // do not depend on the thread count used for the statistics.
        for (int i = 0; i < paths; ++i) {
            const PathSample p =
                sample_s_path(set, cfg, static_cast<std::uint64_t>(i));
            append_path_csv(f, i, p);
        }
        f.close();
        write_manifest(export_path, command,
                       {{"master_seed", std::to_string(seed)}},
                       {{"lag_budget", format_double(10.0 / steps)}},
                       {{"paths", "closed_form_from_brownian"},
                        {"qv", "trapezoid"}},
                       seconds_since(t0));
    }

    const QEstimate& e = st.q_estimates.front();
    JsonWriter w(out);
    w.begin_object();
    w.field("command", "simulate");
    w.field("set", format_set_literal(set));
    w.field("rho", st.rho);
    w.field("n_paths", st.n_paths);
    w.field("n_steps", st.n_steps);
    w.field("master_seed", static_cast<unsigned long>(seed));
    w.field("gamma", st.gamma);
    w.field("mean_s", st.mean_s);
    w.field("se_s", st.se_s);
    w.field("direct_mean", e.direct_mean);
    w.field("direct_se", e.direct_se);
    w.field("identity_mean", e.identity_mean);
    w.field("identity_se", e.identity_se);
    w.field("diff_mean", e.diff_mean);
    w.field("diff_se", e.diff_se);
    w.field("mean_realized_qv", st.mean_realized_qv);
    w.field("mean_analytic_qv", st.mean_analytic_qv);
    w.field("qv_relative_gap", st.qv_relative_gap);
    w.field("min_eps", st.min_eps);
    w.field("coupled", st.coupled);
    if (st.coupled) {
        w.field("lag_ok_count", st.lag_ok_count);
        w.field("positive_lead_count", st.positive_lead_count);
        w.field("max_mono_violation", st.max_mono_violation);
        w.field("max_omega2_excess", st.max_omega2_excess);
    } else {
        w.null_field("lag_ok_count");
        w.null_field("positive_lead_count");
        w.null_field("max_mono_violation");
        w.null_field("max_omega2_excess");
    }
    if (export_path.empty())
        w.null_field("export");
    else
        w.field("export", export_path);
    w.end_object();
    w.finish();
    return 0;
}

int do_verify(long cases, std::uint64_t seed, int threads, std::ostream& out) {
    const SuiteReport rep = run_property_suite(seed, cases, threads);
    JsonWriter w(out);
    w.begin_object();
    w.field("command", "verify");
    w.field("cases", rep.cases);
    w.field("master_seed", static_cast<unsigned long>(seed));
    w.field("failures", rep.failures);
    w.key("checks").begin_array();
    for (const CheckStat& cs : rep.checks) {
        w.begin_object();
        w.field("name", cs.name);
        w.field("run", cs.run);
        w.field("failed", cs.failed);
        w.field("worst_margin", cs.worst_margin);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.finish();
    return rep.failures > 0 ? 4 : 0;
}

int do_spectrum(const std::string& set_str, int degree, std::ostream& out) {
    const IntervalUnion set = parse_set_literal(set_str);
    const HermiteSpectrum sp = spectrum(set, degree);
    JsonWriter w(out);
    w.begin_object();
    w.field("command", "spectrum");
    w.field("set", format_set_literal(set));
    w.field("degree", sp.truncation_degree);
    w.key("coefficients").begin_array();
    for (double c : sp.coefficients) w.value(c);
    w.end_array();
    w.field("tail_energy_bound", sp.tail_energy_bound);
    w.end_object();
    w.finish();
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    std::vector<std::string> command(argv, argv + argc);

    CLI::App app{"Gaussian noise-stability laboratory"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    ComputeArgs cargs;
    bool c_json = false;
    auto* compute = app.add_subcommand(
        "compute", "Evaluate the noise stability of an interval union");
    compute->add_option("--set", cargs.set, "Set literal, e.g. \"(-inf,0.5]U[1,2]\"")
        ->required();
    compute->add_option("--rho", cargs.rho, "Correlation in [0,1)")->required();
    auto* c_q_opt =
        compute->add_option("--q", cargs.q, "Exponent for q-stability (quad only)");
    compute
        ->add_option("--method", cargs.method, "bvn, quad or spectral")
        ->check(CLI::IsMember({"bvn", "quad", "spectral"}));
    compute->add_option("--tol", cargs.tol, "Absolute tolerance override");
    auto* c_json_flag = compute->add_flag("--json", c_json, "JSON output (default)");
    auto* c_csv_flag = compute->add_flag("--csv", cargs.csv, "CSV output");
    c_csv_flag->excludes(c_json_flag);
    c_json_flag->excludes(c_csv_flag);

    std::string d_set;
    double d_rho = 0.0, d_q = 2.0;
    auto* deficit_cmd = app.add_subcommand(
        "deficit", "Stability deficit and bound ratios against the rounded half-line");
    deficit_cmd->add_option("--set", d_set, "Set literal")->required();
    deficit_cmd->add_option("--rho", d_rho, "Correlation in (0,1)")->required();
    deficit_cmd->add_option("--q", d_q, "Stability exponent (default 2)");

    std::string s_family, s_out;
    std::vector<double> s_eps;
    double s_rho = 0.0;
    auto* sweep = app.add_subcommand(
        "sweep", "Sweep a tightness family over an eps grid, writing CSV");
    sweep->add_option("--family", s_family, "F1, F2 or F3")->required();
    sweep->add_option("--eps-grid", s_eps, "Comma-separated eps values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--rho", s_rho, "Correlation in (0,1)")->required();
    sweep->add_option("--out", s_out, "Output CSV path")->required();

    std::string m_set, m_export;
    double m_rho = 0.0;
    int m_paths = 0, m_steps = 0, m_threads = 1;
    std::uint64_t m_seed = 0;
    bool m_couple = false;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo ensemble of the stability process");
    simulate->add_option("--set", m_set, "Set literal")->required();
    simulate->add_option("--rho", m_rho, "Horizon correlation in [0,1)")->required();
    simulate->add_option("--paths", m_paths, "Number of paths")->required();
    simulate->add_option("--steps", m_steps, "Grid steps (at least 100)")->required();
    simulate->add_option("--seed", m_seed, "Master seed")->required();
    simulate->add_flag("--couple", m_couple, "Run the half-line clock comparison");
    simulate->add_option("--export", m_export, "Write per-path CSV to this file");
    simulate->add_option("--threads", m_threads, "Worker threads (default 1)");

    long v_cases = 0;
    std::uint64_t v_seed = 0;
    int v_threads = 1;
    auto* verify = app.add_subcommand(
        "verify", "Run the randomized invariant suite");
    verify->add_option("--cases", v_cases, "Number of random cases")->required();
    verify->add_option("--seed", v_seed, "Master seed")->required();
    verify->add_option("--threads", v_threads, "Worker threads (default 1)");

    std::string p_set;
    int p_degree = 0;
    auto* spectrum_cmd = app.add_subcommand(
        "spectrum", "Hermite coefficients of the set indicator");
    spectrum_cmd->add_option("--set", p_set, "Set literal")->required();
    spectrum_cmd->add_option("--degree", p_degree, "Truncation degree (max 200)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(compute)) {
            cargs.q_given = c_q_opt->count() > 0;
            return do_compute(cargs, out);
        }
        if (app.got_subcommand(deficit_cmd)) return do_deficit(d_set, d_rho, d_q, out);
        if (app.got_subcommand(sweep))
            return do_sweep(s_family, s_eps, s_rho, s_out, command, out);
        if (app.got_subcommand(simulate))
            return do_simulate(m_set, m_rho, m_paths, m_steps, m_seed, m_couple,
                               m_export, m_threads, command, out);
        if (app.got_subcommand(verify)) return do_verify(v_cases, v_seed, v_threads, out);
        if (app.got_subcommand(spectrum_cmd)) return do_spectrum(p_set, p_degree, out);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const NotConverged& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace noiselab
