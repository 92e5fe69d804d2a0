#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "noiselab/interval_set.hpp"
#include "noiselab/stability.hpp"

namespace noiselab {

// Configuration of one stability-process simulation. Time runs on the grid
// t_k = rho * k / n_steps, k = 0..n_steps; the horizon deliberately stops at
// t = rho because the process degenerates as the conditional measure of the
// evolved set approaches 0 or 1 when t -> 1.
struct PathConfig {
    double rho = 0.5;
    int n_steps = 2000;
    int n_paths = 1;
    std::uint64_t master_seed = 0;
};

// One realized path. All vectors have n_steps + 1 entries, indexed by grid
// point. s[k] is computed in closed form from w[k] (never by Euler stepping
// the process for s itself), q_at[k] is the first-moment magnitude of the
// evolved set, qv[k] is the running trapezoid of q_at^2 / (1 - t), and
// eps[k] = q(s)^2 - q_at^2 evaluated on the evolved set.
struct PathSample {
    std::vector<double> times;
    std::vector<double> w;
    std::vector<double> s;
    std::vector<double> q_at;
    std::vector<double> qv;
    std::vector<double> eps;
};

struct QvReport {
    double realized = 0.0;        // sum of squared increments of s
    double analytic = 0.0;        // qv at the horizon
    double relative_gap = 0.0;    // |realized - analytic| / analytic
};

// Time-change comparison against the half-line process. omega1 is the exact
// clock -log(1 - t_k); omega2 integrates q_at^2 / (q(s)^2 (1 - t)) on the
// same grid. The verdict lag_ok checks omega2 at the full clock theta1
// against -log(1 - rho) with an O(1/n_steps) discretization allowance.
struct CouplingReport {
    std::vector<double> omega1;
    std::vector<double> omega2;
    double theta1 = 0.0;
    double omega2_at_theta1 = 0.0;
    bool lag_ok = false;
};

struct McStabilityResult {
    StabilityResult direct;    // ensemble mean of s(horizon)^q
    StabilityResult identity;  // gamma^q + q(q-1)/2 * mean integral of s^{q-2} d[qv]
    double difference_mean = 0.0;
    double difference_se = 0.0;
};

// Ensemble regression diagnostic for the centered deficit process eps_t.
// drift_constant and diffusion_constant are the largest normalized drift and
// diffusion observed on the grid; both are dimensionless in the sense that
// the bound they are compared against is
//   |drift| <= C / ((1-t) s^3 (1-s)^3) * eps * sqrt(|log eps|)
// and the sqrt(1-t) analogue for the diffusion, so the reported numbers are
// empirical candidates for C. The drift is estimated from the cumulative
// ensemble mean (eps_bar(t) - eps(0)) / t, which keeps the estimate stable
// under step refinement; the diffusion from per-step increment variances.
struct EpsilonDiagnostic {
    double drift_constant = 0.0;
    double diffusion_constant = 0.0;
    bool finite = true;
    int grid_points_used = 0;
    // Dispersion window: alpha = |log eps0|^{-1} s0^7 (1-s0)^7, clipped to
    // the horizon, and the observed fraction of paths whose eps stays within
    // eps0/2 of its start over [0, alpha].
    double window_alpha = 0.0;
    double window_probability = 0.0;
    int window_steps = 0;
};

// Per-exponent ensemble estimates. direct is the plain Monte Carlo mean of
// s(horizon)^q; identity applies the semigroup identity so only the running
// quadratic variation enters.
struct QEstimate {
    double q = 2.0;
    double direct_mean = 0.0;
    double direct_se = 0.0;
    double identity_mean = 0.0;
    double identity_se = 0.0;
    double diff_mean = 0.0;
    double diff_se = 0.0;
};

struct EnsembleOptions {
    std::vector<double> q_list = {2.0};
    bool couple = false;
    int n_threads = 1;
};

// Deterministic ensemble summary: for a fixed (set, config, options) the
// result is byte-identical regardless of n_threads, because paths are
// reduced in fixed chunk order.
struct EnsembleStats {
    long n_paths = 0;
    int n_steps = 0;
    double rho = 0.0;
    double gamma = 0.0;
    double mean_s = 0.0;
    double se_s = 0.0;
    std::vector<QEstimate> q_estimates;
    double mean_realized_qv = 0.0;
    double mean_analytic_qv = 0.0;
    double qv_relative_gap = 0.0;
    double min_eps = 0.0;
    bool coupled = false;
    long lag_ok_count = 0;
    long positive_lead_count = 0;      // paths with omega1 - omega2 > 0 at the horizon
    double max_mono_violation = 0.0;   // worst per-step decrease of omega1 - omega2
    double max_omega2_excess = 0.0;    // worst omega2(theta1) - (-log(1-rho))
};

void validate_path_config(const PathConfig& cfg);

// Builds the full path from externally supplied standard normal increments
// (z.size() must equal cfg.n_steps). This is the test seam: passing zeros
// yields the deterministic center path.
PathSample path_from_increments(const IntervalUnion& a, const PathConfig& cfg,
                                const std::vector<double>& z);

PathSample sample_s_path(const IntervalUnion& a, const PathConfig& cfg,
                         std::uint64_t path_index);

QvReport quadratic_variation_check(const PathSample& path);

CouplingReport couple_halfspace(const PathSample& path, double rho);

McStabilityResult mc_stability(const IntervalUnion& a, const PathConfig& cfg,
                               double q, int n_threads = 1);

EpsilonDiagnostic epsilon_process_diagnostic(const std::vector<PathSample>& ensemble);

EnsembleStats run_ensemble(const IntervalUnion& a, const PathConfig& cfg,
                           const EnsembleOptions& opt);

// CSV export of realized paths: one row per grid point.
void write_path_csv_header(std::ostream& out);
void append_path_csv(std::ostream& out, int path_index, const PathSample& path);

}  // namespace noiselab
