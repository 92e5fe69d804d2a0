#include "noiselab/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"
#include "noiselab/rng.hpp"
#include "noiselab/set_literal.hpp"

namespace noiselab {

namespace {

double profile_or_zero(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return isoperimetric_profile(s);
}

// Instantaneous rate of the half-line comparison clock. Recovers q(s)^2 from
// eps + q_at^2 so the two quantities cancel exactly when eps was formed from
// the same pair; falls back to the half-line rate when both vanish.
double clock_rate(double q_at, double eps, double t) {
    const double qs2 = eps + q_at * q_at;
    if (qs2 < 1e-300) return 1.0 / (1.0 - t);
    return (q_at * q_at) / (qs2 * (1.0 - t));
}

double sample_variance(double sum, double sumsq, long n) {
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    const double var = (sumsq - static_cast<double>(n) * mean * mean) /
                       static_cast<double>(n - 1);
    return var > 0.0 ? var : 0.0;
}

double standard_error(double sum, double sumsq, long n) {
    return std::sqrt(sample_variance(sum, sumsq, n) / static_cast<double>(n));
}

}  // namespace

void validate_path_config(const PathConfig& cfg) {
    if (!(cfg.rho >= 0.0) || !(cfg.rho < 1.0))
        throw CorrelationOutOfRange("path horizon requires rho in [0, 1)");
    if (cfg.n_steps < 100) throw Error("n_steps must be at least 100");
    if (cfg.n_paths < 1) throw Error("n_paths must be positive");
}

PathSample path_from_increments(const IntervalUnion& a, const PathConfig& cfg,
                                const std::vector<double>& z) {
    validate_path_config(cfg);
    const double gamma = gaussian_measure(a);
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw DegenerateMeasure(
            "path sampling requires a set of measure strictly between 0 and 1");
    const int n = cfg.n_steps;
    if (static_cast<int>(z.size()) != n)
        throw Error("increment vector size must equal n_steps");

    const auto& parts = a.intervals();
    const std::size_t m = parts.size();

    PathSample p;
    p.times.resize(n + 1);
    p.w.resize(n + 1);
    p.s.resize(n + 1);
    p.q_at.resize(n + 1);
    p.qv.resize(n + 1);
    p.eps.resize(n + 1);

    const double dt = cfg.rho / static_cast<double>(n);
    const double sqrt_dt = std::sqrt(dt);

    double wk = 0.0;
    double prev_g = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = cfg.rho * static_cast<double>(k) / static_cast<double>(n);
        const double inv = 1.0 / std::sqrt(1.0 - t);

        double mass = 0.0;
        double signed_moment = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double lo = (parts[i].lo - wk) * inv;
            const double hi = (parts[i].hi - wk) * inv;
            mass += interval_gaussian_mass(lo, hi);
            signed_moment += std_normal_pdf(lo) - std_normal_pdf(hi);
        }
        if (mass < 0.0) mass = 0.0;
        if (mass > 1.0) mass = 1.0;

        const double qa = std::abs(signed_moment);
        const double qs = profile_or_zero(mass);
        const double g = qa * qa / (1.0 - t);

        p.times[k] = t;
        p.w[k] = wk;
        p.s[k] = mass;
        p.q_at[k] = qa;
        p.eps[k] = (qs - qa) * (qs + qa);
        p.qv[k] = (k == 0) ? 0.0 : p.qv[k - 1] + 0.5 * (prev_g + g) * dt;
        prev_g = g;

        if (k < n) wk += sqrt_dt * z[k];
    }
    return p;
}

PathSample sample_s_path(const IntervalUnion& a, const PathConfig& cfg,
                         std::uint64_t path_index) {
    validate_path_config(cfg);
    CounterRng rng(cfg.master_seed, path_index);
    std::vector<double> z(static_cast<std::size_t>(cfg.n_steps));
    for (double& v : z) v = rng.next_normal();
    return path_from_increments(a, cfg, z);
}

QvReport quadratic_variation_check(const PathSample& path) {
    if (path.s.size() < 2 || path.qv.size() != path.s.size())
        throw Error("path is incomplete");
    double realized = 0.0;
    for (std::size_t k = 0; k + 1 < path.s.size(); ++k) {
        const double d = path.s[k + 1] - path.s[k];
        realized += d * d;
    }
    QvReport rep;
    rep.realized = realized;
    rep.analytic = path.qv.back();
    if (rep.analytic > 0.0)
        rep.relative_gap = std::abs(realized - rep.analytic) / rep.analytic;
    else
        rep.relative_gap =
            realized == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return rep;
}

CouplingReport couple_halfspace(const PathSample& path, double rho) {
    if (!(rho >= 0.0) || !(rho < 1.0))
        throw CorrelationOutOfRange("coupling requires rho in [0, 1)");
    const std::size_t n1 = path.times.size();
    if (n1 < 2 || path.qv.size() != n1 || path.q_at.size() != n1 ||
        path.eps.size() != n1)
        throw Error("path is incomplete");
    if (!(path.qv.back() > 0.0))
        throw DegenerateClock("quadratic-variation clock is constant");

    CouplingReport rep;
    rep.omega1.resize(n1);
    rep.omega2.resize(n1);
    double prev_r = 0.0;
    for (std::size_t k = 0; k < n1; ++k) {
        const double t = path.times[k];
        rep.omega1[k] = -std::log1p(-t);
        const double r = clock_rate(path.q_at[k], path.eps[k], t);
        if (k == 0)
            rep.omega2[k] = 0.0;
        else
            rep.omega2[k] = rep.omega2[k - 1] +
                            0.5 * (prev_r + r) * (path.times[k] - path.times[k - 1]);
        prev_r = r;
    }
    rep.theta1 = path.qv.back();
    rep.omega2_at_theta1 = rep.omega2.back();
    const int n_steps = static_cast<int>(n1) - 1;
    rep.lag_ok =
        rep.omega2_at_theta1 <= -std::log1p(-rho) + 10.0 / static_cast<double>(n_steps);
    return rep;
}

namespace {

struct ChunkAccum {
    double sum_s = 0.0, sumsq_s = 0.0;
    double sum_realized = 0.0, sum_analytic = 0.0;
    double min_eps = std::numeric_limits<double>::infinity();
    long lag_count = 0;
    long lead_count = 0;
    double max_mono = -std::numeric_limits<double>::infinity();
    double max_excess = -std::numeric_limits<double>::infinity();
    std::vector<double> sum_direct, sumsq_direct;
    std::vector<double> sum_ident, sumsq_ident;
    std::vector<double> sum_diff, sumsq_diff;

    explicit ChunkAccum(std::size_t nq)
        : sum_direct(nq, 0.0), sumsq_direct(nq, 0.0), sum_ident(nq, 0.0),
          sumsq_ident(nq, 0.0), sum_diff(nq, 0.0), sumsq_diff(nq, 0.0) {}
};

void accumulate_path(const PathSample& p, const EnsembleOptions& opt,
                     double gamma, double rho, ChunkAccum& acc) {
    const std::size_t n1 = p.times.size();
    const double s_end = p.s[n1 - 1];
    acc.sum_s += s_end;
    acc.sumsq_s += s_end * s_end;

    double realized = 0.0;
    for (std::size_t k = 0; k + 1 < n1; ++k) {
        const double d = p.s[k + 1] - p.s[k];
        realized += d * d;
    }
    acc.sum_realized += realized;
    acc.sum_analytic += p.qv[n1 - 1];

    for (std::size_t k = 0; k < n1; ++k)
        if (p.eps[k] < acc.min_eps) acc.min_eps = p.eps[k];

    for (std::size_t j = 0; j < opt.q_list.size(); ++j) {
        const double q = opt.q_list[j];
        const double direct = std::pow(s_end, q);
        double integral = 0.0;
        if (q == 2.0) {
            // s^{q-2} is identically 1, so the integral telescopes.
            integral = p.qv[n1 - 1];
        } else if (q == 3.0) {
            for (std::size_t k = 0; k + 1 < n1; ++k)
                integral += 0.5 * (p.s[k] + p.s[k + 1]) * (p.qv[k + 1] - p.qv[k]);
        } else {
            for (std::size_t k = 0; k + 1 < n1; ++k) {
                const double f0 = std::pow(p.s[k], q - 2.0);
                const double f1 = std::pow(p.s[k + 1], q - 2.0);
                integral += 0.5 * (f0 + f1) * (p.qv[k + 1] - p.qv[k]);
            }
        }
        const double ident = std::pow(gamma, q) + 0.5 * q * (q - 1.0) * integral;
        const double diff = direct - ident;
        acc.sum_direct[j] += direct;
        acc.sumsq_direct[j] += direct * direct;
        acc.sum_ident[j] += ident;
        acc.sumsq_ident[j] += ident * ident;
        acc.sum_diff[j] += diff;
        acc.sumsq_diff[j] += diff * diff;
    }

    if (opt.couple) {
        if (!(p.qv[n1 - 1] > 0.0))
            throw DegenerateClock("quadratic-variation clock is constant");
        double omega2 = 0.0;
        double prev_r = clock_rate(p.q_at[0], p.eps[0], p.times[0]);
        double prev_lead = 0.0;
        double worst_mono = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < n1; ++k) {
            const double r = clock_rate(p.q_at[k], p.eps[k], p.times[k]);
            omega2 += 0.5 * (prev_r + r) * (p.times[k] - p.times[k - 1]);
            prev_r = r;
            const double lead = -std::log1p(-p.times[k]) - omega2;
            const double drop = prev_lead - lead;
            if (drop > worst_mono) worst_mono = drop;
            prev_lead = lead;
        }
        const int n_steps = static_cast<int>(n1) - 1;
        const double budget = -std::log1p(-rho) + 10.0 / static_cast<double>(n_steps);
        if (omega2 <= budget) ++acc.lag_count;
        if (prev_lead > 0.0) ++acc.lead_count;
        if (worst_mono > acc.max_mono) acc.max_mono = worst_mono;
        const double excess = omega2 - (-std::log1p(-rho));
        if (excess > acc.max_excess) acc.max_excess = excess;
    }
}

}  // namespace

EnsembleStats run_ensemble(const IntervalUnion& a, const PathConfig& cfg,
                           const EnsembleOptions& opt) {
    validate_path_config(cfg);
    const double gamma = gaussian_measure(a);
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw DegenerateMeasure(
            "ensemble simulation requires a set of measure strictly between 0 and 1");
    if (opt.q_list.empty()) throw BadExponent("ensemble needs at least one exponent");
    for (double q : opt.q_list)
        if (!(q >= 2.0))
            throw BadExponent("identity-based estimation requires q >= 2");
    if (opt.couple && cfg.rho == 0.0)
        throw DegenerateClock("quadratic-variation clock is constant at rho = 0");

    const long n_paths = cfg.n_paths;
    const long chunk_size = 64;
    const long n_chunks = (n_paths + chunk_size - 1) / chunk_size;
    const std::size_t nq = opt.q_list.size();

    std::vector<ChunkAccum> partials(static_cast<std::size_t>(n_chunks),
                                     ChunkAccum(nq));
    std::atomic<long> next_chunk{0};
    const int n_threads = std::clamp(opt.n_threads, 1, 64);
    std::vector<std::string> worker_errors(static_cast<std::size_t>(n_threads));

    auto worker = [&](int tid) {
        try {
            for (;;) {
                const long c = next_chunk.fetch_add(1);
                if (c >= n_chunks) break;
                ChunkAccum& acc = partials[static_cast<std::size_t>(c)];
                const long begin = c * chunk_size;
                const long end = std::min(n_paths, begin + chunk_size);
                for (long idx = begin; idx < end; ++idx) {
                    const PathSample p =
                        sample_s_path(a, cfg, static_cast<std::uint64_t>(idx));
                    accumulate_path(p, opt, gamma, cfg.rho, acc);
                }
            }
        } catch (const std::exception& e) {
            worker_errors[static_cast<std::size_t>(tid)] = e.what();
            next_chunk.store(n_chunks);
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads - 1));
        for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker, t);
        worker(0);
        for (auto& th : pool) th.join();
    }
    for (const std::string& msg : worker_errors)
        if (!msg.empty()) throw Error(msg);

    // Chunk partials are combined in chunk order, which makes the reduction
    // independent of how chunks were assigned to threads.
    ChunkAccum total(nq);
    total.max_mono = -std::numeric_limits<double>::infinity();
    for (long c = 0; c < n_chunks; ++c) {
        const ChunkAccum& acc = partials[static_cast<std::size_t>(c)];
        total.sum_s += acc.sum_s;
        total.sumsq_s += acc.sumsq_s;
        total.sum_realized += acc.sum_realized;
        total.sum_analytic += acc.sum_analytic;
        total.min_eps = std::min(total.min_eps, acc.min_eps);
        total.lag_count += acc.lag_count;
        total.lead_count += acc.lead_count;
        total.max_mono = std::max(total.max_mono, acc.max_mono);
        total.max_excess = std::max(total.max_excess, acc.max_excess);
        for (std::size_t j = 0; j < nq; ++j) {
            total.sum_direct[j] += acc.sum_direct[j];
            total.sumsq_direct[j] += acc.sumsq_direct[j];
            total.sum_ident[j] += acc.sum_ident[j];
            total.sumsq_ident[j] += acc.sumsq_ident[j];
            total.sum_diff[j] += acc.sum_diff[j];
            total.sumsq_diff[j] += acc.sumsq_diff[j];
        }
    }

    EnsembleStats st;
    st.n_paths = n_paths;
    st.n_steps = cfg.n_steps;
    st.rho = cfg.rho;
    st.gamma = gamma;
    const double np = static_cast<double>(n_paths);
    st.mean_s = total.sum_s / np;
    st.se_s = standard_error(total.sum_s, total.sumsq_s, n_paths);
    st.q_estimates.resize(nq);
    for (std::size_t j = 0; j < nq; ++j) {
        QEstimate& e = st.q_estimates[j];
        e.q = opt.q_list[j];
        e.direct_mean = total.sum_direct[j] / np;
        e.direct_se = standard_error(total.sum_direct[j], total.sumsq_direct[j], n_paths);
        e.identity_mean = total.sum_ident[j] / np;
        e.identity_se = standard_error(total.sum_ident[j], total.sumsq_ident[j], n_paths);
        e.diff_mean = total.sum_diff[j] / np;
        e.diff_se = standard_error(total.sum_diff[j], total.sumsq_diff[j], n_paths);
    }
    st.mean_realized_qv = total.sum_realized / np;
    st.mean_analytic_qv = total.sum_analytic / np;
    if (st.mean_analytic_qv > 0.0)
        st.qv_relative_gap =
            std::abs(st.mean_realized_qv - st.mean_analytic_qv) / st.mean_analytic_qv;
    else
        st.qv_relative_gap = st.mean_realized_qv == 0.0
                                 ? 0.0
                                 : std::numeric_limits<double>::infinity();
    st.min_eps = total.min_eps;
    st.coupled = opt.couple;
    if (opt.couple) {
        st.lag_ok_count = total.lag_count;
        st.positive_lead_count = total.lead_count;
        st.max_mono_violation = total.max_mono;
        st.max_omega2_excess = total.max_excess;
    }
    return st;
}

McStabilityResult mc_stability(const IntervalUnion& a, const PathConfig& cfg,
                               double q, int n_threads) {
    if (!(q >= 2.0)) throw BadExponent("identity-based estimator requires q >= 2");
    if (cfg.n_paths < 1000)
        throw InsufficientEnsemble("stability estimation requires at least 1000 paths");
    EnsembleOptions opt;
    opt.q_list = {q};
    opt.couple = false;
    opt.n_threads = n_threads;
    const EnsembleStats st = run_ensemble(a, cfg, opt);
    const QEstimate& e = st.q_estimates.front();
    McStabilityResult r;
    r.direct = StabilityResult{e.direct_mean, StabilityMethod::monte_carlo,
                               e.direct_se, true};
    r.identity = StabilityResult{e.identity_mean, StabilityMethod::monte_carlo,
                                 e.identity_se, true};
    r.difference_mean = e.diff_mean;
    r.difference_se = e.diff_se;
    return r;
}

EpsilonDiagnostic epsilon_process_diagnostic(const std::vector<PathSample>& ensemble) {
    if (ensemble.size() < 1000)
        throw InsufficientEnsemble("diagnostic requires at least 1000 paths");
    const std::size_t n_paths = ensemble.size();
    const std::size_t n1 = ensemble[0].times.size();
    for (const PathSample& p : ensemble)
        if (p.times.size() != n1 || p.eps.size() != n1 || p.s.size() != n1)
            throw Error("ensemble paths must share one grid");

    const double eps0 = ensemble[0].eps[0];
    const double s0 = ensemble[0].s[0];

    EpsilonDiagnostic d;
    if (!(eps0 > 1e-14)) {
        // The process starts (numerically) on the half-line manifold where
        // eps vanishes identically; every normalized ratio is 0/0, so report
        // zeros and a trivially-inside-the-band window.
        d.window_probability = 1.0;
        return d;
    }

    std::vector<double> mean_eps(n1, 0.0), mean_s(n1, 0.0);
    for (const PathSample& p : ensemble)
        for (std::size_t k = 0; k < n1; ++k) {
            mean_eps[k] += p.eps[k];
            mean_s[k] += p.s[k];
        }
    const double np = static_cast<double>(n_paths);
    for (std::size_t k = 0; k < n1; ++k) {
        mean_eps[k] /= np;
        mean_s[k] /= np;
    }

    const double horizon = ensemble[0].times.back();
    for (std::size_t k = 0; k + 1 < n1; ++k) {
        const double t = ensemble[0].times[k];
        const double dt = ensemble[0].times[k + 1] - t;
        if (!(dt > 0.0)) continue;
        const double me = mean_eps[k];
        const double ms = mean_s[k];
        if (me <= 1e-12 || ms <= 0.0 || ms >= 1.0) continue;
        const double cube = ms * ms * ms * (1.0 - ms) * (1.0 - ms) * (1.0 - ms);
        const double norm = cube / (me * std::sqrt(std::abs(std::log(me))));

        double sum = 0.0, sumsq = 0.0;
        for (const PathSample& p : ensemble) {
            const double x = p.eps[k + 1] - p.eps[k];
            sum += x;
            sumsq += x * x;
        }
        const double diffusion =
            std::sqrt(sample_variance(sum, sumsq, static_cast<long>(n_paths)) / dt);
        const double ratio_diff = diffusion * std::sqrt(1.0 - t) * norm;
        if (!std::isfinite(ratio_diff)) d.finite = false;
        if (ratio_diff > d.diffusion_constant) d.diffusion_constant = ratio_diff;

        // Cumulative-mean drift estimate: robust to the step size, unlike a
        // raw per-step mean whose noise grows as dt shrinks. The early strip
        // t < horizon/10 is skipped because t in the denominator amplifies
        // ensemble noise there.
        if (t >= horizon / 10.0) {
            const double drift = (me - eps0) / t;
            const double ratio_drift = std::abs(drift) * (1.0 - t) * norm;
            if (!std::isfinite(ratio_drift)) d.finite = false;
            if (ratio_drift > d.drift_constant) d.drift_constant = ratio_drift;
        }
        ++d.grid_points_used;
    }

    const double s7 = std::pow(s0 * (1.0 - s0), 7.0);
    double alpha = s7 / std::abs(std::log(eps0));
    if (alpha > horizon) alpha = horizon;
    d.window_alpha = alpha;
    long inside = 0;
    std::size_t window_steps = 0;
    for (std::size_t k = 0; k < n1; ++k)
        if (ensemble[0].times[k] <= alpha) window_steps = k + 1;
    d.window_steps = static_cast<int>(window_steps);
    for (const PathSample& p : ensemble) {
        bool ok = true;
        for (std::size_t k = 0; k < window_steps; ++k)
            if (std::abs(p.eps[k] - eps0) > eps0 / 2.0) {
                ok = false;
                break;
            }
        if (ok) ++inside;
    }
    d.window_probability = static_cast<double>(inside) / np;
    return d;
}

void write_path_csv_header(std::ostream& out) { out << "path,t,W,S,qA,qv,eps\n"; }

void append_path_csv(std::ostream& out, int path_index, const PathSample& path) {
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        out << path_index << ',' << format_double(path.times[k]) << ','
            << format_double(path.w[k]) << ',' << format_double(path.s[k]) << ','
            << format_double(path.q_at[k]) << ',' << format_double(path.qv[k]) << ','
            << format_double(path.eps[k]) << '\n';
    }
}

}  // namespace noiselab
