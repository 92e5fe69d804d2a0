#include "noiselab/stability.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"
#include "noiselab/quadrature.hpp"
#include "noiselab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace noiselab {
namespace {

void check_rho(double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw CorrelationOutOfRange("stability requires 0 <= rho < 1");
}

double checked_gamma(const IntervalUnion& a) {
    const double g = gaussian_measure(a);
    if (!(g > 0.0 && g < 1.0))
        throw DegenerateMeasure("operation requires 0 < gamma(A) < 1");
    return g;
}

IntervalUnion reflect(const IntervalUnion& a) {
    std::vector<Interval> v;
    v.reserve(a.intervals().size());
    for (const auto& iv : a.intervals()) v.push_back({-iv.hi, -iv.lo});
    return IntervalUnion::canonicalize(std::move(v));
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Conditional hit probability P(sqrt(rho) x + sqrt(1-rho) Y in A).
double conditional_hit(const IntervalUnion& a, double sqrt_rho,
                       double sqrt_1mrho, double x) {
    double p = 0.0;
    const double shift = sqrt_rho * x;
    for (const auto& iv : a.intervals()) {
        const double lo =
            std::isinf(iv.lo) ? iv.lo : (iv.lo - shift) / sqrt_1mrho;
        const double hi =
            std::isinf(iv.hi) ? iv.hi : (iv.hi - shift) / sqrt_1mrho;
        p += interval_gaussian_mass(lo, hi);
    }
    return clamp01(p);
}

StabilityResult stability_bvn(const IntervalUnion& a, double rho) {
    double total = 0.0;
    const auto& iv = a.intervals();
    for (const auto& x : iv)
        for (const auto& y : iv)
            total += bvn_rectangle(x.lo, x.hi, y.lo, y.hi, rho);
    const double k = static_cast<double>(iv.size());
    return {clamp01(total), StabilityMethod::bvn_sum, k * k * 1e-13, true};
}

StabilityResult stability_quadrature(const IntervalUnion& a, double rho,
                                     double abs_tol) {
    QuadratureConfig cfg;
    cfg.abs_tol = abs_tol > 0.0 ? abs_tol : 1e-11;
    const auto r = integrate_gaussian(
        [&](double x) { return ou_apply(a, rho, x); }, a, cfg);
    if (!r.converged)
        throw NotConverged("noise stability quadrature did not converge");
    return {clamp01(r.value), StabilityMethod::quadrature, r.error_estimate,
            true};
}

} // namespace

double ou_apply(const IntervalUnion& a, double rho, double x) {
    check_rho(rho);
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    double p = 0.0;
    const double shift = rho * x;
    for (const auto& iv : a.intervals()) {
        const double lo = std::isinf(iv.lo) ? iv.lo : (iv.lo - shift) / s;
        const double hi = std::isinf(iv.hi) ? iv.hi : (iv.hi - shift) / s;
        p += interval_gaussian_mass(lo, hi);
    }
    return clamp01(p);
}

StabilityResult noise_stability(const IntervalUnion& a, double rho,
                                StabilityMethod method, double abs_tol) {
    check_rho(rho);
    switch (method) {
    case StabilityMethod::bvn_sum:
        return stability_bvn(a, rho);
    case StabilityMethod::quadrature:
        return stability_quadrature(a, rho, abs_tol);
    case StabilityMethod::spectral:
        return spectral_stability(a, rho, abs_tol > 0.0 ? abs_tol : 1e-7);
    case StabilityMethod::monte_carlo:
        throw Error("monte_carlo stability lives in the simulation lab");
    }
    throw Error("unknown stability method");
}

double cross_stability(const IntervalUnion& a, const IntervalUnion& b,
                       double rho) {
    check_rho(rho);
    double total = 0.0;
    for (const auto& x : a.intervals())
        for (const auto& y : b.intervals())
            total += bvn_rectangle(x.lo, x.hi, y.lo, y.hi, rho);
    return clamp01(total);
}

StabilityResult q_stability(const IntervalUnion& a, double rho, double q,
                            double abs_tol) {
    check_rho(rho);
    if (!(q > 1.0))
        throw BadExponent("q-stability requires q > 1");
    const double sr = std::sqrt(rho);
    const double s1 = std::sqrt(1.0 - rho);
    QuadratureConfig cfg;
    cfg.abs_tol = abs_tol > 0.0 ? abs_tol : 1e-11;
    cfg.max_panels = 8192;
    const auto r = integrate_line(
        [&](double x) {
            const double p = conditional_hit(a, sr, s1, x);
            return p <= 0.0 ? 0.0 : std::pow(p, q);
        },
        cfg);
    if (!r.converged)
        throw NotConverged("q-stability quadrature did not converge");
    return {clamp01(r.value), StabilityMethod::quadrature, r.error_estimate,
            true};
}

double phi_stability(const IntervalUnion& a, double rho, const PhiSpec& phi) {
    check_rho(rho);
    const double sr = std::sqrt(rho);
    const double s1 = std::sqrt(1.0 - rho);
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-11;
    cfg.max_panels = 8192;
    std::function<double(double)> integrand;
    if (phi.kind == PhiKind::power) {
        if (!(phi.q > 0.0))
            throw BadExponent("power phi requires a positive exponent");
        const double q = phi.q;
        integrand = [&, q](double x) {
            const double p = conditional_hit(a, sr, s1, x);
            return p <= 0.0 ? 0.0 : std::pow(p, q);
        };
    } else {
        integrand = [&](double x) {
            const double p = conditional_hit(a, sr, s1, x);
            return p <= 0.0 ? 0.0 : p * std::log(p);
        };
    }
    const auto r = integrate_line(integrand, cfg);
    if (!r.converged)
        throw NotConverged("phi-stability quadrature did not converge");
    return r.value;
}

double epsilon_metric(const IntervalUnion& a) {
    const double g = checked_gamma(a);
    const double qg = isoperimetric_profile(g);
    const double c = first_moment_magnitude(a);
    return (qg - c) * (qg + c);
}

double delta_metric(const IntervalUnion& a) {
    checked_gamma(a);
    const IntervalUnion h = as_interval_union(halfspace_round(a));
    return gaussian_measure(symmetric_difference(a, h));
}

double epsilon_tilde(const IntervalUnion& a, double rho) {
    check_rho(rho);
    checked_gamma(a);
    const HalfLine h = halfspace_round(a);
    // Work on the axis where H is a right half-line.
    const IntervalUnion set = h.orientation > 0 ? a : reflect(a);
    const double alpha = h.orientation > 0 ? h.threshold : -h.threshold;
    const IntervalUnion half =
        as_interval_union(HalfLine{alpha, +1});
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    auto w = [&](double x) { return std_normal_cdf((rho * x - alpha) / s); };
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-11;
    const auto over_half = integrate_gaussian(w, half, cfg);
    const auto over_set = integrate_gaussian(w, set, cfg);
    if (!over_half.converged || !over_set.converged)
        throw NotConverged("epsilon_tilde quadrature did not converge");
    return std::fabs(over_half.value - over_set.value);
}

double deficit(const IntervalUnion& a, double rho, double q) {
    check_rho(rho);
    if (!(q > 1.0))
        throw BadExponent("deficit requires q > 1");
    checked_gamma(a);
    const IntervalUnion h = as_interval_union(halfspace_round(a));
    if (q == 2.0) {
        return noise_stability(h, rho, StabilityMethod::bvn_sum).value -
               noise_stability(a, rho, StabilityMethod::bvn_sum).value;
    }
    return q_stability(h, rho, q).value - q_stability(a, rho, q).value;
}

DeficitReport deficit_bounds_report(const IntervalUnion& a, double rho,
                                    double q) {
    check_rho(rho);
    DeficitReport rep;
    rep.rho = rho;
    rep.gamma = checked_gamma(a);
    rep.epsilon = epsilon_metric(a);
    if (rep.epsilon <= 1e-14)
        throw DegenerateEpsilon("ratio report requires epsilon > 1e-14");
    rep.delta = delta_metric(a);
    rep.epsilon_tilde = epsilon_tilde(a, rho);
    rep.deficit = deficit(a, rho, q);

    const HalfLine h = halfspace_round(a);
    const IntervalUnion hs = as_interval_union(h);
    rep.upper_I = cross_stability(hs, hs, rho) - cross_stability(hs, a, rho);

    const double root = std::sqrt(1.0 - rho);
    rep.lower_expr = rep.epsilon / std::fabs(std::log(rep.epsilon)) * root;
    rep.upper_expr = rep.epsilon / root;
    rep.lower_ratio = rep.deficit / rep.lower_expr;
    rep.upper_ratio = rep.deficit / rep.upper_expr;
    rep.small_epsilon_regime =
        rho > 0.0 && rep.epsilon < std::exp(-1.0 / rho);
    return rep;
}

double isoperimetric_deficit(const IntervalUnion& a) {
    const double g = checked_gamma(a);
    return surface_area(a) - isoperimetric_profile(g);
}

double second_moment_gap(const IntervalUnion& a) {
    checked_gamma(a);
    auto b_value = [](const IntervalUnion& s) {
        double b = 0.0;
        for (const auto& iv : s.intervals()) {
            if (std::isfinite(iv.lo)) b += iv.lo * std_normal_pdf(iv.lo);
            if (std::isfinite(iv.hi)) b -= iv.hi * std_normal_pdf(iv.hi);
        }
        return b;
    };
    const IntervalUnion h = as_interval_union(halfspace_round(a));
    return b_value(h) - b_value(a);
}

} // namespace noiselab
