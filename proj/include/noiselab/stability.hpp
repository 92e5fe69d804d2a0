#pragma once

// Noise-stability functionals on interval unions: the stability value under
// correlated Gaussian resampling, its q-power and general-phi variants, the
// cross form K, the centroid/total-variation metrics, deficits against the
// rounded half-line, and the report tying them together.

#include "noiselab/interval_set.hpp"

namespace noiselab {

enum class StabilityMethod { bvn_sum, quadrature, spectral, monte_carlo };

struct StabilityResult {
    double value = 0.0;
    StabilityMethod method = StabilityMethod::bvn_sum;
    double error_estimate = 0.0;
    bool converged = true;
};

struct DeficitReport {
    double rho = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;        // profile(gamma)^2 - centroid^2
    double delta = 0.0;          // gamma(A symdiff H(A))
    double epsilon_tilde = 0.0;  // smoothed-indicator gap integral
    double deficit = 0.0;        // stability(H) - stability(A)
    double lower_expr = 0.0;     // epsilon |log epsilon|^-1 sqrt(1-rho)
    double upper_expr = 0.0;     // epsilon / sqrt(1-rho)
    double lower_ratio = 0.0;    // deficit / lower_expr
    double upper_ratio = 0.0;    // deficit / upper_expr
    double upper_I = 0.0;        // K(H,H) - K(H,A)
    bool small_epsilon_regime = false; // epsilon < exp(-1/rho)
};

// Gaussian smoothing of the indicator of A evaluated at x:
// sum over components of Phi((hi - rho x)/sqrt(1-rho^2)) - Phi((lo - ...)).
// Throws CorrelationOutOfRange unless 0 <= rho < 1.
double ou_apply(const IntervalUnion& a, double rho, double x);

// P(both of two rho-correlated standard Gaussians land in A).
// bvn_sum: sum of bivariate rectangle probabilities over component pairs.
// quadrature: integral of ou_apply over A.
// spectral: delegated to the Hermite expansion.
// abs_tol <= 0 selects the method's default tolerance; bvn_sum ignores it.
// Throws NotConverged when an adaptive integral exhausts its budget.
StabilityResult noise_stability(const IntervalUnion& a, double rho,
                                StabilityMethod method = StabilityMethod::bvn_sum,
                                double abs_tol = 0.0);

// K(A,B): probability the correlated pair lands in A x B; symmetric;
// K(A,A) equals noise_stability(A, rho).
double cross_stability(const IntervalUnion& a, const IntervalUnion& b,
                       double rho);

// E[(conditional hit probability)^q]. Throws BadExponent unless q > 1.
// q = 2 coincides with noise_stability. abs_tol <= 0 selects the default.
StabilityResult q_stability(const IntervalUnion& a, double rho, double q,
                            double abs_tol = 0.0);

enum class PhiKind { power, xlogx };
struct PhiSpec {
    PhiKind kind = PhiKind::power;
    double q = 2.0; // exponent for PhiKind::power
};

// E[phi(conditional hit probability)] with the continuous extension
// 0 log 0 = 0 for xlogx. power(q) reproduces q_stability for q > 1.
double phi_stability(const IntervalUnion& a, double rho, const PhiSpec& phi);

// profile(gamma(A))^2 - centroid(A)^2: the first-order energy gap between A
// and its rounded half-line. Throws DegenerateMeasure unless 0 < gamma < 1.
double epsilon_metric(const IntervalUnion& a);

// gamma(A symdiff H(A)), the total-variation distance to the rounding.
double delta_metric(const IntervalUnion& a);

// | integral of Phi((rho x - alpha)/sqrt(1-rho^2)) (1_H - 1_A) dgamma |,
// evaluated on the axis oriented so H is a right half-line.
double epsilon_tilde(const IntervalUnion& a, double rho);

// stability(H(A)) - stability(A) at exponent q, both sides computed by the
// same method (bivariate sums for q = 2, quadrature otherwise) so systematic
// bias cancels. Throws BadExponent unless q > 1.
double deficit(const IntervalUnion& a, double rho, double q = 2.0);

// Full metrics/ratios bundle for one (A, rho); the deficit (and the ratios
// built from it) use exponent q. Throws DegenerateEpsilon when
// epsilon_metric(A) <= 1e-14 (the ratios would be noise over noise).
DeficitReport deficit_bounds_report(const IntervalUnion& a, double rho,
                                    double q = 2.0);

// surface_area(A) - profile(gamma(A)): the Gaussian isoperimetric slack.
double isoperimetric_deficit(const IntervalUnion& a);

// Second-moment slack b(H(A)) - b(A) with b(S) the integral of (x^2 - 1)
// over S, closed form sum of lo pdf(lo) - hi pdf(hi). b(H) equals
// xi(gamma(A)).
double second_moment_gap(const IntervalUnion& a);

} // namespace noiselab
