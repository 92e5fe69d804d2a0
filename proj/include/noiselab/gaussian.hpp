#pragma once

// Scalar special functions shared by every other header: standard normal
// CDF/quantile/density, the Gaussian isoperimetric profile and its first two
// derivatives, the auxiliary function xi, bivariate normal rectangle
// probabilities, and probabilists' Hermite polynomials.
//
// All functions are pure and accept +-infinity sentinels where documented,
// mapping them to exact limits.

namespace noiselab {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;    // sqrt(2*pi)
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2*pi)
inline constexpr int kHermiteDegreeGuard = 200;

// Standard normal density; 0 at +-infinity.
double std_normal_pdf(double x);

// Standard normal CDF via erfc. Absolute error <= 1e-15 on |x| <= 8,
// relative error <= 1e-12 down the lower tail to x = -37. Exact 0/1 at -+inf.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0,1): rational minimax initial guess refined
// by one Halley step. |cdf(quantile(p)) - p| <= 1e-13 on [1e-300, 1-1e-16].
// Throws DegenerateProbability outside (0,1).
double std_normal_quantile(double p);

// Gaussian isoperimetric profile q(s) = pdf(quantile(s)); 0 at s in {0,1} by
// continuity; symmetric about s = 1/2. Throws DegenerateProbability outside
// [0,1].
double isoperimetric_profile(double s);

// q'(s) = -quantile(s). Throws DegenerateProbability unless 0 < s < 1.
double profile_derivative(double s);

// q''(s) = -sqrt(2*pi) * exp(quantile(s)^2/2); always < -2, maximal at s=1/2.
// Throws DegenerateProbability unless 0 < s < 1. Overflows to -infinity for
// s within ~1e-300 of the endpoints.
double profile_second_derivative(double s);

// xi(s) = -quantile(s) * q(s), the closed form of the integral of (x^2 - 1)
// over the lower tail at quantile(s). Throws unless 0 < s < 1.
double xi(double s);

// P(x_lo <= U <= x_hi, y_lo <= V <= y_hi) for a standard bivariate normal
// pair with correlation rho. Endpoints may be +-infinity. Absolute error
// <= 1e-13. Throws CorrelationOutOfRange if |rho| >= 1.
double bvn_rectangle(double x_lo, double x_hi, double y_lo, double y_hi,
                     double rho);

// P(U <= h, V <= k) for the same pair; building block of bvn_rectangle.
double bvn_cdf(double h, double k, double rho);

// Probabilists' Hermite polynomial He_degree(x) by the three-term recurrence.
// Raw values overflow double range near degree 150 for moderate x; the guard
// rejects degree > 200. Throws DegreeTooLarge.
double hermite_eval(int degree, double x);

// He_degree(x) / sqrt(degree!), computed with the normalized recurrence so no
// intermediate overflows for degrees within the guard at |x| <= 40.
double hermite_orthonormal(int degree, double x);

} // namespace noiselab
