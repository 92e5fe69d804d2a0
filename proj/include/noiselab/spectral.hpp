#pragma once

// Hermite expansion of interval-union indicators in the orthonormal basis,
// the spectral formula for noise stability, and the first-order energy gap.

#include "noiselab/interval_set.hpp"
#include "noiselab/stability.hpp"

#include <vector>

namespace noiselab {

struct HermiteSpectrum {
    std::vector<double> coefficients; // C_0 .. C_L, orthonormal basis
    int truncation_degree = 0;
    double tail_energy_bound = 0.0; // gamma(A) - sum of squares
};

// Orthonormal coefficient of degree `degree`: gamma(A) at degree 0, else the
// telescoping boundary sum of He_{degree-1}(x) pdf(x) over component
// endpoints divided by sqrt(degree!). Throws DegreeTooLarge above 200.
double hermite_coefficient(const IntervalUnion& a, int degree);

// Coefficients 0..max_degree plus the Parseval tail bound.
HermiteSpectrum spectrum(const IntervalUnion& a, int max_degree);

// Sum of rho^l C_l^2 with the truncation degree chosen so the geometric tail
// bound rho^(L+1) * (remaining energy) is below abs_tol. If that would need
// a degree above the guard, the partial sum is returned with converged =
// false and the honest tail bound as the error estimate.
StabilityResult spectral_stability(const IntervalUnion& a, double rho,
                                   double abs_tol);

// C_1(H(A))^2 - C_1(A)^2; coincides with epsilon_metric.
double first_order_energy_deficit(const IntervalUnion& a);

} // namespace noiselab
