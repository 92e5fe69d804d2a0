#include "noiselab/spectral.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace noiselab {
namespace {

// He_{l-1}(x) pdf(x) / sqrt(l!) without forming the raw polynomial: the
// orthonormal value He_{l-1}/sqrt((l-1)!) is rescaled by 1/sqrt(l). Returns
// exactly 0 where the density underflows (the true product is ~1e-300 or
// smaller there).
double boundary_term(int degree, double x) {
    if (std::isinf(x)) return 0.0;
    const double w = std_normal_pdf(x);
    if (w == 0.0) return 0.0;
    return hermite_orthonormal(degree - 1, x) * w /
           std::sqrt(static_cast<double>(degree));
}

} // namespace

double hermite_coefficient(const IntervalUnion& a, int degree) {
    if (degree < 0 || degree > kHermiteDegreeGuard)
        throw DegreeTooLarge("hermite coefficient degree outside [0, 200]");
    if (degree == 0) return gaussian_measure(a);
    double c = 0.0;
    for (const auto& iv : a.intervals())
        c += boundary_term(degree, iv.lo) - boundary_term(degree, iv.hi);
    return c;
}

HermiteSpectrum spectrum(const IntervalUnion& a, int max_degree) {
    if (max_degree < 0 || max_degree > kHermiteDegreeGuard)
        throw DegreeTooLarge("spectrum degree outside [0, 200]");
    HermiteSpectrum s;
    s.truncation_degree = max_degree;
    s.coefficients.reserve(static_cast<std::size_t>(max_degree) + 1);
    double energy = 0.0;
    for (int l = 0; l <= max_degree; ++l) {
        const double c = hermite_coefficient(a, l);
        s.coefficients.push_back(c);
        energy += c * c;
    }
    s.tail_energy_bound = gaussian_measure(a) - energy;
    return s;
}

StabilityResult spectral_stability(const IntervalUnion& a, double rho,
                                   double abs_tol) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw CorrelationOutOfRange("spectral stability requires 0 <= rho < 1");
    const double g = gaussian_measure(a);
    double value = 0.0;
    double energy = 0.0;
    double rho_pow = 1.0; // rho^l
    double tail = g;
    for (int l = 0; l <= kHermiteDegreeGuard; ++l) {
        const double c = hermite_coefficient(a, l);
        value += rho_pow * c * c;
        energy += c * c;
        rho_pow *= rho;
        tail = std::max(0.0, g - energy);
        if (rho_pow * tail <= abs_tol) {
            return {std::min(1.0, std::max(0.0, value)),
                    StabilityMethod::spectral, rho_pow * tail, true};
        }
    }
    // Guard hit: report the partial sum with the honest geometric tail bound.
    return {std::min(1.0, std::max(0.0, value)), StabilityMethod::spectral,
            rho_pow * tail, false};
}

double first_order_energy_deficit(const IntervalUnion& a) {
    const double g = gaussian_measure(a);
    if (!(g > 0.0 && g < 1.0))
        throw DegenerateMeasure(
            "first-order energy deficit requires 0 < gamma < 1");
    const IntervalUnion h = as_interval_union(halfspace_round(a));
    const double ch = hermite_coefficient(h, 1);
    const double ca = hermite_coefficient(a, 1);
    return ch * ch - ca * ca;
}

} // namespace noiselab
