#include "noiselab/gaussian.hpp"
#include "noiselab/errors.hpp"

#include <cmath>
#include <limits>

namespace noiselab {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Rational minimax approximation to the normal quantile (relative error
// ~1.15e-9 before refinement), region switch at 0.02425.
constexpr double kQuantPLow = 0.02425;

constexpr double kQuantA[6] = {
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kQuantB[5] = {
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double kQuantC[6] = {
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kQuantD[4] = {
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00};

double quantile_tail(double r) {
    // r = sqrt(-2 log(min(p, 1-p))); returns the lower-tail quantile, which
    // is negative (the rational form carries the sign itself).
    return (((((kQuantC[0] * r + kQuantC[1]) * r + kQuantC[2]) * r +
              kQuantC[3]) * r + kQuantC[4]) * r + kQuantC[5]) /
           ((((kQuantD[0] * r + kQuantD[1]) * r + kQuantD[2]) * r +
             kQuantD[3]) * r + 1.0);
}

double quantile_central(double q) {
    const double r = q * q;
    return (((((kQuantA[0] * r + kQuantA[1]) * r + kQuantA[2]) * r +
              kQuantA[3]) * r + kQuantA[4]) * r + kQuantA[5]) * q /
           (((((kQuantB[0] * r + kQuantB[1]) * r + kQuantB[2]) * r +
              kQuantB[3]) * r + kQuantB[4]) * r + 1.0);
}

// Gauss-Legendre nodes/weights on [-1,1], positive half; full rule is the
// symmetric completion. Counts 6/12/20 switched on |rho|.
constexpr double kGL6X[3] = {0.2386191860831969, 0.6612093864662645,
                             0.9324695142031521};
constexpr double kGL6W[3] = {0.4679139345726910, 0.3607615730481386,
                             0.1713244923791704};
constexpr double kGL12X[6] = {0.1252334085114689, 0.3678314989981802,
                              0.5873179542866175, 0.7699026741943047,
                              0.9041172563704749, 0.9815606342467192};
constexpr double kGL12W[6] = {0.2491470458134028, 0.2334925365383548,
                              0.2031674267230659, 0.1600783285433462,
                              0.1069393259953184, 0.0471753363865118};
constexpr double kGL20X[10] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
constexpr double kGL20W[10] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

// Integrand of the single-integral representation of the bivariate normal
// CDF, exp(-(h^2+k^2-2hk sin t)/(2 cos^2 t)), rearranged so the numerator is
// a sum of nonnegative terms for every sign combination (no cancellation):
//   hk >= 0:  (h-k)^2 + 2hk(1-sin t)
//   hk <  0:  (h+k)^2 - 2hk(1+sin t)
// with 1 -+ sin t themselves computed cancellation-free via cos^2.
double bvn_angle_integrand(double h, double k, double theta) {
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    const double cs2 = cs * cs;
    if (cs2 <= 0.0) return 0.0;
    const double one_minus = sn > 0.0 ? cs2 / (1.0 + sn) : 1.0 - sn;
    const double one_plus = sn < 0.0 ? cs2 / (1.0 - sn) : 1.0 + sn;
    const double hk = h * k;
    double num;
    if (hk >= 0.0) {
        num = (h - k) * (h - k) + 2.0 * hk * one_minus;
    } else {
        num = (h + k) * (h + k) - 2.0 * hk * one_plus;
    }
    return std::exp(-num / (2.0 * cs2));
}

double bvn_correction_gl(double h, double k, double asr, const double* x,
                         const double* w, int half) {
    // Gauss-Legendre over theta in [0, asr] (asr may be negative).
    double sum = 0.0;
    for (int i = 0; i < half; ++i) {
        const double t1 = asr * 0.5 * (1.0 + x[i]);
        const double t2 = asr * 0.5 * (1.0 - x[i]);
        sum += w[i] * (bvn_angle_integrand(h, k, t1) +
                       bvn_angle_integrand(h, k, t2));
    }
    return sum * asr * 0.5;
}

double bvn_correction_ts(double h, double k, double asr) {
    // tanh-sinh quadrature of the same integrand over [0, asr], refined by
    // level halving until successive values agree to ~1e-15.
    const double c = asr * 0.5; // map u in [-1,1] -> theta = c + c*u
    const double pi_half = 1.5707963267948966192313216916398;
    auto node_weight = [&](double t, double& u, double& w) {
        const double s = pi_half * std::sinh(t);
        u = std::tanh(s);
        const double ch = std::cosh(s);
        w = pi_half * std::cosh(t) / (ch * ch);
    };
    double prev = 0.0;
    double value = 0.0;
    double step = 1.0;
    // Level 0.
    {
        double u, w;
        node_weight(0.0, u, w);
        value = w * bvn_angle_integrand(h, k, c + c * u);
        for (int j = 1; j <= 4; ++j) {
            node_weight(step * j, u, w);
            value += w * (bvn_angle_integrand(h, k, c + c * u) +
                          bvn_angle_integrand(h, k, c - c * u));
        }
        value *= step;
    }
    for (int level = 1; level <= 10; ++level) {
        prev = value;
        step *= 0.5;
        const int jmax = static_cast<int>(4.5 / step);
        double add = 0.0;
        for (int j = 1; j <= jmax; j += 2) {
            double u, w;
            node_weight(step * j, u, w);
            if (w < 1e-20) continue;
            add += w * (bvn_angle_integrand(h, k, c + c * u) +
                        bvn_angle_integrand(h, k, c - c * u));
        }
        value = prev * 0.5 + add * step;
        if (level >= 4 && std::fabs(value - prev) <= 1e-15 * (1.0 + std::fabs(value)))
            break;
    }
    return value * c;
}

} // namespace

double std_normal_pdf(double x) {
    if (std::isinf(x)) return 0.0;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DegenerateProbability("quantile requires 0 < p < 1");
    double x;
    if (p < kQuantPLow) {
        x = quantile_tail(std::sqrt(-2.0 * std::log(p)));
    } else if (p <= 1.0 - kQuantPLow) {
        x = quantile_central(p - 0.5);
    } else {
        x = -quantile_tail(std::sqrt(-2.0 * std::log(1.0 - p)));
    }
    // One Halley step against the exact CDF.
    const double density = std_normal_pdf(x);
    if (density > 0.0) {
        const double e = std_normal_cdf(x) - p;
        const double u = e / density;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double isoperimetric_profile(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw DegenerateProbability("profile requires 0 <= s <= 1");
    if (s == 0.0 || s == 1.0) return 0.0;
    return std_normal_pdf(std_normal_quantile(s));
}

double profile_derivative(double s) {
    if (!(s > 0.0 && s < 1.0))
        throw DegenerateProbability("profile derivative requires 0 < s < 1");
    return -std_normal_quantile(s);
}

double profile_second_derivative(double s) {
    if (!(s > 0.0 && s < 1.0))
        throw DegenerateProbability(
            "profile second derivative requires 0 < s < 1");
    const double z = std_normal_quantile(s);
    return -kSqrt2Pi * std::exp(0.5 * z * z);
}

double xi(double s) {
    if (!(s > 0.0 && s < 1.0))
        throw DegenerateProbability("xi requires 0 < s < 1");
    const double z = std_normal_quantile(s);
    return -z * std_normal_pdf(z);
}

double bvn_cdf(double h, double k, double rho) {
    if (!(std::fabs(rho) < 1.0))
        throw CorrelationOutOfRange("bivariate cdf requires |rho| < 1");
    if (std::isinf(h) || std::isinf(k)) {
        if ((std::isinf(h) && h < 0.0) || (std::isinf(k) && k < 0.0))
            return 0.0;
        if (std::isinf(h) && std::isinf(k)) return 1.0;
        return std::isinf(h) ? std_normal_cdf(k) : std_normal_cdf(h);
    }
    const double base = std_normal_cdf(h) * std_normal_cdf(k);
    if (rho == 0.0) return base;
    const double asr = std::asin(rho);
    double corr;
    const double ar = std::fabs(rho);
    if (ar < 0.3) {
        corr = bvn_correction_gl(h, k, asr, kGL6X, kGL6W, 3);
    } else if (ar < 0.75) {
        corr = bvn_correction_gl(h, k, asr, kGL12X, kGL12W, 6);
    } else if (ar <= 0.925) {
        corr = bvn_correction_gl(h, k, asr, kGL20X, kGL20W, 10);
    } else {
        corr = bvn_correction_ts(h, k, asr);
    }
    double v = base + corr * (kInvSqrt2Pi * kInvSqrt2Pi);
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

double bvn_rectangle(double x_lo, double x_hi, double y_lo, double y_hi,
                     double rho) {
    if (!(std::fabs(rho) < 1.0))
        throw CorrelationOutOfRange("bvn_rectangle requires |rho| < 1");
    if (!(x_lo <= x_hi) || !(y_lo <= y_hi))
        throw MalformedInterval("bvn_rectangle requires ordered bounds");
    const double hi_hi = bvn_cdf(x_hi, y_hi, rho);
    const double lo_hi =
        std::isinf(x_lo) && x_lo < 0 ? 0.0 : bvn_cdf(x_lo, y_hi, rho);
    const double hi_lo =
        std::isinf(y_lo) && y_lo < 0 ? 0.0 : bvn_cdf(x_hi, y_lo, rho);
    const double lo_lo = (std::isinf(x_lo) && x_lo < 0) ||
                                 (std::isinf(y_lo) && y_lo < 0)
                             ? 0.0
                             : bvn_cdf(x_lo, y_lo, rho);
    double v = hi_hi - lo_hi - hi_lo + lo_lo;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

double hermite_eval(int degree, double x) {
    if (degree < 0 || degree > kHermiteDegreeGuard)
        throw DegreeTooLarge("hermite degree outside [0, 200]");
    double prev = 1.0; // He_0
    if (degree == 0) return prev;
    double cur = x; // He_1
    for (int l = 1; l < degree; ++l) {
        const double next = x * cur - static_cast<double>(l) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_orthonormal(int degree, double x) {
    if (degree < 0 || degree > kHermiteDegreeGuard)
        throw DegreeTooLarge("hermite degree outside [0, 200]");
    double prev = 1.0; // He_0 / sqrt(0!)
    if (degree == 0) return prev;
    double cur = x; // He_1 / sqrt(1!)
    for (int l = 1; l < degree; ++l) {
        const double next =
            (x * cur - std::sqrt(static_cast<double>(l)) * prev) /
            std::sqrt(static_cast<double>(l + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace noiselab
