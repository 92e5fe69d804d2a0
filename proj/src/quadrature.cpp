#include "noiselab/quadrature.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace noiselab {
namespace {

// 15-point Kronrod extension of 7-point Gauss, positive abscissae.
// Even-indexed nodes (0-based 1,3,5) plus the center form the Gauss rule.
constexpr double kXgk[8] = {
    0.99145537112081264, 0.94910791234275852, 0.86486442335976907,
    0.74153118559939444, 0.58608723546769113, 0.40584515137739717,
    0.20778495500789847, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529225, 0.063092092629978553, 0.10479001032225018,
    0.14065325971552592,  0.16900472663926790,  0.19035057806478541,
    0.20443294007529889,  0.20948214108472783};
constexpr double kWg[4] = {0.12948496616886969, 0.27970539148927667,
                           0.38183005050511894, 0.41795918367346939};

constexpr double kEps = 2.2204460492503131e-16;

struct Panel {
    double a, b;
    double value;
    double error;
};

struct PanelLess {
    bool operator()(const Panel& x, const Panel& y) const {
        // Heap keyed on error; ties broken on the left endpoint so the pop
        // order (and therefore the result) is fully deterministic.
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

// Gauss-Kronrod 7/15 on [a,b] of f(x) * pdf(x), with the QUADPACK error
// model: the raw |K - G| gap is shrunk through the scaled variation resasc
// and floored at rounding level.
Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double xl = mid - dx;
        const double xr = mid + dx;
        fv[i] = f(xl) * std_normal_pdf(xl);
        fv[14 - i] = f(xr) * std_normal_pdf(xr);
    }
    fv[7] = f(mid) * std_normal_pdf(mid);

    double resk = kWgk[7] * fv[7];
    double resabs = std::fabs(resk);
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        const double pair = fv[i] + fv[14 - i];
        resk += kWgk[i] * pair;
        resabs += kWgk[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
        if (i % 2 == 1) resg += kWg[(i - 1) / 2] * pair;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fv[7] - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::fabs(fv[i] - reskh) +
                             std::fabs(fv[14 - i] - reskh));

    const double value = resk * half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(kEps * 50.0 * resabs, err);
    return {a, b, value, err};
}

void validate(const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol >= 1e-14))
        throw Error("quadrature abs_tol must be >= 1e-14");
    if (!(cfg.truncation_radius >= 8.0))
        throw Error("quadrature truncation radius must be >= 8");
    if (cfg.max_panels < 1) throw Error("quadrature needs max_panels >= 1");
}

} // namespace

IntegralResult integrate_gaussian(const std::function<double(double)>& f,
                                  const IntervalUnion& set,
                                  const QuadratureConfig& cfg) {
    validate(cfg);
    const double radius = cfg.truncation_radius;

    double tail_error = 0.0;
    std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
    int panels = 0;

    auto seed_range = [&](double a, double b) {
        // Initial panels no wider than 5 so the Gaussian weight is resolved
        // before adaptivity starts.
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / 5.0)));
        for (int i = 0; i < n; ++i) {
            const double lo = a + (b - a) * i / n;
            const double hi = a + (b - a) * (i + 1) / n;
            heap.push(gk15(f, lo, hi));
            ++panels;
        }
    };

    for (const auto& iv : set.intervals()) {
        double lo = iv.lo;
        double hi = iv.hi;
        if (lo == -std::numeric_limits<double>::infinity()) {
            // Mass of the clipped tail bounds its contribution.
            tail_error +=
                std_normal_cdf(-radius) * std::max(1.0, std::fabs(f(-radius)));
            lo = -radius;
        }
        if (hi == std::numeric_limits<double>::infinity()) {
            tail_error +=
                std_normal_cdf(-radius) * std::max(1.0, std::fabs(f(radius)));
            hi = radius;
        }
        lo = std::max(lo, -radius);
        hi = std::min(hi, radius);
        if (lo < hi) seed_range(lo, hi);
    }

    double total_value = 0.0;
    double total_error = tail_error;
    {
        std::vector<Panel> live;
        live.reserve(heap.size());
        while (!heap.empty()) {
            live.push_back(heap.top());
            heap.pop();
        }
        for (const auto& p : live) {
            total_value += p.value;
            total_error += p.error;
        }
        for (const auto& p : live) heap.push(p);
    }

    while (total_error > cfg.abs_tol && panels < cfg.max_panels &&
           !heap.empty()) {
        const Panel worst = heap.top();
        if (worst.error <= 0.0) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel too narrow to split further.
            heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
            total_error -= worst.error;
            continue;
        }
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    IntegralResult out;
    out.value = total_value;
    out.error_estimate = total_error;
    out.panels_used = panels;
    out.converged = total_error <= cfg.abs_tol;
    return out;
}

IntegralResult integrate_line(const std::function<double(double)>& f,
                              const QuadratureConfig& cfg) {
    return integrate_gaussian(f, IntervalUnion::real_line(), cfg);
}

} // namespace noiselab
