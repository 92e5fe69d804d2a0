#pragma once

// Adaptive Gauss-Kronrod integration against the standard normal weight over
// interval unions and the full line. The single numerical engine behind the
// stability functionals.

#include "noiselab/interval_set.hpp"

#include <functional>

namespace noiselab {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_panels = 4096;
    double truncation_radius = 40.0;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels_used = 0;
    bool converged = false;
};

// Integral of f against the standard normal density over A. Panels start at
// the component intervals (rays clipped to the truncation radius, with the
// clipped tail mass folded into the error estimate), then the worst panel is
// bisected until the summed Gauss-Kronrod error estimate meets abs_tol or the
// panel budget runs out; in the latter case the best value is returned with
// converged = false.
IntegralResult integrate_gaussian(const std::function<double(double)>& f,
                                  const IntervalUnion& a,
                                  const QuadratureConfig& cfg = {});

// integrate_gaussian over the whole line.
IntegralResult integrate_line(const std::function<double(double)>& f,
                              const QuadratureConfig& cfg = {});

} // namespace noiselab
