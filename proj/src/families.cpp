#include "noiselab/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"
#include "noiselab/stability.hpp"

namespace noiselab {

FamilyId parse_family_id(const std::string& name) {
    if (name == "F1" || name == "f1" || name == "F1_shifted_sliver")
        return FamilyId::f1_shifted_sliver;
    if (name == "F2" || name == "f2" || name == "F2_far_tail")
        return FamilyId::f2_far_tail;
    if (name == "F3" || name == "f3" || name == "F3_near_sliver")
        return FamilyId::f3_near_sliver;
    throw Error("unknown family '" + name + "' (expected F1, F2 or F3)");
}

std::string family_name(FamilyId id) {
    switch (id) {
        case FamilyId::f1_shifted_sliver: return "F1_shifted_sliver";
        case FamilyId::f2_far_tail: return "F2_far_tail";
        case FamilyId::f3_near_sliver: return "F3_near_sliver";
    }
    return "unknown";
}

IntervalUnion family_set(FamilyId id, double eps) {
    if (!(eps > 0.0))
        throw FamilyDegenerate("family parameter must be positive");
    const double inf = std::numeric_limits<double>::infinity();
    switch (id) {
        case FamilyId::f1_shifted_sliver: {
            if (!(eps < 0.25))
                throw FamilyDegenerate(
                    "shifted sliver requires eps < 1/4 to keep components disjoint");
            const double a = std_normal_quantile(0.5 - eps);
            const double b = std_normal_quantile(0.75);
            const double c = std_normal_quantile(0.75 + eps);
            return IntervalUnion::canonicalize({{-inf, a}, {b, c}});
        }
        case FamilyId::f2_far_tail: {
            if (!(eps < 0.5))
                throw FamilyDegenerate(
                    "far tail requires eps < 1/2 to keep components disjoint");
            const double a = std_normal_quantile(0.5 - eps);
            const double b = std_normal_quantile(1.0 - eps);
            return IntervalUnion::canonicalize({{-inf, a}, {b, inf}});
        }
        case FamilyId::f3_near_sliver: {
            if (!(eps < 0.25))
                throw FamilyDegenerate(
                    "near sliver requires eps < 1/4 to keep components disjoint");
            const double a = std_normal_quantile(0.5 - eps);
            const double b = std_normal_quantile(0.5 + eps);
            const double c = std_normal_quantile(0.5 + 2.0 * eps);
            return IntervalUnion::canonicalize({{-inf, a}, {b, c}});
        }
    }
    throw Error("unreachable family id");
}

namespace {

SlopeFit fit_log_slope(const std::vector<double>& eps,
                       const std::vector<double>& y) {
    SlopeFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(eps[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    fit.points = static_cast<int>(lx.size());
    if (fit.points < 2) return fit;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        mx += lx[static_cast<std::size_t>(i)];
        my += ly[static_cast<std::size_t>(i)];
    }
    mx /= fit.points;
    my /= fit.points;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        const double dx = lx[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (ly[static_cast<std::size_t>(i)] - my);
    }
    if (!(sxx > 0.0)) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (int i = 0; i < fit.points; ++i) {
        const double r = ly[static_cast<std::size_t>(i)] -
                         (fit.intercept + fit.slope * lx[static_cast<std::size_t>(i)]);
        fit.max_residual = std::max(fit.max_residual, std::abs(r));
    }
    return fit;
}

}  // namespace

SweepResult run_family_sweep(const FamilySpec& spec) {
    if (spec.eps_grid.empty()) throw Error("sweep requires a nonempty eps grid");
    // Validate the whole grid first so a bad tail entry fails fast.
    for (double eps : spec.eps_grid) (void)family_set(spec.family_id, eps);

    SweepResult result;
    result.family_id = spec.family_id;
    result.rho = spec.rho;
    result.rows.resize(spec.eps_grid.size());

    for (std::size_t i = 0; i < spec.eps_grid.size(); ++i) {
        const double eps = spec.eps_grid[i];
        const IntervalUnion a = family_set(spec.family_id, eps);
        const DeficitReport rep = deficit_bounds_report(a, spec.rho);
        SweepRow& row = result.rows[i];
        row.eps = eps;
        row.gamma = rep.gamma;
        row.epsilon = rep.epsilon;
        row.delta = rep.delta;
        row.epsilon_tilde = rep.epsilon_tilde;
        row.deficit = rep.deficit;
        row.lower_ratio = rep.lower_ratio;
        row.upper_ratio = rep.upper_ratio;
        row.isoperimetric_deficit = isoperimetric_deficit(a);
    }

    std::vector<double> eps_col, eps_metric, delta_col, deficit_col;
    for (const SweepRow& row : result.rows) {
        eps_col.push_back(row.eps);
        eps_metric.push_back(row.epsilon);
        delta_col.push_back(row.delta);
        deficit_col.push_back(row.deficit);
    }
    result.epsilon_slope = fit_log_slope(eps_col, eps_metric);
    result.delta_slope = fit_log_slope(eps_col, delta_col);
    result.deficit_slope = fit_log_slope(eps_col, deficit_col);

    result.tail_ratio_min = std::numeric_limits<double>::infinity();
    result.tail_ratio_max = -std::numeric_limits<double>::infinity();
    for (const SweepRow& row : result.rows) {
        const double denom = row.eps * std::sqrt(std::abs(std::log(row.eps)));
        if (!(denom > 0.0)) continue;
        const double ratio = row.epsilon / denom;
        result.tail_ratio_min = std::min(result.tail_ratio_min, ratio);
        result.tail_ratio_max = std::max(result.tail_ratio_max, ratio);
    }
    if (!std::isfinite(result.tail_ratio_min)) {
        result.tail_ratio_min = 0.0;
        result.tail_ratio_max = 0.0;
    }
    return result;
}

}  // namespace noiselab
