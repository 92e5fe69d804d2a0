#pragma once

#include <string>
#include <vector>

#include "noiselab/interval_set.hpp"

namespace noiselab {

// Parametric families with known small-eps asymptotics, used to probe how
// tight the deficit bounds are:
//   F1 shifted sliver: (-inf, Q(1/2-eps)] U [Q(3/4), Q(3/4+eps)]
//   F2 far tail:       (-inf, Q(1/2-eps)] U [Q(1-eps), inf)
//   F3 near sliver:    (-inf, Q(1/2-eps)] U [Q(1/2+eps), Q(1/2+2eps)]
// where Q is the standard normal quantile. F1 and F3 keep measure exactly
// 1/2; F3 is the family whose shape deficit shrinks like eps^2 while the
// symmetric-difference distance stays 2 eps.
enum class FamilyId { f1_shifted_sliver, f2_far_tail, f3_near_sliver };

FamilyId parse_family_id(const std::string& name);
std::string family_name(FamilyId id);

// Throws FamilyDegenerate when eps pushes the quantile arguments out of (0,1)
// or makes the components touch (F1: eps < 1/4, F2: eps < 1/2, F3: eps < 1/4).
IntervalUnion family_set(FamilyId id, double eps);

struct FamilySpec {
    FamilyId family_id = FamilyId::f1_shifted_sliver;
    std::vector<double> eps_grid;
    double rho = 0.5;
};

struct SweepRow {
    double eps = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double epsilon_tilde = 0.0;
    double deficit = 0.0;
    double lower_ratio = 0.0;
    double upper_ratio = 0.0;
    double isoperimetric_deficit = 0.0;
};

// Least-squares fit of log y against log eps over the grid points with
// positive y; max_residual is in log space.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    int points = 0;
};

struct SweepResult {
    FamilyId family_id = FamilyId::f1_shifted_sliver;
    double rho = 0.5;
    std::vector<SweepRow> rows;
    SlopeFit epsilon_slope;
    SlopeFit delta_slope;
    SlopeFit deficit_slope;
    // Range of epsilon / (eps * sqrt(|log eps|)) across the grid; the
    // far-tail family is the one whose ratio stays in a fixed band while
    // epsilon / eps itself diverges.
    double tail_ratio_min = 0.0;
    double tail_ratio_max = 0.0;
};

SweepResult run_family_sweep(const FamilySpec& spec);

}  // namespace noiselab
