#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace noiselab {

// One named invariant check aggregated over all suite cases. A margin is the
// tolerance-adjusted slack of the inequality being checked: nonnegative means
// pass, and worst_margin is the minimum observed over the cases where the
// check applied. Checks that threw count as failures with -inf margin.
struct CheckStat {
    std::string name;
    long run = 0;
    long failed = 0;
    double worst_margin = 0.0;
};

struct SuiteReport {
    long cases = 0;
    long failures = 0;
    std::vector<CheckStat> checks;
};

// Runs the randomized invariant suite: each case draws a seeded random
// interval union (and a partner set for the symmetry checks), cycles the
// correlation through {0.1, 0.3, 0.5, 0.7, 0.9}, and evaluates every
// suite-enabled invariant. Cases run concurrently but the aggregation is
// performed in case order, so the report is identical for any thread count.
SuiteReport run_property_suite(std::uint64_t master_seed, long n_cases,
                               int n_threads = 1);

}  // namespace noiselab
