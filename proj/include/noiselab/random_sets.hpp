#pragma once

#include <cstdint>

#include "noiselab/interval_set.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

// Seeded random interval unions for property suites and batch checks. The
// distribution is fixed and versioned with the suite: component count uniform
// on 1..5, endpoints uniform on [-4, 4] sorted and paired, then each side
// independently extended to a ray with probability 1/4. Both rays on a
// single component produce the full line, which callers treat as a
// degenerate-measure case.
IntervalUnion random_interval_union(CounterRng& rng);

// Case-indexed convenience wrapper: case (master_seed, case_index) always
// yields the same set, independent of evaluation order.
IntervalUnion random_interval_union(std::uint64_t master_seed,
                                    std::uint64_t case_index);

// Rejection-samples the same distribution until gamma(A) lands in
// [gamma_lo, gamma_hi]. Deterministic per (master_seed, case_index).
IntervalUnion random_interval_union_in_band(std::uint64_t master_seed,
                                            std::uint64_t case_index,
                                            double gamma_lo, double gamma_hi);

}  // namespace noiselab
