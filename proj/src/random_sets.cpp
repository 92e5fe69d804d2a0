#include "noiselab/random_sets.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "noiselab/errors.hpp"

namespace noiselab {

IntervalUnion random_interval_union(CounterRng& rng) {
    const int count = 1 + static_cast<int>(rng.next_uniform() * 5.0);
    std::vector<double> endpoints(static_cast<std::size_t>(2 * count));
    for (double& e : endpoints) e = -4.0 + 8.0 * rng.next_uniform();
    std::sort(endpoints.begin(), endpoints.end());

    std::vector<Interval> raw;
    raw.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        raw.push_back(Interval{endpoints[static_cast<std::size_t>(2 * i)],
                               endpoints[static_cast<std::size_t>(2 * i + 1)]});

    // Ray coins are always drawn so the stream layout does not depend on the
    // outcome of earlier draws.
    const bool left_ray = rng.next_uniform() < 0.25;
    const bool right_ray = rng.next_uniform() < 0.25;
    if (left_ray) raw.front().lo = -std::numeric_limits<double>::infinity();
    if (right_ray) raw.back().hi = std::numeric_limits<double>::infinity();

    return IntervalUnion::canonicalize(std::move(raw));
}

IntervalUnion random_interval_union(std::uint64_t master_seed,
                                    std::uint64_t case_index) {
    CounterRng rng(master_seed, case_index);
    return random_interval_union(rng);
}

IntervalUnion random_interval_union_in_band(std::uint64_t master_seed,
                                            std::uint64_t case_index,
                                            double gamma_lo, double gamma_hi) {
    if (!(gamma_lo < gamma_hi))
        throw Error("measure band must satisfy gamma_lo < gamma_hi");
    CounterRng rng(master_seed, case_index);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        IntervalUnion a = random_interval_union(rng);
        const double g = gaussian_measure(a);
        if (g >= gamma_lo && g <= gamma_hi) return a;
    }
    throw Error("rejection sampling failed to hit the requested measure band");
}

}  // namespace noiselab
