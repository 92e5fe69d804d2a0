#include "noiselab/property_suite.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"
#include "noiselab/interval_set.hpp"
#include "noiselab/quadrature.hpp"
#include "noiselab/random_sets.hpp"
#include "noiselab/rng.hpp"
#include "noiselab/sde.hpp"
#include "noiselab/set_literal.hpp"
#include "noiselab/spectral.hpp"
#include "noiselab/stability.hpp"

namespace noiselab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum CheckIndex {
    kLiteralRoundTrip = 0,
    kEvolveComposition,
    kCentroidProfileBound,
    kComplementEpsilonEqual,
    kRoundPreservesMeasure,
    kSurfaceDominatesHalfline,
    kBorellNonneg,
    kBorellStrictWhenFar,
    kMethodAgreementQuad,
    kMethodAgreementSpectral,
    kStabilityMonotoneRho,
    kDeltaSqDomination,
    kCrossFormSymmetric,
    kTildeMatchesCrossForm,
    kDeficitBelowCrossFormBound,
    kCrossFormBelowProfileGap,
    kExponentFamilyNonneg,
    kHermiteTailBudget,
    kCoefficientClosedForm,
    kPathDeterminism,
    kSecondMomentGapFinite,
    kCheckCount
};

const std::array<const char*, kCheckCount> kCheckNames = {
    "literal_round_trip",
    "evolve_composition",
    "centroid_profile_bound",
    "complement_epsilon_equal",
    "round_preserves_measure",
    "surface_dominates_halfline",
    "borell_nonneg",
    "borell_strict_when_far",
    "method_agreement_quad",
    "method_agreement_spectral",
    "stability_monotone_rho",
    "delta_sq_domination",
    "cross_form_symmetric",
    "tilde_matches_cross_form",
    "deficit_below_cross_form_bound",
    "cross_form_below_profile_gap",
    "exponent_family_nonneg",
    "hermite_tail_budget",
    "coefficient_closed_form",
    "path_determinism",
    "second_moment_gap_finite",
};

constexpr std::array<double, 5> kRhoGrid = {0.1, 0.3, 0.5, 0.7, 0.9};

struct CaseAccum {
    std::array<long, kCheckCount> run{};
    std::array<long, kCheckCount> failed{};
    std::array<double, kCheckCount> worst;

    CaseAccum() { worst.fill(kInf); }

    void merge(const CaseAccum& other) {
        for (int i = 0; i < kCheckCount; ++i) {
            run[static_cast<std::size_t>(i)] += other.run[static_cast<std::size_t>(i)];
            failed[static_cast<std::size_t>(i)] +=
                other.failed[static_cast<std::size_t>(i)];
            worst[static_cast<std::size_t>(i)] =
                std::min(worst[static_cast<std::size_t>(i)],
                         other.worst[static_cast<std::size_t>(i)]);
        }
    }
};

template <typename Fn>
void record(CaseAccum& acc, int idx, Fn&& fn) {
    double margin;
    try {
        margin = fn();
    } catch (const std::exception&) {
        margin = -kInf;
    }
    acc.run[static_cast<std::size_t>(idx)] += 1;
    if (!(margin >= 0.0)) acc.failed[static_cast<std::size_t>(idx)] += 1;
    acc.worst[static_cast<std::size_t>(idx)] =
        std::min(acc.worst[static_cast<std::size_t>(idx)], margin);
}

double endpoint_difference(const IntervalUnion& a, const IntervalUnion& b) {
    const auto& ia = a.intervals();
    const auto& ib = b.intervals();
    if (ia.size() != ib.size()) return kInf;
    double worst = 0.0;
    for (std::size_t i = 0; i < ia.size(); ++i) {
        const double dlo = (std::isinf(ia[i].lo) && std::isinf(ib[i].lo))
                               ? 0.0
                               : std::abs(ia[i].lo - ib[i].lo);
        const double dhi = (std::isinf(ia[i].hi) && std::isinf(ib[i].hi))
                               ? 0.0
                               : std::abs(ia[i].hi - ib[i].hi);
        worst = std::max(worst, std::max(dlo, dhi));
    }
    return worst;
}

void run_case(std::uint64_t master_seed, long case_index, CaseAccum& acc) {
    CounterRng rng(master_seed, static_cast<std::uint64_t>(case_index));
    const IntervalUnion a = random_interval_union(rng);
    // All randomness for the case is drawn up front in a fixed order so the
    // stream layout never depends on which checks run.
    const double w1 = -1.0 + 2.0 * rng.next_uniform();
    const double t1 = 0.8 * rng.next_uniform();
    const double w2 = -1.0 + 2.0 * rng.next_uniform();
    const double t2 = 0.8 * rng.next_uniform();
    const IntervalUnion b = random_interval_union(rng);
    const double rho = kRhoGrid[static_cast<std::size_t>(case_index) % kRhoGrid.size()];

    const double g = gaussian_measure(a);
    const bool degenerate = !(g > 0.0 && g < 1.0);

    record(acc, kLiteralRoundTrip, [&] {
        const IntervalUnion back = parse_set_literal(format_set_literal(a));
        return back == a ? 0.0 : -1.0;
    });

    record(acc, kEvolveComposition, [&] {
        const IntervalUnion two = evolve(evolve(a, w1, t1), w2, t2);
        const double shift = w1 + w2 * std::sqrt(1.0 - t1);
        const double scale = std::sqrt((1.0 - t1) * (1.0 - t2));
        std::vector<Interval> mapped;
        for (const Interval& iv : a.intervals())
            mapped.push_back(Interval{(iv.lo - shift) / scale, (iv.hi - shift) / scale});
        const IntervalUnion one = IntervalUnion::canonicalize(std::move(mapped));
        return 1e-12 - endpoint_difference(two, one);
    });

    record(acc, kCrossFormSymmetric, [&] {
        const double kab = cross_stability(a, b, rho);
        const double kba = cross_stability(b, a, rho);
        return 1e-10 - std::abs(kab - kba);
    });

    if (degenerate) return;

    record(acc, kCentroidProfileBound, [&] {
        return isoperimetric_profile(g) + 1e-10 - first_moment_magnitude(a);
    });

    record(acc, kComplementEpsilonEqual, [&] {
        return 1e-12 - std::abs(epsilon_metric(a) - epsilon_metric(complement(a)));
    });

    record(acc, kRoundPreservesMeasure, [&] {
        const IntervalUnion h = as_interval_union(halfspace_round(a));
        return 1e-13 - std::abs(gaussian_measure(h) - g);
    });

    record(acc, kSurfaceDominatesHalfline, [&] {
        return surface_area(a) - isoperimetric_profile(g) + 1e-10;
    });

    record(acc, kBorellNonneg, [&] { return deficit(a, rho, 2.0) + 1e-9; });

    const double delta = delta_metric(a);
    if (delta >= 0.01)
        record(acc, kBorellStrictWhenFar,
               [&] { return deficit(a, rho, 2.0) - 1e-8; });

    record(acc, kMethodAgreementQuad, [&] {
        const double sb = noise_stability(a, rho, StabilityMethod::bvn_sum).value;
        const double sq = noise_stability(a, rho, StabilityMethod::quadrature).value;
        return 1e-8 - std::abs(sb - sq);
    });

    record(acc, kMethodAgreementSpectral, [&] {
        const double sb = noise_stability(a, rho, StabilityMethod::bvn_sum).value;
        const double sp = noise_stability(a, rho, StabilityMethod::spectral).value;
        return 1e-6 - std::abs(sp - sb);
    });

    record(acc, kStabilityMonotoneRho, [&] {
        const double s1 = noise_stability(a, 0.2, StabilityMethod::bvn_sum).value;
        const double s2 = noise_stability(a, 0.5, StabilityMethod::bvn_sum).value;
        const double s3 = noise_stability(a, 0.8, StabilityMethod::bvn_sum).value;
        return std::min(s2 - s1, s3 - s2) + 1e-10;
    });

    record(acc, kDeltaSqDomination, [&] {
        const double bound = (1.0 / (2.0 * kSqrt2Pi)) * g * (1.0 - g) * delta * delta;
        return epsilon_metric(a) - bound + 1e-10;
    });

    // Half-line-like sets have epsilon at roundoff level, so the normalized
    // ratio report refuses to divide; the raw gap fields stay well defined.
    DeficitReport rep;
    try {
        rep = deficit_bounds_report(a, rho);
    } catch (const DegenerateEpsilon&) {
        rep.epsilon_tilde = epsilon_tilde(a, rho);
        const IntervalUnion hs = as_interval_union(halfspace_round(a));
        rep.upper_I =
            cross_stability(hs, hs, rho) - cross_stability(hs, a, rho);
        rep.deficit = deficit(a, rho, 2.0);
    }

    record(acc, kTildeMatchesCrossForm,
           [&] { return 1e-10 - std::abs(rep.epsilon_tilde - rep.upper_I); });

    record(acc, kDeficitBelowCrossFormBound,
           [&] { return 2.0 * rep.upper_I + 1e-8 - rep.deficit; });

    record(acc, kCrossFormBelowProfileGap, [&] {
        const double gap = isoperimetric_profile(g) - first_moment_magnitude(a);
        const double bound = rho / std::sqrt((1.0 - rho) * (1.0 + rho)) * gap;
        return bound + 1e-8 - rep.upper_I;
    });

    if (case_index % 5 == 0) {
        record(acc, kExponentFamilyNonneg, [&] {
            const double d15 = deficit(a, rho, 1.5);
            const double d3 = deficit(a, rho, 3.0);
            return std::min(d15, d3) + 1e-8;
        });
    }

    if (a.component_count() <= 4) {
        record(acc, kHermiteTailBudget, [&] {
            const HermiteSpectrum sp = spectrum(a, 100);
            return std::min(sp.tail_energy_bound + 1e-9, 0.2 - sp.tail_energy_bound);
        });
    }

    if (case_index % 25 == 0) {
        record(acc, kCoefficientClosedForm, [&] {
            QuadratureConfig cfg;
            cfg.abs_tol = 1e-12;
            double worst = 0.0;
            for (int deg = 0; deg <= 30; ++deg) {
                const double closed = hermite_coefficient(a, deg);
                const IntegralResult ir = integrate_gaussian(
                    [deg](double x) { return hermite_orthonormal(deg, x); }, a, cfg);
                worst = std::max(worst, std::abs(closed - ir.value));
            }
            return 1e-9 - worst;
        });
    }

    if (case_index % 100 == 0) {
        record(acc, kPathDeterminism, [&] {
            PathConfig cfg;
            cfg.rho = 0.5;
            cfg.n_steps = 120;
            cfg.n_paths = 1;
            cfg.master_seed = master_seed;
            const PathSample p1 =
                sample_s_path(a, cfg, static_cast<std::uint64_t>(case_index));
            const PathSample p2 =
                sample_s_path(a, cfg, static_cast<std::uint64_t>(case_index));
            if (p1.w != p2.w || p1.s != p2.s || p1.qv != p2.qv) return -1.0;
            if (p1.s.front() != g) return -1.0;
            double margin = kInf;
            for (std::size_t k = 0; k < p1.s.size(); ++k) {
                margin = std::min(margin, p1.eps[k] + 1e-12);
                if (k > 0 && p1.qv[k] < p1.qv[k - 1]) return -1.0;
            }
            return margin;
        });
    }

    record(acc, kSecondMomentGapFinite, [&] {
        return std::isfinite(second_moment_gap(a)) ? 0.0 : -1.0;
    });
}

}  // namespace

SuiteReport run_property_suite(std::uint64_t master_seed, long n_cases,
                               int n_threads) {
    if (n_cases < 1) throw Error("property suite requires n_cases >= 1");

    const long chunk_size = 32;
    const long n_chunks = (n_cases + chunk_size - 1) / chunk_size;
    std::vector<CaseAccum> partials(static_cast<std::size_t>(n_chunks));
    std::atomic<long> next_chunk{0};
    const int threads = std::clamp(n_threads, 1, 64);
    std::vector<std::string> worker_errors(static_cast<std::size_t>(threads));

    auto worker = [&](int tid) {
        try {
            for (;;) {
                const long c = next_chunk.fetch_add(1);
                if (c >= n_chunks) break;
                CaseAccum& acc = partials[static_cast<std::size_t>(c)];
                const long begin = c * chunk_size;
                const long end = std::min(n_cases, begin + chunk_size);
                for (long idx = begin; idx < end; ++idx)
                    run_case(master_seed, idx, acc);
            }
        } catch (const std::exception& e) {
            worker_errors[static_cast<std::size_t>(tid)] = e.what();
            next_chunk.store(n_chunks);
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads - 1));
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
        worker(0);
        for (auto& th : pool) th.join();
    }
    for (const std::string& msg : worker_errors)
        if (!msg.empty()) throw Error(msg);

    CaseAccum total;
    for (const CaseAccum& acc : partials) total.merge(acc);

    SuiteReport report;
    report.cases = n_cases;
    report.checks.resize(kCheckCount);
    for (int i = 0; i < kCheckCount; ++i) {
        CheckStat& cs = report.checks[static_cast<std::size_t>(i)];
        cs.name = kCheckNames[static_cast<std::size_t>(i)];
        cs.run = total.run[static_cast<std::size_t>(i)];
        cs.failed = total.failed[static_cast<std::size_t>(i)];
        cs.worst_margin =
            cs.run > 0 ? total.worst[static_cast<std::size_t>(i)] : 0.0;
        report.failures += cs.failed;
    }
    return report;
}

}  // namespace noiselab
