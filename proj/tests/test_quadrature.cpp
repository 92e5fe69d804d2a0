#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"
#include "noiselab/gaussian.hpp"
#include "noiselab/interval_set.hpp"
#include "noiselab/quadrature.hpp"
#include "noiselab/random_sets.hpp"

using namespace noiselab;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("gaussian integral normalizes constants and moments") {
    const auto one = integrate_line([](double) { return 1.0; });
    CHECK(one.converged);
    CHECK(std::abs(one.value - 1.0) <= 1e-12);

    const auto ray = IntervalUnion::canonicalize({{0.0, kInf}});
    const auto moment = integrate_gaussian([](double x) { return x; }, ray);
    CHECK(moment.converged);
    CHECK(std::abs(moment.value - std_normal_pdf(0.0)) <= 1e-10);

    const auto variance = integrate_line([](double x) { return x * x; });
    CHECK(std::abs(variance.value - 1.0) <= 1e-10);
}

TEST_CASE("hermite orthogonality under the gaussian weight") {
    const auto he2 = integrate_line([](double x) { return x * x - 1.0; });
    CHECK(std::abs(he2.value) <= 1e-10);
    const auto he1sq = integrate_line([](double x) { return x * x; });
    CHECK(std::abs(he1sq.value - 1.0) <= 1e-10);
    const auto cdf = integrate_line([](double x) { return std_normal_cdf(x); });
    CHECK(std::abs(cdf.value - 0.5) <= 1e-10);
}

TEST_CASE("error estimates are honest on closed-form integrands") {
    struct Probe {
        std::function<double(double)> f;
        IntervalUnion domain;
        double exact;
    };
    const auto line = IntervalUnion::real_line();
    const auto slab = IntervalUnion::canonicalize({{1.0, 2.0}});
    const auto probes = std::vector<Probe>{
        {[](double x) { return x * x * x * x; }, line, 3.0},
        {[](double x) { return std::exp(0.5 * x); }, line, std::exp(0.125)},
        {[](double) { return 1.0; }, slab,
         std_normal_cdf(2.0) - std_normal_cdf(1.0)},
        {[](double x) { return std_normal_cdf(3.0 * x); }, line, 0.5},
    };
    for (const auto& p : probes) {
        const auto r = integrate_gaussian(p.f, p.domain);
        CHECK(r.converged);
        CHECK(std::abs(r.value - p.exact) <= 10.0 * r.error_estimate + 1e-14);
    }
}

TEST_CASE("integral over a union equals the sum over its components") {
    auto f = [](double x) { return std::cos(x) + 0.1 * x * x; };
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto a = random_interval_union(31, i);
        if (a.is_empty()) continue;
        const auto whole = integrate_gaussian(f, a);
        double parts = 0.0;
        for (const auto& iv : a.intervals()) {
            const auto piece = IntervalUnion::canonicalize({{iv.lo, iv.hi}});
            parts += integrate_gaussian(f, piece).value;
        }
        CHECK(std::abs(whole.value - parts) <= 1e-12);
    }
}

TEST_CASE("panel budget exhaustion reports not converged with best value") {
    QuadratureConfig tight;
    tight.abs_tol = 1e-14;
    tight.max_panels = 4;
    const auto r = integrate_line(
        [](double x) { return std::cos(40.0 * x); }, tight);
    CHECK_FALSE(r.converged);
    CHECK(r.error_estimate > 1e-14);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("truncated ray tail mass is folded into the error estimate") {
    QuadratureConfig cfg;
    cfg.truncation_radius = 8.0;
    const auto ray = IntervalUnion::canonicalize({{0.0, kInf}});
    const auto r = integrate_gaussian([](double) { return 1.0; }, ray, cfg);
    // Tail mass beyond 8 is ~6e-16; the estimate must cover the truncation.
    CHECK(std::abs(r.value - 0.5) <= r.error_estimate + 1e-12);
    CHECK(r.error_estimate >= std_normal_cdf(-8.0) / 2.0);
}

TEST_CASE("empty domain integrates to zero") {
    const auto r =
        integrate_gaussian([](double) { return 5.0; }, IntervalUnion::empty_set());
    CHECK(r.value == 0.0);
    CHECK(r.converged);
}
