#include "noiselab/interval_set.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace noiselab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeTol = 1e-15;
constexpr double kCentroidTieTol = 1e-14;

} // namespace

IntervalUnion IntervalUnion::canonicalize(std::vector<Interval> raw) {
    for (const auto& iv : raw) {
        if (std::isnan(iv.lo) || std::isnan(iv.hi))
            throw MalformedInterval("interval endpoint is NaN");
        if (iv.lo > iv.hi)
            throw MalformedInterval("interval has lo > hi");
    }
    std::erase_if(raw, [](const Interval& iv) { return iv.lo == iv.hi; });
    std::sort(raw.begin(), raw.end(), [](const Interval& x, const Interval& y) {
        return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
    });
    IntervalUnion out;
    for (const auto& iv : raw) {
        if (!out.iv_.empty() && iv.lo - out.iv_.back().hi <= kMergeTol) {
            out.iv_.back().hi = std::max(out.iv_.back().hi, iv.hi);
        } else {
            out.iv_.push_back(iv);
        }
    }
    // Near-duplicate endpoints would create spurious boundary mass.
    std::erase_if(out.iv_, [](const Interval& iv) {
        return std::isfinite(iv.lo) && std::isfinite(iv.hi) &&
               iv.hi - iv.lo <= kMergeTol;
    });
    return out;
}

IntervalUnion IntervalUnion::real_line() {
    IntervalUnion r;
    r.iv_.push_back({-kInf, kInf});
    return r;
}

bool IntervalUnion::is_real_line() const {
    return iv_.size() == 1 && iv_[0].lo == -kInf && iv_[0].hi == kInf;
}

bool IntervalUnion::same(const IntervalUnion& o) const {
    if (iv_.size() != o.iv_.size()) return false;
    for (std::size_t i = 0; i < iv_.size(); ++i)
        if (iv_[i].lo != o.iv_[i].lo || iv_[i].hi != o.iv_[i].hi) return false;
    return true;
}

IntervalUnion as_interval_union(const HalfLine& h) {
    std::vector<Interval> v;
    if (h.orientation > 0)
        v.push_back({h.threshold, kInf});
    else
        v.push_back({-kInf, h.threshold});
    return IntervalUnion::canonicalize(std::move(v));
}

double interval_gaussian_mass(double lo, double hi) {
    double m;
    if (lo >= 0.0) {
        m = std_normal_cdf(-lo) - std_normal_cdf(-hi);
    } else if (hi <= 0.0) {
        m = std_normal_cdf(hi) - std_normal_cdf(lo);
    } else {
        m = 1.0 - std_normal_cdf(lo) - std_normal_cdf(-hi);
    }
    return m < 0.0 ? 0.0 : m;
}

double gaussian_measure(const IntervalUnion& a) {
    double total = 0.0;
    for (const auto& iv : a.intervals())
        total += interval_gaussian_mass(iv.lo, iv.hi);
    if (total > 1.0) total = 1.0;
    return total;
}

double centroid(const IntervalUnion& a) {
    double c = 0.0;
    for (const auto& iv : a.intervals())
        c += std_normal_pdf(iv.lo) - std_normal_pdf(iv.hi);
    return c;
}

double first_moment_magnitude(const IntervalUnion& a) {
    return std::fabs(centroid(a));
}

HalfLine halfspace_round(const IntervalUnion& a) {
    const double g = gaussian_measure(a);
    if (!(g > 0.0 && g < 1.0))
        throw DegenerateMeasure("half-line rounding requires 0 < gamma < 1");
    const double c = centroid(a);
    const int orientation = (c > kCentroidTieTol)    ? +1
                            : (c < -kCentroidTieTol) ? -1
                                                     : +1;
    // Psi(1-g) written as -Psi(g) so thin sets keep full precision.
    const double threshold = orientation > 0 ? -std_normal_quantile(g)
                                             : std_normal_quantile(g);
    return HalfLine{threshold, orientation};
}

IntervalUnion set_union(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> v = a.intervals();
    v.insert(v.end(), b.intervals().begin(), b.intervals().end());
    return IntervalUnion::canonicalize(std::move(v));
}

IntervalUnion set_intersection(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> v;
    std::size_t i = 0, j = 0;
    const auto& x = a.intervals();
    const auto& y = b.intervals();
    while (i < x.size() && j < y.size()) {
        const double lo = std::max(x[i].lo, y[j].lo);
        const double hi = std::min(x[i].hi, y[j].hi);
        if (lo < hi) v.push_back({lo, hi});
        if (x[i].hi < y[j].hi)
            ++i;
        else
            ++j;
    }
    return IntervalUnion::canonicalize(std::move(v));
}

IntervalUnion complement(const IntervalUnion& a) {
    std::vector<Interval> v;
    const auto& x = a.intervals();
    if (x.empty()) return IntervalUnion::real_line();
    if (x.front().lo != -kInf) v.push_back({-kInf, x.front().lo});
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        v.push_back({x[i].hi, x[i + 1].lo});
    if (x.back().hi != kInf) v.push_back({x.back().hi, kInf});
    return IntervalUnion::canonicalize(std::move(v));
}

IntervalUnion symmetric_difference(const IntervalUnion& a,
                                   const IntervalUnion& b) {
    const IntervalUnion a_only = set_intersection(a, complement(b));
    const IntervalUnion b_only = set_intersection(b, complement(a));
    return set_union(a_only, b_only);
}

double surface_area(const IntervalUnion& a) {
    double s = 0.0;
    for (const auto& iv : a.intervals()) {
        s += std_normal_pdf(iv.lo); // 0 at -inf
        s += std_normal_pdf(iv.hi); // 0 at +inf
    }
    return s;
}

IntervalUnion evolve(const IntervalUnion& a, double w, double t) {
    if (!(t >= 0.0 && t < 1.0))
        throw TimeOutOfRange("evolve requires 0 <= t < 1");
    const double scale = 1.0 / std::sqrt(1.0 - t);
    std::vector<Interval> v;
    v.reserve(a.intervals().size());
    for (const auto& iv : a.intervals()) {
        const double lo = std::isinf(iv.lo) ? iv.lo : (iv.lo - w) * scale;
        const double hi = std::isinf(iv.hi) ? iv.hi : (iv.hi - w) * scale;
        v.push_back({lo, hi});
    }
    return IntervalUnion::canonicalize(std::move(v));
}

} // namespace noiselab
