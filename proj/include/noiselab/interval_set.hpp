#pragma once

// Canonical finite unions of closed intervals on the extended real line and
// their Gaussian geometry: measure, centroid, half-line rounding, boolean set
// operations, surface area, and the Brownian rescaling map.

#include <vector>

namespace noiselab {

struct Interval {
    double lo;
    double hi;
};

// Invariants after construction: intervals sorted, pairwise disjoint with
// strictly positive gaps, each lo < hi; at most the first lo is -inf and at
// most the last hi is +inf; empty list encodes the empty set. Values are
// immutable once built.
class IntervalUnion {
public:
    IntervalUnion() = default;

    // Merges, sorts and deduplicates a raw list. Degenerate pairs (width 0)
    // are dropped; gaps and widths up to 1e-15 are merged away so no two
    // retained endpoints nearly coincide. Throws MalformedInterval on NaN or
    // lo > hi. Idempotent and measure-preserving.
    static IntervalUnion canonicalize(std::vector<Interval> raw);

    static IntervalUnion empty_set() { return IntervalUnion(); }
    static IntervalUnion real_line();

    const std::vector<Interval>& intervals() const { return iv_; }
    bool is_empty() const { return iv_.empty(); }
    bool is_real_line() const;
    std::size_t component_count() const { return iv_.size(); }

    bool operator==(const IntervalUnion& o) const { return same(o); }
    bool operator!=(const IntervalUnion& o) const { return !same(o); }

private:
    bool same(const IntervalUnion& o) const;
    std::vector<Interval> iv_;
};

// Right half-line [threshold, inf) when orientation = +1, left half-line
// (-inf, threshold] when orientation = -1.
struct HalfLine {
    double threshold;
    int orientation;
};

IntervalUnion as_interval_union(const HalfLine& h);

// Gaussian mass Phi(hi) - Phi(lo) of one interval, evaluated through the
// nearer tail so far-out components keep full relative accuracy.
double interval_gaussian_mass(double lo, double hi);

// gamma(A): sum of component masses.
double gaussian_measure(const IntervalUnion& a);

// Signed first moment of A under gamma; closed form sum of pdf(lo) - pdf(hi).
double centroid(const IntervalUnion& a);

// |centroid(A)|, the quantity bounded by the isoperimetric profile at
// gamma(A).
double first_moment_magnitude(const IntervalUnion& a);

// Half-line with the same Gaussian measure as A, oriented by the sign of the
// centroid (+1 on ties within 1e-14). Throws DegenerateMeasure when gamma(A)
// is 0 or 1.
HalfLine halfspace_round(const IntervalUnion& a);

IntervalUnion set_union(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion set_intersection(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion symmetric_difference(const IntervalUnion& a,
                                   const IntervalUnion& b);
IntervalUnion complement(const IntervalUnion& a);

// Sum of the standard normal density over all finite endpoints; the Gaussian
// perimeter of the union.
double surface_area(const IntervalUnion& a);

// The rescaled set (A - w) / sqrt(1 - t). Throws TimeOutOfRange unless
// 0 <= t < 1.
IntervalUnion evolve(const IntervalUnion& a, double w, double t);

} // namespace noiselab
