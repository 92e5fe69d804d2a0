#pragma once

// Text form of interval unions: intervals joined by "U", endpoints are
// decimal literals or "-inf"/"inf", e.g. "(-inf,0.5]U[1,2]". Brackets are
// accepted on input but carry no meaning (all intervals are closed). The
// empty set is written "empty". parse(format(x)) is the identity on
// canonical sets, and numbers are printed with 17 significant digits so the
// round trip is bit-exact.

#include "noiselab/interval_set.hpp"

#include <string>

namespace noiselab {

// Throws MalformedInterval naming the offending token and its 0-based
// position in the input.
IntervalUnion parse_set_literal(const std::string& text);

std::string format_set_literal(const IntervalUnion& a);

// 17-significant-digit rendering used for every number the tool emits.
std::string format_double(double v);

} // namespace noiselab
