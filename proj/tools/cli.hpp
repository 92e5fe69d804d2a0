#pragma once

#include <iosfwd>

namespace noiselab {

// Full command-line front end. Returns the process exit status:
// 0 success, 2 input error, 3 convergence failure, 4 property-suite failure.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace noiselab
