#pragma once

#include <ostream>

namespace mosaic {

/// Runs the command line. Returns 0 on success, 1 on usage or config errors
/// and 2 when a correlation run fails calibration.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mosaic
