#pragma once

#include <iosfwd>

namespace fpp {

/// Entry point of the fpp command line. Returns 0 on success, 1 when a
/// verdict fails, 2 on usage or configuration errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpp
