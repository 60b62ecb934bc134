#pragma once

#include <iosfwd>

namespace biocnlf::cli {

/// Entry point shared by the executable and the tests. Returns 0 iff the
/// requested run completed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace biocnlf::cli
