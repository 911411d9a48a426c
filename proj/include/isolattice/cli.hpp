#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isolattice {

/// Runs one command line (without the program name). The result document goes
/// to `out`, diagnostics to `err`. Returns 0 on success, 1 on a domain
/// failure (the document then describes it) and 2 on malformed input.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isolattice
