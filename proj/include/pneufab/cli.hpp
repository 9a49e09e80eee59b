#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pneufab {

/// Exit codes: 0 success, 1 usage/IO/parse error, 2 validation failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pneufab
