#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mrpn/engine.hpp"
#include "mrpn/format.hpp"

namespace mrpn {

/// Exit codes shared by all subcommands.
enum Exit : int { kOk = 0, kFail = 1, kUsage = 2, kInvalid = 3, kBudget = 4 };

/// Entry point of the `mrpn` tool. argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Interactive stepping loop; reads commands until `quit` or end of input.
int run_repl(const NetDocument& doc, State start, std::istream& in, std::ostream& out);

}  // namespace mrpn
