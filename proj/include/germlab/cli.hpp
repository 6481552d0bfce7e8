#ifndef GERMLAB_CLI_HPP
#define GERMLAB_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace germlab::cli {

// Runs one subcommand.  Exit codes: 0 = verdict computed (including FAILS
// and MIXED verdicts), 1 = semantic or validation error, 2 = parse error.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace germlab::cli

#endif
