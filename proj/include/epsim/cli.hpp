#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace epsim {

// Parses argv and dispatches to the subcommands
// {ingest, simulate, counterfact, annotate, evaluate, analyze, report}.
// Returns the process exit code: 0 success, 1 per-cell failures present,
// 2 configuration/usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace epsim
