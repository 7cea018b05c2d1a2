#ifndef GAUGECALC_CLI_HPP
#define GAUGECALC_CLI_HPP

#include <string>
#include <vector>

namespace gaugecalc::cli {

// Runs the command line given the argument list (program name excluded).
// Exit codes: 0 pass/certificate, 1 inconclusive or witness, 2 usage errors.
int run(std::vector<std::string> args);

}  // namespace gaugecalc::cli

#endif
