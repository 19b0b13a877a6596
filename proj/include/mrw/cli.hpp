#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mrw {

// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,
    kExitResource = 3,
    kExitBudget = 4,
};

inline constexpr const char* kVersion = "1.0.0";

// Entry point shared by the mrw_fluct binary and the tests.
//   mrw_fluct validate --model PATH
//   mrw_fluct run --model PATH --experiment NAME [--state LABEL] [--n INT | --n-grid a,b,c]
//                 [--paths INT] [--seed INT] [--out DIR] [--threads INT]
//                 [--theta X] [--tolerance KEY=VAL]...
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const std::vector<std::string>& experiment_names();

}  // namespace mrw
