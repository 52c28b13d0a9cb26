#ifndef PODSKETCH_CLI_HPP
#define PODSKETCH_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace podsketch {

// Exit codes of the podsketch command line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParameter = 2,
    kExitFormat = 3,
    kExitDegenerate = 4
};

// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace podsketch

#endif  // PODSKETCH_CLI_HPP
