#ifndef ENVERIFY_TOOLS_CLI_H
#define ENVERIFY_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace enverify::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainError = 2,
    kResourceError = 3,
    kCrosscheckFailure = 4,
};

/// Runs one command line. argv[0] is the program name.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace enverify::cli

#endif
