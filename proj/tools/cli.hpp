#ifndef EOCONV_TOOLS_CLI_HPP
#define EOCONV_TOOLS_CLI_HPP

#include <iosfwd>

namespace eoconv
{

enum ExitCode
{
    exit_ok = 0,
    exit_failure = 1, // physics / solver failure
    exit_config = 2,  // configuration or usage error
};

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace eoconv

#endif
