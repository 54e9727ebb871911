#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace starshell {

// Pricing used when --pricing is not given.
inline constexpr const char* kDefaultPricing = "scripted-model 3.00 15.00\n";

// Entry point for the `starshell` binary. args[0] is the program name.
// Returns the process exit code: 0 on success, 1 when a bench run hit an
// environment failure, 2 on usage or runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace starshell
