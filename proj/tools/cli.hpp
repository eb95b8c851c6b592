#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qibg::cli {

// Exit codes shared by every subcommand.
enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,   // verification, membership or invariant check said no
  kInputError = 2,    // unreadable or malformed input, bad flags
  kDomainError = 3,   // well-formed input outside the operation's domain
};

// Entry point used by main() and by the tests; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qibg::cli
