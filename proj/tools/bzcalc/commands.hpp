#pragma once

// Subcommands of bzcalc. Each takes parsed JSON and returns a JSON document
// plus an exit status; DomainError and ModelViolation propagate to run().

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bzfam/json_io.hpp"

namespace bzfam::cli {

enum ExitStatus : int { kOk = 0, kDomainError = 1, kModelViolation = 2 };

struct CommandResult {
  int status = kOk;
  io::Json output;
};

struct SegOptions {
  bool order = false;
  bool children = false;
  bool closure = false;
  bool statistic = false;
  bool support = false;
  std::optional<io::Json> leq_other;
};

CommandResult cmd_seg(const io::Json& input, const SegOptions& options);
CommandResult cmd_dims(const io::Json& input, const PrimePower& q);
CommandResult cmd_identity_check(int n_max, const std::vector<PrimePower>& qs);
CommandResult cmd_wd(const io::Json& input);

struct FamilyOptions {
  std::optional<std::string> x0;
  int seeds = 1;
};

CommandResult cmd_family(const io::Json& scenario, const FamilyOptions& options);
CommandResult cmd_selftest();

/// Reads "-" as stdin, text starting with '{' or '[' as inline JSON, and
/// anything else as a file path.
std::string load_input(const std::string& arg);

/// Full command line, returning the process exit status.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bzfam::cli
