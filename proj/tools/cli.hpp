#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lnr::cli {

  inline constexpr int kExitOk           = 0;
  inline constexpr int kExitUsage        = 1;
  inline constexpr int kExitFailed       = 2;
  inline constexpr int kExitInconclusive = 3;

  // Runs one command line. The JSON report goes to `out`, diagnostics to
  // `err`; the return value is the process exit code.
  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace lnr::cli
