#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace tssort {

enum class Errc {
  invalid_argument,
  io_error,
  parse_error,
  domain_error,
  no_admissible_pairs,
  unstable,
  not_converged,
  internal,
};

// Exception carrying a stable error code; the C API maps these to integer
// status values, the CLI maps them to exit codes.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

// 17 significant digits round-trips IEEE-754 doubles exactly.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace tssort
