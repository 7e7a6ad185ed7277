#pragma once

#include <stdexcept>
#include <string>

namespace aggsolve {

// Error categories surfaced to the CLI (which maps them to exit codes).
enum class ErrorKind {
  Dimension,      // shape mismatch between inputs
  Infeasible,     // a point violates a constraint set
  Geometry,       // unsupported geometric operation (dimension cap, ...)
  Convergence,    // an iterative routine failed to converge
  Config,         // bad configuration / parse problem
  Oracle,         // ground-truth computation failed its own certificate
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace aggsolve
