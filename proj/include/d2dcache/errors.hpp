#pragma once

#include <stdexcept>
#include <string>

namespace d2dcache {

// Raised for malformed configuration input (bad scenario files, out-of-range
// parameters, unknown keys).  The CLI maps it to exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a numerical solver cannot produce a valid answer (failed
// bracketing, fixed-point non-convergence).  The CLI maps it to exit code 3.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an optimization problem has no feasible solution for the given
// inputs; a refinement of solver_error so callers may distinguish it.
class infeasible_error : public solver_error {
 public:
  using solver_error::solver_error;
};

}  // namespace d2dcache
