#pragma once

#include <stdexcept>
#include <string>

namespace sgw {

// Failure categories. The CLI maps these onto process exit codes, everything
// else just lets them propagate.
enum class errc {
  dimension,     // mismatched or unsupported array/grid sizes
  bracket,       // root or eigenvalue bracket does not straddle a sign change
  singularity,   // adaptive step size underflow at a definite location
  non_finite,    // NaN/Inf appeared in a state vector or rhs
  config,        // invalid physical or numerical configuration
  domain,        // input outside the validity region of a formula
  convergence,   // iteration or refinement failed to converge
  stale_input,   // input file does not match its recorded content hash
  usage,         // bad command line
  io,            // file system failure
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) throw error(code, what);
}

}  // namespace sgw
