#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitlv {

// A step or evaluation produced a non-finite value. States are never
// clamped or repaired; the offending component index (position in the
// concatenated (x, y) vector) is kept when known so callers can report
// where a trajectory died.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what, std::ptrdiff_t component = -1)
      : std::runtime_error(what), component_(component) {}
  std::ptrdiff_t component() const noexcept { return component_; }

 private:
  std::ptrdiff_t component_;
};

// Input outside a function's mathematical domain, e.g. a logarithm or the
// symplectic form evaluated at a state with nonpositive components.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dyadic grid bookkeeping failure: a step size that does not live on the
// grid, a level too large for 64-bit indexing, or an index range outside
// the sampled path.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model parameters or experiment configuration. The message lists
// every violation found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace splitlv
