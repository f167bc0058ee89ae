#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kuramoto {

/// Bad caller-supplied parameter (range, shape, unknown tag).
class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An exponent γ·t·λ left the representable double range.
class PropagatorOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

class ConvergenceFailure : public std::runtime_error {
public:
  ConvergenceFailure(const std::string& what, std::size_t sweeps)
      : std::runtime_error(what), sweeps_(sweeps) {}
  std::size_t sweeps() const noexcept { return sweeps_; }

private:
  std::size_t sweeps_;
};

/// Integration produced NaN/Inf; carries the step index where it was seen.
class NonFiniteState : public std::runtime_error {
public:
  NonFiniteState(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

namespace detail {
inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParameter(msg);
}
}  // namespace detail

}  // namespace kuramoto
