#pragma once

// Phases on the circle and their complex exponentials.
//
// Phase convention: the half-open interval (-pi, pi]. -pi itself maps to pi so
// that wrapping is a function and idempotent.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "kuramoto/error.hpp"
#include "kuramoto/matrix.hpp"

namespace kuramoto {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double wrap_phase(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("wrap_phase: non-finite input");
  // remainder() is exact and lands in [-pi, pi].
  const double r = std::remainder(x, two_pi);
  return r <= -pi ? pi : r;
}

/// Geodesic distance on the circle, in [0, pi].
inline double wrapped_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

/// Oscillator phases, every component wrapped to (-pi, pi].
class PhaseState {
public:
  PhaseState() = default;
  explicit PhaseState(std::vector<double> theta) : theta_(std::move(theta)) {
    for (auto& v : theta_) v = wrap_phase(v);
  }

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const noexcept { return theta_[i]; }
  std::span<const double> values() const noexcept { return theta_; }

  bool operator==(const PhaseState&) const = default;

private:
  std::vector<double> theta_;
};

/// x = e^{i theta}, evolved linearly by the propagator.
struct ComplexState {
  std::vector<cdouble> x;

  std::size_t size() const noexcept { return x.size(); }

  static ComplexState from_phases(std::span<const double> theta) {
    ComplexState s;
    s.x.reserve(theta.size());
    for (double t : theta) s.x.push_back(std::polar(1.0, t));
    return s;
  }
  static ComplexState from_phases(const PhaseState& theta) { return from_phases(theta.values()); }
};

/// r = (1/N) sum_j e^{i theta_j}. Works on wrapped or unwrapped phases alike.
inline cdouble order_parameter(std::span<const double> theta) {
  cdouble sum{0.0, 0.0};
  for (double t : theta) sum += std::polar(1.0, t);
  return sum / static_cast<double>(theta.size());
}

inline cdouble order_parameter(const PhaseState& theta) { return order_parameter(theta.values()); }

}  // namespace kuramoto
