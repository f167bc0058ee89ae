#pragma once

// Kuramoto phase dynamics on a graph, two ways:
//
//   numerical:  d theta_i/dt = omega + kappa * sum_j a_ij sin(theta_j - theta_i),
//               fixed-step forward Euler or classical RK4, state kept unwrapped
//               internally and wrapped only when a sample is recorded;
//   analytic:   x(t) = exp(gamma t A) e^{i theta(0)}, gamma = 2 kappa / pi,
//               theta(t) = arg x(t) + omega t   (rotating frame undone).

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kuramoto/error.hpp"
#include "kuramoto/format.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/rng.hpp"
#include "kuramoto/spectral.hpp"
#include "kuramoto/state.hpp"

namespace kuramoto {

enum class Integrator { euler, rk4 };

inline std::string_view to_string(Integrator i) { return i == Integrator::euler ? "euler" : "rk4"; }

enum class TrajectorySource { numerical, analytic };

inline std::string_view to_string(TrajectorySource s) {
  return s == TrajectorySource::numerical ? "numerical" : "analytic";
}

struct SimulationConfig {
  std::shared_ptr<const AdjacencyMatrix> graph;
  double kappa = 0.0;  // 1/s
  double omega = 0.0;  // rad/s, same for every oscillator
  double dt = 1e-3;
  double t_end = 1.0;
  std::uint64_t seed = 0;
  Integrator integrator = Integrator::euler;
  std::size_t record_every = 1;
  OverflowGuard guard = OverflowGuard::on;

  double gamma() const noexcept { return 2.0 * kappa / pi; }

  std::size_t node_count() const { return graph ? graph->size() : 0; }

  void validate() const {
    detail::require(graph != nullptr, "simulation config has no graph");
    detail::require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    detail::require(std::isfinite(t_end) && t_end >= 0.0, "t_end must be non-negative");
    detail::require(std::isfinite(kappa), "kappa must be finite");
    detail::require(std::isfinite(omega), "omega must be finite");
    detail::require(record_every >= 1, "record_every must be at least 1");
    const double ratio = t_end / dt;
    detail::require(std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio),
                    "t_end must be an integer multiple of dt");
  }

  std::size_t step_count() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

  /// Step indices at which a sample is recorded: 0, record_every, ..., and always the last step.
  std::vector<std::size_t> recorded_steps() const {
    const std::size_t steps = step_count();
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s <= steps; s += record_every) out.push_back(s);
    if (out.back() != steps) out.push_back(steps);
    return out;
  }

  std::vector<double> sample_times() const {
    std::vector<double> t;
    for (auto s : recorded_steps()) t.push_back(static_cast<double>(s) * dt);
    return t;
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  TrajectorySource source = TrajectorySource::numerical;

  std::size_t size() const noexcept { return times.size(); }
  std::size_t node_count() const noexcept { return states.empty() ? 0 : states.front().size(); }
};

/// Uniform on (-pi, pi], one draw per node from the seed's initial-phase stream.
inline PhaseState initial_phases(std::size_t n, std::uint64_t seed) {
  detail::require(n >= 1, "initial_phases: n must be positive");
  Rng rng(seed, stream::initial_phases);
  std::vector<double> theta(n);
  for (auto& t : theta) t = pi - two_pi * rng.uniform01();
  return PhaseState(std::move(theta));
}

namespace detail {

/// Right-hand side of the Kuramoto ODE, evaluated as
/// cos(theta_i) * sum_j a_ij sin(theta_j) - sin(theta_i) * sum_j a_ij cos(theta_j)
/// over neighbour lists, which is sum_j a_ij sin(theta_j - theta_i) with
/// n sincos calls instead of n^2.
class KuramotoField {
public:
  KuramotoField(const AdjacencyMatrix& a, double kappa, double omega)
      : kappa_(kappa), omega_(omega), neighbours_(a.size()), sin_(a.size()), cos_(a.size()) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j)
        if (a(i, j)) neighbours_[i].push_back(static_cast<std::uint32_t>(j));
  }

  std::size_t size() const noexcept { return neighbours_.size(); }

  void operator()(std::span<const double> theta, std::span<double> out) {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      sin_[i] = std::sin(theta[i]);
      cos_[i] = std::cos(theta[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0, c = 0.0;
      for (auto j : neighbours_[i]) {
        s += sin_[j];
        c += cos_[j];
      }
      out[i] = omega_ + kappa_ * (cos_[i] * s - sin_[i] * c);
    }
  }

private:
  double kappa_;
  double omega_;
  std::vector<std::vector<std::uint32_t>> neighbours_;
  std::vector<double> sin_;
  std::vector<double> cos_;
};

inline PhaseState wrapped_copy(std::span<const double> theta) {
  return PhaseState(std::vector<double>(theta.begin(), theta.end()));
}

}  // namespace detail

/// d theta/dt in rad/s. Accepts wrapped or unwrapped phases; never wraps the result.
inline std::vector<double> km_rhs(std::span<const double> theta, const SimulationConfig& cfg) {
  detail::require(cfg.graph != nullptr, "km_rhs: config has no graph");
  detail::require(theta.size() == cfg.graph->size(), "km_rhs: phase vector length does not match graph");
  detail::KuramotoField field(*cfg.graph, cfg.kappa, cfg.omega);
  std::vector<double> out(theta.size());
  field(theta, out);
  return out;
}

inline std::vector<double> km_rhs(const PhaseState& theta, const SimulationConfig& cfg) {
  return km_rhs(theta.values(), cfg);
}

inline Trajectory integrate_numerical(const SimulationConfig& cfg, const PhaseState& theta0) {
  cfg.validate();
  const std::size_t n = cfg.node_count();
  detail::require(theta0.size() == n, "integrate_numerical: initial state length does not match graph");

  detail::KuramotoField field(*cfg.graph, cfg.kappa, cfg.omega);
  std::vector<double> theta(theta0.values().begin(), theta0.values().end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  Trajectory traj;
  traj.source = TrajectorySource::numerical;
  const auto record_steps = cfg.recorded_steps();
  traj.times.reserve(record_steps.size());
  traj.states.reserve(record_steps.size());
  traj.times.push_back(0.0);
  traj.states.push_back(theta0);

  const double dt = cfg.dt;
  std::size_t next_record = 1;
  const std::size_t steps = cfg.step_count();
  for (std::size_t step = 1; step <= steps; ++step) {
    if (cfg.integrator == Integrator::euler) {
      field(theta, k1);
      for (std::size_t i = 0; i < n; ++i) theta[i] += dt * k1[i];
    } else {
      field(theta, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k1[i];
      field(tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k2[i];
      field(tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + dt * k3[i];
      field(tmp, k4);
      for (std::size_t i = 0; i < n; ++i) theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(theta[i]))
        throw NonFiniteState("integration produced a non-finite phase at step " + std::to_string(step), step);

    if (next_record < record_steps.size() && record_steps[next_record] == step) {
      traj.times.push_back(static_cast<double>(step) * dt);
      traj.states.push_back(detail::wrapped_copy(theta));
      ++next_record;
    }
  }
  return traj;
}

/// Analytic phases at arbitrary sample times; each time is evaluated directly.
inline Trajectory analytic_trajectory_at(const EigenSystem& es, const SimulationConfig& cfg,
                                         const PhaseState& theta0, std::span<const double> times) {
  detail::require(es.size() == theta0.size(), "analytic_trajectory: eigensystem and state sizes differ");
  if (cfg.graph) detail::require(cfg.graph->size() == es.size(), "analytic_trajectory: eigensystem does not match graph");
  detail::require(std::isfinite(cfg.kappa) && std::isfinite(cfg.omega), "analytic_trajectory: non-finite parameters");

  const Propagator prop(es, ComplexState::from_phases(theta0));
  const double gamma = cfg.gamma();
  Trajectory traj;
  traj.source = TrajectorySource::analytic;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  std::vector<double> phase(es.size());
  for (double t : times) {
    const auto x = prop.at(gamma, t, cfg.guard);
    for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = std::arg(x.x[i]) + cfg.omega * t;
    traj.states.push_back(PhaseState(phase));
  }
  return traj;
}

/// Analytic phases at the config's recording times (same grid as integrate_numerical).
inline Trajectory analytic_trajectory(const EigenSystem& es, const SimulationConfig& cfg, const PhaseState& theta0) {
  cfg.validate();
  const auto times = cfg.sample_times();
  return analytic_trajectory_at(es, cfg, theta0, times);
}

struct AmplitudeReport {
  std::vector<double> theta_im;  // -ln|x_i|; +inf where x_i == 0
  OverflowGuard guard = OverflowGuard::on;
  double log_scale = 0.0;  // gamma * lambda_max * t, subtracted from every exponent when guarded
};

/// -ln|x_i| per component, +inf where x_i == 0.
inline std::vector<double> log_amplitudes(const ComplexState& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (auto v : x.x) {
    const double m = std::abs(v);
    out.push_back(m == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(m));
  }
  return out;
}

/// Imaginary part of the complex phase, theta_im = -ln|x_i(t)|. When the guard
/// is on, values are relative to the dominant mode: the true theta_im is
/// theta_im - log_scale.
inline AmplitudeReport analytic_amplitudes(const EigenSystem& es, const SimulationConfig& cfg,
                                           const PhaseState& theta0, double t) {
  detail::require(es.size() == theta0.size(), "analytic_amplitudes: eigensystem and state sizes differ");
  const Propagator prop(es, ComplexState::from_phases(theta0));
  const auto x = prop.at(cfg.gamma(), t, cfg.guard);
  AmplitudeReport rep;
  rep.guard = cfg.guard;
  rep.log_scale = cfg.guard == OverflowGuard::on ? cfg.gamma() * prop.lambda_max() * t : 0.0;
  rep.theta_im = log_amplitudes(x);
  return rep;
}

// ---------------------------------------------------------------------------
// Trajectory files: CSV plus a "key=value" sidecar describing the run.

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << 't';
  for (std::size_t i = 0; i < traj.node_count(); ++i) os << ",theta_" << i;
  os << '\n';
  for (std::size_t s = 0; s < traj.size(); ++s) {
    os << format_double(traj.times[s]);
    for (double v : traj.states[s].values()) os << ',' << format_double(v);
    os << '\n';
  }
}

inline Trajectory read_trajectory_csv(std::istream& is, TrajectorySource source = TrajectorySource::numerical) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t", 0) != 0) throw InvalidParameter("trajectory CSV: missing header");
  Trajectory traj;
  traj.source = source;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      row.push_back(parse_double(std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    traj.times.push_back(row.front());
    traj.states.emplace_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  return traj;
}

inline void write_trajectory_meta(std::ostream& os, const SimulationConfig& cfg, TrajectorySource source,
                                  std::optional<SpectrumSource> spectrum = std::nullopt) {
  const auto& g = *cfg.graph;
  os << "source=" << to_string(source) << '\n';
  os << "graph.kind=" << to_string(g.kind()) << '\n';
  os << "graph.n=" << g.size() << '\n';
  os << "graph.edges=" << g.edge_count() << '\n';
  if (g.params().k) os << "graph.k=" << *g.params().k << '\n';
  if (g.params().p) os << "graph.p=" << format_double(*g.params().p) << '\n';
  if (g.params().q) os << "graph.q=" << format_double(*g.params().q) << '\n';
  if (g.params().seed) os << "graph.seed=" << *g.params().seed << '\n';
  os << "kappa=" << format_double(cfg.kappa) << '\n';
  os << "gamma=" << format_double(cfg.gamma()) << '\n';
  os << "omega=" << format_double(cfg.omega) << '\n';
  os << "dt=" << format_double(cfg.dt) << '\n';
  os << "t_end=" << format_double(cfg.t_end) << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << "integrator=" << to_string(cfg.integrator) << '\n';
  os << "record_every=" << cfg.record_every << '\n';
  os << "overflow_guard=" << (cfg.guard == OverflowGuard::on ? "on" : "off") << '\n';
  if (spectrum) os << "spectrum=" << to_string(*spectrum) << '\n';
}

inline std::map<std::string, std::string> read_meta(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace kuramoto
