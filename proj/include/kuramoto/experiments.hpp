#pragma once

// Numerical-vs-analytic comparison experiments on the four graph families:
// K3 agreement, K200 rasters, the coupling sweep on K200, and ER / WS graphs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/format.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/spectral.hpp"
#include "kuramoto/state.hpp"

namespace kuramoto {

struct ComparisonReport {
  std::vector<double> times;
  std::vector<double> per_time_deviation;  // max over nodes of the wrapped distance
  std::vector<double> abs_r_numerical;
  std::vector<double> abs_r_analytic;
  double max_wrapped_deviation = 0.0;
  double mean_abs_order_gap = 0.0;
};

inline std::vector<double> abs_order_parameter_series(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& s : traj.states) out.push_back(std::abs(order_parameter(s)));
  return out;
}

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// `a` is reported as the numerical side, `b` as the analytic side.
inline ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b) {
  detail::require(a.size() == b.size(), "compare_trajectories: sample counts differ");
  detail::require(a.node_count() == b.node_count(), "compare_trajectories: node counts differ");
  for (std::size_t s = 0; s < a.size(); ++s) {
    detail::require(a.times[s] == b.times[s], "compare_trajectories: sample times differ");
    detail::require(a.states[s].size() == a.node_count() && b.states[s].size() == a.node_count(),
                    "compare_trajectories: ragged trajectory");
  }

  ComparisonReport rep;
  rep.times = a.times;
  rep.per_time_deviation.reserve(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.node_count(); ++i) m = std::max(m, wrapped_distance(a.states[s][i], b.states[s][i]));
    rep.per_time_deviation.push_back(m);
    rep.max_wrapped_deviation = std::max(rep.max_wrapped_deviation, m);
  }
  rep.abs_r_numerical = abs_order_parameter_series(a);
  rep.abs_r_analytic = abs_order_parameter_series(b);
  double gap = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) gap += std::abs(rep.abs_r_numerical[s] - rep.abs_r_analytic[s]);
  rep.mean_abs_order_gap = a.size() == 0 ? 0.0 : gap / static_cast<double>(a.size());
  return rep;
}

struct ComparisonRun {
  SimulationConfig config;
  PhaseState theta0;
  Trajectory numerical;
  Trajectory analytic;
  ComparisonReport report;
  SpectrumSource spectrum = SpectrumSource::cdt;
};

/// Both realizations start from the same theta0.
inline ComparisonRun run_comparison(const SimulationConfig& cfg, const EigenSystem& es, const PhaseState& theta0) {
  ComparisonRun run;
  run.config = cfg;
  run.theta0 = theta0;
  run.spectrum = es.source;
  run.numerical = integrate_numerical(cfg, theta0);
  run.analytic = analytic_trajectory(es, cfg, theta0);
  run.report = compare_trajectories(run.numerical, run.analytic);
  return run;
}

/// CDT spectrum for circulant graphs, Jacobi otherwise (or when forced).
inline EigenSystem eigensystem_for(const AdjacencyMatrix& a, std::optional<SpectrumSource> prefer = std::nullopt) {
  if (prefer != SpectrumSource::numerical)
    if (auto g = circulant_generator(a)) return cdt_eigensystem(*g);
  detail::require(prefer != SpectrumSource::cdt, "graph is not circulant; the closed-form spectrum does not apply");
  return eigendecompose_symmetric(a);
}

// ---------------------------------------------------------------------------
// Figure 1: K3, kappa = 1, omega / 2pi = 10 Hz, dt = 1 ms, Euler.

struct Fig1Options {
  std::uint64_t seed = 0;
  double t_end = 1.0;
  double dt = 1e-3;
  double kappa = 1.0;
  double omega = two_pi * 10.0;
  Integrator integrator = Integrator::euler;
  std::optional<PhaseState> theta0;  // overrides the seeded draw
};

inline ComparisonRun run_fig1(const Fig1Options& o = {}) {
  SimulationConfig cfg;
  cfg.graph = std::make_shared<const AdjacencyMatrix>(gen_complete(3));
  cfg.kappa = o.kappa;
  cfg.omega = o.omega;
  cfg.dt = o.dt;
  cfg.t_end = o.t_end;
  cfg.seed = o.seed;
  cfg.integrator = o.integrator;
  const auto es = cdt_eigensystem(ring_generating_vector(3, 1));
  return run_comparison(cfg, es, o.theta0 ? *o.theta0 : initial_phases(3, o.seed));
}

// ---------------------------------------------------------------------------
// Figure 2: ring N = 200, k = 100 (= K200), kappa = 6/N, 1 s.

struct Fig2Options {
  std::uint64_t seed = 0;
  std::size_t n = 200;
  std::size_t k = 100;
  std::optional<double> kappa;  // default 6 / n
  double omega = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t record_every = 1;
  SpectrumSource spectrum = SpectrumSource::cdt;
};

inline ComparisonRun run_fig2(const Fig2Options& o = {}) {
  SimulationConfig cfg;
  cfg.graph = std::make_shared<const AdjacencyMatrix>(gen_ring(o.n, o.k));
  cfg.kappa = o.kappa.value_or(6.0 / static_cast<double>(o.n));
  cfg.omega = o.omega;
  cfg.dt = o.dt;
  cfg.t_end = o.t_end;
  cfg.seed = o.seed;
  cfg.record_every = o.record_every;
  const auto es = eigensystem_for(*cfg.graph, o.spectrum);
  return run_comparison(cfg, es, initial_phases(o.n, o.seed));
}

// ---------------------------------------------------------------------------
// Figure 4: Erdős–Rényi (N = 200, p = 0.2) and Watts–Strogatz (N = 200,
// k = 10, q = 0.1), kappa = 50/N for both. Spectrum from the Jacobi solver.

enum class RandomGraphVariant { erdos_renyi, watts_strogatz };

struct Fig4Options {
  RandomGraphVariant variant = RandomGraphVariant::erdos_renyi;
  std::uint64_t seed = 0;
  std::size_t n = 200;
  double p = 0.2;
  std::size_t k = 10;
  double q = 0.1;
  std::optional<double> kappa;  // default 50 / n
  double omega = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t record_every = 1;
};

inline ComparisonRun run_fig4(const Fig4Options& o = {}) {
  SimulationConfig cfg;
  cfg.graph = std::make_shared<const AdjacencyMatrix>(o.variant == RandomGraphVariant::erdos_renyi
                                                          ? gen_erdos_renyi(o.n, o.p, o.seed)
                                                          : gen_watts_strogatz(o.n, o.k, o.q, o.seed));
  cfg.kappa = o.kappa.value_or(50.0 / static_cast<double>(o.n));
  cfg.omega = o.omega;
  cfg.dt = o.dt;
  cfg.t_end = o.t_end;
  cfg.seed = o.seed;
  cfg.record_every = o.record_every;
  const auto es = eigendecompose_symmetric(*cfg.graph);
  return run_comparison(cfg, es, initial_phases(o.n, o.seed));
}

// ---------------------------------------------------------------------------
// Figure 3: time-averaged |r| against kappa on K200.

/// `count` points from lo to hi, evenly spaced in log10; endpoints exact.
inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
  detail::require(lo > 0.0 && hi > 0.0 && count >= 1, "log_space: bounds must be positive");
  std::vector<double> out(count);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  if (count > 1) out.back() = hi;
  return out;
}

/// Runs body(i) for i in [0, count) on `jobs` threads. Exceptions are collected
/// and the one from the lowest index is rethrown after all workers stop.
inline void parallel_for_index(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(count, 1));

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = count;
  std::exception_ptr err;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (err) std::rethrow_exception(err);
}

struct SweepOptions {
  std::size_t points = 100;
  std::size_t realizations = 10;
  std::uint64_t seed = 0;  // realization r uses seed + r
  double kappa_min = 1e-3;
  double kappa_max = 10.0;
  std::size_t n = 200;
  std::size_t k = 100;
  double omega = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t record_every = 1;
  std::size_t jobs = 0;  // 0 = hardware concurrency
  SpectrumSource spectrum = SpectrumSource::cdt;
  std::string checkpoint_path;  // empty = no checkpointing
};

struct SweepResult {
  std::vector<double> kappas;
  std::vector<double> mean_abs_r_numerical;
  std::vector<double> std_numerical;
  std::vector<double> mean_abs_r_analytic;
  std::vector<double> std_analytic;
  std::size_t realizations = 0;
  std::vector<std::uint64_t> seeds;
};

/// Mean and sample standard deviation (n - 1 denominator; 0 for a single value).
inline std::pair<double, double> mean_and_std(std::span<const double> v) {
  const double m = mean(v);
  if (v.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

namespace detail {

struct SweepRow {
  double mean_num = 0.0, std_num = 0.0, mean_ana = 0.0, std_ana = 0.0;
};

// Checkpoint lines: "index,kappa,mean_num,std_num,mean_ana,std_ana". Rows
// whose kappa does not match the current grid exactly are ignored.
inline std::vector<std::optional<SweepRow>> load_checkpoint(const std::string& path, std::span<const double> kappas) {
  std::vector<std::optional<SweepRow>> rows(kappas.size());
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 6) continue;
    try {
      const auto idx = static_cast<std::size_t>(std::stoull(f[0]));
      if (idx >= kappas.size() || parse_double(f[1]) != kappas[idx]) continue;
      rows[idx] = SweepRow{parse_double(f[2]), parse_double(f[3]), parse_double(f[4]), parse_double(f[5])};
    } catch (const std::exception&) {
      continue;
    }
  }
  return rows;
}

}  // namespace detail

/// Every (kappa, realization) pair is an independent task. Realization r draws
/// theta0 from seed + r, shared by the numerical and analytic runs and reused
/// at every kappa. Aggregation is by index, so the result does not depend on
/// completion order or thread count.
inline SweepResult run_fig3(const SweepOptions& o = {}) {
  detail::require(o.points >= 1 && o.realizations >= 1, "sweep needs at least one point and one realization");

  SweepResult res;
  res.kappas = log_space(o.kappa_min, o.kappa_max, o.points);
  res.realizations = o.realizations;
  for (std::size_t r = 0; r < o.realizations; ++r) res.seeds.push_back(o.seed + r);

  const auto graph = std::make_shared<const AdjacencyMatrix>(gen_ring(o.n, o.k));
  const auto es = eigensystem_for(*graph, o.spectrum);
  std::vector<PhaseState> theta0;
  for (auto s : res.seeds) theta0.push_back(initial_phases(o.n, s));

  std::vector<std::optional<detail::SweepRow>> done(o.points);
  if (!o.checkpoint_path.empty()) done = detail::load_checkpoint(o.checkpoint_path, res.kappas);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < o.points; ++i)
    if (!done[i]) pending.push_back(i);

  const std::size_t R = o.realizations;
  std::vector<double> avg_num(o.points * R), avg_ana(o.points * R);
  std::vector<std::atomic<std::size_t>> finished(o.points);
  std::mutex sink_mutex;
  std::ofstream checkpoint;
  if (!o.checkpoint_path.empty()) checkpoint.open(o.checkpoint_path, std::ios::app);

  auto aggregate = [&](std::size_t i) {
    const auto [mn, sn] = mean_and_std(std::span<const double>(avg_num).subspan(i * R, R));
    const auto [ma, sa] = mean_and_std(std::span<const double>(avg_ana).subspan(i * R, R));
    return detail::SweepRow{mn, sn, ma, sa};
  };

  parallel_for_index(pending.size() * R, o.jobs, [&](std::size_t task) {
    const std::size_t i = pending[task / R];
    const std::size_t r = task % R;
    SimulationConfig cfg;
    cfg.graph = graph;
    cfg.kappa = res.kappas[i];
    cfg.omega = o.omega;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    cfg.seed = res.seeds[r];
    cfg.record_every = o.record_every;
    avg_num[i * R + r] = mean(abs_order_parameter_series(integrate_numerical(cfg, theta0[r])));
    avg_ana[i * R + r] = mean(abs_order_parameter_series(analytic_trajectory(es, cfg, theta0[r])));

    if (finished[i].fetch_add(1) + 1 == R && checkpoint.is_open()) {
      const auto row = aggregate(i);
      std::lock_guard lock(sink_mutex);
      checkpoint << i << ',' << format_double(res.kappas[i]) << ',' << format_double(row.mean_num) << ','
                 << format_double(row.std_num) << ',' << format_double(row.mean_ana) << ','
                 << format_double(row.std_ana) << '\n'
                 << std::flush;
    }
  });

  for (std::size_t i = 0; i < o.points; ++i) {
    const auto row = done[i] ? *done[i] : aggregate(i);
    res.mean_abs_r_numerical.push_back(row.mean_num);
    res.std_numerical.push_back(row.std_num);
    res.mean_abs_r_analytic.push_back(row.mean_ana);
    res.std_analytic.push_back(row.std_ana);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Artifact writers

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "kappa,mean_r_num,std_r_num,mean_r_ana,std_r_ana\n";
  for (std::size_t i = 0; i < r.kappas.size(); ++i)
    os << format_double(r.kappas[i]) << ',' << format_double(r.mean_abs_r_numerical[i]) << ','
       << format_double(r.std_numerical[i]) << ',' << format_double(r.mean_abs_r_analytic[i]) << ','
       << format_double(r.std_analytic[i]) << '\n';
}

inline void write_report_csv(std::ostream& os, const ComparisonReport& rep) {
  os << "t,max_dev,abs_r_num,abs_r_ana\n";
  for (std::size_t s = 0; s < rep.times.size(); ++s)
    os << format_double(rep.times[s]) << ',' << format_double(rep.per_time_deviation[s]) << ','
       << format_double(rep.abs_r_numerical[s]) << ',' << format_double(rep.abs_r_analytic[s]) << '\n';
}

/// (-pi, pi] -> 0..255, dark near -pi.
inline std::uint8_t phase_to_gray(double theta) {
  const double g = std::round((theta + pi) / two_pi * 255.0);
  return static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
}

/// Binary PGM: one column per node, one row per sample.
inline void write_pgm(std::ostream& os, const Trajectory& traj) {
  os << "P5\n" << traj.node_count() << ' ' << traj.size() << "\n255\n";
  std::vector<char> row(traj.node_count());
  for (const auto& s : traj.states) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = static_cast<char>(phase_to_gray(s[i]));
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace kuramoto
