// kuramoto: graph generation, simulation, spectra and figure reproduction.
//
// Exit codes: 0 success, 2 usage / invalid parameter, 3 runtime failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kuramoto/kuramoto.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kuramoto;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::size_t jobs = 0;
};

struct GraphSource {
  std::string kind;  // ring | complete | er | ws
  std::string edges;  // edge-list path, alternative to kind
  std::size_t n = 0;
  std::size_t k = 1;
  double p = 0.2;
  double q = 0.1;
};

struct Coupling {
  std::optional<double> kappa;
  std::optional<double> kappa_over_n;

  std::optional<double> resolve(std::size_t n) const {
    if (kappa) return kappa;
    if (kappa_over_n) return *kappa_over_n / static_cast<double>(n);
    return std::nullopt;
  }
};

/// Collects written artifacts and the resolved parameters for the manifest.
class Run {
public:
  Run(std::string command, std::vector<std::string> argv, const Globals& g)
      : command_(std::move(command)), argv_(std::move(argv)), out_(g.out), start_(std::chrono::steady_clock::now()) {
    params_ = json::object();
    fs::create_directories(out_);
  }

  json& params() { return params_; }

  fs::path path(const std::string& name) const { return out_ / name; }

  /// Opens an artifact for writing and records it.
  std::ofstream open(const std::string& name, std::ios::openmode mode = std::ios::out) {
    const auto p = path(name);
    std::ofstream os(p, mode | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
    artifacts_.push_back(p.string());
    return os;
  }

  void finish(const std::vector<std::uint64_t>& seeds) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["command"] = command_;
    m["argv"] = argv_;
    m["parameters"] = params_;
    m["seeds"] = seeds;
    m["artifacts"] = artifacts_;
    m["tool_version"] = kuramoto::version;
    m["wall_clock_seconds"] = secs;
    const auto p = path(command_ + ".manifest.json");
    std::ofstream os(p);
    os << m.dump(2) << '\n';
    for (const auto& a : artifacts_) std::cout << "wrote " << a << '\n';
    std::cout << "manifest " << p.string() << '\n';
  }

private:
  std::string command_;
  std::vector<std::string> argv_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  json params_;
  std::vector<std::string> artifacts_;
};

AdjacencyMatrix build_graph(const GraphSource& src, std::uint64_t seed, json& params) {
  if (!src.edges.empty()) {
    if (!src.kind.empty()) throw UsageError("give either --graph or --edges, not both");
    std::ifstream in(src.edges);
    if (!in) throw UsageError("cannot read edge list " + src.edges);
    params["graph"] = {{"edges", src.edges}};
    return read_edge_list(in);
  }
  if (src.n == 0) throw UsageError("--n is required");
  json g = {{"kind", src.kind}, {"n", src.n}};
  AdjacencyMatrix a = [&] {
    if (src.kind == "ring") {
      g["k"] = src.k;
      return gen_ring(src.n, src.k);
    }
    if (src.kind == "complete") return gen_complete(src.n);
    if (src.kind == "er") {
      g["p"] = src.p;
      g["seed"] = seed;
      return gen_erdos_renyi(src.n, src.p, seed);
    }
    if (src.kind == "ws") {
      g["k"] = src.k;
      g["q"] = src.q;
      g["seed"] = seed;
      return gen_watts_strogatz(src.n, src.k, src.q, seed);
    }
    throw UsageError("unknown graph kind '" + src.kind + "' (ring, complete, er, ws)");
  }();
  params["graph"] = g;
  return a;
}

void add_graph_options(CLI::App* cmd, GraphSource& src, bool kind_positional) {
  if (kind_positional)
    cmd->add_option("kind", src.kind, "ring | complete | er | ws")->required();
  else
    cmd->add_option("--graph", src.kind, "ring | complete | er | ws");
  cmd->add_option("--n", src.n, "node count");
  cmd->add_option("--k", src.k, "neighbour radius (ring, ws)");
  cmd->add_option("--p", src.p, "edge probability (er)");
  cmd->add_option("--q", src.q, "rewiring probability (ws)");
  if (!kind_positional) cmd->add_option("--edges", src.edges, "read the graph from an edge-list file");
}

void add_coupling_options(CLI::App* cmd, Coupling& c) {
  auto* k = cmd->add_option("--kappa", c.kappa, "coupling strength (1/s)");
  auto* kn = cmd->add_option("--kappa-over-n", c.kappa_over_n, "coupling strength times N");
  k->excludes(kn);
}

void write_text(Run& run, const std::string& name, const std::function<void(std::ostream&)>& body) {
  auto os = run.open(name);
  body(os);
  if (!os) throw std::runtime_error("failed writing " + name);
}

void write_binary(Run& run, const std::string& name, const std::function<void(std::ostream&)>& body) {
  auto os = run.open(name, std::ios::out | std::ios::binary);
  body(os);
  if (!os) throw std::runtime_error("failed writing " + name);
}

void write_comparison(Run& run, const std::string& prefix, const ComparisonRun& cr, bool raster) {
  write_text(run, prefix + "_numerical.csv", [&](auto& os) { write_trajectory_csv(os, cr.numerical); });
  write_text(run, prefix + "_numerical.meta",
             [&](auto& os) { write_trajectory_meta(os, cr.config, TrajectorySource::numerical); });
  write_text(run, prefix + "_analytic.csv", [&](auto& os) { write_trajectory_csv(os, cr.analytic); });
  write_text(run, prefix + "_analytic.meta",
             [&](auto& os) { write_trajectory_meta(os, cr.config, TrajectorySource::analytic, cr.spectrum); });
  write_text(run, prefix + "_report.csv", [&](auto& os) { write_report_csv(os, cr.report); });
  if (raster) {
    write_binary(run, prefix + "_numerical.pgm", [&](auto& os) { write_pgm(os, cr.numerical); });
    write_binary(run, prefix + "_analytic.pgm", [&](auto& os) { write_pgm(os, cr.analytic); });
  }
  std::cout << "max_wrapped_deviation=" << format_double(cr.report.max_wrapped_deviation) << '\n';
  std::cout << "mean_abs_order_gap=" << format_double(cr.report.mean_abs_order_gap) << '\n';
  std::cout << "final_abs_r_numerical=" << format_double(cr.report.abs_r_numerical.back()) << '\n';
  std::cout << "final_abs_r_analytic=" << format_double(cr.report.abs_r_analytic.back()) << '\n';
}

// Stage label used in runtime-failure messages.
std::string g_stage = "setup";

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Kuramoto oscillators: numerical integration and the closed-form complex solution"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--jobs", g.jobs, "worker threads for sweeps (0 = all cores)");

  // graph
  GraphSource graph_src;
  auto* graph_cmd = app.add_subcommand("graph", "write a graph as an edge list");
  add_graph_options(graph_cmd, graph_src, true);

  // simulate
  GraphSource sim_src;
  Coupling sim_coupling;
  double omega_hz = 0.0, dt = 1e-3, t_end = 1.0;
  std::string method = "numerical", integrator = "euler", eigen = "auto";
  std::size_t record_every = 1;
  bool raster = false, no_guard = false;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate or evaluate one trajectory");
  add_graph_options(sim_cmd, sim_src, false);
  add_coupling_options(sim_cmd, sim_coupling);
  sim_cmd->add_option("--omega-hz", omega_hz, "intrinsic frequency (Hz)");
  sim_cmd->add_option("--dt", dt, "time step (s)");
  sim_cmd->add_option("--t-end", t_end, "duration (s)");
  sim_cmd->add_option("--method", method, "numerical | analytic")->check(CLI::IsMember({"numerical", "analytic"}));
  sim_cmd->add_option("--integrator", integrator, "euler | rk4")->check(CLI::IsMember({"euler", "rk4"}));
  sim_cmd->add_option("--eigen", eigen, "auto | cdt | numerical")->check(CLI::IsMember({"auto", "cdt", "numerical"}));
  sim_cmd->add_option("--record-every", record_every, "steps between samples");
  sim_cmd->add_flag("--raster", raster, "also write a PGM raster");
  sim_cmd->add_flag("--no-guard", no_guard, "disable the propagator overflow guard");

  // spectrum
  GraphSource spec_src;
  std::string mode = "numerical";
  bool vectors = false;
  auto* spec_cmd = app.add_subcommand("spectrum", "adjacency eigenvalues");
  add_graph_options(spec_cmd, spec_src, false);
  spec_cmd->add_option("--mode", mode, "cdt | numerical | both")->check(CLI::IsMember({"cdt", "numerical", "both"}));
  spec_cmd->add_flag("--vectors", vectors, "also write eigenvectors");

  // figure
  int figure_id = 0;
  double fig_t_end = 1.0, fig_dt = 1e-3;
  std::size_t points = 100, realizations = 10, fig_record_every = 1;
  bool full = false;
  std::string variant = "er", checkpoint;
  Coupling fig_coupling;
  auto* fig_cmd = app.add_subcommand("figure", "reproduce one of the four experiments");
  fig_cmd->add_option("id", figure_id, "1 | 2 | 3 | 4")->required()->check(CLI::Range(1, 4));
  fig_cmd->add_option("--t-end", fig_t_end, "duration (s)");
  fig_cmd->add_option("--dt", fig_dt, "time step (s)");
  fig_cmd->add_option("--record-every", fig_record_every, "steps between samples");
  fig_cmd->add_option("--points", points, "figure 3: kappa grid size");
  fig_cmd->add_option("--realizations", realizations, "figure 3: realizations per kappa");
  fig_cmd->add_flag("--full", full, "figure 3: 1000-point grid");
  fig_cmd->add_option("--checkpoint", checkpoint, "figure 3: resumable per-kappa checkpoint file");
  fig_cmd->add_option("--variant", variant, "figure 4: er | ws")->check(CLI::IsMember({"er", "ws"}));
  add_coupling_options(fig_cmd, fig_coupling);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*graph_cmd) {
      Run run("graph", args, g);
      g_stage = "graph";
      const auto a = build_graph(graph_src, g.seed, run.params());
      write_text(run, "graph.edges", [&](auto& os) { write_edge_list(os, a); });
      std::cout << "nodes=" << a.size() << " edges=" << a.edge_count() << '\n';
      run.finish({g.seed});
    } else if (*sim_cmd) {
      Run run("simulate", args, g);
      g_stage = "graph";
      const auto graph = std::make_shared<const AdjacencyMatrix>(build_graph(sim_src, g.seed, run.params()));
      const auto kappa = sim_coupling.resolve(graph->size());
      if (!kappa) throw UsageError("one of --kappa or --kappa-over-n is required");

      SimulationConfig cfg;
      cfg.graph = graph;
      cfg.kappa = *kappa;
      cfg.omega = two_pi * omega_hz;
      cfg.dt = dt;
      cfg.t_end = t_end;
      cfg.seed = g.seed;
      cfg.integrator = integrator == "rk4" ? Integrator::rk4 : Integrator::euler;
      cfg.record_every = record_every;
      cfg.guard = no_guard ? OverflowGuard::off : OverflowGuard::on;
      cfg.validate();
      run.params().update({{"kappa", cfg.kappa}, {"omega_hz", omega_hz}, {"dt", dt}, {"t_end", t_end},
                           {"method", method}, {"integrator", integrator}, {"record_every", record_every},
                           {"overflow_guard", !no_guard}});

      const auto theta0 = initial_phases(graph->size(), g.seed);
      Trajectory traj;
      std::optional<SpectrumSource> spectrum;
      if (method == "numerical") {
        g_stage = "numerical integration";
        traj = integrate_numerical(cfg, theta0);
      } else {
        g_stage = "eigendecomposition";
        std::optional<SpectrumSource> prefer;
        if (eigen == "cdt") prefer = SpectrumSource::cdt;
        if (eigen == "numerical") prefer = SpectrumSource::numerical;
        const auto es = eigensystem_for(*graph, prefer);
        spectrum = es.source;
        run.params()["eigen"] = std::string(to_string(es.source));
        g_stage = "analytic propagation";
        traj = analytic_trajectory(es, cfg, theta0);
      }
      g_stage = "output";
      const std::string base = "trajectory_" + method;
      write_text(run, base + ".csv", [&](auto& os) { write_trajectory_csv(os, traj); });
      write_text(run, base + ".meta", [&](auto& os) { write_trajectory_meta(os, cfg, traj.source, spectrum); });
      if (raster) write_binary(run, base + ".pgm", [&](auto& os) { write_pgm(os, traj); });
      std::cout << "samples=" << traj.size() << " final_abs_r=" << format_double(std::abs(order_parameter(traj.states.back())))
                << '\n';
      run.finish({g.seed});
    } else if (*spec_cmd) {
      Run run("spectrum", args, g);
      g_stage = "graph";
      const auto a = build_graph(spec_src, g.seed, run.params());
      run.params()["mode"] = mode;
      const bool circulant_source = spec_src.edges.empty() && (spec_src.kind == "ring" || spec_src.kind == "complete");
      if (mode != "numerical" && !circulant_source)
        throw UsageError("--mode " + mode + " needs a ring or complete graph (closed-form circulant spectrum)");

      std::optional<EigenSystem> cdt, num;
      if (mode != "numerical") {
        g_stage = "circulant spectrum";
        cdt = cdt_eigensystem(*circulant_generator(a));
      }
      if (mode != "cdt") {
        g_stage = "eigendecomposition";
        num = eigendecompose_symmetric(a);
      }
      g_stage = "output";
      auto emit = [&](const EigenSystem& es, const std::string& tag) {
        std::vector<cdouble> sorted = es.eigenvalues;
        std::stable_sort(sorted.begin(), sorted.end(), [](cdouble x, cdouble y) { return x.real() > y.real(); });
        write_text(run, "spectrum_" + tag + ".csv", [&](auto& os) { write_eigenvalues_csv(os, sorted); });
        if (vectors) write_text(run, "eigenvectors_" + tag + ".csv", [&](auto& os) { write_eigenvectors_csv(os, es.basis); });
        double trace = 0.0;
        for (auto l : es.eigenvalues) trace += l.real();
        std::cout << tag << ": lambda_max=" << format_double(sorted.front().real())
                  << " lambda_min=" << format_double(sorted.back().real()) << " sum=" << format_double(trace) << '\n';
      };
      if (cdt) emit(*cdt, "cdt");
      if (num) emit(*num, "numerical");
      if (cdt && num) {
        const auto x = sorted_real_spectrum(cdt->eigenvalues);
        const auto y = sorted_real_spectrum(num->eigenvalues);
        double gap = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::abs(x[i] - y[i]));
        std::cout << "max_gap=" << format_double(gap) << '\n';
      }
      run.finish({g.seed});
    } else if (*fig_cmd) {
      Run run("figure", args, g);
      run.params().update({{"figure", figure_id}, {"t_end", fig_t_end}, {"dt", fig_dt}, {"record_every", fig_record_every}});
      g_stage = "figure " + std::to_string(figure_id);
      std::vector<std::uint64_t> seeds{g.seed};
      switch (figure_id) {
        case 1: {
          Fig1Options o;
          o.seed = g.seed;
          o.t_end = fig_t_end;
          o.dt = fig_dt;
          if (auto k = fig_coupling.resolve(3)) o.kappa = *k;
          run.params()["kappa"] = o.kappa;
          const auto cr = run_fig1(o);
          write_comparison(run, "fig1", cr, false);
          std::cout << "bound_pi_over_16=" << format_double(pi / 16) << '\n';
          break;
        }
        case 2: {
          Fig2Options o;
          o.seed = g.seed;
          o.t_end = fig_t_end;
          o.dt = fig_dt;
          o.record_every = fig_record_every;
          o.kappa = fig_coupling.resolve(o.n);
          const auto cr = run_fig2(o);
          run.params()["kappa"] = cr.config.kappa;
          write_comparison(run, "fig2", cr, true);
          break;
        }
        case 3: {
          SweepOptions o;
          o.points = full ? 1000 : points;
          o.realizations = realizations;
          o.seed = g.seed;
          o.jobs = g.jobs;
          o.t_end = fig_t_end;
          o.dt = fig_dt;
          o.record_every = fig_record_every;
          o.checkpoint_path = checkpoint;
          run.params().update({{"points", o.points}, {"realizations", o.realizations}});
          const auto res = run_fig3(o);
          seeds = res.seeds;
          write_text(run, "fig3_sweep.csv", [&](auto& os) { write_sweep_csv(os, res); });
          std::cout << "points=" << res.kappas.size() << " realizations=" << res.realizations << '\n';
          std::cout << "kappa_min: mean_r_num=" << format_double(res.mean_abs_r_numerical.front())
                    << " mean_r_ana=" << format_double(res.mean_abs_r_analytic.front()) << '\n';
          std::cout << "kappa_max: mean_r_num=" << format_double(res.mean_abs_r_numerical.back())
                    << " mean_r_ana=" << format_double(res.mean_abs_r_analytic.back()) << '\n';
          break;
        }
        case 4: {
          Fig4Options o;
          o.variant = variant == "ws" ? RandomGraphVariant::watts_strogatz : RandomGraphVariant::erdos_renyi;
          o.seed = g.seed;
          o.t_end = fig_t_end;
          o.dt = fig_dt;
          o.record_every = fig_record_every;
          o.kappa = fig_coupling.resolve(o.n);
          const auto cr = run_fig4(o);
          run.params().update({{"variant", variant}, {"kappa", cr.config.kappa}});
          write_text(run, "fig4_" + variant + ".edges", [&](auto& os) { write_edge_list(os, *cr.config.graph); });
          write_comparison(run, "fig4_" + variant, cr, true);
          break;
        }
      }
      run.finish(seeds);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [" << g_stage << "]: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // --replay <manifest>: rerun the recorded argv; a --out given here wins.
  auto it = std::find(args.begin(), args.end(), "--replay");
  if (it != args.end()) {
    if (it + 1 == args.end()) {
      std::cerr << "error: --replay needs a manifest path\n";
      return 2;
    }
    std::ifstream in(*(it + 1));
    json m;
    try {
      m = json::parse(in);
    } catch (const std::exception& e) {
      std::cerr << "error: cannot read manifest: " << e.what() << '\n';
      return 2;
    }
    std::vector<std::string> recorded = m.at("argv").get<std::vector<std::string>>();
    auto out = std::find(args.begin(), args.end(), "--out");
    if (out != args.end() && out + 1 != args.end()) {
      auto old = std::find(recorded.begin(), recorded.end(), "--out");
      if (old != recorded.end() && old + 1 != recorded.end())
        *(old + 1) = *(out + 1);
      else {
        recorded.push_back("--out");
        recorded.push_back(*(out + 1));
      }
    }
    args = recorded;
  }
  return run_cli(args);
}
