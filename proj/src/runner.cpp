#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adjamr/errors.hpp"
#include "adjamr/runner.hpp"

namespace adjamr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%04zu.txt", k);
  return buf;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

AdjointSnapshotStore run_adjoint(const RunConfig& cfg) {
  if (!cfg.has_functional) throw ConfigError("configuration defines no functional");
  return solve_adjoint(cfg.forward(), cfg.domain, cfg.boundary, cfg.adjoint_grid(),
                       cfg.functional, cfg.t0, cfg.window.t_final, cfg.snapshot_intervals,
                       cfg.courant, cfg.limiter);
}

ForwardRun run_forward(const RunConfig& cfg, const ForwardOptions& options) {
  if (options.strategy == StrategyKind::Adjoint && options.store == nullptr) {
    throw ConfigError("adjoint flagging requires an adjoint snapshot store");
  }
  AmrSolver solver(cfg.forward(), cfg.domain, cfg.cells, cfg.boundary,
                   cfg.amr_options(options.strategy));
  if (options.store != nullptr) solver.set_adjoint(options.store, cfg.window);
  for (const Gauge& g : cfg.gauges) solver.add_gauge(g);
  if (options.on_regrid) {
    solver.on_regrid = [&](int level, const FlagField& f) { options.on_regrid(solver, level, f); };
  }
  const auto start = Clock::now();
  solver.initialize(cfg.initial_state(), cfg.t0);
  std::size_t out_index = 0;
  auto emit = [&](double t) {
    if (options.on_output) options.on_output(solver, t);
    if (!options.out.empty()) {
      write_snapshot(solver.hierarchy(), options.out / "snapshots" / snapshot_name(out_index));
    }
    ++out_index;
  };
  emit(cfg.t0);
  for (double t : cfg.output_times) {
    if (t <= cfg.t0) continue;
    solver.advance_to(t);
    emit(t);
  }
  if (cfg.t_final > solver.time()) solver.advance_to(cfg.t_final);
  ForwardRun run;
  run.timing = solver.timing();
  run.timing.seconds["forward"] = seconds_since(start);
  run.gauges = solver.gauges();
  run.final_state = solver.hierarchy();
  if (!options.out.empty()) {
    for (const GaugeSeries& g : run.gauges) {
      write_gauge(g, options.out / "gauges" / ("gauge_" + std::to_string(g.gauge.id) + ".csv"));
    }
    write_timing(run.timing, options.out / "timing.txt");
  }
  return run;
}

namespace {

void write_compare(const std::vector<CompareRow>& rows, double adjoint_seconds,
                   const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  os << "# adjoint_seconds = " << fmt(adjoint_seconds) << "\n";
  os << "# strategy seconds cell_steps refined_cell_steps flagged gauge_max_abs... gauge_rms...\n";
  for (const CompareRow& r : rows) {
    os << r.strategy << " " << fmt(r.seconds) << " " << r.cell_steps << " "
       << r.finest_cell_steps << " " << r.flagged;
    for (double v : r.gauge_max_abs) os << " " << fmt(v, "%.6e");
    for (double v : r.gauge_rms) os << " " << fmt(v, "%.6e");
    os << "\n";
  }
}

}  // namespace

std::vector<CompareRow> run_compare(const RunConfig& cfg, const std::vector<StrategyKind>& strategies,
                                    const std::filesystem::path& out) {
  if (strategies.size() < 2) throw ConfigError("compare needs at least two strategies");
  AdjointSnapshotStore store;
  double adjoint_seconds = 0.0;
  const bool need_adjoint =
      std::find(strategies.begin(), strategies.end(), StrategyKind::Adjoint) != strategies.end();
  if (need_adjoint) {
    const auto start = Clock::now();
    store = run_adjoint(cfg);
    adjoint_seconds = seconds_since(start);
  }
  std::vector<CompareRow> rows;
  std::vector<GaugeSeries> reference_gauges;
  try {
    for (std::size_t k = 0; k < strategies.size(); ++k) {
      ForwardOptions opts;
      opts.strategy = strategies[k];
      opts.store = need_adjoint ? &store : nullptr;
      if (!out.empty()) opts.out = out / (std::to_string(k) + "_" + to_string(strategies[k]));
      const ForwardRun run = run_forward(cfg, opts);
      CompareRow row;
      row.strategy = to_string(strategies[k]);
      row.seconds = run.timing.seconds.at("forward");
      row.cell_steps = run.timing.total_cell_steps();
      for (std::size_t l = 1; l < run.timing.cell_steps.size(); ++l) {
        row.finest_cell_steps += run.timing.cell_steps[l];
      }
      row.flagged = run.timing.total_flagged();
      const int m = cfg.forward().m();
      row.gauge_max_abs.assign(static_cast<std::size_t>(m), 0.0);
      row.gauge_rms.assign(static_cast<std::size_t>(m), 0.0);
      if (k == 0) {
        reference_gauges = run.gauges;
      } else {
        for (std::size_t g = 0; g < run.gauges.size(); ++g) {
          const GaugeComparison c = compare_gauges(reference_gauges[g], run.gauges[g]);
          for (std::size_t i = 0; i < c.max_abs.size(); ++i) {
            row.gauge_max_abs[i] = std::max(row.gauge_max_abs[i], c.max_abs[i]);
            row.gauge_rms[i] = std::max(row.gauge_rms[i], c.rms[i]);
          }
        }
      }
      rows.push_back(row);
    }
  } catch (...) {
    if (!out.empty()) write_compare(rows, adjoint_seconds, out / "compare.txt");
    throw;
  }
  if (!out.empty()) write_compare(rows, adjoint_seconds, out / "compare.txt");
  return rows;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& cfg, int levels,
                                            const std::filesystem::path& out) {
  if (levels < 1) throw ConfigError("convergence needs at least one resolution");
  if (cfg.initial.kind != InitialSpec::Kind::PlaneWave) {
    throw UnsupportedConfigError("convergence needs the plane-wave initial condition");
  }
  for (int axis = 0; axis < cfg.domain.dims; ++axis) {
    if (cfg.boundary.sides[static_cast<std::size_t>(2 * axis)] != BoundaryCondition::Periodic) {
      throw UnsupportedConfigError("convergence needs periodic boundaries");
    }
  }
  std::vector<ConvergenceRow> rows;
  const EquationSet eq = cfg.forward();
  const int m = eq.m();
  for (int level = 0; level < levels; ++level) {
    RunConfig c = cfg;
    c.max_levels = 1;
    c.cells = {cfg.cells[0] << level, cfg.domain.dims == 2 ? cfg.cells[1] << level : 1};
    const PatchSpec grid = uniform_grid(c.domain, c.cells[0], c.cells[1]);
    const double dx = grid.dx;
    const double dy = grid.dims == 2 ? grid.dy : 0.0;
    AmrSolver solver(eq, c.domain, c.cells, c.boundary, c.amr_options(StrategyKind::Difference));
    solver.initialize([&](Point p, std::span<double> q) { plane_wave_average(c, p, dx, dy, 0.0, q); },
                      c.t0);
    solver.advance_to(c.t_final);
    const Patch& patch = solver.hierarchy().levels[0][0];
    const PatchSpec& s = patch.spec();
    std::vector<double> exact(static_cast<std::size_t>(m));
    double err = 0.0;
    for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
      for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
        plane_wave_average(c, cell_center(s, i, j), dx, dy, c.t_final - c.t0, exact);
        for (int k = 0; k < m; ++k) err += std::abs(patch.at(i, j, k) - exact[static_cast<std::size_t>(k)]);
      }
    }
    err *= s.dims == 2 ? s.dx * s.dy : s.dx;
    ConvergenceRow row{c.cells[0], c.cells[1], err, 0.0};
    if (!rows.empty()) row.order = std::log2(rows.back().l1_error / err);
    rows.push_back(row);
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream os(out / "convergence.txt");
    os << (levels > 1 ? "# nx ny l1_error order\n" : "# nx ny l1_error\n");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      os << rows[k].nx << " " << rows[k].ny << " " << fmt(rows[k].l1_error, "%.6e");
      if (k > 0) os << " " << fmt(rows[k].order, "%.4f");
      os << "\n";
    }
  }
  return rows;
}

XtMaps compute_xt_maps(const RunConfig& cfg, const AdjointSnapshotStore& store) {
  if (cfg.domain.dims != 1) throw UnsupportedConfigError("x-t maps need a 1D configuration");
  RunConfig c = cfg;
  c.max_levels = 1;
  AmrSolver solver(c.forward(), c.domain, c.cells, c.boundary, c.amr_options(StrategyKind::Difference));
  solver.initialize(c.initial_state(), c.t0);
  XtMaps maps;
  const PatchSpec& s = solver.hierarchy().levels[0][0].spec();
  for (int i = s.lo[0]; i <= s.hi[0]; ++i) maps.x.push_back(cell_center(s, i).x);
  std::vector<double> qh(static_cast<std::size_t>(store.equations.m()));
  for (std::size_t k = 0; k < store.size(); ++k) {
    const double t = store.time_of(k);
    if (t < c.t0 || t > c.t_final + 1e-12) continue;
    if (t > solver.time()) solver.advance_to(t);
    const Patch& p = solver.hierarchy().levels[0][0];
    std::vector<double> qn, an;
    for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
      double a = 0.0;
      for (int e = 0; e < p.m(); ++e) a += std::abs(p.at(i, 0, e));
      qn.push_back(a);
      store.sample(k, cell_center(s, i), qh);
      double b = 0.0;
      for (double v : qh) b += std::abs(v);
      an.push_back(b);
    }
    maps.t.push_back(t);
    maps.q_norm.push_back(std::move(qn));
    maps.adjoint_norm.push_back(std::move(an));
    maps.inner.push_back(inner_product_field(p, nullptr, t, store, c.window));
  }
  return maps;
}

void write_xt_maps(const XtMaps& maps, double threshold, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  auto write = [&](const std::string& name, const std::string& what,
                   const std::vector<std::vector<double>>& values) {
    std::ofstream os(out / name);
    os << "# " << what << " >= " << fmt(threshold, "%.17g") << "; first row: x, then t mask...\n";
    os << "x";
    for (double x : maps.x) os << " " << fmt(x, "%.10g");
    os << "\n";
    for (std::size_t k = 0; k < maps.t.size(); ++k) {
      os << fmt(maps.t[k], "%.10g");
      for (double v : values[k]) os << (v >= threshold ? " 1" : " 0");
      os << "\n";
    }
  };
  write("xt_q.txt", "1-norm of q", maps.q_norm);
  write("xt_adjoint.txt", "1-norm of adjoint", maps.adjoint_norm);
  write("xt_inner.txt", "windowed |inner product|", maps.inner);
}

namespace {

template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int cmd_run_adjoint(const std::filesystem::path& config, const std::filesystem::path& out,
                    std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config);
    const auto start = Clock::now();
    const AdjointSnapshotStore store = run_adjoint(cfg);
    TimingReport timing;
    timing.seconds["adjoint"] = seconds_since(start);
    bool all_zero = true;
    for (const UniformField& f : store.snapshots) {
      for (double v : f.values) all_zero = all_zero && v == 0.0;
    }
    if (all_zero) err << "warning: the functional is zero; every adjoint snapshot is zero\n";
    write_store(store, out / "adjoint");
    write_timing(timing, out / "timing.txt");
    log << "adjoint: " << store.size() << " snapshots in " << fmt(timing.seconds["adjoint"])
        << " s\n";
    return 0;
  });
}

int cmd_run_forward(const std::filesystem::path& config, const std::filesystem::path& out,
                    const std::string& strategy, const std::filesystem::path& adjoint_dir,
                    std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config);
    ForwardOptions opts;
    opts.strategy = strategy_from_string(strategy);
    opts.out = out;
    AdjointSnapshotStore store;
    if (opts.strategy == StrategyKind::Adjoint) {
      const std::filesystem::path dir = adjoint_dir.empty() ? out / "adjoint" : adjoint_dir;
      if (!std::filesystem::exists(dir / "store.txt")) {
        throw ConfigError("no adjoint store at " + dir.string() + "; run run-adjoint first");
      }
      store = read_store(dir, cfg.forward());
      opts.store = &store;
    }
    const ForwardRun run = run_forward(cfg, opts);
    log << "forward (" << strategy << "): " << run.timing.total_cell_steps() << " cell-steps, "
        << fmt(run.timing.seconds.at("forward")) << " s\n";
    return 0;
  });
}

int cmd_compare(const std::filesystem::path& config, const std::filesystem::path& out,
                const std::vector<std::string>& strategies, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config);
    std::vector<StrategyKind> kinds;
    for (const std::string& s : strategies) kinds.push_back(strategy_from_string(s));
    const auto rows = run_compare(cfg, kinds, out);
    for (const CompareRow& r : rows) {
      log << r.strategy << ": " << r.cell_steps << " cell-steps, " << fmt(r.seconds) << " s\n";
    }
    return 0;
  });
}

int cmd_convergence(const std::filesystem::path& config, const std::filesystem::path& out,
                    int levels, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config);
    const auto rows = run_convergence(cfg, levels, out);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      log << rows[k].nx << " " << fmt(rows[k].l1_error, "%.4e");
      if (k > 0) log << " order " << fmt(rows[k].order, "%.3f");
      log << "\n";
    }
    return 0;
  });
}

int cmd_xt_map(const std::filesystem::path& config, const std::filesystem::path& out,
               double threshold, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config);
    if (cfg.domain.dims != 1) throw UnsupportedConfigError("xt-map needs a 1D configuration");
    const AdjointSnapshotStore store = run_adjoint(cfg);
    const XtMaps maps = compute_xt_maps(cfg, store);
    write_xt_maps(maps, threshold, out);
    log << "xt-map: " << maps.t.size() << " times x " << maps.x.size() << " cells\n";
    return 0;
  });
}

}  // namespace adjamr
