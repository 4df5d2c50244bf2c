#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "adjamr/amr.hpp"
#include "adjamr/errors.hpp"

namespace adjamr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(k) for k in [0, n), in parallel when there is more than one
// item, and rethrows the first exception on the calling thread.
template <class Body>
void for_each_patch(std::size_t n, Body body) {
  if (n == 1) {
    body(0);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
#pragma omp critical(adjamr_patch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

struct Box {
  Index2 lo, hi;
};

bool overlap(const Box& a, const Box& b, Box& out) {
  out.lo = {std::max(a.lo[0], b.lo[0]), std::max(a.lo[1], b.lo[1])};
  out.hi = {std::min(a.hi[0], b.hi[0]), std::min(a.hi[1], b.hi[1])};
  return out.lo[0] <= out.hi[0] && out.lo[1] <= out.hi[1];
}

}  // namespace

AmrSolver::AmrSolver(EquationSet equations, Domain domain, Index2 coarse_cells, BoundarySpec bc,
                     AmrOptions options)
    : eq_(std::move(equations)),
      domain_(domain),
      coarse_cells_(coarse_cells),
      bc_(bc),
      opts_(std::move(options)) {
  if (opts_.max_levels < 1) throw ConfigError("max_levels must be at least 1");
  if (static_cast<int>(opts_.ratios.size()) < opts_.max_levels - 1) {
    throw ConfigError("one refinement ratio is needed per level above the first");
  }
  for (int r : opts_.ratios) {
    if (r < 2) throw ConfigError("refinement ratios must be integers >= 2");
  }
  if (opts_.regrid_interval < 1) throw ConfigError("regrid interval must be positive");
  if (opts_.max_levels > 1) {
    for (BoundaryCondition b : bc_.sides) {
      if (b == BoundaryCondition::Periodic) {
        throw UnsupportedConfigError("periodic boundaries are supported on single-level runs only");
      }
    }
  }
  if (domain_.dims == 1) coarse_cells_[1] = 1;
  hierarchy_.domain = domain_;
  hierarchy_.ratios.assign(opts_.ratios.begin(),
                           opts_.ratios.begin() + std::max(0, opts_.max_levels - 1));
  const PatchSpec coarse = spec_for(0, {0, 0}, {coarse_cells_[0] - 1, coarse_cells_[1] - 1});
  hierarchy_.levels.assign(1, {Patch(coarse, eq_.m())});
  coeffs_.assign(1, {build_coeffs(eq_, coarse, domain_, bc_)});
  steps_since_regrid_.assign(static_cast<std::size_t>(opts_.max_levels), 0);
  last_flags_.assign(static_cast<std::size_t>(opts_.max_levels), FlagField{});
  timing_.cell_steps.assign(static_cast<std::size_t>(opts_.max_levels), 0);
  stable_dt_ = select_dt(coeffs_[0][0], opts_.courant_target,
                         std::numeric_limits<double>::infinity());
}

PatchSpec AmrSolver::spec_for(int level_index, Index2 lo, Index2 hi) const {
  PatchSpec s;
  s.level = level_index + 1;
  s.dims = domain_.dims;
  s.lo = lo;
  s.hi = hi;
  double refine = 1.0;
  for (int n = 0; n < level_index; ++n) refine *= opts_.ratios[static_cast<std::size_t>(n)];
  s.dx = (domain_.xhi - domain_.xlo) / (coarse_cells_[0] * refine);
  s.dy = domain_.dims == 2 ? (domain_.yhi - domain_.ylo) / (coarse_cells_[1] * refine) : 1.0;
  s.origin = {domain_.xlo, domain_.dims == 2 ? domain_.ylo : 0.0};
  s.ghost_width = 2;
  return s;
}

const CoeffField& AmrSolver::coeffs(int level, int patch) const {
  return coeffs_.at(static_cast<std::size_t>(level - 1)).at(static_cast<std::size_t>(patch));
}

void AmrSolver::set_adjoint(const AdjointSnapshotStore* store, TimeWindow window) {
  store_ = store;
  window_ = window;
}

void AmrSolver::add_gauge(const Gauge& gauge) {
  if (!domain_.contains(gauge.location)) throw ConfigError("gauge outside the domain");
  gauges_.push_back(GaugeSeries{gauge, {}});
}

void AmrSolver::initialize(const InitialState& initial, double t0) {
  initial_ = initial;
  Patch& coarse = hierarchy_.levels[0][0];
  const PatchSpec& s = coarse.spec();
  const CoeffField& cf = coeffs_[0][0];
  for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
    for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
      std::span<double> q = coarse.cell(i, j);
      initial_(cell_center(s, i, j), q);
      if (!cf.at(i, j).wet) std::fill(q.begin(), q.end(), 0.0);
    }
  }
  coarse.time = t0;
  fill_ghosts(1, t0);
  coarse.save_previous();
  for (int fine = 1; fine < opts_.max_levels; ++fine) {
    if (hierarchy_.num_levels() < fine) break;
    rebuild_level(fine, true);
  }
  for (std::size_t g = 0; g < gauges_.size(); ++g) {
    gauges_[g].samples.clear();
    record_gauge(hierarchy_, gauges_[g], t0);
  }
}

FlagField AmrSolver::level_flags(int level_index, double t) {
  const auto start = Clock::now();
  fill_ghosts(level_index + 1, t);
  const std::vector<Patch>& patches = hierarchy_.levels[static_cast<std::size_t>(level_index)];
  double refine = 1.0;
  for (int n = 0; n < level_index; ++n) refine *= opts_.ratios[static_cast<std::size_t>(n)];
  const Index2 cells{static_cast<int>(std::lround(coarse_cells_[0] * refine)),
                     domain_.dims == 2 ? static_cast<int>(std::lround(coarse_cells_[1] * refine)) : 1};
  FlagField level(Index2{0, 0}, Index2{cells[0] - 1, cells[1] - 1});
  level.strategy = to_string(opts_.strategy.kind);
  level.time = t;
  FlagField covered(level.lo, level.hi);

  FlagContext ctx;
  ctx.equations = &eq_;
  ctx.time = t;
  ctx.level = level_index + 1;
  ctx.store = store_;
  ctx.window = window_;
  ctx.regions = opts_.regions;
  for (std::size_t p = 0; p < patches.size(); ++p) {
    ctx.coeffs = &coeffs_[static_cast<std::size_t>(level_index)][p];
    const FlagField f = flag_cells(patches[p], opts_.strategy, ctx);
    for (int j = f.lo[1]; j <= f.hi[1]; ++j) {
      for (int i = f.lo[0]; i <= f.hi[0]; ++i) {
        covered.set(i, j);
        if (f.get(i, j)) level.set(i, j);
      }
    }
  }
  FlagField buffered = buffer_flags(level, opts_.buffer_cells);
  if (level_index > 0) {
    // Keep only cells whose 3x3 neighbourhood inside the domain is covered.
    const int dj = domain_.dims == 2 ? 1 : 0;
    for (int j = level.lo[1]; j <= level.hi[1]; ++j) {
      for (int i = level.lo[0]; i <= level.hi[0]; ++i) {
        if (!buffered.get(i, j)) continue;
        bool ok = true;
        for (int b = -dj; b <= dj && ok; ++b) {
          for (int a = -1; a <= 1 && ok; ++a) {
            if (covered.contains(i + a, j + b) && !covered.get(i + a, j + b)) ok = false;
          }
        }
        if (!ok) buffered.set(i, j, false);
      }
    }
  }
  timing_.seconds["flagging"] += seconds_since(start);
  return buffered;
}

std::vector<PatchSpec> AmrSolver::boxes_to_patches(int fine_index,
                                                   const std::vector<ClusterBox>& boxes) const {
  const int r = opts_.ratios[static_cast<std::size_t>(fine_index - 1)];
  const int max_coarse = std::max(1, opts_.max_patch_cells / r);
  std::vector<PatchSpec> out;
  for (const ClusterBox& b : boxes) {
    const int len[2] = {b.hi[0] - b.lo[0] + 1, b.hi[1] - b.lo[1] + 1};
    const int pieces[2] = {(len[0] + max_coarse - 1) / max_coarse,
                           (len[1] + max_coarse - 1) / max_coarse};
    for (int pj = 0; pj < pieces[1]; ++pj) {
      const int j0 = b.lo[1] + len[1] * pj / pieces[1];
      const int j1 = b.lo[1] + len[1] * (pj + 1) / pieces[1] - 1;
      for (int pi = 0; pi < pieces[0]; ++pi) {
        const int i0 = b.lo[0] + len[0] * pi / pieces[0];
        const int i1 = b.lo[0] + len[0] * (pi + 1) / pieces[0] - 1;
        if (domain_.dims == 2) {
          out.push_back(spec_for(fine_index, {i0 * r, j0 * r}, {(i1 + 1) * r - 1, (j1 + 1) * r - 1}));
        } else {
          out.push_back(spec_for(fine_index, {i0 * r, 0}, {(i1 + 1) * r - 1, 0}));
        }
      }
    }
  }
  return out;
}

void AmrSolver::rebuild_level(int fine_index, bool from_initial) {
  const auto start = Clock::now();
  const int parent = fine_index - 1;
  const double t = hierarchy_.levels[static_cast<std::size_t>(parent)][0].time;
  const FlagField flags = level_flags(parent, t);

  std::vector<ClusterBox> boxes = flags.empty() ? std::vector<ClusterBox>{}
                                                : cluster(flags, opts_.efficiency);
  if (parent > 0) {
    // Trim boxes that reach outside the nestable region by bisection.
    const std::vector<Patch>& coarse = hierarchy_.levels[static_cast<std::size_t>(parent)];
    FlagField covered(flags.lo, flags.hi);
    for (const Patch& p : coarse) {
      for (int j = p.spec().lo[1]; j <= p.spec().hi[1]; ++j) {
        for (int i = p.spec().lo[0]; i <= p.spec().hi[0]; ++i) covered.set(i, j);
      }
    }
    const int dj = domain_.dims == 2 ? 1 : 0;
    auto nestable = [&](int i, int j) {
      for (int b = -dj; b <= dj; ++b) {
        for (int a = -1; a <= 1; ++a) {
          if (covered.contains(i + a, j + b) && !covered.get(i + a, j + b)) return false;
        }
      }
      return true;
    };
    std::vector<ClusterBox> kept;
    std::vector<ClusterBox> work(boxes.rbegin(), boxes.rend());
    while (!work.empty()) {
      ClusterBox b = work.back();
      work.pop_back();
      bool ok = true;
      std::size_t flagged = 0;
      for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
        for (int i = b.lo[0]; i <= b.hi[0]; ++i) {
          if (!nestable(i, j)) ok = false;
          if (flags.get(i, j)) ++flagged;
        }
      }
      if (flagged == 0) continue;
      b.flagged = flagged;
      if (ok) {
        kept.push_back(b);
        continue;
      }
      if (b.cells() == 1) continue;
      const int axis = (b.hi[0] - b.lo[0]) >= (b.hi[1] - b.lo[1]) ? 0 : 1;
      ClusterBox lower = b, upper = b;
      lower.hi[axis] = b.lo[axis] + (b.hi[axis] - b.lo[axis] + 1) / 2 - 1;
      upper.lo[axis] = lower.hi[axis] + 1;
      work.push_back(upper);
      work.push_back(lower);
    }
    boxes = std::move(kept);
  }

  const std::vector<PatchSpec> specs = boxes_to_patches(fine_index, boxes);
  timing_.regrids.push_back(RegridRecord{fine_index + 1, t, flags.count(), specs.size()});
  last_flags_[static_cast<std::size_t>(parent)] = flags;
  if (on_regrid) on_regrid(parent + 1, flags);

  const std::size_t fi = static_cast<std::size_t>(fine_index);
  if (specs.empty()) {
    if (hierarchy_.levels.size() > fi) {
      hierarchy_.levels.resize(fi);
      coeffs_.resize(fi);
    }
    timing_.seconds["regrid"] += seconds_since(start);
    return;
  }

  std::vector<Patch> fresh;
  std::vector<CoeffField> fresh_coeffs;
  fresh.reserve(specs.size());
  for (const PatchSpec& s : specs) {
    fresh.emplace_back(s, eq_.m());
    fresh_coeffs.push_back(build_coeffs(eq_, s, domain_, bc_));
  }
  std::vector<Patch> old;
  if (hierarchy_.levels.size() > fi) old = std::move(hierarchy_.levels[fi]);
  if (hierarchy_.levels.size() <= fi) {
    hierarchy_.levels.resize(fi + 1);
    coeffs_.resize(fi + 1);
  }
  coeffs_[fi] = std::move(fresh_coeffs);

  for_each_patch(fresh.size(), [&](std::size_t k) {
    Patch& p = fresh[k];
    const PatchSpec& s = p.spec();
    p.time = t;
    if (from_initial) {
      const CoeffField& cf = coeffs_[fi][k];
      for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
        for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
          std::span<double> q = p.cell(i, j);
          initial_(cell_center(s, i, j), q);
          if (!cf.at(i, j).wet) std::fill(q.begin(), q.end(), 0.0);
        }
      }
    } else {
      fill_from_coarse(fine_index, p, t, false);
      const Box mine{s.lo, s.hi};
      for (const Patch& o : old) {
        Box ov;
        if (!overlap(mine, Box{o.spec().lo, o.spec().hi}, ov)) continue;
        for (int j = ov.lo[1]; j <= ov.hi[1]; ++j) {
          for (int i = ov.lo[0]; i <= ov.hi[0]; ++i) {
            std::copy_n(o.cell(i, j).data(), eq_.m(), p.cell(i, j).data());
          }
        }
      }
    }
  });
  hierarchy_.levels[fi] = std::move(fresh);
  fill_ghosts(fine_index + 1, t);
  for (Patch& p : hierarchy_.levels[fi]) p.save_previous();
  timing_.seconds["regrid"] += seconds_since(start);

  // Finer levels are rebuilt against the new layout to stay nested.
  if (fine_index + 1 < opts_.max_levels && hierarchy_.num_levels() > fine_index + 1) {
    rebuild_level(fine_index + 1, from_initial);
  }
}

void AmrSolver::regrid(int level) {
  if (level < 2 || level > opts_.max_levels) throw OutOfRangeError("regrid level out of range");
  if (hierarchy_.num_levels() < level - 1) return;
  rebuild_level(level - 1, false);
}

void AmrSolver::fill_from_coarse(int level_index, Patch& patch, double t, bool ghosts_only) {
  const std::vector<Patch>& coarse = hierarchy_.levels[static_cast<std::size_t>(level_index - 1)];
  const CoeffField& fine_coeffs = [&]() -> const CoeffField& {
    // During a rebuild the coefficient list already belongs to the new patches.
    const auto& list = coeffs_[static_cast<std::size_t>(level_index)];
    for (const CoeffField& c : list) {
      if (c.spec.lo == patch.spec().lo && c.spec.hi == patch.spec().hi) return c;
    }
    throw SchedulingError("no coefficients for patch");
  }();
  const PatchSpec& s = patch.spec();
  const int m = patch.m();
  std::vector<double> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));
  std::size_t guess = 0;
  for (int j = s.lo[1] - s.ghost_y(); j <= s.hi[1] + s.ghost_y(); ++j) {
    for (int i = s.lo[0] - s.ghost_x(); i <= s.hi[0] + s.ghost_x(); ++i) {
      if (ghosts_only && s.interior_contains(i, j)) continue;
      const Point c = cell_center(s, i, j);
      if (!domain_.contains(c, 0.0)) continue;
      std::span<double> q = patch.cell(i, j);
      if (!fine_coeffs.at(i, j).wet) {
        std::fill(q.begin(), q.end(), 0.0);
        continue;
      }
      // Coarse patch whose interior contains the point.
      const PatchSpec& g = coarse[guess].spec();
      const int ci = static_cast<int>(std::floor((c.x - g.origin.x) / g.dx));
      const int cj = s.dims == 2 ? static_cast<int>(std::floor((c.y - g.origin.y) / g.dy)) : 0;
      std::size_t owner = coarse.size();
      if (g.interior_contains(ci, cj)) {
        owner = guess;
      } else {
        for (std::size_t k = 0; k < coarse.size(); ++k) {
          if (coarse[k].spec().interior_contains(ci, cj)) {
            owner = k;
            break;
          }
        }
      }
      if (owner == coarse.size()) {
        if (ghosts_only) continue;
        std::ostringstream os;
        os << "no coarse data for level " << s.level << " cell (" << i << ", " << j << ")";
        throw SchedulingError(os.str());
      }
      guess = owner;
      const Patch& cp = coarse[owner];
      const double tol = 1e-10 * std::max(1.0, std::abs(t));
      if (std::abs(t - cp.time) <= tol || cp.previous.empty()) {
        interpolate_patch(cp, cp.data(), c, q);
      } else {
        if (t < cp.previous_time - tol || t > cp.time + tol) {
          std::ostringstream os;
          os << "coarse data at t=" << cp.previous_time << ".." << cp.time
             << " cannot serve t=" << t;
          throw SchedulingError(os.str());
        }
        const double w = (t - cp.previous_time) / (cp.time - cp.previous_time);
        interpolate_patch(cp, cp.previous, c, a);
        interpolate_patch(cp, cp.data(), c, b);
        for (int k = 0; k < m; ++k) {
          q[static_cast<std::size_t>(k)] =
              (1.0 - w) * a[static_cast<std::size_t>(k)] + w * b[static_cast<std::size_t>(k)];
        }
      }
    }
  }
}

void AmrSolver::copy_same_level(int level_index, Patch& patch, std::size_t self) {
  const std::vector<Patch>& peers = hierarchy_.levels[static_cast<std::size_t>(level_index)];
  const PatchSpec& s = patch.spec();
  const Box storage{{s.lo[0] - s.ghost_x(), s.lo[1] - s.ghost_y()},
                    {s.hi[0] + s.ghost_x(), s.hi[1] + s.ghost_y()}};
  for (std::size_t k = 0; k < peers.size(); ++k) {
    if (k == self) continue;
    const Patch& o = peers[k];
    Box ov;
    if (!overlap(storage, Box{o.spec().lo, o.spec().hi}, ov)) continue;
    for (int j = ov.lo[1]; j <= ov.hi[1]; ++j) {
      for (int i = ov.lo[0]; i <= ov.hi[0]; ++i) {
        std::copy_n(o.cell(i, j).data(), patch.m(), patch.cell(i, j).data());
      }
    }
  }
}

void AmrSolver::fill_ghosts(int level, double t) {
  const std::size_t li = static_cast<std::size_t>(level - 1);
  std::vector<Patch>& patches = hierarchy_.levels[li];
  for_each_patch(patches.size(), [&](std::size_t k) {
    if (li > 0) fill_from_coarse(static_cast<int>(li), patches[k], t, true);
    copy_same_level(static_cast<int>(li), patches[k], k);
    fill_ghost_physical(patches[k], domain_, bc_, eq_);
  });
}

void AmrSolver::restrict_fine_to_coarse(int level) {
  const std::size_t ci = static_cast<std::size_t>(level - 1);
  if (hierarchy_.levels.size() <= ci + 1) return;
  const int r = opts_.ratios[ci];
  const int ry = domain_.dims == 2 ? r : 1;
  const double inv = 1.0 / (r * ry);
  std::vector<Patch>& coarse = hierarchy_.levels[ci];
  const std::vector<Patch>& fine = hierarchy_.levels[ci + 1];
  for_each_patch(coarse.size(), [&](std::size_t k) {
    Patch& cp = coarse[k];
    const PatchSpec& cs = cp.spec();
    const int m = cp.m();
    for (const Patch& fp : fine) {
      const PatchSpec& fs = fp.spec();
      const Box under{{floor_div(fs.lo[0], r), floor_div(fs.lo[1], ry)},
                      {floor_div(fs.hi[0], r), floor_div(fs.hi[1], ry)}};
      Box ov;
      if (!overlap(under, Box{cs.lo, cs.hi}, ov)) continue;
      for (int j = ov.lo[1]; j <= ov.hi[1]; ++j) {
        for (int i = ov.lo[0]; i <= ov.hi[0]; ++i) {
          for (int c = 0; c < m; ++c) {
            double sum = 0.0;
            for (int b = 0; b < ry; ++b) {
              for (int a = 0; a < r; ++a) sum += fp.at(i * r + a, j * ry + b, c);
            }
            cp.at(i, j, c) = sum * inv;
          }
        }
      }
    }
  });
}

void AmrSolver::record_gauges(int level_index, double t) {
  for (GaugeSeries& g : gauges_) {
    if (finest_covering_patch(hierarchy_, g.gauge.location).first != level_index) continue;
    if (!g.samples.empty() && t <= g.samples.back().time) continue;
    record_gauge(hierarchy_, g, t);
  }
}

void AmrSolver::advance_level(int level, double dt) {
  const std::size_t li = static_cast<std::size_t>(level - 1);
  const bool can_refine = level < opts_.max_levels;
  if (can_refine && steps_since_regrid_[li] >= opts_.regrid_interval) {
    steps_since_regrid_[li] = 0;
    regrid(level + 1);
  }
  ++steps_since_regrid_[li];

  std::vector<Patch>& patches = hierarchy_.levels[li];
  const double t_old = patches[0].time;
  const double t_new = t_old + dt;
  fill_ghosts(level, t_old);
  for (Patch& p : patches) p.save_previous();

  const auto start = Clock::now();
  for_each_patch(patches.size(), [&](std::size_t k) {
    step_patch(patches[k], coeffs_[li][k], dt, eq_, opts_.limiter);
    patches[k].time = t_new;
  });
  timing_.seconds["stepping"] += seconds_since(start);
  for (const Patch& p : patches) timing_.cell_steps[li] += p.spec().interior_cells();
  fill_ghosts(level, t_new);
  record_gauges(static_cast<int>(li), t_new);

  if (hierarchy_.levels.size() > li + 1) {
    const int r = opts_.ratios[li];
    for (int k = 0; k < r; ++k) {
      if (hierarchy_.levels.size() <= li + 1) break;
      advance_level(level + 1, dt / r);
    }
    if (hierarchy_.levels.size() > li + 1) {
      for (std::size_t f = li + 1; f < hierarchy_.levels.size(); ++f) {
        for (Patch& p : hierarchy_.levels[f]) p.time = t_new;
      }
      restrict_fine_to_coarse(level);
    }
  }
}

double AmrSolver::check_courant(double dt) const {
  double worst = 0.0;
  double dt_level = dt;
  for (std::size_t l = 0; l < hierarchy_.levels.size(); ++l) {
    if (l > 0) dt_level /= opts_.ratios[l - 1];
    for (std::size_t k = 0; k < hierarchy_.levels[l].size(); ++k) {
      worst = std::max(worst, max_courant(hierarchy_.levels[l][k].spec(), coeffs_[l][k], dt_level));
    }
  }
  return worst;
}

double AmrSolver::coarse_step(double dt) {
  if (check_courant(dt) > 1.0) {
    dt *= 0.5;
    const double c = check_courant(dt);
    if (c > 1.0) {
      std::ostringstream os;
      os << "Courant number " << c << " exceeds 1 after halving the time step";
      throw CflViolationError(c, os.str());
    }
  }
  const auto start = Clock::now();
  advance_level(1, dt);
  timing_.seconds["forward"] += seconds_since(start);
  return dt;
}

void AmrSolver::advance_to(double t_end) {
  const double tol = 1e-12 * std::max(1.0, std::abs(t_end));
  while (time() < t_end - tol) {
    const double remaining = t_end - time();
    double dt = std::min(stable_dt_, remaining);
    // Avoid a sliver step at the end.
    if (remaining > dt && remaining - dt < 1e-6 * dt) dt = remaining;
    const double taken = coarse_step(dt);
    if (taken == remaining) {
      for (auto& level : hierarchy_.levels) {
        for (Patch& p : level) p.time = t_end;
      }
    }
  }
  for (auto& level : hierarchy_.levels) {
    for (Patch& p : level) p.time = t_end;
  }
}

}  // namespace adjamr
