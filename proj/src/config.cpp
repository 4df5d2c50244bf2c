#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "adjamr/config.hpp"
#include "adjamr/errors.hpp"

namespace adjamr {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double to_number(const std::string& s, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(line, "malformed number '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, int line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError(line, "malformed integer '" + s + "'");
  }
  return static_cast<int>(v);
}

class Sections {
 public:
  std::map<std::string, std::vector<Entry>> data;
  std::map<std::string, int> header_line;

  Entry* find(const std::string& section, const std::string& key) {
    auto it = data.find(section);
    if (it == data.end()) return nullptr;
    Entry* found = nullptr;
    for (Entry& e : it->second) {
      if (e.key != key) continue;
      if (found != nullptr) throw ParseError(e.line, "duplicate key '" + key + "'");
      found = &e;
    }
    if (found != nullptr) found->used = true;
    return found;
  }

  std::vector<Entry*> all(const std::string& section, const std::string& key) {
    std::vector<Entry*> out;
    auto it = data.find(section);
    if (it == data.end()) return out;
    for (Entry& e : it->second) {
      if (e.key == key) {
        e.used = true;
        out.push_back(&e);
      }
    }
    return out;
  }

  int section_line(const std::string& section) const {
    auto it = header_line.find(section);
    return it == header_line.end() ? 0 : it->second;
  }

  Entry& require(const std::string& section, const std::string& key) {
    Entry* e = find(section, key);
    if (e == nullptr) {
      throw ParseError(section_line(section), "missing required key '" + key + "' in [" +
                                                  section + "]");
    }
    return *e;
  }

  double number(const std::string& section, const std::string& key, double fallback) {
    Entry* e = find(section, key);
    return e == nullptr ? fallback : to_number(e->value, e->line);
  }
  int integer(const std::string& section, const std::string& key, int fallback) {
    Entry* e = find(section, key);
    return e == nullptr ? fallback : to_int(e->value, e->line);
  }
  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) {
    Entry* e = find(section, key);
    return e == nullptr ? fallback : e->value;
  }
  int line_of(const std::string& section, const std::string& key) {
    Entry* e = find(section, key);
    return e == nullptr ? section_line(section) : e->line;
  }
};

Sections tokenize(const std::string& text) {
  static const std::set<std::string> known = {"problem", "material", "boundary", "initial",
                                              "amr",     "flagging", "adjoint",  "gauges"};
  Sections s;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ParseError(line, "malformed section header");
      section = trim(l.substr(1, l.size() - 2));
      if (known.count(section) == 0) throw ParseError(line, "unknown section [" + section + "]");
      if (s.header_line.count(section) != 0) {
        throw ParseError(line, "duplicate section [" + section + "]");
      }
      s.header_line[section] = line;
      s.data[section];
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    if (section.empty()) throw ParseError(line, "key outside any section");
    Entry e{trim(l.substr(0, eq)), trim(l.substr(eq + 1)), line, false};
    if (e.key.empty()) throw ParseError(line, "empty key");
    s.data[section].push_back(e);
  }
  return s;
}

std::vector<double> numbers(const Entry& e) {
  std::vector<double> out;
  for (const std::string& t : split_list(e.value)) out.push_back(to_number(t, e.line));
  return out;
}

BoundaryCondition parse_bc(const Entry* e) {
  if (e == nullptr) return BoundaryCondition::Wall;
  try {
    return boundary_from_string(e->value);
  } catch (const ConfigError& err) {
    throw ParseError(e->line, err.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Sections s = tokenize(text);
  RunConfig c;

  // [problem]
  {
    Entry& sys = s.require("problem", "system");
    try {
      c.system = system_from_string(sys.value);
    } catch (const Error& err) {
      throw ParseError(sys.line, err.what());
    }
    const int dims = c.system == SystemKind::Acoustics1D ? 1 : 2;
    c.domain.dims = dims;
    Entry& xlo = s.require("problem", "xlo");
    Entry& xhi = s.require("problem", "xhi");
    c.domain.xlo = to_number(xlo.value, xlo.line);
    c.domain.xhi = to_number(xhi.value, xhi.line);
    if (!(c.domain.xhi > c.domain.xlo)) throw ParseError(xhi.line, "xhi must exceed xlo");
    Entry& nx = s.require("problem", "nx");
    c.cells[0] = to_int(nx.value, nx.line);
    if (c.cells[0] < 1) throw ParseError(nx.line, "nx must be positive");
    if (dims == 2) {
      Entry& ylo = s.require("problem", "ylo");
      Entry& yhi = s.require("problem", "yhi");
      c.domain.ylo = to_number(ylo.value, ylo.line);
      c.domain.yhi = to_number(yhi.value, yhi.line);
      if (!(c.domain.yhi > c.domain.ylo)) throw ParseError(yhi.line, "yhi must exceed ylo");
      Entry& ny = s.require("problem", "ny");
      c.cells[1] = to_int(ny.value, ny.line);
      if (c.cells[1] < 1) throw ParseError(ny.line, "ny must be positive");
    } else {
      c.domain.ylo = 0.0;
      c.domain.yhi = 1.0;
      c.cells[1] = 1;
    }
    c.t0 = s.number("problem", "t0", 0.0);
    Entry& tf = s.require("problem", "t_final");
    c.t_final = to_number(tf.value, tf.line);
    if (c.t_final < c.t0) throw ParseError(tf.line, "t_final precedes t0");
    if (Entry* o = s.find("problem", "output_times")) {
      c.output_times = numbers(*o);
      for (std::size_t k = 0; k < c.output_times.size(); ++k) {
        const double t = c.output_times[k];
        if (t < c.t0 || t > c.t_final || (k > 0 && t <= c.output_times[k - 1])) {
          throw ParseError(o->line, "output times must increase within [t0, t_final]");
        }
      }
    } else if (Entry* n = s.find("problem", "outputs")) {
      const int count = to_int(n->value, n->line);
      if (count < 1) throw ParseError(n->line, "outputs must be positive");
      for (int k = 1; k <= count; ++k) {
        c.output_times.push_back(c.t0 + (c.t_final - c.t0) * k / count);
      }
    } else {
      c.output_times = {c.t_final};
    }
    c.courant = s.number("problem", "courant", 0.9);
    if (!(c.courant > 0.0 && c.courant <= 1.0)) {
      throw ParseError(s.line_of("problem", "courant"), "courant must lie in (0, 1]");
    }
    if (Entry* l = s.find("problem", "limiter")) {
      try {
        c.limiter = limiter_from_string(l->value);
      } catch (const Error& err) {
        throw ParseError(l->line, err.what());
      }
    }
  }
  const int dims = c.domain.dims;
  const int m = c.system == SystemKind::Acoustics1D ? 2 : 3;

  // [material]
  if (c.system == SystemKind::SweLinear2D) {
    c.base = s.number("material", "base", -1.0);
    c.sea_level = s.number("material", "sea_level", 0.0);
    c.gravity = s.number("material", "gravity", 9.81);
    if (!(c.gravity > 0.0)) throw ParseError(s.line_of("material", "gravity"), "gravity must be positive");
    for (Entry* e : s.all("material", "ramp")) {
      const auto v = split_list(e->value);
      if (v.size() != 4 || (v[0] != "x" && v[0] != "y")) {
        throw ParseError(e->line, "ramp = x|y start end rise");
      }
      BathymetryRamp r;
      r.axis = v[0] == "x" ? 0 : 1;
      r.start = to_number(v[1], e->line);
      r.end = to_number(v[2], e->line);
      r.rise = to_number(v[3], e->line);
      if (!(r.end > r.start)) throw ParseError(e->line, "ramp end must exceed start");
      c.ramps.push_back(r);
    }
    for (Entry* e : s.all("material", "island")) {
      const auto v = numbers(*e);
      if (v.size() != 4 || !(v[2] > 0.0)) throw ParseError(e->line, "island = x y radius height");
      c.islands.push_back({v[0], v[1], v[2], v[3]});
    }
  } else {
    c.bulk = s.number("material", "bulk", 1.0);
    c.density = s.number("material", "density", 1.0);
    if (!(c.bulk > 0.0) || !(c.density > 0.0)) {
      throw ParseError(s.section_line("material"), "bulk modulus and density must be positive");
    }
    for (Entry* e : s.all("material", "layer")) {
      const auto v = numbers(*e);
      AcousticLayer layer;
      if (dims == 1 && v.size() == 4) {
        layer = {v[0], v[1], -1e300, 1e300, v[2], v[3]};
      } else if (dims == 2 && v.size() == 6) {
        layer = {v[0], v[1], v[2], v[3], v[4], v[5]};
      } else {
        throw ParseError(e->line, dims == 1 ? "layer = xlo xhi bulk density"
                                            : "layer = xlo xhi ylo yhi bulk density");
      }
      if (!(layer.bulk > 0.0) || !(layer.density > 0.0)) {
        throw ParseError(e->line, "layer bulk modulus and density must be positive");
      }
      c.layers.push_back(layer);
    }
  }

  // [boundary]
  if (Entry* all = s.find("boundary", "all")) {
    const BoundaryCondition b = parse_bc(all);
    c.boundary = BoundarySpec::all(b);
  }
  const char* side_names[4] = {"left", "right", "bottom", "top"};
  for (int k = 0; k < 4; ++k) {
    if (Entry* e = s.find("boundary", side_names[k])) c.boundary.sides[static_cast<std::size_t>(k)] = parse_bc(e);
  }
  for (int axis = 0; axis < dims; ++axis) {
    const bool a = c.boundary.sides[static_cast<std::size_t>(2 * axis)] == BoundaryCondition::Periodic;
    const bool b = c.boundary.sides[static_cast<std::size_t>(2 * axis + 1)] == BoundaryCondition::Periodic;
    if (a != b) throw ParseError(s.section_line("boundary"), "periodic sides must come in pairs");
  }

  // [initial]
  {
    const std::string type = s.text("initial", "type", "zero");
    InitialSpec& ic = c.initial;
    ic.x = s.number("initial", "x", 0.0);
    ic.y = s.number("initial", "y", 0.0);
    ic.amplitude = s.number("initial", "amplitude", 1.0);
    if (type == "zero") {
      ic.kind = InitialSpec::Kind::Zero;
    } else if (type == "gaussian") {
      ic.kind = InitialSpec::Kind::Gaussian;
      ic.beta = s.number("initial", "beta", 1.0);
      const std::string dir = s.text("initial", "direction", "none");
      if (dir == "none") {
        ic.direction = 0;
      } else if (dir == "right") {
        ic.direction = 1;
      } else if (dir == "left") {
        ic.direction = -1;
      } else {
        throw ParseError(s.line_of("initial", "direction"), "direction = none|right|left");
      }
    } else if (type == "cosine-ring") {
      ic.kind = InitialSpec::Kind::CosineRing;
      ic.radius = s.number("initial", "radius", 0.0);
      ic.width = s.number("initial", "width", 1.0);
      ic.offset = s.number("initial", "offset", 1.0);
      ic.support = s.number("initial", "support", ic.width);
      if (!(ic.width > 0.0)) throw ParseError(s.line_of("initial", "width"), "width must be positive");
    } else if (type == "plane-wave") {
      ic.kind = InitialSpec::Kind::PlaneWave;
      ic.mode_x = s.integer("initial", "mode_x", 1);
      ic.mode_y = s.integer("initial", "mode_y", 0);
    } else if (type == "table") {
      ic.kind = InitialSpec::Kind::Table;
      ic.file = s.require("initial", "file").value;
    } else {
      throw ParseError(s.line_of("initial", "type"), "unknown initial condition '" + type + "'");
    }
  }

  // [amr]
  {
    c.max_levels = s.integer("amr", "max_levels", 1);
    if (c.max_levels < 1) throw ParseError(s.line_of("amr", "max_levels"), "max_levels must be >= 1");
    if (Entry* r = s.find("amr", "ratios")) {
      for (const std::string& t : split_list(r->value)) {
        const int v = to_int(t, r->line);
        if (v < 2) throw ParseError(r->line, "refinement ratios must be integers >= 2");
        c.ratios.push_back(v);
      }
    }
    while (static_cast<int>(c.ratios.size()) < c.max_levels - 1) {
      c.ratios.push_back(c.ratios.empty() ? 2 : c.ratios.back());
    }
    c.regrid_interval = s.integer("amr", "regrid_interval", 2);
    c.buffer_cells = s.integer("amr", "buffer", 2);
    c.efficiency = s.number("amr", "efficiency", 0.7);
    c.max_patch_cells = s.integer("amr", "max_patch", 60);
    if (c.regrid_interval < 1 || c.buffer_cells < 0 || !(c.efficiency > 0.0 && c.efficiency <= 1.0) ||
        c.max_patch_cells < 1) {
      throw ParseError(s.section_line("amr"), "invalid regridding parameters");
    }
    for (Entry* e : s.all("amr", "region")) {
      const auto v = numbers(*e);
      RefinementRegion r;
      if (dims == 1 && v.size() == 6) {
        r = {v[0], v[1], -1e300, 1e300, v[2], v[3], static_cast<int>(v[4]), static_cast<int>(v[5])};
      } else if (dims == 2 && v.size() == 8) {
        r = {v[0], v[1], v[2], v[3], v[4], v[5], static_cast<int>(v[6]), static_cast<int>(v[7])};
      } else {
        throw ParseError(e->line, "region = box t_start t_end min_level max_level");
      }
      if (r.min_level > r.max_level) throw ParseError(e->line, "region min_level exceeds max_level");
      c.regions.push_back(r);
    }
  }

  // [flagging]
  {
    if (Entry* e = s.find("flagging", "strategy")) {
      try {
        c.strategy = strategy_from_string(e->value);
      } catch (const Error& err) {
        throw ParseError(e->line, err.what());
      }
    }
    c.difference_tolerance = s.number("flagging", "difference_tolerance", 0.1);
    c.surface_tolerance = s.number("flagging", "surface_tolerance", 0.1);
    c.adjoint_tolerance = s.number("flagging", "adjoint_tolerance", 0.02);
    if (!(c.difference_tolerance > 0.0) || !(c.surface_tolerance > 0.0) ||
        !(c.adjoint_tolerance > 0.0)) {
      throw ParseError(s.section_line("flagging"), "tolerances must be positive");
    }
  }

  // [adjoint]
  {
    c.window.t_final = s.number("adjoint", "t_final", c.t_final);
    c.window.t_start = s.number("adjoint", "t_start", c.window.t_final);
    if (!(c.t0 <= c.window.t_start && c.window.t_start <= c.window.t_final)) {
      throw ParseError(s.line_of("adjoint", "t_start"), "window must satisfy t0 <= t_start <= t_final");
    }
    c.snapshot_intervals = s.integer("adjoint", "intervals", 64);
    if (c.snapshot_intervals < 1) throw ParseError(s.line_of("adjoint", "intervals"), "intervals must be positive");
    c.adjoint_cells = {s.integer("adjoint", "nx", c.cells[0]), dims == 2 ? s.integer("adjoint", "ny", c.cells[1]) : 1};
    if (Entry* f = s.find("adjoint", "functional")) {
      const auto v = split_list(f->value);
      FunctionalSpec& fs = c.functional;
      if (v.empty()) throw ParseError(f->line, "functional = box ... | disk ...");
      std::vector<double> n;
      for (std::size_t k = 1; k < v.size(); ++k) n.push_back(to_number(v[k], f->line));
      if (v[0] == "box" && dims == 1 && n.size() == 2) {
        fs.shape = FunctionalSpec::Shape::Box;
        fs.xlo = n[0];
        fs.xhi = n[1];
      } else if (v[0] == "box" && dims == 2 && n.size() == 4) {
        fs.shape = FunctionalSpec::Shape::Box;
        fs.xlo = n[0];
        fs.xhi = n[1];
        fs.ylo = n[2];
        fs.yhi = n[3];
      } else if (v[0] == "disk" && n.size() == static_cast<std::size_t>(dims + 1)) {
        fs.shape = FunctionalSpec::Shape::Disk;
        fs.cx = n[0];
        fs.cy = dims == 2 ? n[1] : 0.0;
        fs.radius = n.back();
      } else {
        throw ParseError(f->line, "functional = box xlo xhi [ylo yhi] | disk cx [cy] radius");
      }
      if (Entry* w = s.find("adjoint", "weights")) {
        fs.weights = numbers(*w);
        if (static_cast<int>(fs.weights.size()) != m) {
          throw ParseError(w->line, "weights need one value per component");
        }
      } else {
        fs.weights.assign(static_cast<std::size_t>(m), 0.0);
        fs.weights[0] = 1.0;
      }
      c.has_functional = true;
    }
  }
  if (c.strategy == StrategyKind::Adjoint && !c.has_functional) {
    throw ParseError(s.line_of("flagging", "strategy"), "adjoint flagging needs a functional");
  }

  // [gauges]
  for (Entry* e : s.all("gauges", "gauge")) {
    const auto v = numbers(*e);
    if (v.size() != static_cast<std::size_t>(dims + 1)) {
      throw ParseError(e->line, dims == 1 ? "gauge = id x" : "gauge = id x y");
    }
    Gauge g{static_cast<int>(v[0]), {v[1], dims == 2 ? v[2] : 0.0}};
    if (!c.domain.contains(g.location)) throw ParseError(e->line, "gauge lies outside the domain");
    c.gauges.push_back(g);
  }

  for (const auto& [section, entries] : s.data) {
    for (const Entry& e : entries) {
      if (!e.used) throw ParseError(e.line, "unknown key '" + e.key + "' in [" + section + "]");
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  RunConfig c = parse_config(ss.str());
  if (c.initial.kind == InitialSpec::Kind::Table) {
    std::filesystem::path f = c.initial.file;
    if (f.is_relative()) f = path.parent_path() / f;
    c.initial.file = f.string();
  }
  return c;
}

MaterialModel RunConfig::material() const {
  if (system == SystemKind::SweLinear2D) {
    return MaterialModel::shallow_water(base, sea_level, gravity, ramps, islands);
  }
  return MaterialModel::acoustics(bulk, density, layers);
}

EquationSet RunConfig::forward() const { return EquationSet::forward(system, material()); }

AmrOptions RunConfig::amr_options(StrategyKind kind) const {
  AmrOptions o;
  o.max_levels = max_levels;
  o.ratios = ratios;
  o.regrid_interval = regrid_interval;
  o.buffer_cells = buffer_cells;
  o.efficiency = efficiency;
  o.max_patch_cells = max_patch_cells;
  o.courant_target = courant;
  o.limiter = limiter;
  o.strategy.kind = kind;
  switch (kind) {
    case StrategyKind::Difference: o.strategy.tolerance = difference_tolerance; break;
    case StrategyKind::Surface: o.strategy.tolerance = surface_tolerance; break;
    case StrategyKind::Adjoint: o.strategy.tolerance = adjoint_tolerance; break;
    case StrategyKind::Everywhere: o.strategy.tolerance = 1.0; break;
  }
  o.regions = regions;
  return o;
}

PatchSpec RunConfig::adjoint_grid() const {
  return uniform_grid(domain, adjoint_cells[0], domain.dims == 2 ? adjoint_cells[1] : 1);
}

namespace {

// Right-going eigenvector along unit normal n for uniform material.
StateVec plane_eigenvector(const EquationSet& eq, double nx, double ny) {
  const CellCoeffs cc = eq.coeffs(eq.material.at({0.0, 0.0}));
  StateVec r{};
  r[0] = cc.a;
  r[1] = cc.c * nx;
  if (eq.m() == 3) r[2] = cc.c * ny;
  return r;
}

double sinc(double x) { return std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x; }

}  // namespace

void plane_wave_average(const RunConfig& cfg, Point p, double dx, double dy, double t,
                        std::span<double> out) {
  if (cfg.initial.kind != InitialSpec::Kind::PlaneWave) {
    throw UnsupportedConfigError("no analytic solution for this initial condition");
  }
  const EquationSet eq = cfg.forward();
  if (!eq.material.is_uniform()) {
    throw UnsupportedConfigError("plane waves need uniform material");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const double kx = two_pi * cfg.initial.mode_x / (cfg.domain.xhi - cfg.domain.xlo);
  const double ky = cfg.domain.dims == 2
                        ? two_pi * cfg.initial.mode_y / (cfg.domain.yhi - cfg.domain.ylo)
                        : 0.0;
  const double kn = std::hypot(kx, ky);
  if (kn == 0.0) throw UnsupportedConfigError("plane wave needs a nonzero mode");
  const CellCoeffs cc = eq.coeffs(eq.material.at(p));
  const StateVec r = plane_eigenvector(eq, kx / kn, ky / kn);
  const double phase = kx * (p.x - cfg.domain.xlo) +
                       (cfg.domain.dims == 2 ? ky * (p.y - cfg.domain.ylo) : 0.0) - cc.c * kn * t;
  double avg = std::sin(phase) * sinc(0.5 * kx * dx);
  if (cfg.domain.dims == 2) avg *= sinc(0.5 * ky * dy);
  for (int k = 0; k < eq.m(); ++k) out[static_cast<std::size_t>(k)] = cfg.initial.amplitude * avg * r[static_cast<std::size_t>(k)];
}

InitialState RunConfig::initial_state() const {
  const InitialSpec ic = initial;
  const EquationSet eq = forward();
  const int dims = domain.dims;
  switch (ic.kind) {
    case InitialSpec::Kind::Zero:
      return [](Point, std::span<double> q) { std::fill(q.begin(), q.end(), 0.0); };
    case InitialSpec::Kind::Gaussian:
      return [ic, eq, dims](Point p, std::span<double> q) {
        std::fill(q.begin(), q.end(), 0.0);
        const double dx = p.x - ic.x;
        const double dy = dims == 2 ? p.y - ic.y : 0.0;
        const double v = ic.amplitude * std::exp(-ic.beta * (dx * dx + dy * dy));
        q[0] = v;
        if (ic.direction != 0) {
          const CellCoeffs cc = eq.coeffs(eq.material.at(p));
          q[1] = ic.direction * v * cc.c / cc.a;
        }
      };
    case InitialSpec::Kind::CosineRing:
      return [ic, dims](Point p, std::span<double> q) {
        std::fill(q.begin(), q.end(), 0.0);
        const double dx = p.x - ic.x;
        const double dy = dims == 2 ? p.y - ic.y : 0.0;
        const double r = std::sqrt(dx * dx + dy * dy);
        if (std::abs(r - ic.radius) <= ic.support) {
          q[0] = ic.amplitude * (ic.offset + std::cos(std::numbers::pi * (r - ic.radius) / ic.width));
        }
      };
    case InitialSpec::Kind::PlaneWave: {
      const RunConfig self = *this;
      return [self](Point p, std::span<double> q) { plane_wave_average(self, p, 0.0, 0.0, 0.0, q); };
    }
    case InitialSpec::Kind::Table: {
      auto table = std::make_shared<PatchHierarchy>(read_snapshot(ic.file));
      return [table](Point p, std::span<double> q) {
        const auto [l, k] = finest_covering_patch(*table, p);
        if (l < 0) {
          std::fill(q.begin(), q.end(), 0.0);
          return;
        }
        const Patch& patch = table->levels[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
        const PatchSpec& s = patch.spec();
        const int i = std::clamp(static_cast<int>(std::floor((p.x - s.origin.x) / s.dx)), s.lo[0], s.hi[0]);
        const int j = s.dims == 2 ? std::clamp(static_cast<int>(std::floor((p.y - s.origin.y) / s.dy)), s.lo[1], s.hi[1]) : s.lo[1];
        for (int c = 0; c < patch.m() && c < static_cast<int>(q.size()); ++c) q[static_cast<std::size_t>(c)] = patch.at(i, j, c);
      };
    }
  }
  return {};
}

}  // namespace adjamr
