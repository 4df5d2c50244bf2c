#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "adjamr/errors.hpp"
#include "adjamr/io.hpp"

namespace adjamr {

namespace {

constexpr const char* kMagic = "# adjamr snapshot v1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_patch_block(std::ostream& os, std::size_t index, const PatchSpec& s, double time,
                       int m, const std::function<double(int, int, int)>& value) {
  os << "patch " << index << "\n";
  os << "level " << s.level << "\n";
  os << "dims " << s.dims << "\n";
  os << "lo " << s.lo[0] << " " << s.lo[1] << "\n";
  os << "hi " << s.hi[0] << " " << s.hi[1] << "\n";
  os << "dx " << fmt(s.dx) << " " << fmt(s.dy) << "\n";
  os << "origin " << fmt(s.origin.x) << " " << fmt(s.origin.y) << "\n";
  os << "time " << fmt(time) << "\n";
  os << "m " << m << "\n";
  for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
    for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
      for (int k = 0; k < m; ++k) {
        if (k > 0) os << ' ';
        os << fmt(value(i, j, k));
      }
      os << '\n';
    }
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Line-oriented reader that reports byte offsets in its errors.
class Reader {
 public:
  explicit Reader(std::string text) : text_(std::move(text)) {}

  bool at_end() const { return pos_ >= text_.size(); }

  std::string line() {
    if (at_end()) throw FormatError(pos_, "unexpected end of file");
    line_start_ = pos_;
    const std::size_t nl = text_.find('\n', pos_);
    const std::size_t end = nl == std::string::npos ? text_.size() : nl;
    std::string out = text_.substr(pos_, end - pos_);
    pos_ = nl == std::string::npos ? text_.size() : nl + 1;
    return out;
  }

  // Reads "key v1 v2 ..." and returns the values.
  std::vector<std::string> keyed(const std::string& key, std::size_t count) {
    std::istringstream ls(line());
    std::string k;
    ls >> k;
    if (k != key) fail("expected '" + key + "'");
    std::vector<std::string> vals;
    std::string v;
    while (ls >> v) vals.push_back(v);
    if (vals.size() != count) fail("wrong number of values for '" + key + "'");
    return vals;
  }

  double number(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || (errno == ERANGE && std::isinf(v))) fail("malformed number '" + s + "'");
    return v;
  }

  int integer(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') fail("malformed integer '" + s + "'");
    return static_cast<int>(v);
  }

  [[noreturn]] void fail(const std::string& msg) const { throw FormatError(line_start_, msg); }

  // Parses m numbers from one line into out.
  void values(int m, double* out) {
    const std::string l = line();
    const char* p = l.c_str();
    for (int k = 0; k < m; ++k) {
      char* end = nullptr;
      errno = 0;
      out[k] = std::strtod(p, &end);
      if (end == p || (errno == ERANGE && std::isinf(out[k]))) fail("malformed cell value");
      p = end;
    }
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p != '\0') fail("too many values on cell line");
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
};

struct Block {
  PatchSpec spec;
  double time = 0.0;
  int m = 0;
  std::vector<double> values;
};

Block read_block(Reader& r, std::size_t expected_index) {
  Block b;
  if (r.integer(r.keyed("patch", 1)[0]) != static_cast<int>(expected_index)) {
    r.fail("patch index out of order");
  }
  b.spec.level = r.integer(r.keyed("level", 1)[0]);
  b.spec.dims = r.integer(r.keyed("dims", 1)[0]);
  auto lo = r.keyed("lo", 2);
  auto hi = r.keyed("hi", 2);
  b.spec.lo = {r.integer(lo[0]), r.integer(lo[1])};
  b.spec.hi = {r.integer(hi[0]), r.integer(hi[1])};
  auto dx = r.keyed("dx", 2);
  b.spec.dx = r.number(dx[0]);
  b.spec.dy = r.number(dx[1]);
  auto origin = r.keyed("origin", 2);
  b.spec.origin = {r.number(origin[0]), r.number(origin[1])};
  b.time = r.number(r.keyed("time", 1)[0]);
  b.m = r.integer(r.keyed("m", 1)[0]);
  if (b.spec.level < 1 || (b.spec.dims != 1 && b.spec.dims != 2) || b.m < 1 ||
      b.spec.hi[0] < b.spec.lo[0] || b.spec.hi[1] < b.spec.lo[1] || !(b.spec.dx > 0.0) ||
      !(b.spec.dy > 0.0)) {
    r.fail("invalid patch header");
  }
  b.values.resize(b.spec.interior_cells() * static_cast<std::size_t>(b.m));
  for (std::size_t c = 0; c < b.spec.interior_cells(); ++c) {
    r.values(b.m, b.values.data() + c * static_cast<std::size_t>(b.m));
  }
  return b;
}

}  // namespace

void write_snapshot(const PatchHierarchy& hierarchy, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  const Domain& d = hierarchy.domain;
  os << kMagic << "\n";
  os << "domain " << d.dims << " " << fmt(d.xlo) << " " << fmt(d.xhi) << " " << fmt(d.ylo) << " "
     << fmt(d.yhi) << "\n";
  os << "ratios " << hierarchy.ratios.size();
  for (int r : hierarchy.ratios) os << " " << r;
  os << "\n";
  std::size_t count = 0;
  for (const auto& level : hierarchy.levels) count += level.size();
  os << "patches " << count << "\n";
  std::size_t index = 0;
  for (const auto& level : hierarchy.levels) {
    for (const Patch& p : level) {
      write_patch_block(os, index++, p.spec(), p.time, p.m(),
                        [&](int i, int j, int k) { return p.at(i, j, k); });
    }
  }
  if (!os) throw Error("failed writing " + path.string());
}

void write_snapshot(const UniformField& field, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  os << kMagic << "\n";
  os << "patches 1\n";
  write_patch_block(os, 0, field.spec, field.time, field.m,
                    [&](int i, int j, int k) { return field.at(i, j, k); });
  if (!os) throw Error("failed writing " + path.string());
}

PatchHierarchy read_snapshot(const std::filesystem::path& path) {
  Reader r(slurp(path));
  if (r.line() != kMagic) r.fail("missing snapshot header");
  PatchHierarchy h;
  auto d = r.keyed("domain", 5);
  h.domain.dims = r.integer(d[0]);
  h.domain.xlo = r.number(d[1]);
  h.domain.xhi = r.number(d[2]);
  h.domain.ylo = r.number(d[3]);
  h.domain.yhi = r.number(d[4]);
  {
    std::istringstream ls(r.line());
    std::string key;
    std::size_t n = 0;
    if (!(ls >> key >> n) || key != "ratios") r.fail("expected 'ratios'");
    for (std::size_t k = 0; k < n; ++k) {
      int v = 0;
      if (!(ls >> v)) r.fail("missing ratio");
      h.ratios.push_back(v);
    }
  }
  const int count = r.integer(r.keyed("patches", 1)[0]);
  if (count < 0) r.fail("negative patch count");
  for (int p = 0; p < count; ++p) {
    Block b = read_block(r, static_cast<std::size_t>(p));
    const std::size_t li = static_cast<std::size_t>(b.spec.level - 1);
    if (li > h.levels.size()) r.fail("levels out of order");
    if (li == h.levels.size()) h.levels.emplace_back();
    Patch patch(b.spec, b.m);
    patch.time = b.time;
    std::size_t c = 0;
    for (int j = b.spec.lo[1]; j <= b.spec.hi[1]; ++j) {
      for (int i = b.spec.lo[0]; i <= b.spec.hi[0]; ++i, ++c) {
        for (int k = 0; k < b.m; ++k) {
          patch.at(i, j, k) = b.values[c * static_cast<std::size_t>(b.m) + static_cast<std::size_t>(k)];
        }
      }
    }
    h.levels[li].push_back(std::move(patch));
  }
  return h;
}

UniformField read_uniform_snapshot(const std::filesystem::path& path) {
  Reader r(slurp(path));
  if (r.line() != kMagic) r.fail("missing snapshot header");
  if (r.integer(r.keyed("patches", 1)[0]) != 1) r.fail("uniform snapshot must hold one patch");
  Block b = read_block(r, 0);
  UniformField f(b.spec, b.m, b.time);
  f.values = std::move(b.values);
  return f;
}

void write_store(const AdjointSnapshotStore& store, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os = open_out(dir / "store.txt");
    const Domain& d = store.domain;
    os << "system = " << to_string(store.equations.kind) << "\n";
    os << "domain = " << d.dims << " " << fmt(d.xlo) << " " << fmt(d.xhi) << " " << fmt(d.ylo)
       << " " << fmt(d.yhi) << "\n";
    os << "t0 = " << fmt(store.t0) << "\n";
    os << "t_final = " << fmt(store.t_final) << "\n";
    os << "interval = " << fmt(store.interval) << "\n";
    os << "count = " << store.snapshots.size() << "\n";
  }
  {
    std::ofstream os = open_out(dir / "wet.txt");
    for (std::uint8_t w : store.wet) os << static_cast<int>(w) << "\n";
  }
  for (std::size_t k = 0; k < store.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.txt", k);
    write_snapshot(store.snapshots[k], dir / name);
  }
}

AdjointSnapshotStore read_store(const std::filesystem::path& dir, const EquationSet& forward) {
  const auto kv = read_key_values(dir / "store.txt");
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(0, "store.txt lacks '" + key + "'");
    return it->second;
  };
  AdjointSnapshotStore store;
  if (system_from_string(get("system")) != forward.kind) {
    throw ConfigError("adjoint store was computed for a different system");
  }
  store.equations = EquationSet::adjoint(forward.kind, forward.material, true);
  {
    std::istringstream ds(get("domain"));
    if (!(ds >> store.domain.dims >> store.domain.xlo >> store.domain.xhi >> store.domain.ylo >>
          store.domain.yhi)) {
      throw FormatError(0, "malformed domain in store.txt");
    }
  }
  store.t0 = std::stod(get("t0"));
  store.t_final = std::stod(get("t_final"));
  store.interval = std::stod(get("interval"));
  const std::size_t count = std::stoul(get("count"));
  for (std::size_t k = 0; k < count; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.txt", k);
    store.snapshots.push_back(read_uniform_snapshot(dir / name));
  }
  if (count > 0) store.grid = store.snapshots[0].spec;
  std::ifstream ws(dir / "wet.txt");
  int w = 0;
  while (ws >> w) store.wet.push_back(static_cast<std::uint8_t>(w != 0));
  if (count > 0 && store.wet.size() != store.grid.interior_cells()) {
    throw FormatError(0, "wet mask size does not match the grid");
  }
  return store;
}

}  // namespace adjamr
