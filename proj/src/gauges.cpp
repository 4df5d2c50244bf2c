#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "adjamr/errors.hpp"
#include "adjamr/io.hpp"

namespace adjamr {

std::pair<int, int> finest_covering_patch(const PatchHierarchy& hierarchy, Point p) {
  for (int l = hierarchy.num_levels() - 1; l >= 0; --l) {
    const auto& level = hierarchy.levels[static_cast<std::size_t>(l)];
    for (std::size_t k = 0; k < level.size(); ++k) {
      const PatchSpec& s = level[k].spec();
      const double x0 = s.origin.x + s.lo[0] * s.dx;
      const double x1 = s.origin.x + (s.hi[0] + 1) * s.dx;
      bool inside = p.x >= x0 && p.x <= x1;
      if (s.dims == 2) {
        const double y0 = s.origin.y + s.lo[1] * s.dy;
        const double y1 = s.origin.y + (s.hi[1] + 1) * s.dy;
        inside = inside && p.y >= y0 && p.y <= y1;
      }
      if (inside) return {l, static_cast<int>(k)};
    }
  }
  return {-1, -1};
}

void record_gauge(const PatchHierarchy& hierarchy, GaugeSeries& series, double t) {
  const auto [l, k] = finest_covering_patch(hierarchy, series.gauge.location);
  if (l < 0) throw OutOfRangeError("gauge outside every patch");
  const Patch& p = hierarchy.levels[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
  GaugeSample s;
  s.time = t;
  s.q.resize(static_cast<std::size_t>(p.m()));
  interpolate_patch(p, p.data(), series.gauge.location, s.q);
  series.samples.push_back(std::move(s));
}

void write_gauge(const GaugeSeries& series, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  char buf[40];
  os << "# gauge " << series.gauge.id;
  std::snprintf(buf, sizeof buf, " %.17g", series.gauge.location.x);
  os << buf;
  std::snprintf(buf, sizeof buf, " %.17g", series.gauge.location.y);
  os << buf << "\n";
  const std::size_t m = series.samples.empty() ? 0 : series.samples[0].q.size();
  os << "time";
  for (std::size_t k = 0; k < m; ++k) os << ",q" << k;
  os << "\n";
  for (const GaugeSample& s : series.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.time);
    os << buf;
    for (double v : s.q) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      os << buf;
    }
    os << "\n";
  }
}

GaugeSeries read_gauge(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  GaugeSeries g;
  std::string line;
  std::getline(is, line);
  {
    std::istringstream ls(line);
    std::string hash, word;
    if (!(ls >> hash >> word >> g.gauge.id >> g.gauge.location.x >> g.gauge.location.y) ||
        hash != "#" || word != "gauge") {
      throw FormatError(0, "bad gauge header in " + path.string());
    }
  }
  std::getline(is, line);  // column names
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    GaugeSample s;
    bool first = true;
    while (std::getline(ls, cell, ',')) {
      const double v = std::stod(cell);
      if (first) {
        s.time = v;
        first = false;
      } else {
        s.q.push_back(v);
      }
    }
    g.samples.push_back(std::move(s));
  }
  return g;
}

namespace {

// Linear interpolation of the series at t, which must lie in its range.
std::vector<double> at_time(const GaugeSeries& s, double t) {
  const auto& v = s.samples;
  auto it = std::lower_bound(v.begin(), v.end(), t,
                             [](const GaugeSample& a, double x) { return a.time < x; });
  if (it == v.end()) return v.back().q;
  if (it == v.begin() || it->time == t) return it->q;
  const GaugeSample& hi = *it;
  const GaugeSample& lo = *(it - 1);
  const double w = (t - lo.time) / (hi.time - lo.time);
  std::vector<double> out(lo.q.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - w) * lo.q[k] + w * hi.q[k];
  return out;
}

}  // namespace

GaugeComparison compare_gauges(const GaugeSeries& a, const GaugeSeries& b) {
  if (a.samples.empty() || b.samples.empty()) throw ComparisonError("empty gauge series");
  const double lo = std::max(a.samples.front().time, b.samples.front().time);
  const double hi = std::min(a.samples.back().time, b.samples.back().time);
  if (lo > hi) throw ComparisonError("gauge series do not overlap in time");
  auto in_range = [&](const GaugeSeries& s) {
    std::size_t n = 0;
    for (const GaugeSample& x : s.samples) n += (x.time >= lo && x.time <= hi) ? 1 : 0;
    return n;
  };
  const bool a_coarse = in_range(a) <= in_range(b);
  const GaugeSeries& coarse = a_coarse ? a : b;
  const GaugeSeries& fine = a_coarse ? b : a;
  const std::size_t m = std::min(a.samples[0].q.size(), b.samples[0].q.size());
  GaugeComparison out;
  out.max_abs.assign(m, 0.0);
  out.rms.assign(m, 0.0);
  std::size_t n = 0;
  for (const GaugeSample& s : coarse.samples) {
    if (s.time < lo || s.time > hi) continue;
    const std::vector<double> other = at_time(fine, s.time);
    for (std::size_t k = 0; k < m; ++k) {
      const double d = std::abs(s.q[k] - other[k]);
      out.max_abs[k] = std::max(out.max_abs[k], d);
      out.rms[k] += d * d;
    }
    ++n;
  }
  for (double& r : out.rms) r = std::sqrt(r / static_cast<double>(std::max<std::size_t>(n, 1)));
  return out;
}

}  // namespace adjamr
