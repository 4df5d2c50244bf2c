#include <cstdio>
#include <fstream>
#include <sstream>

#include "adjamr/errors.hpp"
#include "adjamr/io.hpp"

namespace adjamr {

std::size_t TimingReport::total_cell_steps() const {
  std::size_t n = 0;
  for (std::size_t c : cell_steps) n += c;
  return n;
}

std::size_t TimingReport::total_flagged() const {
  std::size_t n = 0;
  for (const RegridRecord& r : regrids) n += r.flagged;
  return n;
}

void write_timing(const TimingReport& report, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  char buf[64];
  for (const auto& [phase, secs] : report.seconds) {
    std::snprintf(buf, sizeof buf, "%.6f", secs);
    os << "seconds." << phase << " = " << buf << "\n";
  }
  for (std::size_t l = 0; l < report.cell_steps.size(); ++l) {
    os << "cell_steps.level" << l + 1 << " = " << report.cell_steps[l] << "\n";
  }
  os << "cell_steps.total = " << report.total_cell_steps() << "\n";
  os << "regrids = " << report.regrids.size() << "\n";
  for (std::size_t k = 0; k < report.regrids.size(); ++k) {
    const RegridRecord& r = report.regrids[k];
    std::snprintf(buf, sizeof buf, "%.17g", r.time);
    os << "regrid." << k << " = " << r.level << " " << buf << " " << r.flagged << " "
       << r.patches << "\n";
  }
  os << "flagged.total = " << report.total_flagged() << "\n";
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace adjamr
