#include "uniformize/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "uniformize/error.hpp"

namespace uniformize::io {

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string grid_function_csv(const GridFunction& u) {
  const GridDomain& d = *u.domain;
  std::string s = "i,j,x,y,value\n";
  for (std::size_t k = 0; k < d.interior_count(); ++k) {
    if (!u.available(static_cast<std::ptrdiff_t>(k))) continue;
    const Point p = d.point(k);
    s += std::to_string(d.col(k)) + ',' + std::to_string(d.row(k)) + ',' + format_double(p.real()) + ',' +
         format_double(p.imag()) + ',' + format_double(u.values[k]) + '\n';
  }
  return s;
}

GridFunction parse_grid_function_csv(DomainPtr domain, const std::string& text) {
  GridFunction u(domain);
  std::vector<std::uint8_t> seen(domain->interior_count(), 0);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,x,y,value", 0) != 0) {
    throw Error(ErrorCode::Parse, "grid function CSV header missing");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int i = 0, j = 0;
    double x = 0, y = 0, v = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &i, &j, &x, &y, &v) != 5) {
      throw Error(ErrorCode::Parse, "bad CSV line " + std::to_string(lineno));
    }
    const auto k = domain->interior_index(i, j);
    if (k < 0) throw Error(ErrorCode::Parse, "CSV node (" + std::to_string(i) + "," + std::to_string(j) + ") is not interior");
    u.values[k] = v;
    seen[k] = 1;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (seen[k]) continue;
    if (u.puncture) throw Error(ErrorCode::Parse, "CSV misses more than one interior node");
    u.puncture = k;
  }
  return u;
}

std::string complex_field_csv(const ComplexField& f) {
  const GridDomain& d = *f.domain;
  std::string s = "i,j,x,y,re,im\n";
  for (std::size_t k = 0; k < d.interior_count(); ++k) {
    const Point p = d.point(k);
    s += std::to_string(d.col(k)) + ',' + std::to_string(d.row(k)) + ',' + format_double(p.real()) + ',' +
         format_double(p.imag()) + ',' + format_double(f.values[k].real()) + ',' + format_double(f.values[k].imag()) +
         '\n';
  }
  return s;
}

nlohmann::json domain_metadata(const GridDomain& d) {
  const GridGeometry& g = d.grid();
  return {{"origin", {g.origin.real(), g.origin.imag()}},
          {"h", g.h},
          {"nx", g.nx},
          {"ny", g.ny},
          {"interior_nodes", d.interior_count()},
          {"boundary_crossings", d.crossings().size()},
          {"boundary_loops", d.loops().size()}};
}

namespace {

std::string pgm_header(const GridGeometry& g) {
  return "P5\n" + std::to_string(g.cols()) + " " + std::to_string(g.rows()) + "\n255\n";
}

}  // namespace

std::string mask_pgm(const GridDomain& d) {
  const GridGeometry& g = d.grid();
  std::string s = pgm_header(g);
  for (int j = g.ny; j >= 0; --j) {
    for (int i = 0; i <= g.nx; ++i) {
      switch (d.kind(i, j)) {
        case NodeKind::Interior: s += static_cast<char>(255); break;
        case NodeKind::Boundary: s += static_cast<char>(128); break;
        case NodeKind::Exterior: s += static_cast<char>(0); break;
      }
    }
  }
  return s;
}

std::string values_pgm(const GridDomain& d, const std::vector<double>& values, double lo, double hi) {
  const GridGeometry& g = d.grid();
  std::string s = pgm_header(g);
  const double span = hi > lo ? hi - lo : 1.0;
  for (int j = g.ny; j >= 0; --j) {
    for (int i = 0; i <= g.nx; ++i) {
      const auto k = d.interior_index(i, j);
      int gray = 0;
      if (k >= 0 && std::isfinite(values[k])) {
        gray = static_cast<int>(std::lround(255.0 * (values[k] - lo) / span));
        gray = std::clamp(gray, 0, 255);
      }
      s += static_cast<char>(gray);
    }
  }
  return s;
}

std::string loops_csv(const GridDomain& d) {
  std::string s = "loop_id,x,y\n";
  const auto loops = d.loops();
  for (std::size_t l = 0; l < loops.size(); ++l) {
    for (std::size_t c : loops[l].crossings) {
      const Point p = d.crossings()[c].point;
      s += std::to_string(l) + ',' + format_double(p.real()) + ',' + format_double(p.imag()) + '\n';
    }
  }
  return s;
}

}  // namespace uniformize::io
