#include "uniformize/uniformize.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "uniformize/config.hpp"
#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"
#include "uniformize/io.hpp"
#include "uniformize/verify.hpp"

using nlohmann::json;
using namespace uniformize;

struct uz_domain {
  DomainSpec spec;
  LevelSetDomain built;
};

struct uz_result {
  bool passed = true;
  std::string report;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

uz_status fail(uz_status s, std::string kind, std::string message) {
  g_kind = std::move(kind);
  g_error = std::move(message);
  return s;
}

template <class F>
uz_status guarded(F&& f) {
  g_error.clear();
  g_kind.clear();
  try {
    f();
    return UZ_OK;
  } catch (const Error& e) {
    const uz_status s = e.category() == ErrorCategory::Numerical ? UZ_ERR_NUMERICAL : UZ_ERR_CONTRACT;
    return fail(s, to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(UZ_ERR_CONTRACT, "parse", e.what());
  } catch (const std::bad_alloc&) {
    return fail(UZ_ERR_NUMERICAL, "out_of_memory", "out of memory");
  } catch (const std::exception& e) {
    return fail(UZ_ERR_NUMERICAL, "internal", e.what());
  }
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

json xy(Point p) { return json::array({p.real(), p.imag()}); }
json re_im(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- run configuration ------------------------------------------------------------

const std::set<std::string> kConfigKeys = {"domain", "h", "tol_iter", "tol_flux", "tol_conv", "solver",
                                           "route", "seed", "boundary", "pole", "levels", "samples",
                                           "green_input", "suite", "out"};

struct RunConfig {
  std::string command;
  DomainSpec spec;
  bool has_domain = false;
  std::filesystem::path base;
  std::optional<double> tol_iter, tol_flux, tol_conv;
  std::optional<DirichletMethod> solver;
  std::string route = "DIRECT";
  std::uint64_t seed = 1;
  std::string boundary = "re_z";
  json boundary_params = json::object();
  std::optional<Point> pole;
  std::vector<double> levels;
  int samples = 25;
  std::string green_input;
  std::string suite = "all";
};

Point point_value(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::Parse, std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double positive(const json& j, const char* key) {
  if (!j.is_number()) throw Error(ErrorCode::Parse, std::string(key) + " must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be positive");
  return v;
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() || base.empty() ? path : base / path).string();
}

RunConfig parse_run_config(const std::string& command, const char* text, const char* base_dir) {
  RunConfig c;
  c.command = command;
  if (base_dir) c.base = base_dir;
  json j;
  try {
    j = json::parse(text ? text : "{}");
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed configuration: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "configuration must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kConfigKeys.count(key)) throw Error(ErrorCode::Parse, "unknown configuration key '" + key + "'");
  }
  if (j.contains("domain")) {
    json spec = j["domain"];
    if (spec.is_string()) {
      const std::string path = resolve(c.base, spec.get<std::string>());
      try {
        spec = json::parse(io::read_file(path));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, "malformed domain spec " + path + ": " + e.what());
      }
    }
    if (j.contains("h")) spec["h"] = j["h"];
    c.spec = parse_domain_spec(spec);
    c.has_domain = true;
    const double h = c.spec.h;
    if (h < (1.0 / 1024) * (1.0 - 1e-12) || h > (1.0 / 16) * (1.0 + 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "h = " + io::format_double(h) + " outside [1/1024, 1/16]");
    }
  } else if (command != "verify") {
    throw Error(ErrorCode::Parse, "configuration needs a domain");
  }
  if (j.contains("tol_iter")) c.tol_iter = positive(j["tol_iter"], "tol_iter");
  if (j.contains("tol_flux")) c.tol_flux = positive(j["tol_flux"], "tol_flux");
  if (j.contains("tol_conv")) c.tol_conv = positive(j["tol_conv"], "tol_conv");
  if (j.contains("solver")) {
    const std::string s = j["solver"].get<std::string>();
    if (s == "SOR") c.solver = DirichletMethod::Sor;
    else if (s == "DIRECT") c.solver = DirichletMethod::Direct;
    else throw Error(ErrorCode::InvalidArgument, "solver must be SOR or DIRECT");
  }
  if (j.contains("route")) c.route = j["route"].get<std::string>();
  if (c.route != "DIRECT" && c.route != "PERRON" && c.route != "BOTH") {
    throw Error(ErrorCode::InvalidArgument, "route must be DIRECT, PERRON or BOTH");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::Parse, "seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("boundary")) {
    const json& b = j["boundary"];
    if (b.is_string()) {
      c.boundary = b.get<std::string>();
    } else if (b.is_object() && b.contains("name")) {
      c.boundary = b["name"].get<std::string>();
      if (b.contains("params")) c.boundary_params = b["params"];
    } else {
      throw Error(ErrorCode::Parse, "boundary must be a name or {name, params}");
    }
  }
  if (j.contains("pole")) c.pole = point_value(j["pole"], "pole");
  if (j.contains("levels")) {
    if (!j["levels"].is_array()) throw Error(ErrorCode::Parse, "levels must be an array");
    for (const auto& v : j["levels"]) {
      if (!v.is_number()) throw Error(ErrorCode::Parse, "levels must be numbers");
      c.levels.push_back(v.get<double>());
    }
  }
  if (j.contains("samples")) {
    c.samples = j["samples"].get<int>();
    if (c.samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be positive");
  }
  if (j.contains("green_input")) c.green_input = resolve(c.base, j["green_input"].get<std::string>());
  if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
  return c;
}

// --- commands ---------------------------------------------------------------------

json green_sidecar(const GreenResult& g) {
  double boundary = 0.0;
  for (double v : g.G.boundary) boundary = std::max(boundary, std::abs(v));
  return {{"pole", xy(g.pole)},
          {"tag", to_string(g.route)},
          {"A", g.A},
          {"B", g.B},
          {"a", g.a},
          {"sweeps", g.sweeps},
          {"residual", g.residual},
          {"chart_radius", g.chart_radius},
          {"cap_activations", g.cap_activations},
          {"min_G", g.min_G},
          {"boundary_max_abs", boundary}};
}

GreenResult compute_green(const RunConfig& c, const DomainPtr& d, Point pole, GreenRoute route) {
  if (route == GreenRoute::Direct) {
    GreenDirectOptions opt;
    opt.method = c.solver;
    return green_direct(d, pole, opt);
  }
  GreenPerronOptions opt;
  if (c.tol_iter) opt.perron.tol_iter = *c.tol_iter;
  opt.h1_method = c.solver;
  return green_perron(d, pole, opt);
}

void cmd_dirichlet(const RunConfig& c, uz_result& r) {
  const LevelSetDomain L = build_domain(c.spec);
  const DomainPtr d = L.domain;
  const BoundaryFunction bf = boundary_function(c.boundary, c.boundary_params);
  std::vector<double> data;
  data.reserve(d->crossings().size());
  for (const Crossing& x : d->crossings()) data.push_back(bf.f(x.point));
  SorOptions sor;
  if (c.tol_iter) sor.tol = *c.tol_iter;
  const auto res = solve_dirichlet(d, data, c.solver.value_or(DirichletMethod::Sor), sor);

  double lo = data.empty() ? 0.0 : data.front(), hi = lo;
  for (double v : data) lo = std::min(lo, v), hi = std::max(hi, v);
  const double umin = res.solution.min_value(), umax = res.solution.max_value();
  const double excess = std::max({0.0, lo - umin, umax - hi});
  const bool principle = excess <= 1e-8 * std::max(1.0, hi - lo);
  json report = {{"command", "dirichlet"},
                 {"boundary", c.boundary},
                 {"method", c.solver.value_or(DirichletMethod::Sor) == DirichletMethod::Direct ? "DIRECT" : "SOR"},
                 {"iterations", res.iterations},
                 {"residual", res.residual},
                 {"omega", res.omega},
                 {"level_used", L.level},
                 {"data_min", lo},
                 {"data_max", hi},
                 {"solution_min", umin},
                 {"solution_max", umax},
                 {"range_excess", excess},
                 {"maximum_principle", principle}};
  if (bf.harmonic) {
    double err = 0.0;
    for (std::size_t k = 0; k < d->interior_count(); ++k) {
      err = std::max(err, std::abs(res.solution.values[k] - bf.f(d->point(k))));
    }
    report["max_error"] = err;
  }
  report["pass"] = principle;
  r.passed = principle;
  json sidecar = io::domain_metadata(*d);
  sidecar["field"] = "u";
  sidecar["boundary"] = c.boundary;
  r.report = dump(report);
  r.artifacts = {{"solution.csv", io::grid_function_csv(res.solution)},
                 {"solution.json", dump(sidecar)},
                 {"mask.pgm", io::mask_pgm(*d)},
                 {"loops.csv", io::loops_csv(*d)},
                 {"report.json", r.report}};
}

void cmd_green(const RunConfig& c, uz_result& r) {
  const LevelSetDomain L = build_domain(c.spec);
  const DomainPtr d = L.domain;
  const Point pole = c.pole.value_or(c.spec.x0);
  json sidecar = {{"domain", io::domain_metadata(*d)}, {"route", c.route}, {"level_used", L.level}};
  auto add = [&](const GreenResult& g, const std::string& suffix) {
    r.artifacts.emplace_back("G" + suffix + ".csv", io::grid_function_csv(g.G));
    r.artifacts.emplace_back("H" + suffix + ".csv", io::grid_function_csv(g.H));
  };
  if (c.route == "BOTH") {
    const auto direct = compute_green(c, d, pole, GreenRoute::Direct);
    const auto perron = compute_green(c, d, pole, GreenRoute::Perron);
    const double diff = max_abs_difference(direct.G, perron.G);
    const double tol = 10.0 * d->h() * d->h();
    add(direct, "");
    add(perron, "_perron");
    sidecar["routes"] = json::array({green_sidecar(direct), green_sidecar(perron)});
    sidecar["cross_route_max_difference"] = diff;
    sidecar["cross_route_tolerance"] = tol;
    r.passed = diff <= tol;
  } else {
    const auto g = compute_green(c, d, pole, c.route == "PERRON" ? GreenRoute::Perron : GreenRoute::Direct);
    add(g, "");
    sidecar.update(green_sidecar(g));
  }
  sidecar["pass"] = r.passed;
  r.report = dump(sidecar);
  r.artifacts.emplace_back("green.json", r.report);
}

// G read back from CSV; H is rebuilt from it.
GreenResult green_from_csv(const DomainPtr& d, Point pole, const std::string& path) {
  GreenResult g;
  g.pole = pole;
  g.pole_node = pole_node_of(*d, pole);
  g.G = io::parse_grid_function_csv(d, io::read_file(path));
  if (g.G.puncture && g.pole_node != g.G.puncture) {
    throw Error(ErrorCode::InvalidArgument, "the node missing from the G file is not the pole");
  }
  g.G.puncture = g.pole_node;
  g.G.boundary.assign(d->crossings().size(), 0.0);
  g.H = GridFunction(d);
  for (std::size_t k = 0; k < d->interior_count(); ++k) {
    if (g.pole_node && *g.pole_node == k) continue;
    g.H.values[k] = g.G.values[k] + std::log(std::abs(d->point(k) - pole));
  }
  g.H.boundary.resize(d->crossings().size());
  for (std::size_t c = 0; c < d->crossings().size(); ++c) {
    g.H.boundary[c] = std::log(std::abs(d->crossings()[c].point - pole));
  }
  if (g.pole_node) {
    const std::size_t p = *g.pole_node;
    double sum = 0.0;
    int n = 0;
    for (Dir dir : kDirs) {
      const auto q = d->arm(p, dir).neighbor;
      if (q >= 0) sum += g.H.values[q], ++n;
    }
    g.H.values[p] = n ? sum / n : 0.0;
  }
  return g;
}

void cmd_map(const RunConfig& c, uz_result& r) {
  const LevelSetDomain L = build_domain(c.spec);
  const DomainPtr d = L.domain;
  const Point pole = c.pole.value_or(c.spec.x0);
  GreenResult g;
  if (!c.green_input.empty()) g = green_from_csv(d, pole, c.green_input);
  else g = compute_green(c, d, pole, c.route == "PERRON" ? GreenRoute::Perron : GreenRoute::Direct);
  ConjugateOptions co;
  if (c.tol_flux) co.tol_flux = *c.tol_flux;
  const MapResult m = uniformizing_map(g, co);
  const InjectivityReport inj = injectivity_scan(m, c.samples, c.seed);

  std::vector<double> modulus(m.phi.values.size()), argument(m.phi.values.size());
  for (std::size_t k = 0; k < m.phi.values.size(); ++k) {
    modulus[k] = std::abs(m.phi.values[k]);
    argument[k] = std::arg(m.phi.values[k]);
  }
  json windings = json::array();
  for (std::size_t i = 0; i < inj.targets.size(); ++i) {
    windings.push_back({{"target", re_im(inj.targets[i])}, {"winding", inj.windings[i]}});
  }
  const double tol = c.tol_flux.value_or(default_tol_flux(d->h()));
  json diag = {{"domain", io::domain_metadata(*d)},
               {"pole", xy(pole)},
               {"green_source", c.green_input.empty() ? (c.route == "PERRON" ? "PERRON" : "DIRECT") : "file"},
               {"period", m.period},
               {"period_error", std::abs(m.period + 2.0 * std::numbers::pi)},
               {"tol_flux", tol},
               {"cr_residual", m.diagnostics.cr_residual},
               {"derivative", re_im(m.d)},
               {"conformal_radius", m.r},
               {"boundary_modulus_min", m.diagnostics.boundary_modulus_min},
               {"boundary_modulus_max", m.diagnostics.boundary_modulus_max},
               {"max_modulus", m.diagnostics.max_modulus},
               {"degree_samples", m.diagnostics.degree_samples},
               {"injectivity",
                {{"pass", inj.pass},
                 {"samples", windings},
                 {"min_distance", inj.min_distance},
                 {"threshold", inj.threshold},
                 {"nodes_sampled", inj.nodes_sampled}}},
               {"seed", c.seed},
               {"images",
                {{"modulus.pgm", {{"lo", 0.0}, {"hi", 1.0}}},
                 {"arg.pgm", {{"lo", -std::numbers::pi}, {"hi", std::numbers::pi}}}}}};
  r.passed = inj.pass;
  diag["pass"] = r.passed;
  r.report = dump(diag);
  r.artifacts = {{"phi.csv", io::complex_field_csv(m.phi)},
                 {"diagnostics.json", r.report},
                 {"modulus.pgm", io::values_pgm(*d, modulus, 0.0, 1.0)},
                 {"arg.pgm", io::values_pgm(*d, argument, -std::numbers::pi, std::numbers::pi)}};
}

void cmd_exhaust(const RunConfig& c, uz_result& r) {
  if (c.levels.empty()) throw Error(ErrorCode::InvalidArgument, "exhaust needs levels");
  ExhaustionConfig cfg;
  cfg.pole = c.pole;
  if (c.tol_conv) cfg.tol_conv = *c.tol_conv;
  const auto rep = run_exhaustion(level_spec(c.spec), c.levels, grid_of(c.spec), cfg);
  json levels = json::array();
  for (const auto& l : rep.levels) {
    levels.push_back({{"level", l.level},
                      {"r", l.r},
                      {"delta", l.delta},
                      {"sweeps", l.sweeps},
                      {"nodes", l.nodes},
                      {"perturbation_steps", l.perturbation_steps}});
  }
  json summary = {{"command", "exhaust"},
                  {"verdict", to_string(rep.verdict)},
                  {"radius_monotone", rep.radius_monotone},
                  {"levels", levels.size()},
                  {"final_r", rep.levels.empty() ? 0.0 : rep.levels.back().r},
                  {"k0_samples", rep.samples.size()},
                  {"pass", true}};
  r.report = dump(summary);
  r.artifacts = {{"exhaustion.json", dump(levels)}, {"report.json", r.report}};
}

void cmd_verify(const RunConfig& c, uz_result& r) {
  const auto suites = verify::run(c.suite, c.seed);
  const json j = verify::report_json(c.suite, c.seed, suites);
  r.passed = j["pass"].get<bool>();
  r.report = dump(j);
  r.artifacts = {{"verify.json", r.report}};
}

}  // namespace

extern "C" {

UZ_API const char* uz_version(void) { return "1.0.0"; }

UZ_API const char* uz_last_error(void) { return g_error.c_str(); }

UZ_API const char* uz_last_error_kind(void) { return g_kind.c_str(); }

UZ_API void uz_string_free(char* s) { delete[] s; }

UZ_API uz_status uz_domain_create(const char* spec_json, uz_domain** out) {
  if (!out) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null output handle");
  *out = nullptr;
  if (!spec_json) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null spec");
  return guarded([&] {
    json j;
    try {
      j = json::parse(spec_json);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Parse, std::string("malformed domain spec: ") + e.what());
    }
    auto d = std::make_unique<uz_domain>();
    d->spec = parse_domain_spec(j);
    d->built = build_domain(d->spec);
    *out = d.release();
  });
}

UZ_API void uz_domain_free(uz_domain* d) { delete d; }

UZ_API uz_status uz_domain_info(const uz_domain* d, char** json_out) {
  if (!d || !json_out) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null argument");
  return guarded([&] {
    const GridDomain& g = *d->built.domain;
    json j = io::domain_metadata(g);
    j["level_used"] = d->built.level;
    j["perturbation_steps"] = d->built.perturbation_steps;
    j["saddle_nodes"] = d->built.saddle_nodes;
    j["euler_characteristic"] = euler_characteristic(g);
    j["boundary_components"] = boundary_component_count(g);
    *json_out = dup_string(j.dump());
  });
}

UZ_API size_t uz_domain_interior_count(const uz_domain* d) { return d ? d->built.domain->interior_count() : 0; }

UZ_API uz_status uz_domain_export(const uz_domain* d, const char* dir) {
  if (!d || !dir) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null argument");
  return guarded([&] {
    const std::filesystem::path base(dir);
    io::write_atomic((base / "mask.pgm").string(), io::mask_pgm(*d->built.domain));
    io::write_atomic((base / "loops.csv").string(), io::loops_csv(*d->built.domain));
  });
}

UZ_API uz_status uz_run(const char* command, const char* config_json, const char* base_dir, uz_result** out) {
  if (!out) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null output handle");
  *out = nullptr;
  if (!command) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null command");
  return guarded([&] {
    const std::string cmd(command);
    const RunConfig c = parse_run_config(cmd, config_json, base_dir);
    auto r = std::make_unique<uz_result>();
    if (cmd == "dirichlet") cmd_dirichlet(c, *r);
    else if (cmd == "green") cmd_green(c, *r);
    else if (cmd == "map") cmd_map(c, *r);
    else if (cmd == "exhaust") cmd_exhaust(c, *r);
    else if (cmd == "verify") cmd_verify(c, *r);
    else throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd + "'");
    *out = r.release();
  });
}

UZ_API void uz_result_free(uz_result* r) { delete r; }

UZ_API int uz_result_passed(const uz_result* r) { return r && r->passed ? 1 : 0; }

UZ_API const char* uz_result_report(const uz_result* r) { return r ? r->report.c_str() : ""; }

UZ_API size_t uz_result_artifact_count(const uz_result* r) { return r ? r->artifacts.size() : 0; }

UZ_API const char* uz_result_artifact_name(const uz_result* r, size_t i) {
  return r && i < r->artifacts.size() ? r->artifacts[i].first.c_str() : nullptr;
}

UZ_API const char* uz_result_artifact_data(const uz_result* r, size_t i, size_t* size) {
  if (!r || i >= r->artifacts.size()) {
    if (size) *size = 0;
    return nullptr;
  }
  if (size) *size = r->artifacts[i].second.size();
  return r->artifacts[i].second.data();
}

UZ_API uz_status uz_result_write(const uz_result* r, const char* dir) {
  if (!r || !dir) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null argument");
  return guarded([&] {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    for (const auto& [name, data] : r->artifacts) io::write_atomic((base / name).string(), data);
  });
}

UZ_API uz_status uz_verify_suites(char** json_out) {
  if (!json_out) return fail(UZ_ERR_CONTRACT, "invalid_argument", "null argument");
  return guarded([&] { *json_out = dup_string(json(verify::suite_names()).dump()); });
}

}  // extern "C"
