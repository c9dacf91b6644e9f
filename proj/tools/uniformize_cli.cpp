// uniformize <dirichlet|green|map|exhaust|verify> --config <path> [--out <dir>]
//            [--h <real>] [--route <DIRECT|PERRON|BOTH>] [--seed <u64>]
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "uniformize/uniformize.h"

namespace {

constexpr int kContract = UZ_ERR_CONTRACT;

int report_error(int status) {
  std::cerr << "uniformize: " << uz_last_error() << "\n";
  return status;
}

// Accepts decimals and fractions such as 1/64.
bool parse_h(const std::string& text, double& h) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      h = std::stod(text, &used);
      return used == text.size();
    }
    const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    std::size_t u1 = 0, u2 = 0;
    const double a = std::stod(num, &u1), b = std::stod(den, &u2);
    h = a / b;
    return u1 == num.size() && u2 == den.size() && b != 0.0;
  } catch (const std::exception&) {
    return false;
  }
}

void print_verify(const nlohmann::json& report) {
  for (const auto& s : report["suites"]) {
    std::cout << (s["pass"].get<bool>() ? "PASS " : "FAIL ") << s["suite"].get<std::string>() << "\n";
    for (const auto& c : s["checks"]) {
      if (!c["pass"].get<bool>()) std::cout << "  failed: " << c["name"].get<std::string>() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical uniformization of planar level-set domains"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  std::string config_path, out_dir, h_text, route, suite;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "run configuration (JSON)");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--h", h_text, "grid step, in [1/1024, 1/16]");
    sub->add_option("--route", route, "Green route")->check(CLI::IsMember({"DIRECT", "PERRON", "BOTH"}));
    sub->add_option("--seed", seed, "sampling seed");
  };
  for (const char* name : {"dirichlet", "green", "map", "exhaust"}) {
    add_common(app.add_subcommand(name, std::string("run ") + name), true);
  }
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, false);
  verify->add_option("suite", suite, "suite name or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kContract;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;

  nlohmann::json config = nlohmann::json::object();
  std::string base_dir;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "uniformize: io: cannot read " << config_path << "\n";
      return kContract;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      config = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "uniformize: parse: " << config_path << ": " << e.what() << "\n";
      return kContract;
    }
    if (!config.is_object()) {
      std::cerr << "uniformize: parse: configuration must be a JSON object\n";
      return kContract;
    }
    base_dir = std::filesystem::path(config_path).parent_path().string();
  }
  if (!h_text.empty()) {
    double h = 0.0;
    if (!parse_h(h_text, h)) {
      std::cerr << "uniformize: parse: --h expects a number, got '" << h_text << "'\n";
      return kContract;
    }
    config["h"] = h;
  }
  if (!route.empty()) config["route"] = route;
  if (seed_given) config["seed"] = seed;
  if (!suite.empty()) config["suite"] = suite;
  if (out_dir.empty()) {
    out_dir = config.contains("out") && config["out"].is_string() ? config["out"].get<std::string>() : "uniformize_out";
  }

  uz_result* result = nullptr;
  const std::string text = config.dump();
  int status = uz_run(command.c_str(), text.c_str(), base_dir.empty() ? nullptr : base_dir.c_str(), &result);
  if (status != UZ_OK) return report_error(status);

  status = uz_result_write(result, out_dir.c_str());
  if (status != UZ_OK) {
    uz_result_free(result);
    return report_error(status);
  }
  const bool passed = uz_result_passed(result) != 0;
  if (command == "verify") {
    print_verify(nlohmann::json::parse(uz_result_report(result)));
  }
  std::cout << command << ": " << (passed ? "PASS" : "FAIL") << " (" << uz_result_artifact_count(result)
            << " files in " << out_dir << ")\n";
  uz_result_free(result);
  return passed ? 0 : UZ_ERR_NUMERICAL;
}
