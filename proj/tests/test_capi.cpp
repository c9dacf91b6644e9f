#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "uniformize/uniformize.h"

using nlohmann::json;

namespace {

const char* kDisk =
    R"({"level": {"expr": "disk", "params": {}}, "a": 1.0, "x0": [0, 0], "h": 0.0625, "box": [-1.3, -1.3, 1.3, 1.3]})";

std::string take(char* s) {
  std::string out = s ? s : "";
  uz_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("domain handles") {
  uz_domain* d = nullptr;
  REQUIRE(uz_domain_create(kDisk, &d) == UZ_OK);
  CHECK(uz_domain_interior_count(d) > 0);
  char* info = nullptr;
  REQUIRE(uz_domain_info(d, &info) == UZ_OK);
  const auto meta = json::parse(take(info));
  CHECK(meta.is_object());
  uz_domain_free(d);
  uz_domain_free(nullptr);
}

TEST_CASE("contract errors carry a message") {
  uz_domain* d = nullptr;
  CHECK(uz_domain_create("{not json", &d) == UZ_ERR_CONTRACT);
  CHECK(d == nullptr);
  CHECK(std::strlen(uz_last_error()) > 0);
  const char* outside =
      R"({"level": {"expr": "disk", "params": {}}, "a": 1.0, "x0": [3, 0], "h": 0.0625, "box": [-3.5, -3.5, 3.5, 3.5]})";
  CHECK(uz_domain_create(outside, &d) == UZ_ERR_CONTRACT);
  CHECK(std::string(uz_last_error_kind()).size() > 0);
  uz_result* r = nullptr;
  CHECK(uz_run("nosuch", "{}", ".", &r) == UZ_ERR_CONTRACT);
  CHECK(uz_run("green", R"({"domain": {}, "colour": 1})", ".", &r) == UZ_ERR_CONTRACT);
}

TEST_CASE("dirichlet run through the C interface") {
  const json cfg = {{"domain", json::parse(kDisk)}, {"boundary", "re_z"}};
  uz_result* r = nullptr;
  REQUIRE(uz_run("dirichlet", cfg.dump().c_str(), ".", &r) == UZ_OK);
  CHECK(uz_result_passed(r) == 1);
  const auto report = json::parse(uz_result_report(r));
  CHECK(report.at("maximum_principle").get<bool>());
  bool found = false;
  for (std::size_t i = 0; i < uz_result_artifact_count(r); ++i) {
    if (std::string(uz_result_artifact_name(r, i)) == "solution.csv") {
      std::size_t n = 0;
      const char* data = uz_result_artifact_data(r, i, &n);
      found = n > 0 && std::string(data, n).rfind("i,j,x,y,value", 0) == 0;
    }
  }
  CHECK(found);
  const auto dir = std::filesystem::temp_directory_path() / "uniformize_capi_test";
  std::filesystem::remove_all(dir);
  REQUIRE(uz_result_write(r, dir.string().c_str()) == UZ_OK);
  CHECK(std::filesystem::exists(dir / "solution.csv"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  std::filesystem::remove_all(dir);
  uz_result_free(r);
}

TEST_CASE("green run reports zero boundary values") {
  const json cfg = {{"domain", json::parse(kDisk)}};
  uz_result* r = nullptr;
  REQUIRE(uz_run("green", cfg.dump().c_str(), ".", &r) == UZ_OK);
  const auto report = json::parse(uz_result_report(r));
  CHECK(report.at("boundary_max_abs").get<double>() == 0.0);
  CHECK(report.at("tag") == "DIRECT");
  uz_result_free(r);
}

TEST_CASE("pole too close to the boundary is a contract error") {
  const json cfg = {{"domain", json::parse(kDisk)}, {"pole", {0.9, 0.0}}};
  uz_result* r = nullptr;
  CHECK(uz_run("green", cfg.dump().c_str(), ".", &r) == UZ_ERR_CONTRACT);
  CHECK(std::string(uz_last_error()).find("clearance") != std::string::npos);
}

TEST_CASE("suite listing and version") {
  CHECK(std::strlen(uz_version()) > 0);
  char* s = nullptr;
  REQUIRE(uz_verify_suites(&s) == UZ_OK);
  const auto suites = json::parse(take(s));
  CHECK(suites.is_array());
  CHECK(suites.size() == 11);
}
