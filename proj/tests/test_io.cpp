#include <filesystem>

#include "doctest.h"
#include "helpers.hpp"
#include "uniformize/error.hpp"
#include "uniformize/io.hpp"

using namespace uniformize;
using namespace testing_support;

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02e23, -1e-300, 123456.789}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("grid function csv round-trips with a puncture") {
  const double h = 1.0 / 16;
  const auto L = disk(1.0, h);
  auto u = GridFunction::sample(L.domain, [](Point z) { return std::sin(3.0 * z.real()) + z.imag() / 3.0; });
  u.puncture = L.domain->interior_count() / 2;
  const auto text = io::grid_function_csv(u);
  const auto back = io::parse_grid_function_csv(L.domain, text);
  CHECK(back.puncture == u.puncture);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (u.available(static_cast<std::ptrdiff_t>(k))) REQUIRE(back.values[k] == u.values[k]);
  }
  CHECK(io::grid_function_csv(back) == text);
}

TEST_CASE("malformed csv is rejected") {
  const auto L = disk(1.0, 1.0 / 16);
  CHECK_THROWS_AS(io::parse_grid_function_csv(L.domain, "i,j,x,y,value\n1,2,oops\n"), Error);
}

TEST_CASE("pgm images have one byte per node") {
  const double h = 1.0 / 16;
  const auto L = disk(1.0, h);
  const auto& g = L.domain->grid();
  const auto pgm = io::mask_pgm(*L.domain);
  const std::string header = "P5\n" + std::to_string(g.cols()) + " " + std::to_string(g.rows()) + "\n255\n";
  CHECK(pgm.rfind(header, 0) == 0);
  CHECK(pgm.size() == header.size() + g.node_count());
  std::vector<double> v(L.domain->interior_count(), 1.0);
  CHECK(io::values_pgm(*L.domain, v, 0.0, 1.0).size() == pgm.size());
}

TEST_CASE("atomic writes replace the file") {
  const auto dir = std::filesystem::temp_directory_path() / "uniformize_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  io::write_atomic(path, "first");
  io::write_atomic(path, "second");
  CHECK(io::read_file(path) == "second");
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("loop csv lists every crossing once") {
  const auto L = disk(1.0, 1.0 / 16);
  const auto csv = io::loops_csv(*L.domain);
  const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines >= L.domain->crossings().size());
  CHECK(lines <= L.domain->crossings().size() + 2);
}
