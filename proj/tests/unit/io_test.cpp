#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "lrdcp/error.hpp"
#include "lrdcp/io.hpp"
#include "lrdcp/rng.hpp"

using namespace lrdcp;

TEST_CASE("series csv parsing") {
  CHECK(io::parse_series_csv("1\n2.5\n\n-3e-1\n") == std::vector<double>{1.0, 2.5, -0.3});
  CHECK(io::parse_series_csv("1\r\n2\r\n") == std::vector<double>{1.0, 2.0});
  try {
    io::parse_series_csv("1\n2\nabc\n4\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_series_csv("1\nnan\n"), ParseError);
  CHECK_THROWS_AS(io::parse_series_csv("1\n2 3\n"), ParseError);
}

TEST_CASE("csv formatting round trips exactly") {
  const std::vector<double> v{0.1, 1.0 / 3.0, -2.5e-300, 12345678.9};
  CHECK(io::parse_series_csv(io::format_series_csv(v)) == v);
}

TEST_CASE("atomic write replaces the file and leaves no temporaries") {
  const auto dir = std::filesystem::temp_directory_path() / "lrdcp_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  CHECK(io::read_file(path) == "second");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), IoError);
  CHECK_THROWS_AS(io::write_file_atomic(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  CHECK(real_tag(0.7) == real_tag(0.70000000000001));
  CHECK(real_tag(0.7) != real_tag(0.71));
}

TEST_CASE("parallel_for results do not depend on the thread count") {
  std::vector<double> a(1000), b(1000);
  set_thread_limit(1);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = static_cast<double>(derive_seed(9, {i}) % 1000); });
  set_thread_limit(4);
  parallel_for(b.size(), [&](std::size_t i) {
    std::vector<double> inner(3);
    parallel_for(3, [&](std::size_t j) { inner[j] = static_cast<double>(j); });
    b[i] = static_cast<double>(derive_seed(9, {i}) % 1000) + inner[0];
  });
  set_thread_limit(0);
  CHECK(a == b);
}
