#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <random>

#include "satsp/io.hpp"

using namespace satsp;
namespace fs = std::filesystem;

TEST_CASE("real formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10'000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 40 - 20);
    const std::string s = format_real(x);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(3.0) == "3");
}

TEST_CASE("files, sidecars and errors") {
  const fs::path dir = fs::temp_directory_path() / "satsp_io_test" / "nested";
  fs::remove_all(dir.parent_path());
  const fs::path file = dir / "samples.csv";
  write_samples_csv(file, std::vector<double>{0.25, 1.0 / 3});
  CHECK(read_text_file(file) == "sample_index,J\n0,0.25\n1,0.3333333333333333\n");
  CHECK(sidecar_path(file) == dir / "samples.csv.meta.json");
  CHECK_THROWS_AS(read_text_file(dir / "missing.csv"), IoError);
  fs::remove_all(dir.parent_path());
}
