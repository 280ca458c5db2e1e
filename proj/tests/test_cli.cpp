#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "satsp/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = SATSP_CLI_WORKDIR;

int satsp_cli(const std::string& args) {
  const std::string command = std::string("\"") + SATSP_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string dir(const std::string& name) {
  const fs::path p = kWork / name;
  fs::remove_all(p);
  return "\"" + p.string() + "\"";
}

std::string contents(const std::string& sub, const std::string& file) {
  return satsp::read_text_file(kWork / sub / file);
}

// Runs `args` into two directories and replays the first run's sidecar into a third.
void check_reproducible(const std::string& tag, const std::string& args, const std::vector<std::string>& files) {
  REQUIRE(satsp_cli("--out " + dir(tag + "_a") + " " + args) == 0);
  REQUIRE(satsp_cli("--out " + dir(tag + "_b") + " " + args) == 0);
  const fs::path meta = kWork / (tag + "_a") / (files.front() + ".meta.json");
  REQUIRE(fs::exists(meta));
  REQUIRE(satsp_cli("--from-meta \"" + meta.string() + "\" --out " + dir(tag + "_c")) == 0);
  for (const auto& f : files) {
    CAPTURE(f);
    CHECK(fs::exists(kWork / (tag + "_a") / (f + ".meta.json")));
    CHECK(contents(tag + "_a", f) == contents(tag + "_b", f));
    CHECK(contents(tag + "_a", f) == contents(tag + "_c", f));
  }
}

}  // namespace

TEST_CASE("bounds reports the expected cost lower bound") {
  REQUIRE(satsp_cli("bounds --n 100 --beta 10 --out " + dir("bounds")) == 0);
  const auto report = json::parse(contents("bounds", "bounds.json"));
  CHECK(std::abs(report.at("expected_cost_lower").get<double>() - 9.99546) < 1e-5);
  CHECK(report.at("input").at("n") == "100");
  CHECK_FALSE(report.contains("expected_partition"));  // n > 20 reports only the log
}

TEST_CASE("oracle-verify passes every check") {
  REQUIRE(satsp_cli("oracle-verify --n 5 --beta 2 --seed 7 --out " + dir("verify")) == 0);
  const auto report = json::parse(contents("verify", "oracle_verify.json"));
  CHECK(report.at("all_passed") == true);
  CHECK(report.at("checks").size() > 10);
  for (const auto& c : report.at("checks")) CHECK(c.at("passed") == true);
}

TEST_CASE("data files are byte-identical across runs and sidecar replays") {
  check_reproducible("gen", "--seed 4 gen --n 30 --grid 50", {"instance.csv"});
  check_reproducible("genj", "--seed 4 --format json gen --n 12", {"instance.json"});
  check_reproducible("anneal", "--seed 5 anneal --n 9 --steps 30000 --record-every 7", {"anneal_trace.csv"});
  check_reproducible("epoch", "--seed 5 anneal --n 6 --schedule epoch --epochs 3 --c 1e-5 --lazy",
                     {"anneal_trace.csv"});
  check_reproducible("quenched", "--seed 6 --threads 2 sample-quenched --n 8 --beta 1.5 --count 40",
                     {"quenched.csv"});
  check_reproducible("annealed", "--seed 6 sample-annealed --n 8 --grid 10 --beta 3 --thinning 50 --count 200",
                     {"annealed.csv"});
  check_reproducible("exact", "--seed 6 --format json sample-annealed --n 30 --beta 3 --count 500 --exact",
                     {"annealed.json"});
  check_reproducible("cdf", "cdf --n 6 --beta 0.5 --points 31", {"cdf.csv"});
  check_reproducible("fig1",
                     "--seed 2 fig1 --n 12 --samples 150 --thinning 100 --quenched-burn-in 5000 "
                     "--annealed-burn-in 100000",
                     {"fig1_quenched_ecdf.csv", "fig1_annealed_ecdf.csv", "fig1_quenched_samples.csv",
                      "fig1_annealed_samples.csv", "fig1_dominance.json"});
}

TEST_CASE("thread count does not change quenched samples") {
  REQUIRE(satsp_cli("--seed 9 --threads 1 sample-quenched --n 7 --beta 2 --count 30 --out " + dir("t1")) == 0);
  REQUIRE(satsp_cli("--seed 9 --threads 3 sample-quenched --n 7 --beta 2 --count 30 --out " + dir("t3")) == 0);
  CHECK(contents("t1", "quenched.csv") == contents("t3", "quenched.csv"));
}

TEST_CASE("a different seed changes the data") {
  REQUIRE(satsp_cli("--seed 1 sample-quenched --n 7 --beta 2 --count 30 --out " + dir("s1")) == 0);
  REQUIRE(satsp_cli("--seed 2 sample-quenched --n 7 --beta 2 --count 30 --out " + dir("s2")) == 0);
  CHECK(contents("s1", "quenched.csv") != contents("s2", "quenched.csv"));
}

TEST_CASE("fig1 at small scale orders the two laws") {
  REQUIRE(satsp_cli("--seed 1 fig1 --n 20 --samples 400 --thinning 200 --quenched-burn-in 20000 "
                    "--annealed-burn-in 2000000 --out " + dir("fig1_small")) == 0);
  const auto report = json::parse(contents("fig1_small", "fig1_dominance.json"));
  CHECK(report.at("passed") == true);
  CHECK(report.at("mean_quenched").get<double>() > report.at("mean_annealed").get<double>());
}

TEST_CASE("dominance reads sample files") {
  REQUIRE(satsp_cli("--seed 3 sample-quenched --n 10 --beta 4 --count 300 --out " + dir("dom")) == 0);
  REQUIRE(satsp_cli("--seed 3 sample-annealed --n 10 --beta 4 --count 300 --exact --out " +
                    (kWork / "dom").string()) == 0);
  const std::string d = (kWork / "dom").string();
  REQUIRE(satsp_cli("dominance --quenched " + d + "/quenched.csv --annealed " + d + "/annealed.csv --out " + d) == 0);
  const auto report = json::parse(contents("dom", "dominance.json"));
  CHECK(report.at("count_q") == 300);
  CHECK(report.at("passed") == true);
}

TEST_CASE("exit codes") {
  CHECK(satsp_cli("") == 1);
  CHECK(satsp_cli("bounds --beta 1") == 1);                            // missing --n
  CHECK(satsp_cli("--format xml bounds --n 5 --beta 1") == 1);         // bad choice
  CHECK(satsp_cli("bounds --n 5 --beta 1 --a 2 --t 10") == 1);         // conflicting modes
  CHECK(satsp_cli("sample-quenched --n 5 --beta -1") == 1);
  CHECK(satsp_cli("--help") == 0);
  CHECK(satsp_cli("dominance --quenched /nonexistent/q.csv --annealed /nonexistent/a.csv") == 2);
  CHECK(satsp_cli("--from-meta /nonexistent/x.meta.json") == 2);
  CHECK(satsp_cli("--out /proc/satsp_no_such_dir bounds --n 5 --beta 1") == 2);
  CHECK(satsp_cli("anneal --n 100 --schedule epoch --c 1e30 --out " + dir("overflow")) == 3);
}
