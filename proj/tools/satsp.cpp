// satsp: command-line driver for the annealing experiments.
//
// Every data file is accompanied by "<file>.meta.json" holding the full
// effective configuration. `satsp --from-meta FILE.meta.json [--out DIR]`
// replays that configuration.
//
// Exit codes: 0 success, 1 usage or invalid configuration, 2 I/O, 3 numerical
// failure (including failed oracle checks).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "satsp/analytic.hpp"
#include "satsp/chain.hpp"
#include "satsp/experiment.hpp"
#include "satsp/instance.hpp"
#include "satsp/io.hpp"
#include "satsp/neighborhood.hpp"
#include "satsp/oracle.hpp"
#include "satsp/quadrature.hpp"
#include "satsp/rng.hpp"
#include "satsp/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised after the report is written when a run completes but a numerical check fails.
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string out = ".";
  int threads = 1;
  std::string format = "csv";
  std::string from_meta;
};

struct Context {
  Globals globals;
  std::string command;
  json config = json::object();
  json results = json::object();
  std::vector<std::string> outputs;

  fs::path path(const std::string& name) const { return fs::path(globals.out) / name; }
  bool as_json() const { return globals.format == "json"; }
  std::string ext() const { return as_json() ? ".json" : ".csv"; }

  void emit(const std::string& name, const std::string& text) {
    satsp::write_text_file(path(name), text);
    outputs.push_back(name);
  }

  // One sidecar per output; written last so it can carry results.
  void write_sidecars() const {
    json meta;
    meta["tool"] = "satsp";
    meta["command"] = command;
    meta["global"] = {{"seed", std::to_string(globals.seed)},
                      {"threads", std::to_string(globals.threads)},
                      {"format", globals.format}};
    meta["config"] = config;
    meta["outputs"] = outputs;
    meta["results"] = results;
    for (const auto& name : outputs) {
      json copy = meta;
      copy["output"] = name;
      satsp::write_text_file(satsp::sidecar_path(path(name)), copy.dump(2) + "\n");
    }
  }
};

std::string samples_text(const Context& ctx, const std::vector<double>& samples) {
  std::ostringstream out;
  if (ctx.as_json()) {
    out << json{{"samples", samples}}.dump() << '\n';
  } else {
    out << "sample_index,J\n";
    for (std::size_t i = 0; i < samples.size(); ++i) out << i << ',' << satsp::format_real(samples[i]) << '\n';
  }
  return out.str();
}

std::string ecdf_text(const Context& ctx, const satsp::EmpiricalCdf& f) {
  std::ostringstream out;
  if (ctx.as_json()) {
    json j = json::array();
    json F = json::array();
    for (const auto& [x, y] : f.steps()) {
      j.push_back(x);
      F.push_back(y);
    }
    out << json{{"j", j}, {"F", F}}.dump() << '\n';
  } else {
    f.write_csv(out);
  }
  return out.str();
}

json tour_json(const satsp::Tour& tour) { return tour.order(); }

json dominance_json(const satsp::DominanceReport& r) {
  return {{"gap", r.gap},
          {"band_q", r.band_q},
          {"band_a", r.band_a},
          {"delta", r.delta},
          {"count_q", r.count_q},
          {"count_a", r.count_a},
          {"rule", "dominance accepted when sup(Fq - Fa) <= dkw(count_q) + dkw(count_a)"},
          {"passed", r.passed}};
}

// Samples from "sample_index,J" CSV (second column) or {"samples": [...]} JSON.
std::vector<double> read_samples(const std::string& file) {
  const std::string text = satsp::read_text_file(file);
  std::vector<double> values;
  if (fs::path(file).extension() == ".json") {
    try {
      values = json::parse(text).at("samples").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw satsp::IoError("malformed samples file " + file + ": " + e.what());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      try {
        values.push_back(std::stod(comma == std::string::npos ? line : line.substr(comma + 1)));
      } catch (const std::exception&) {
        throw satsp::IoError("malformed samples file " + file + ": " + line);
      }
    }
  }
  if (values.empty()) throw satsp::IoError("no samples in " + file);
  return values;
}

satsp::WeightModel model_for(int grid) {
  return grid > 0 ? satsp::WeightModel::discrete_grid(grid) : satsp::WeightModel::uniform();
}

// ---------------------------------------------------------------------------
// Commands

struct GenArgs {
  int n = 0;
  int grid = 0;
  std::string output;
};

void cmd_gen(Context& ctx, const GenArgs& args) {
  const auto inst = satsp::generate(args.n, model_for(args.grid), ctx.globals.seed);
  std::string name = args.output.empty() ? "instance" + ctx.ext() : args.output;
  if (ctx.as_json()) {
    ctx.emit(name, satsp::to_json(inst) + "\n");
  } else {
    std::ostringstream out;
    out << "i,j,w\n";
    for (int i = 0; i < args.n; ++i)
      for (int j = i + 1; j < args.n; ++j) out << i << ',' << j << ',' << satsp::format_real(inst.weight(i, j)) << '\n';
    ctx.emit(name, out.str());
  }
}

struct AnnealArgs {
  int n = 0;
  int grid = 0;
  std::string instance;
  std::string schedule = "log";
  double a = 0;
  double temperature = 1;
  int epochs = 3;
  double c = 1;
  std::uint64_t steps = 0;
  std::uint64_t record_every = 100;
  bool lazy = false;
  std::string start = "random";
  std::string output;
};

void cmd_anneal(Context& ctx, const AnnealArgs& args) {
  const std::uint64_t seed = ctx.globals.seed;
  std::optional<satsp::Instance> inst;
  if (!args.instance.empty()) {
    try {
      inst.emplace(satsp::instance_from_json(satsp::read_text_file(args.instance)));
    } catch (const json::exception& e) {
      throw satsp::IoError("malformed instance " + args.instance + ": " + e.what());
    }
  } else {
    if (args.n < 4) throw UsageError("anneal needs --n >= 4 or --instance");
    inst.emplace(satsp::generate(args.n, model_for(args.grid), seed));
  }
  const int n = inst->n();
  const double a = args.a > 0 ? args.a : n;

  std::optional<satsp::CoolingSchedule> schedule;
  std::uint64_t steps = args.steps;
  if (args.schedule == "log") {
    schedule = satsp::CoolingSchedule::logarithmic(a);
  } else if (args.schedule == "constant") {
    schedule = satsp::CoolingSchedule::constant(args.temperature);
  } else {
    auto plan = satsp::epoch_schedule_from_theorem(n, a, args.epochs, args.c);
    if (steps == 0) {
      if (plan.total_iterations > 1e10L)
        throw UsageError("epoch plan has too many iterations; pass --steps or lower --c");
      steps = static_cast<std::uint64_t>(plan.total_iterations);
    }
    ctx.results["epoch_lengths"] = plan.epoch_lengths;
    schedule = std::move(plan.schedule);
  }
  if (steps == 0) steps = 100'000;

  satsp::Rng start_rng(satsp::derive_seed(seed, 1));
  const satsp::Tour x0 = args.start == "identity" ? satsp::Tour::identity(n) : satsp::random_tour(n, start_rng);
  const auto trace = satsp::simulated_annealing(*inst, *schedule, steps, x0, satsp::derive_seed(seed, 2),
                                                {args.record_every, args.lazy});

  std::string name = args.output.empty() ? "anneal_trace" + ctx.ext() : args.output;
  std::ostringstream out;
  if (ctx.as_json()) {
    json accepted = json::array();
    for (char c : trace.accepted) accepted.push_back(c != 0);
    out << json{{"step", trace.steps}, {"J", trace.lengths}, {"accepted", accepted}}.dump() << '\n';
  } else {
    trace.write_csv(out);
  }
  ctx.emit(name, out.str());

  ctx.results["schedule"] = json::parse(schedule->to_json());
  ctx.results["iterations"] = trace.iterations;
  ctx.results["accepted_total"] = trace.accepted_total;
  ctx.results["initial_tour"] = tour_json(x0);
  ctx.results["final_tour"] = tour_json(trace.final_tour);
  ctx.results["final_length"] = trace.final_length;
  ctx.results["final_temperature"] = schedule->temperature(steps - 1);
  if (args.schedule == "log") {
    const auto b = satsp::schedule_bounds<double>(n, a, static_cast<double>(steps));
    ctx.results["schedule_bounds"] = {{"expected_cost_lower", b.expected_cost_lower},
                                      {"variance_upper_loose", b.variance_upper_loose},
                                      {"variance_upper_tight", b.variance_upper_tight}};
  }
  std::cout << ctx.results.dump(2) << '\n';
}

struct QuenchedArgs {
  int n = 0;
  int grid = 0;
  double beta = 0;
  std::uint64_t burn_in = 0;
  std::int64_t count = 1000;
  std::string output;
};

void cmd_sample_quenched(Context& ctx, const QuenchedArgs& args) {
  const std::uint64_t burn_in = args.burn_in > 0 ? args.burn_in : satsp::default_burn_in(args.n);
  const auto samples = satsp::quenched_samples(args.n, model_for(args.grid), args.beta, burn_in, args.count,
                                               ctx.globals.seed, ctx.globals.threads);
  ctx.emit(args.output.empty() ? "quenched" + ctx.ext() : args.output, samples_text(ctx, samples));
  const auto m = satsp::mean_estimate(samples);
  ctx.results = {{"burn_in", burn_in}, {"mean", m.mean}, {"std_error", m.std_error}};
}

struct AnnealedArgs {
  int n = 0;
  int grid = 50;
  double beta = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1000;
  std::int64_t count = 1000;
  bool exact = false;
  std::string output;
};

void cmd_sample_annealed(Context& ctx, const AnnealedArgs& args) {
  std::vector<double> samples;
  if (args.exact) {
    samples = satsp::annealed_exact_sample(args.n, args.beta, args.count, ctx.globals.seed);
    ctx.results["method"] = "exact tilted-edge sampler (continuous weights)";
  } else {
    const std::uint64_t burn_in = args.burn_in > 0 ? args.burn_in : satsp::default_burn_in(args.n);
    samples = satsp::annealed_mh_sample(args.n, args.grid, args.beta, burn_in, args.thinning, args.count,
                                        ctx.globals.seed);
    ctx.results["method"] = "extended-state Metropolis chain on the weight grid";
    ctx.results["burn_in"] = burn_in;
    ctx.results["batch_means"] = {{"mean", satsp::batch_means(samples).mean},
                                  {"std_error", satsp::batch_means(samples).std_error}};
  }
  ctx.emit(args.output.empty() ? "annealed" + ctx.ext() : args.output, samples_text(ctx, samples));
  const auto m = satsp::mean_estimate(samples);
  ctx.results["mean"] = m.mean;
  ctx.results["std_error"] = m.std_error;
}

struct BoundsArgs {
  int n = 0;
  double beta = 0;
  double a = 0;
  double t = 0;
  double eps = 0.25;
  std::string output = "bounds.json";
};

void cmd_bounds(Context& ctx, const BoundsArgs& args) {
  const bool scheduled = args.a > 0 || args.t > 0;
  if (scheduled == (args.beta > 0)) throw UsageError("bounds needs either --beta or both --a and --t");
  if (scheduled && !(args.a > 0 && args.t > 0)) throw UsageError("bounds needs both --a and --t");
  const auto r = scheduled ? satsp::schedule_bounds<double>(args.n, args.a, args.t)
                           : satsp::bounds_at_beta<double>(args.n, args.beta);
  json report;
  report["input"] = ctx.config;
  report["n"] = r.n;
  report["beta"] = r.beta;
  report["expected_cost_lower"] = r.expected_cost_lower;
  report["variance_upper_loose"] = r.variance_upper_loose;
  report["variance_upper_tight"] = r.variance_upper_tight;
  report["log_expected_partition"] = r.log_expected_partition;
  if (args.n <= 20) report["expected_partition"] = satsp::expected_partition_function<double>(args.n, r.beta);
  if (scheduled && args.n >= 4) {
    report["mixing_time_bound"] = satsp::two_opt_mixing_time_bound<double>(args.n, args.t, args.eps);
    report["mixing_time_eps"] = args.eps;
  }
  ctx.emit(args.output, report.dump(2) + "\n");
  std::cout << report.dump(2) << '\n';
}

struct VerifyArgs {
  int n = 0;
  double beta = 0;
  std::int64_t mc_draws = 20'000;
  std::string output = "oracle_verify.json";
};

void cmd_oracle_verify(Context& ctx, const VerifyArgs& args) {
  const auto checks = satsp::oracle::verify_invariants(args.n, args.beta, ctx.globals.seed,
                                                       {args.mc_draws, ctx.globals.threads});
  json report;
  report["n"] = args.n;
  report["beta"] = args.beta;
  report["seed"] = ctx.globals.seed;
  report["checks"] = json::array();
  bool all = true;
  for (const auto& c : checks) {
    report["checks"].push_back(
        {{"name", c.name}, {"value", c.value}, {"reference", c.reference}, {"relation", c.relation}, {"passed", c.passed}});
    all = all && c.passed;
  }
  report["all_passed"] = all;
  ctx.results["all_passed"] = all;
  ctx.emit(args.output, report.dump(2) + "\n");
  std::cout << report.dump(2) << '\n';
  if (!all) throw CheckFailure("oracle invariant check failed");
}

struct DominanceArgs {
  std::string quenched;
  std::string annealed;
  double delta = 0.01;
  std::string output = "dominance.json";
};

void cmd_dominance(Context& ctx, const DominanceArgs& args) {
  const auto q = read_samples(args.quenched);
  const auto a = read_samples(args.annealed);
  const auto report = satsp::dominance_test(satsp::ecdf(q), satsp::ecdf(a), args.delta);
  json out = dominance_json(report);
  out["mean_quenched"] = satsp::mean_estimate(q).mean;
  out["mean_annealed"] = satsp::mean_estimate(a).mean;
  ctx.results = out;
  ctx.emit(args.output, out.dump(2) + "\n");
  std::cout << out.dump(2) << '\n';
}

struct Fig1Args {
  satsp::Figure1Config config;
  std::string prefix = "fig1";
  bool paper_scale = false;
};

void cmd_fig1(Context& ctx, Fig1Args args) {
  if (args.paper_scale) {
    args.config.n = 500;
    args.config.samples = 10'000;
    args.config.thinning = 10'000;
  }
  args.config.seed = ctx.globals.seed;
  args.config.threads = ctx.globals.threads;
  const auto result = satsp::run_figure1(args.config);
  const auto fq = satsp::ecdf(result.quenched);
  const auto fa = satsp::ecdf(result.annealed);
  ctx.emit(args.prefix + "_quenched_ecdf" + ctx.ext(), ecdf_text(ctx, fq));
  ctx.emit(args.prefix + "_annealed_ecdf" + ctx.ext(), ecdf_text(ctx, fa));
  ctx.emit(args.prefix + "_quenched_samples" + ctx.ext(), samples_text(ctx, result.quenched));
  ctx.emit(args.prefix + "_annealed_samples" + ctx.ext(), samples_text(ctx, result.annealed));
  json report = dominance_json(result.dominance);
  report["mean_quenched"] = satsp::mean_estimate(result.quenched).mean;
  report["mean_annealed"] = satsp::mean_estimate(result.annealed).mean;
  report["annealed_batch_std_error"] = satsp::batch_means(result.annealed).std_error;
  report["continuous_annealed_mean"] = satsp::cost_lower_bound<double>(args.config.n, args.config.beta);
  ctx.results = report;
  ctx.emit(args.prefix + "_dominance.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << '\n';
}

struct CdfArgs {
  int n = 0;
  double beta = 0;
  std::string law = "annealed";
  int points = 201;
  std::int64_t samples = 100'000;
  std::string output;
};

void cmd_cdf(Context& ctx, const CdfArgs& args) {
  if (args.points < 2) throw UsageError("--points must be >= 2");
  const bool irwin_hall = args.law == "irwin-hall";
  const double beta = irwin_hall ? 0.0 : args.beta;
  std::vector<double> grid(static_cast<std::size_t>(args.points));
  for (int i = 0; i < args.points; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(args.n) * i / (args.points - 1);
  std::vector<double> values;
  if (args.n <= satsp::kIrwinHallMaxN) {
    if (irwin_hall) {
      for (double j : grid) values.push_back(satsp::irwin_hall_cdf(args.n, j));
    } else {
      values = satsp::annealed_cdf_many(args.n, beta, grid);
    }
    ctx.results["method"] = "closed form";
  } else {
    // The alternating-sum formulas lose all precision here, so tabulate an ECDF instead.
    const auto draws = satsp::annealed_exact_sample(args.n, beta, args.samples, ctx.globals.seed);
    const auto f = satsp::ecdf(draws);
    for (double j : grid) values.push_back(f(j));
    ctx.results["method"] = "sampling";
    ctx.results["dkw_band_99"] = satsp::dkw_epsilon(args.samples, 0.01);
  }
  std::ostringstream out;
  if (ctx.as_json()) {
    out << json{{"j", grid}, {"F", values}}.dump() << '\n';
  } else {
    out << "j,F\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      out << satsp::format_real(grid[i]) << ',' << satsp::format_real(values[i]) << '\n';
  }
  ctx.emit(args.output.empty() ? "cdf" + ctx.ext() : args.output, out.str());
}

struct StateGraphArgs {
  int n = 0;
  std::string output;
};

void cmd_state_graph(Context& ctx, const StateGraphArgs& args) {
  const auto graph = satsp::state_graph(args.n);
  std::ostringstream out;
  if (ctx.as_json()) {
    json states = json::array();
    for (const auto& s : graph.states()) states.push_back(tour_json(s));
    json edges = json::array();
    for (int a = 0; a < graph.size(); ++a)
      for (int b : graph.neighbors_of(a))
        if (a < b) edges.push_back({a, b});
    out << json{{"n", args.n}, {"states", states}, {"edges", edges}}.dump() << '\n';
  } else {
    graph.write_edge_list(out);
  }
  ctx.emit(args.output.empty() ? "state_graph" + ctx.ext() : args.output, out.str());
  ctx.results = {{"states", graph.size()}, {"degree", satsp::two_opt_degree(args.n)}, {"diameter", graph.diameter()}};
}

// ---------------------------------------------------------------------------
// Effective configuration capture and replay

json capture_config(const CLI::App* sub) {
  json config = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string& name = opt->get_lnames().front();
    if (opt->count() > 0) {
      config[name] = opt->as<std::string>();
    } else if (!opt->get_default_str().empty()) {
      config[name] = opt->get_default_str();
    }
  }
  return config;
}

std::vector<std::string> replay_args(const std::string& meta_file, const std::string& out_override) {
  json meta;
  try {
    meta = json::parse(satsp::read_text_file(meta_file));
  } catch (const json::exception& e) {
    throw satsp::IoError("malformed sidecar " + meta_file + ": " + e.what());
  }
  try {
    const auto& global = meta.at("global");
    std::vector<std::string> args = {"satsp",
                                     "--seed", global.at("seed").get<std::string>(),
                                     "--threads", global.at("threads").get<std::string>(),
                                     "--format", global.at("format").get<std::string>(),
                                     "--out", out_override.empty() ? fs::path(meta_file).parent_path().string()
                                                                   : out_override,
                                     meta.at("command").get<std::string>()};
    if (args[8].empty()) args[8] = ".";
    for (const auto& [key, value] : meta.at("config").items()) {
      args.push_back("--" + key + "=" + value.get<std::string>());
    }
    return args;
  } catch (const json::exception& e) {
    throw satsp::IoError("incomplete sidecar " + meta_file + ": " + e.what());
  }
}

int run(std::vector<std::string> argv_strings, bool allow_replay) {
  CLI::App app{"Simulated annealing on random TSP instances: samplers, bounds, exact oracles."};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(0, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  auto* out_opt = app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "data file format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--from-meta", g.from_meta, "rerun the configuration stored in a sidecar");

  std::map<std::string, std::function<void(Context&)>> actions;

  GenArgs gen;
  auto* s_gen = app.add_subcommand("gen", "generate a random instance");
  s_gen->add_option("--n", gen.n, "nodes")->required()->check(CLI::Range(3, 100000));
  s_gen->add_option("--grid", gen.grid, "weight grid N (0 for continuous U[0,1])")->check(CLI::NonNegativeNumber);
  s_gen->add_option("--output", gen.output, "file name inside --out");
  actions["gen"] = [&](Context& c) { cmd_gen(c, gen); };

  AnnealArgs an;
  auto* s_an = app.add_subcommand("anneal", "run simulated annealing and record the length trace");
  s_an->add_option("--n", an.n, "nodes (ignored with --instance)");
  s_an->add_option("--grid", an.grid, "weight grid N (0 for continuous)")->check(CLI::NonNegativeNumber);
  s_an->add_option("--instance", an.instance, "instance JSON from gen --format json");
  s_an->add_option("--schedule", an.schedule, "cooling schedule")->check(CLI::IsMember({"log", "constant", "epoch"}));
  s_an->add_option("--a", an.a, "schedule constant (0 means a = n)");
  s_an->add_option("--temperature", an.temperature, "temperature of the constant schedule");
  s_an->add_option("--epochs", an.epochs, "epochs of the epoch schedule")->check(CLI::PositiveNumber);
  s_an->add_option("--c", an.c, "epoch length constant: ceil(c n^9 k^2 ln n)");
  s_an->add_option("--steps", an.steps, "iterations (0: whole epoch plan, else 100000)");
  s_an->add_option("--record-every", an.record_every, "trace thinning")->check(CLI::PositiveNumber);
  s_an->add_flag("--lazy", an.lazy, "hold with probability 1/2 before each proposal");
  s_an->add_option("--start", an.start, "initial tour")->check(CLI::IsMember({"random", "identity"}));
  s_an->add_option("--output", an.output, "file name inside --out");
  actions["anneal"] = [&](Context& c) { cmd_anneal(c, an); };

  QuenchedArgs qa;
  auto* s_q = app.add_subcommand("sample-quenched", "quenched tour lengths over fresh instances");
  s_q->add_option("--n", qa.n, "nodes")->required()->check(CLI::Range(3, 100000));
  s_q->add_option("--grid", qa.grid, "weight grid N (0 for continuous)")->check(CLI::NonNegativeNumber);
  s_q->add_option("--beta", qa.beta, "inverse temperature")->required()->check(CLI::NonNegativeNumber);
  s_q->add_option("--burn-in", qa.burn_in, "Metropolis steps per sample (0: 50 n^3)");
  s_q->add_option("--count", qa.count, "samples")->check(CLI::PositiveNumber);
  s_q->add_option("--output", qa.output, "file name inside --out");
  actions["sample-quenched"] = [&](Context& c) { cmd_sample_quenched(c, qa); };

  AnnealedArgs aa;
  auto* s_a = app.add_subcommand("sample-annealed", "annealed tour lengths");
  s_a->add_option("--n", aa.n, "nodes")->required()->check(CLI::Range(1, 100000));
  s_a->add_option("--grid", aa.grid, "weight grid N of the extended chain")->check(CLI::PositiveNumber);
  s_a->add_option("--beta", aa.beta, "inverse temperature")->required()->check(CLI::NonNegativeNumber);
  s_a->add_option("--burn-in", aa.burn_in, "extended-chain burn-in (0: 50 n^3)");
  s_a->add_option("--thinning", aa.thinning, "steps between samples")->check(CLI::PositiveNumber);
  s_a->add_option("--count", aa.count, "samples")->check(CLI::PositiveNumber);
  s_a->add_flag("--exact", aa.exact, "exact sampler for continuous weights instead of the chain");
  s_a->add_option("--output", aa.output, "file name inside --out");
  actions["sample-annealed"] = [&](Context& c) { cmd_sample_annealed(c, aa); };

  BoundsArgs ba;
  auto* s_b = app.add_subcommand("bounds", "closed-form cost and variance bounds");
  s_b->add_option("--n", ba.n, "nodes")->required()->check(CLI::Range(3, 100000000));
  s_b->add_option("--beta", ba.beta, "inverse temperature");
  s_b->add_option("--a", ba.a, "logarithmic schedule constant");
  s_b->add_option("--t", ba.t, "iteration index of the logarithmic schedule");
  s_b->add_option("--eps", ba.eps, "mixing-time accuracy");
  s_b->add_option("--output", ba.output, "file name inside --out");
  actions["bounds"] = [&](Context& c) { cmd_bounds(c, ba); };

  VerifyArgs va;
  auto* s_v = app.add_subcommand("oracle-verify", "run every exact-oracle invariant on a random instance");
  s_v->add_option("--n", va.n, "nodes")->required()->check(CLI::Range(4, 7));
  s_v->add_option("--beta", va.beta, "inverse temperature")->required()->check(CLI::PositiveNumber);
  s_v->add_option("--mc-draws", va.mc_draws, "Monte Carlo instances for E Z")->check(CLI::PositiveNumber);
  s_v->add_option("--output", va.output, "file name inside --out");
  actions["oracle-verify"] = [&](Context& c) { cmd_oracle_verify(c, va); };

  DominanceArgs da;
  auto* s_d = app.add_subcommand("dominance", "DKW-band dominance test between two sample files");
  s_d->add_option("--quenched", da.quenched, "quenched samples (CSV or JSON)")->required();
  s_d->add_option("--annealed", da.annealed, "annealed samples (CSV or JSON)")->required();
  s_d->add_option("--delta", da.delta, "DKW confidence parameter");
  s_d->add_option("--output", da.output, "file name inside --out");
  actions["dominance"] = [&](Context& c) { cmd_dominance(c, da); };

  Fig1Args fa;
  auto* s_f = app.add_subcommand("fig1", "quenched versus annealed ECDFs on the weight grid");
  s_f->add_option("--n", fa.config.n, "nodes")->check(CLI::Range(4, 100000));
  s_f->add_option("--grid", fa.config.grid, "weight grid N")->check(CLI::PositiveNumber);
  s_f->add_option("--beta", fa.config.beta, "inverse temperature")->check(CLI::NonNegativeNumber);
  s_f->add_option("--samples", fa.config.samples, "samples per law")->check(CLI::PositiveNumber);
  s_f->add_option("--thinning", fa.config.thinning, "annealed chain steps between samples")->check(CLI::PositiveNumber);
  s_f->add_option("--quenched-burn-in", fa.config.quenched_burn_in, "Metropolis steps per quenched sample");
  s_f->add_option("--annealed-burn-in", fa.config.annealed_burn_in, "extended-chain burn-in");
  s_f->add_option("--delta", fa.config.delta, "DKW confidence parameter");
  s_f->add_option("--prefix", fa.prefix, "output file prefix");
  s_f->add_flag("--paper-scale", fa.paper_scale, "n = 500, 10^4 samples, thinning 10^4 (overrides those flags)");
  actions["fig1"] = [&](Context& c) { cmd_fig1(c, fa); };

  CdfArgs ca;
  auto* s_c = app.add_subcommand("cdf", "tabulate the Irwin-Hall or annealed tour-length CDF");
  s_c->add_option("--n", ca.n, "nodes")->required()->check(CLI::Range(1, 100000));
  s_c->add_option("--beta", ca.beta, "inverse temperature")->check(CLI::NonNegativeNumber);
  s_c->add_option("--law", ca.law, "law")->check(CLI::IsMember({"annealed", "irwin-hall"}));
  s_c->add_option("--points", ca.points, "evenly spaced points on [0, n]");
  s_c->add_option("--samples", ca.samples, "draws when n > 15")->check(CLI::PositiveNumber);
  s_c->add_option("--output", ca.output, "file name inside --out");
  actions["cdf"] = [&](Context& c) { cmd_cdf(c, ca); };

  StateGraphArgs sg;
  auto* s_s = app.add_subcommand("state-graph", "edge list of the 2-opt state graph");
  s_s->add_option("--n", sg.n, "nodes")->required()->check(CLI::Range(4, 8));
  s_s->add_option("--output", sg.output, "file name inside --out");
  actions["state-graph"] = [&](Context& c) { cmd_state_graph(c, sg); };

  std::vector<std::string> reversed(argv_strings.rbegin(), argv_strings.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (!g.from_meta.empty()) {
    if (!allow_replay) throw UsageError("nested --from-meta");
    return run(replay_args(g.from_meta, out_opt->count() > 0 ? g.out : ""), false);
  }

  const auto chosen = app.get_subcommands();
  if (chosen.empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }
  Context ctx;
  ctx.globals = g;
  ctx.command = chosen.front()->get_name();
  ctx.config = capture_config(chosen.front());
  try {
    actions.at(ctx.command)(ctx);
  } catch (const CheckFailure&) {
    ctx.write_sidecars();
    throw;
  }
  ctx.write_sidecars();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv, argv + argc), true);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const satsp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const satsp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    // Domain and argument errors from the library are configuration errors.
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }
}
