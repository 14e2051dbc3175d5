#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgo/bench.hpp"
#include "sgo/error.hpp"

using namespace sgo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sgo-test-bench-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string hc_yaml(const fs::path& out, std::size_t runs = 10, std::size_t T = 5) {
  return "problem:\n  id: onemax-min\n  dimension: 2\n"
         "algorithm:\n  id: hc\n  n: 1\n  T: " +
         std::to_string(T) + "\n  params:\n    flip_prob: 0.5\n" + "eps: [1]\nruns: " + std::to_string(runs) +
         "\nseed: 7\nout_dir: " + out.string() + "\n";
}

std::size_t count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::invalid_argument;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("builtin problems reach their optimum") {
  CHECK(make_problem("sphere", 5).evaluate(Individual(std::vector<double>(5, 0.0))) == 0.0);
  CHECK(make_problem("rastrigin", 3).evaluate(Individual(std::vector<double>(3, 0.0))) == doctest::Approx(0.0));
  CHECK(make_problem("rosenbrock", 4).evaluate(Individual(std::vector<double>(4, 1.0))) == 0.0);
  CHECK(make_problem("onemax-min", 6).evaluate(Individual::from_bits("111111")) == 0.0);
  CHECK(make_problem("onemax-min", 6).evaluate(Individual::from_bits("010111")) == 2.0);
  const auto trap = make_problem("deceptive-trap", 8);
  CHECK(trap.evaluate(Individual::from_bits("11111111")) == 0.0);
  CHECK(trap.evaluate(Individual::from_bits("00001111")) == 1.0);
  CHECK(trap.evaluate(Individual::from_bits("11101111")) == 4.0);
  CHECK(make_problem("rastrigin", 1).evaluate(Individual({1.0})) == doctest::Approx(1.0));
  CHECK(code_of([] { make_problem("ackley", 2); }) == ErrorCode::unknown_problem);
  CHECK(code_of([] { make_problem("deceptive-trap", 6); }) == ErrorCode::invalid_config);
  for (const auto& info : builtin_problems()) CHECK(make_problem(info.id, info.default_dimension).optimum_value());
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(hc_yaml("out/x"));
  CHECK(cfg.problem_id == "onemax-min");
  CHECK(cfg.dimension == 2);
  CHECK(cfg.algorithm_id == "hc");
  CHECK(cfg.iterations == 5);
  CHECK(cfg.eps == std::vector<double>{1.0});
  CHECK(cfg.params.flip_prob == 0.5);
  CHECK(cfg.seed == 7);
  CHECK_NOTHROW(validate(cfg));

  const auto scalar = parse_config("problem: {id: sphere}\nalgorithm: {id: de, n: 6, T: 3}\neps: 0.5\n"
                                   "runs: 4\nseed: 1\nout_dir: o\n");
  CHECK(scalar.dimension == 5);
  CHECK(scalar.eps == std::vector<double>{0.5});
}

TEST_CASE("config diagnostics carry line numbers") {
  const std::string unknown = hc_yaml("o") + "colour: red\n";
  const auto msg = message_of([&] { parse_config(unknown, "exp.yaml"); });
  CHECK(msg.find("exp.yaml:14:") != std::string::npos);

  std::string zero_runs = hc_yaml("o", 0);
  const auto cfg = parse_config(zero_runs, "exp.yaml");
  const auto runs_msg = message_of([&] { validate(cfg); });
  CHECK(runs_msg.find("exp.yaml:11:") != std::string::npos);
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_config);

  CHECK(code_of([] { parse_config("problem: [unclosed\n"); }) == ErrorCode::invalid_config);
  CHECK(code_of([] { parse_config("problem: {id: sphere}\nalgorithm: {id: de, n: 4, T: 1}\neps: 1\nruns: 1\nout_dir: o\n"); }) ==
        ErrorCode::invalid_config);  // seed missing
  const auto bad_alg = parse_config("problem: {id: sphere}\nalgorithm: {id: annealing, n: 1, T: 1}\neps: 1\nruns: 1\nseed: 1\n"
                                    "out_dir: o\n");
  CHECK(code_of([&] { validate(bad_alg); }) == ErrorCode::invalid_config);
  const auto bad_prob = parse_config("problem: {id: ackley}\nalgorithm: {id: hc, n: 1, T: 1}\neps: 1\nruns: 1\nseed: 1\n"
                                     "out_dir: o\n");
  CHECK(code_of([&] { validate(bad_prob); }) == ErrorCode::invalid_config);
  CHECK(message_of([&] { validate(bad_prob); }).find("<config>:1: unknown problem 'ackley'") != std::string::npos);
}

TEST_CASE("run writes fixed-schema outputs") {
  const auto dir = scratch("run");
  auto cfg = parse_config(hc_yaml(dir));
  std::ostringstream log;
  cmd_run(cfg, log);
  const auto run_csv = slurp(dir / "run.csv");
  CHECK(run_csv.rfind("run,t,gap,best_f\n", 0) == 0);
  CHECK(count_lines(run_csv) == 1 + 60);
  const auto curve_csv = slurp(dir / "curve.csv");
  CHECK(curve_csv.rfind("t,successes,runs,ci_lo,ci_hi,bound\n", 0) == 0);
  CHECK(count_lines(curve_csv) == 1 + 6);

  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  for (const char* key : {"config", "delta", "verdicts", "elapsed_seconds", "version"}) CHECK(summary.contains(key));
  CHECK(summary["elapsed_seconds"].is_null());
  CHECK(summary["version"] == kVersion);
  CHECK(summary["config"]["algorithm"]["id"] == "hc");
  CHECK(summary["config"]["seed"] == 7);
  CHECK(summary["delta"][0]["delta"].get<double>() == doctest::Approx(0.25));
  CHECK(summary["delta"][0]["certifying"] == true);
  CHECK(summary["verdicts"][0]["absorption"]["absorbing"] == true);
  CHECK(summary["verdicts"][0]["per_t"].size() == 6);

  cmd_run(cfg, log, {true});
  CHECK(nlohmann::json::parse(slurp(dir / "summary.json"))["elapsed_seconds"].is_number());
}

TEST_CASE("run and convergence are byte-reproducible") {
  const auto a = scratch("repro-a");
  const auto b = scratch("repro-b");
  auto cfg = parse_config(hc_yaml(a, 200, 8));
  std::ostringstream log;
  cmd_run(cfg, log);
  cfg.out_dir = b.string();
  cmd_run(cfg, log);
  for (const char* f : {"run.csv", "curve.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  // summary.json echoes out_dir, so compare everything else.
  auto ja = nlohmann::json::parse(slurp(a / "summary.json"));
  auto jb = nlohmann::json::parse(slurp(b / "summary.json"));
  ja["config"].erase("out_dir");
  jb["config"].erase("out_dir");
  CHECK(ja == jb);

  cfg.out_dir = a.string();
  cmd_convergence(cfg, log);
  const auto first = slurp(a / "summary.json");
  cmd_convergence(cfg, log);
  CHECK(slurp(a / "summary.json") == first);

  cfg.seed = 8;
  cmd_run(cfg, log);
  CHECK(slurp(a / "run.csv") != slurp(b / "run.csv"));
}

TEST_CASE("convergence verdicts") {
  std::ostringstream log;
  const auto dir = scratch("conv");
  auto cfg = parse_config(hc_yaml(dir, 2000, 20));
  cmd_convergence(cfg, log);
  auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  const auto& v = summary["verdicts"][0];
  CHECK(v["all_satisfied"] == true);
  for (const auto& row : v["per_t"]) CHECK(row == "satisfied");
  CHECK(v["diagnostic"]["reference"].get<double>() == doctest::Approx(3.0));
  CHECK(v["diagnostic"]["dominated"] == true);
  CHECK_FALSE(fs::exists(dir / "run.csv"));

  // eps above every possible gap: success at t = 0.
  cfg.eps = {5.0};
  cmd_convergence(cfg, log);
  summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(slurp(dir / "curve.csv").find("\n0,2000,2000,") != std::string::npos);
  CHECK(summary["verdicts"][0]["final_success_rate"] == 1.0);
  CHECK(summary["verdicts"][0]["all_satisfied"] == true);

  cfg.eps = {1.0};
  cfg.algorithm_id = "identity";
  cmd_convergence(cfg, log);
  summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["verdicts"][0]["premise_note"] == "premise violated: delta=0");
  for (const auto& row : summary["verdicts"][0]["per_t"]) CHECK(row == "premise-violated");
}

TEST_CASE("verify") {
  VerifyOptions o;
  o.params.flip_prob = 0.5;
  o.elitism_samples = 2000;
  o.gof_samples = 2000;
  const auto hc = run_verify(o);
  CHECK(hc.elitism.elitist);
  REQUIRE(hc.absorption.size() == 1);
  CHECK(hc.absorption[0].absorbing);
  CHECK(hc.bounded.bounded);
  CHECK(hc.bounded.per_eps[0].delta == doctest::Approx(0.25));
  CHECK(hc.fits.size() == 4);

  o.kernel_id = "identity";
  const auto id = run_verify(o);
  CHECK(id.elitism.elitist);
  CHECK_FALSE(id.bounded.bounded);

  o.kernel_id = "pure-mutation";
  const auto mut = run_verify(o);
  CHECK_FALSE(mut.elitism.elitist);
  CHECK_FALSE(mut.elitism.counterexamples.empty());
  std::ostringstream out;
  cmd_verify(o, out);
  CHECK(out.str().find("counterexample") != std::string::npos);

  const auto j = to_json(hc, make_problem("onemax-min", 2));
  CHECK(j["elitism"]["elitist"] == true);

  VerifyOptions big;
  big.dimension = 16;
  big.population_size = 2;
  big.kernel_id = "phc";
  CHECK(code_of([&] { run_verify(big); }) == ErrorCode::enumeration_too_large);
  big.mode = DeltaMode::monte_carlo;
  big.elitism_samples = 500;
  big.budget = MonteCarloBudget{20, 200, 1};
  CHECK_NOTHROW(run_verify(big));
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(Error(ErrorCode::invalid_config, "x")) == 2);
  CHECK(exit_code_for(Error(ErrorCode::unknown_problem, "x")) == 2);
  CHECK(exit_code_for(Error(ErrorCode::enumeration_too_large, "x")) == 3);
  CHECK(exit_code_for(Error(ErrorCode::degenerate_problem, "x")) == 1);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("kernel catalog") {
  for (const auto& id : kernel_ids()) {
    const auto prob = make_problem(id == "de" ? "sphere" : "onemax-min", id == "de" ? 2 : 4);
    const auto n = default_population(id);
    const auto k = make_named_kernel(id, prob, n, {});
    CHECK(k.input_arity() == n);
    CHECK(k.output_arity() == n);
  }
  CHECK_FALSE(is_kernel_id("sa"));
}
