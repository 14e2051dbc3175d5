#pragma once

/// @file bench.hpp
/// Benchmark problems, experiment configuration and the sgoctl commands.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgo/convergence.hpp"
#include "sgo/sgoals.hpp"

namespace sgo {

inline constexpr const char* kVersion = "0.1.0";

struct ProblemInfo {
  std::string id;
  SpaceKind kind;
  std::size_t default_dimension;
  std::string summary;
};

const std::vector<ProblemInfo>& builtin_problems();

/// Throws unknown_problem for ids outside the catalog.
OptimizationProblem make_problem(const std::string& id, std::size_t dimension);

/// Trap of order 4 per block; the all-ones string is optimal with f = 0.
inline constexpr std::size_t kTrapBlock = 4;

/// Kernel ids accepted by `verify` and by algorithm.id in configs: the five
/// SGoals plus hc-neutral, single-flip-hc, identity and pure-mutation.
const std::vector<std::string>& kernel_ids();
bool is_kernel_id(const std::string& id);
std::size_t default_population(const std::string& kernel_id);
Kernel make_named_kernel(const std::string& kernel_id, const OptimizationProblem& prob, std::size_t n,
                         const OperatorParams& params);

enum class DeltaMode { automatic, exact, monte_carlo };
std::string_view to_string(DeltaMode m) noexcept;

struct ExperimentConfig {
  std::string problem_id;
  std::size_t dimension = 0;
  std::string algorithm_id;
  std::size_t population_size = 1;
  std::size_t iterations = 0;  // T
  OperatorParams params;
  std::vector<double> eps;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  DeltaMode delta_mode = DeltaMode::automatic;
  MonteCarloBudget delta_budget;
  std::size_t state_cap = kDefaultStateCap;

  /// Origin file and the line of each key seen, for diagnostics.
  std::string origin = "<config>";
  std::map<std::string, std::size_t> key_lines;
};

/// Parses a YAML experiment file. Every diagnostic is "<path>:<line>: <message>"
/// and raised as invalid_config.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Checks ids, ranges and algorithm constraints; throws invalid_config.
void validate(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);

struct CommandOptions {
  bool record_time = false;
};

/// Writes run.csv, curve.csv and summary.json into config.out_dir.
void cmd_run(const ExperimentConfig& config, std::ostream& log, const CommandOptions& options = {});
/// Writes curve.csv and summary.json (with the partial-sum diagnostic).
void cmd_convergence(const ExperimentConfig& config, std::ostream& log, const CommandOptions& options = {});

struct VerifyOptions {
  std::string kernel_id = "hc";
  std::string problem_id = "onemax-min";
  std::size_t dimension = 2;
  std::optional<std::size_t> population_size;
  OperatorParams params;
  std::vector<double> eps{1.0};
  DeltaMode mode = DeltaMode::exact;
  std::size_t elitism_samples = 10000;
  std::size_t gof_samples = 10000;
  MonteCarloBudget budget;
  std::uint64_t seed = 0;
  std::size_t state_cap = kDefaultStateCap;
  std::optional<std::filesystem::path> out_dir;
};

struct VerifyReport {
  std::string kernel_id;
  std::string problem_id;
  std::size_t population_size = 0;
  std::vector<double> eps;
  ElitismResult elitism;
  std::vector<AbsorptionResult> absorption;  // one per eps
  BoundedFromZeroResult bounded;
  std::vector<RowFit> fits;  // empty outside exact mode
};

VerifyReport run_verify(const VerifyOptions& options);
nlohmann::json to_json(const VerifyReport& report, const OptimizationProblem& prob);
/// Prints the report and writes verify.json when out_dir is set. Throws
/// enumeration_too_large in exact mode when the state space exceeds the cap.
void cmd_verify(const VerifyOptions& options, std::ostream& out);

/// Maps exceptions to the documented exit codes (2 config, 3 enumeration cap, 1 otherwise).
int exit_code_for(const std::exception& e) noexcept;

}  // namespace sgo
