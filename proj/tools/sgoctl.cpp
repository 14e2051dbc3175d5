// sgoctl: run experiments, convergence checks and kernel verification.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sgo/bench.hpp"
#include "sgo/error.hpp"
#include "sgo/format.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> out;
  bool record_time = false;
};

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "YAML experiment file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override the master seed");
  cmd->add_option("--runs", o.runs, "override the number of runs");
  cmd->add_option("--out", o.out, "override the output directory");
  cmd->add_flag("--record-time", o.record_time, "store wall-clock seconds in summary.json");
}

sgo::ExperimentConfig resolve(const Overrides& o) {
  auto cfg = sgo::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
  if (o.out) cfg.out_dir = *o.out;
  return cfg;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw sgo::Error(sgo::ErrorCode::invalid_config, "bad eps value '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic global optimization kernels: experiments and convergence checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sgo::kVersion);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "run an experiment; writes run.csv, curve.csv, summary.json");
  add_experiment_flags(run, run_opts);

  Overrides conv_opts;
  auto* conv = app.add_subcommand("convergence", "success curve, bound verdicts and partial sums");
  add_experiment_flags(conv, conv_opts);

  sgo::VerifyOptions vo;
  std::string eps_text = "1";
  std::string mode = "exact";
  std::optional<std::string> verify_out;
  std::optional<double> flip_prob;
  auto* verify = app.add_subcommand("verify", "elitism, absorption, delta and goodness-of-fit for one kernel");
  verify->add_option("kernel", vo.kernel_id, "kernel id (see list-algorithms)")->required();
  verify->add_option("--problem", vo.problem_id, "problem id")->capture_default_str();
  verify->add_option("--dimension", vo.dimension, "problem dimension")->capture_default_str();
  verify->add_option("--n", vo.population_size, "population size");
  verify->add_option("--eps", eps_text, "comma-separated eps list")->capture_default_str();
  verify->add_option("--mode", mode, "exact, monte-carlo or auto")
      ->check(CLI::IsMember({"exact", "monte-carlo", "auto"}))
      ->capture_default_str();
  verify->add_option("--flip-prob", flip_prob, "per-bit flip probability (default 1/l)");
  verify->add_flag("--neutral", vo.params.neutral, "accept equal-fitness moves");
  verify->add_option("--samples", vo.elitism_samples, "elitism samples")->capture_default_str();
  verify->add_option("--gof-samples", vo.gof_samples, "samples per row for goodness of fit")->capture_default_str();
  verify->add_option("--seed", vo.seed, "seed")->capture_default_str();
  verify->add_option("--state-cap", vo.state_cap, "enumeration cap")->capture_default_str();
  verify->add_option("--out", verify_out, "write verify.json into this directory");

  auto* list_problems = app.add_subcommand("list-problems", "show the builtin problems");
  auto* list_algorithms = app.add_subcommand("list-algorithms", "show the kernel ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      sgo::cmd_run(resolve(run_opts), std::cout, {run_opts.record_time});
    } else if (conv->parsed()) {
      sgo::cmd_convergence(resolve(conv_opts), std::cout, {conv_opts.record_time});
    } else if (verify->parsed()) {
      vo.eps = parse_eps_list(eps_text);
      vo.mode = mode == "exact" ? sgo::DeltaMode::exact
                : mode == "auto" ? sgo::DeltaMode::automatic
                                 : sgo::DeltaMode::monte_carlo;
      vo.params.flip_prob = flip_prob;
      if (verify_out) vo.out_dir = *verify_out;
      sgo::cmd_verify(vo, std::cout);
    } else if (list_problems->parsed()) {
      for (const auto& p : sgo::builtin_problems()) {
        std::cout << p.id << "\t" << (p.kind == sgo::SpaceKind::bitstring ? "bits" : "real") << "\td="
                  << p.default_dimension << "\t" << p.summary << '\n';
      }
    } else if (list_algorithms->parsed()) {
      for (const auto& id : sgo::kernel_ids()) {
        std::cout << id << "\tdefault n=" << sgo::default_population(id) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "sgoctl: " << e.what() << '\n';
    const int code = sgo::exit_code_for(e);
    if (code == 3) std::cerr << "sgoctl: hint: use monte-carlo mode for large spaces\n";
    return code;
  }
  return 0;
}
