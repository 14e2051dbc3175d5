#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sgo/bench.hpp"
#include "sgo/error.hpp"

namespace sgo {

namespace {

class Reader {
 public:
  Reader(ExperimentConfig& cfg) : cfg_(cfg) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    const auto mark = at.Mark();
    if (mark.is_null()) throw Error(ErrorCode::invalid_config, cfg_.origin + ": " + msg);
    throw Error(ErrorCode::invalid_config, cfg_.origin + ":" + std::to_string(mark.line + 1) + ": " + msg);
  }

  void expect_map(const YAML::Node& node, const std::string& key) const {
    if (!node.IsMap()) fail(node, "'" + key + "' must be a mapping");
  }

  void only_keys(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& allowed) const {
    for (const auto& kv : map) {
      const auto name = kv.first.as<std::string>();
      if (!allowed.contains(name)) fail(kv.first, "unknown key '" + prefix + name + "'");
    }
  }

  void remember(const std::string& key, const YAML::Node& node) { cfg_.key_lines[key] = node.Mark().line + 1; }

  std::string text(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) fail(node, "'" + key + "' must be a scalar");
    remember(key, node);
    return node.Scalar();
  }

  std::uint64_t unsigned_value(const YAML::Node& node, const std::string& key) {
    const std::string s = text(node, key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(node, "'" + key + "' expects a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  double real_value(const YAML::Node& node, const std::string& key) {
    const std::string s = text(node, key);
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + key + "' expects a number, got '" + s + "'");
    }
  }

  bool flag_value(const YAML::Node& node, const std::string& key) {
    const std::string s = text(node, key);
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + key + "' expects true or false, got '" + s + "'");
    }
  }

 private:
  ExperimentConfig& cfg_;
};

void read_params(Reader& r, const YAML::Node& params, OperatorParams& p) {
  r.expect_map(params, "algorithm.params");
  r.only_keys(params, "algorithm.params.",
              {"flip_prob", "single_flip", "sigma", "crossover_rate", "difference_weight", "neutral", "de_greedy"});
  if (auto v = params["flip_prob"]) p.flip_prob = r.real_value(v, "algorithm.params.flip_prob");
  if (auto v = params["single_flip"]) p.single_flip = r.flag_value(v, "algorithm.params.single_flip");
  if (auto v = params["sigma"]) p.sigma = r.real_value(v, "algorithm.params.sigma");
  if (auto v = params["crossover_rate"]) p.crossover_rate = r.real_value(v, "algorithm.params.crossover_rate");
  if (auto v = params["difference_weight"]) {
    p.difference_weight = r.real_value(v, "algorithm.params.difference_weight");
  }
  if (auto v = params["neutral"]) p.neutral = r.flag_value(v, "algorithm.params.neutral");
  if (auto v = params["de_greedy"]) p.de_greedy = r.flag_value(v, "algorithm.params.de_greedy");
}

DeltaMode parse_mode(Reader& r, const YAML::Node& node) {
  const std::string s = r.text(node, "delta.mode");
  if (s == "auto") return DeltaMode::automatic;
  if (s == "exact") return DeltaMode::exact;
  if (s == "monte-carlo") return DeltaMode::monte_carlo;
  r.fail(node, "'delta.mode' must be auto, exact or monte-carlo, got '" + s + "'");
}

std::string where(const ExperimentConfig& c, const std::string& key) {
  auto it = c.key_lines.find(key);
  if (it == c.key_lines.end()) return c.origin + ": ";
  return c.origin + ":" + std::to_string(it->second) + ": ";
}

}  // namespace

std::string_view to_string(DeltaMode m) noexcept {
  switch (m) {
    case DeltaMode::automatic: return "auto";
    case DeltaMode::exact: return "exact";
    case DeltaMode::monte_carlo: return "monte-carlo";
  }
  return "?";
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  cfg.origin = origin;
  Reader r(cfg);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::invalid_config,
                origin + ":" + std::to_string(e.mark.line + 1) + ": malformed YAML: " + e.msg);
  }
  if (!root.IsMap()) throw Error(ErrorCode::invalid_config, origin + ": top level must be a mapping");
  r.only_keys(root, "", {"problem", "algorithm", "eps", "runs", "seed", "out_dir", "delta", "state_cap"});

  const auto problem = root["problem"];
  if (!problem) throw Error(ErrorCode::invalid_config, origin + ": missing 'problem'");
  r.expect_map(problem, "problem");
  r.only_keys(problem, "problem.", {"id", "dimension"});
  if (!problem["id"]) r.fail(problem, "missing 'problem.id'");
  cfg.problem_id = r.text(problem["id"], "problem.id");
  if (auto d = problem["dimension"]) {
    cfg.dimension = r.unsigned_value(d, "problem.dimension");
  } else {
    for (const auto& info : builtin_problems()) {
      if (info.id == cfg.problem_id) cfg.dimension = info.default_dimension;
    }
  }

  const auto algorithm = root["algorithm"];
  if (!algorithm) throw Error(ErrorCode::invalid_config, origin + ": missing 'algorithm'");
  r.expect_map(algorithm, "algorithm");
  r.only_keys(algorithm, "algorithm.", {"id", "n", "T", "params"});
  if (!algorithm["id"]) r.fail(algorithm, "missing 'algorithm.id'");
  cfg.algorithm_id = r.text(algorithm["id"], "algorithm.id");
  cfg.population_size = default_population(cfg.algorithm_id);
  if (auto n = algorithm["n"]) cfg.population_size = r.unsigned_value(n, "algorithm.n");
  if (!algorithm["T"]) r.fail(algorithm, "missing 'algorithm.T'");
  cfg.iterations = r.unsigned_value(algorithm["T"], "algorithm.T");
  if (auto params = algorithm["params"]) read_params(r, params, cfg.params);

  const auto eps = root["eps"];
  if (!eps) throw Error(ErrorCode::invalid_config, origin + ": missing 'eps'");
  if (eps.IsSequence()) {
    for (std::size_t i = 0; i < eps.size(); ++i) cfg.eps.push_back(r.real_value(eps[i], "eps"));
    cfg.key_lines["eps"] = eps.Mark().line + 1;
  } else {
    cfg.eps.push_back(r.real_value(eps, "eps"));
  }

  if (!root["runs"]) throw Error(ErrorCode::invalid_config, origin + ": missing 'runs'");
  cfg.runs = r.unsigned_value(root["runs"], "runs");
  if (!root["seed"]) throw Error(ErrorCode::invalid_config, origin + ": missing 'seed' (there is no clock default)");
  cfg.seed = r.unsigned_value(root["seed"], "seed");
  if (auto out = root["out_dir"]) cfg.out_dir = r.text(out, "out_dir");
  if (auto cap = root["state_cap"]) cfg.state_cap = r.unsigned_value(cap, "state_cap");

  if (auto delta = root["delta"]) {
    r.expect_map(delta, "delta");
    r.only_keys(delta, "delta.", {"mode", "states", "samples"});
    if (auto m = delta["mode"]) cfg.delta_mode = parse_mode(r, m);
    if (auto s = delta["states"]) cfg.delta_budget.states = r.unsigned_value(s, "delta.states");
    if (auto s = delta["samples"]) cfg.delta_budget.samples_per_state = r.unsigned_value(s, "delta.samples");
  }
  cfg.delta_budget.seed = cfg.seed;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_config, path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void validate(const ExperimentConfig& c) {
  const auto fail = [&](const std::string& key, const std::string& msg) {
    throw Error(ErrorCode::invalid_config, where(c, key) + msg);
  };
  const auto& problems = builtin_problems();
  const auto info = std::find_if(problems.begin(), problems.end(), [&](const auto& p) { return p.id == c.problem_id; });
  if (info == problems.end()) fail("problem.id", "unknown problem '" + c.problem_id + "'");
  if (!is_kernel_id(c.algorithm_id)) fail("algorithm.id", "unknown algorithm '" + c.algorithm_id + "'");
  if (c.runs == 0) fail("runs", "runs must be >= 1");
  if (c.population_size == 0) fail("algorithm.n", "n must be >= 1");
  if (c.eps.empty()) fail("eps", "eps list is empty");
  for (double e : c.eps) {
    if (!(e > 0.0)) fail("eps", "every eps must be > 0");
  }
  if (c.out_dir.empty()) fail("out_dir", "out_dir is required (or pass --out)");
  if (c.delta_mode != DeltaMode::exact && c.delta_budget.states == 0) fail("delta.states", "delta.states must be >= 1");
  if (c.delta_mode != DeltaMode::exact && c.delta_budget.samples_per_state == 0) {
    fail("delta.samples", "delta.samples must be >= 1");
  }
  try {
    const auto prob = make_problem(c.problem_id, c.dimension);
    make_named_kernel(c.algorithm_id, prob, c.population_size, c.params);
  } catch (const Error& e) {
    fail("algorithm.id", e.what());
  }
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json params = {
      {"single_flip", c.params.single_flip},
      {"sigma", c.params.sigma},
      {"crossover_rate", c.params.crossover_rate},
      {"difference_weight", c.params.difference_weight},
      {"neutral", c.params.neutral},
      {"de_greedy", c.params.de_greedy},
  };
  params["flip_prob"] = c.params.flip_prob ? nlohmann::json(*c.params.flip_prob) : nlohmann::json(nullptr);
  return {
      {"problem", {{"id", c.problem_id}, {"dimension", c.dimension}}},
      {"algorithm", {{"id", c.algorithm_id}, {"n", c.population_size}, {"T", c.iterations}, {"params", params}}},
      {"eps", c.eps},
      {"runs", c.runs},
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"delta",
       {{"mode", to_string(c.delta_mode)},
        {"states", c.delta_budget.states},
        {"samples", c.delta_budget.samples_per_state}}},
      {"state_cap", c.state_cap},
  };
}

}  // namespace sgo
