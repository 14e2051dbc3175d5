#include <chrono>
#include <fstream>
#include <ostream>

#include "sgo/bench.hpp"
#include "sgo/error.hpp"
#include "sgo/format.hpp"

namespace sgo {

namespace {

using nlohmann::json;

constexpr std::size_t kAbsorptionSamples = 10000;

struct Setup {
  OptimizationProblem problem;
  Kernel kernel;
  StateSampler initial;
};

Setup prepare(const ExperimentConfig& c) {
  validate(c);
  OptimizationProblem prob = make_problem(c.problem_id, c.dimension);
  Kernel k = make_named_kernel(c.algorithm_id, prob, c.population_size, c.params);
  StateSampler init = uniform_initializer(prob.space(), c.population_size);
  return {std::move(prob), std::move(k), std::move(init)};
}

bool enumerable(const Kernel& k, const SearchSpace& space, std::size_t cap) {
  if (!space.is_bitstring() || !k.has_exact()) return false;
  const std::size_t bits = space.dimension() * k.input_arity();
  return bits < 63 && (std::size_t{1} << bits) <= cap;
}

// No non-optimal state means the premise holds vacuously; the bound is then
// evaluated with delta = 1, which every t >= 1 meets trivially.
template <class F>
DeltaEstimate delta_or_vacuous(double eps, DeltaMethod method, F&& estimate) {
  try {
    return estimate();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_problem) throw;
    DeltaEstimate d;
    d.eps = eps;
    d.delta = 1.0;
    d.method = method;
    d.certifying = method == DeltaMethod::exact_enumeration;
    return d;
  }
}

struct EpsAnalysis {
  SuccessCurve curve;
  DeltaEstimate delta;
  AbsorptionResult absorption;
  GeometricBoundCheck check;
  CompleteConvergenceDiagnostic diagnostic;
};

EpsAnalysis analyse(const ExperimentConfig& c, const Setup& s, const std::vector<RunTrace>& traces, double eps) {
  EpsAnalysis a;
  a.curve = success_curve_from_traces(traces, eps);
  const bool exact = c.delta_mode == DeltaMode::exact ||
                     (c.delta_mode == DeltaMode::automatic && enumerable(s.kernel, s.problem.space(), c.state_cap));
  if (exact) {
    a.delta = delta_or_vacuous(eps, DeltaMethod::exact_enumeration,
                               [&] { return estimate_delta_exact(s.kernel, s.problem, eps, c.state_cap); });
    a.absorption = check_absorption_exact(s.kernel, s.problem, eps, c.state_cap);
  } else {
    MonteCarloBudget budget = c.delta_budget;
    budget.seed = c.seed;
    a.delta = delta_or_vacuous(eps, DeltaMethod::monte_carlo_min, [&] {
      return estimate_delta_monte_carlo(s.kernel, s.initial, s.problem, eps, budget);
    });
    a.absorption = check_absorption_sampled(s.kernel, s.initial, s.problem, eps, kAbsorptionSamples, c.seed);
  }
  a.check = check_geometric_bound(a.curve, a.delta, a.absorption.absorbing);
  a.diagnostic = complete_convergence_diagnostic(a.curve, a.delta.delta);
  return a;
}

std::string bound_status(const GeometricBoundCheck& check) {
  if (check.all_satisfied()) return "satisfied";
  for (std::size_t t = 0; t < check.verdicts.size(); ++t) {
    if (check.verdicts[t] == BoundVerdict::violated) return "violated at t=" + std::to_string(t);
  }
  return "not asserted";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  return out;
}

void write_run_csv(const std::filesystem::path& path, const std::vector<RunTrace>& traces) {
  auto out = open_out(path);
  out << "run,t,gap,best_f\n";
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const auto& tr = traces[r];
    for (std::size_t t = 0; t < tr.gaps.size(); ++t) {
      out << r << ',' << t << ',' << shortest(tr.gaps[t]) << ',' << shortest(tr.best_so_far[t]) << '\n';
    }
  }
}

void write_curve_csv(const std::filesystem::path& path, const EpsAnalysis& a) {
  auto out = open_out(path);
  out << "t,successes,runs,ci_lo,ci_hi,bound\n";
  for (std::size_t t = 0; t <= a.curve.horizon; ++t) {
    out << t << ',' << a.curve.successes[t] << ',' << a.curve.runs << ',' << shortest(a.curve.ci[t].lo) << ','
        << shortest(a.curve.ci[t].hi) << ',';
    if (t < a.check.bound.size()) out << shortest(a.check.bound[t]);
    out << '\n';
  }
}

json state_json(const std::optional<Population>& p, const SearchSpace& space) {
  return p ? json(p->to_string(space.is_bitstring())) : json(nullptr);
}

json delta_json(const DeltaEstimate& d, const SearchSpace& space) {
  return {
      {"eps", d.eps},
      {"delta", d.delta},
      {"method", to_string(d.method)},
      {"certifying", d.certifying},
      {"argmin_state", state_json(d.argmin_state, space)},
      {"states_examined", d.per_state.size()},
  };
}

json absorption_json(const AbsorptionResult& a, const SearchSpace& space) {
  return {{"absorbing", a.absorbing},
          {"states_checked", a.states_checked},
          {"counterexample", state_json(a.counterexample, space)}};
}

json verdict_json(const EpsAnalysis& a, const SearchSpace& space, bool with_diagnostic) {
  json per_t = json::array();
  for (auto v : a.check.verdicts) per_t.push_back(to_string(v));
  json out = {
      {"eps", a.curve.eps},
      {"absorption", absorption_json(a.absorption, space)},
      {"premise_note", a.check.premise_note},
      {"per_t", per_t},
      {"all_satisfied", a.check.all_satisfied()},
      {"final_success_rate", a.curve.rate(a.curve.horizon)},
  };
  if (with_diagnostic) {
    out["diagnostic"] = {
        {"partial_sums", a.diagnostic.partial_sums},
        {"partial_sums_lower", a.diagnostic.partial_sums_lower},
        {"reference", a.diagnostic.reference},
        {"dominated", a.diagnostic.dominated},
    };
  }
  return out;
}

void write_summary(const std::filesystem::path& path, const ExperimentConfig& c, const SearchSpace& space,
                   const std::vector<EpsAnalysis>& analyses, bool with_diagnostic, std::optional<double> seconds) {
  json deltas = json::array();
  json verdicts = json::array();
  for (const auto& a : analyses) {
    deltas.push_back(delta_json(a.delta, space));
    verdicts.push_back(verdict_json(a, space, with_diagnostic));
  }
  json summary = {
      {"config", config_to_json(c)},
      {"delta", deltas},
      {"verdicts", verdicts},
      {"elapsed_seconds", seconds ? json(*seconds) : json(nullptr)},
      {"version", kVersion},
  };
  auto out = open_out(path);
  out << summary.dump(2) << '\n';
}

void experiment(const ExperimentConfig& c, std::ostream& log, const CommandOptions& options, bool write_runs) {
  const auto start = std::chrono::steady_clock::now();
  const Setup s = prepare(c);
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  log << c.algorithm_id << " on " << s.problem.id() << " (d=" << c.dimension << "), " << c.runs
      << " runs x T=" << c.iterations << '\n';

  const auto traces = collect_run_traces(s.kernel, s.initial, s.problem, c.iterations, c.runs, c.seed);
  std::vector<EpsAnalysis> analyses;
  for (double eps : c.eps) {
    analyses.push_back(analyse(c, s, traces, eps));
    const auto& a = analyses.back();
    log << "eps=" << shortest(eps) << " delta=" << shortest(a.delta.delta) << " (" << to_string(a.delta.method)
        << ") absorbing=" << (a.absorption.absorbing ? "yes" : "no")
        << " bound=" << bound_status(a.check) << '\n';
    if (!a.check.premise_note.empty()) log << "  " << a.check.premise_note << '\n';
  }

  if (write_runs) write_run_csv(dir / "run.csv", traces);
  write_curve_csv(dir / "curve.csv", analyses.front());
  std::optional<double> seconds;
  if (options.record_time) {
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  write_summary(dir / "summary.json", c, s.problem.space(), analyses, !write_runs, seconds);
  log << "wrote " << dir.string() << '\n';
}

}  // namespace

void cmd_run(const ExperimentConfig& config, std::ostream& log, const CommandOptions& options) {
  experiment(config, log, options, true);
}

void cmd_convergence(const ExperimentConfig& config, std::ostream& log, const CommandOptions& options) {
  experiment(config, log, options, false);
}

VerifyReport run_verify(const VerifyOptions& o) {
  if (!is_kernel_id(o.kernel_id)) throw Error(ErrorCode::invalid_config, "unknown kernel id '" + o.kernel_id + "'");
  if (o.eps.empty()) throw Error(ErrorCode::invalid_config, "eps list is empty");
  const OptimizationProblem prob = make_problem(o.problem_id, o.dimension);
  VerifyReport rep;
  rep.kernel_id = o.kernel_id;
  rep.problem_id = o.problem_id;
  rep.population_size = o.population_size.value_or(default_population(o.kernel_id));
  rep.eps = o.eps;
  const Kernel k = make_named_kernel(o.kernel_id, prob, rep.population_size, o.params);
  const StateSampler states = uniform_initializer(prob.space(), rep.population_size);

  if (o.mode == DeltaMode::exact && !enumerable(k, prob.space(), o.state_cap)) {
    throw Error(ErrorCode::enumeration_too_large,
                "kernel '" + o.kernel_id + "' on " + o.problem_id +
                    " cannot be enumerated under the state cap; rerun with --mode monte-carlo");
  }
  const bool exact = o.mode == DeltaMode::exact ||
                     (o.mode == DeltaMode::automatic && enumerable(k, prob.space(), o.state_cap));

  rep.elitism = check_elitist(k, states, prob, o.elitism_samples, o.seed);
  MonteCarloBudget budget = o.budget;
  budget.seed = o.seed;
  rep.bounded.bounded = true;
  for (double eps : o.eps) {
    if (exact) {
      rep.bounded.per_eps.push_back(delta_or_vacuous(
          eps, DeltaMethod::exact_enumeration, [&] { return estimate_delta_exact(k, prob, eps, o.state_cap); }));
      rep.absorption.push_back(check_absorption_exact(k, prob, eps, o.state_cap));
    } else {
      rep.bounded.per_eps.push_back(delta_or_vacuous(eps, DeltaMethod::monte_carlo_min, [&] {
        return estimate_delta_monte_carlo(k, states, prob, eps, budget);
      }));
      rep.absorption.push_back(check_absorption_sampled(k, states, prob, eps, kAbsorptionSamples, o.seed));
    }
    if (!(rep.bounded.per_eps.back().delta > 0.0)) rep.bounded.bounded = false;
  }
  if (exact && o.gof_samples > 0) rep.fits = kernel_goodness_of_fit(k, prob.space(), o.gof_samples, o.seed, o.state_cap);
  return rep;
}

nlohmann::json to_json(const VerifyReport& rep, const OptimizationProblem& prob) {
  const auto& space = prob.space();
  json counterexamples = json::array();
  for (const auto& v : rep.elitism.counterexamples) {
    counterexamples.push_back({{"sample", v.sample},
                               {"input", v.input.to_string(space.is_bitstring())},
                               {"output", v.output.to_string(space.is_bitstring())},
                               {"input_f", v.input_value},
                               {"output_f", v.output_value}});
  }
  json deltas = json::array();
  for (const auto& d : rep.bounded.per_eps) deltas.push_back(delta_json(d, space));
  json absorption = json::array();
  for (std::size_t i = 0; i < rep.absorption.size(); ++i) {
    json a = absorption_json(rep.absorption[i], space);
    a["eps"] = rep.eps[i];
    absorption.push_back(a);
  }
  json fits = json::array();
  for (const auto& f : rep.fits) {
    fits.push_back({{"state", f.state.to_string(space.is_bitstring())},
                    {"total_variation", f.total_variation},
                    {"chi_square", f.chi_square},
                    {"dof", f.degrees_of_freedom},
                    {"p_value", f.p_value}});
  }
  return {
      {"kernel", rep.kernel_id},
      {"problem", rep.problem_id},
      {"dimension", space.dimension()},
      {"n", rep.population_size},
      {"elitism",
       {{"elitist", rep.elitism.elitist},
        {"samples", rep.elitism.samples},
        {"violations", rep.elitism.violations},
        {"counterexamples", counterexamples}}},
      {"absorption", absorption},
      {"delta", deltas},
      {"bounded_from_zero", rep.bounded.bounded},
      {"goodness_of_fit", fits},
      {"version", kVersion},
  };
}

void cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const VerifyReport rep = run_verify(o);
  const OptimizationProblem prob = make_problem(o.problem_id, o.dimension);
  const bool bits = prob.space().is_bitstring();
  out << "kernel " << rep.kernel_id << " (n=" << rep.population_size << ") on " << rep.problem_id
      << " d=" << o.dimension << '\n';
  out << "elitist: " << (rep.elitism.elitist ? "true" : "false") << " (" << rep.elitism.violations << " of "
      << rep.elitism.samples << " samples violate)\n";
  for (const auto& v : rep.elitism.counterexamples) {
    out << "  counterexample #" << v.sample << ": " << v.input.to_string(bits) << " (f=" << shortest(v.input_value)
        << ") -> " << v.output.to_string(bits) << " (f=" << shortest(v.output_value) << ")\n";
  }
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    const auto& d = rep.bounded.per_eps[i];
    const auto& a = rep.absorption[i];
    out << "eps=" << shortest(rep.eps[i]) << ": delta=" << shortest(d.delta) << " [" << to_string(d.method)
        << (d.certifying ? "" : ", non-certifying") << "]";
    if (d.argmin_state) out << " at " << d.argmin_state->to_string(bits);
    out << ", absorption=" << (a.absorbing ? "true" : "false");
    if (a.counterexample) out << " (leaves from " << a.counterexample->to_string(bits) << ")";
    out << '\n';
  }
  out << "bounded-from-zero: " << (rep.bounded.bounded ? "true" : "false") << '\n';
  if (!rep.fits.empty()) {
    double worst_tv = 0.0;
    double min_p = 1.0;
    for (const auto& f : rep.fits) {
      worst_tv = std::max(worst_tv, f.total_variation);
      min_p = std::min(min_p, f.p_value);
    }
    out << "goodness-of-fit: " << rep.fits.size() << " rows, max TV=" << shortest(worst_tv)
        << ", min p=" << shortest(min_p) << '\n';
  }
  if (o.out_dir) {
    std::filesystem::create_directories(*o.out_dir);
    auto file = open_out(*o.out_dir / "verify.json");
    file << to_json(rep, prob).dump(2) << '\n';
  }
}

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::invalid_config:
      case ErrorCode::unknown_problem:
        return 2;
      case ErrorCode::enumeration_too_large:
        return 3;
      default:
        return 1;
    }
  }
  return 1;
}

}  // namespace sgo
