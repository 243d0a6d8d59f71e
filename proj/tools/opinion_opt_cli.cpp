// opinion-opt: sweep, solve, generate and summarize front end.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include "opinion_opt/opinion_opt.hpp"

namespace fs = std::filesystem;
using namespace opinion_opt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitTimeout = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " '" + text + "'");
  }
}

// "10" means seeds 0..9; "3,7,11" (or "5,") is an explicit list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  auto to_u64 = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad seed '" + s + "'");
    return std::stoull(s);
  };
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos) {
    const auto count = to_u64(text);
    if (count == 0) throw UsageError("seed count must be positive");
    for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(i);
  } else {
    for (const auto& s : split(text, ',')) seeds.push_back(to_u64(s));
  }
  if (seeds.empty()) throw UsageError("no seeds given");
  return seeds;
}

NormOrder parse_p(int p) {
  if (p != 1 && p != 2) throw UsageError("--p must be 1 or 2");
  return norm_order_from_int(p);
}

Method parse_method(const std::string& name) {
  try {
    return method_from_string(name);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
}

struct StopRule {
  StopMode mode = StopMode::RelativeObjective;
  double value = 1e-3;
  bool sqrt_n = false;
};

// rel:<threshold> | gm:<epsilon> | gm-sqrt:<c> (epsilon = c sqrt(n))
StopRule parse_stop(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("bad --stop '" + text + "'");
  const std::string kind = text.substr(0, colon);
  StopRule rule;
  rule.value = parse_number(text.substr(colon + 1), "--stop value");
  if (kind == "rel") {
    rule.mode = StopMode::RelativeObjective;
  } else if (kind == "gm") {
    rule.mode = StopMode::GradientMapping;
  } else if (kind == "gm-sqrt") {
    rule.mode = StopMode::GradientMapping;
    rule.sqrt_n = true;
  } else {
    throw UsageError("bad --stop kind '" + kind + "'");
  }
  return rule;
}

struct SolverFlags {
  double eta0 = 1.0;
  double gamma = 0.5;
  double gamma_inc = 1.25;
  int bisect_T = 200;
  std::string stop = "rel:1e-3";
  std::size_t max_iters = 100000;

  void add_to(CLI::App& app) {
    app.add_option("--eta0", eta0, "initial stepsize")->capture_default_str();
    app.add_option("--gamma", gamma, "backtracking shrink factor in (0,1)")->capture_default_str();
    app.add_option("--gamma-inc", gamma_inc, "stepsize growth after an accepted step")->capture_default_str();
    app.add_option("--bisect-T", bisect_T, "bisection depth of the projection")->capture_default_str();
    app.add_option("--stop", stop, "rel:<threshold>, gm:<epsilon> or gm-sqrt:<c>")->capture_default_str();
    app.add_option("--max-iters", max_iters, "outer iteration cap")->capture_default_str();
  }

  SolverOptions build(std::size_t n) const {
    SolverOptions o;
    o.eta0 = eta0;
    o.gamma = gamma;
    o.gamma_inc = gamma_inc;
    o.bisect_T = bisect_T;
    o.max_iters = max_iters;
    const auto rule = parse_stop(stop);
    o.stop_mode = rule.mode;
    if (rule.mode == StopMode::RelativeObjective) {
      o.relative_threshold = rule.value;
    } else {
      o.epsilon = rule.sqrt_n ? rule.value * std::sqrt(static_cast<double>(n)) : rule.value;
    }
    try {
      o.validate();
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
    return o;
  }
};

int run_sweep_command(const std::string& graph_path, int p, const std::string& seeds, const std::string& c_list,
                      const std::string& methods, double time_limit, const std::string& out_dir,
                      const SolverFlags& flags) {
  SweepConfig config;
  config.graph_path = graph_path;
  config.p = parse_p(p);
  config.seeds = parse_seeds(seeds);
  if (!c_list.empty()) {
    config.c_values.clear();
    for (const auto& c : split(c_list, ',')) config.c_values.push_back(parse_number(c, "c value"));
  }
  if (!methods.empty()) {
    config.methods.clear();
    for (const auto& m : split(methods, ',')) config.methods.push_back(parse_method(m));
  }
  config.time_limit_seconds = time_limit;

  const auto graph = load_edge_list(graph_path);
  config.solver = flags.build(graph.n);
  try {
    config.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }

  fs::create_directories(out_dir);
  const fs::path results_path = fs::path(out_dir) / "results.csv";
  std::ofstream results(results_path);
  if (!results) throw Error("cannot write " + results_path.string());
  ResultsWriter writer(results);
  std::cerr << "graph " << graph_path << ": " << graph.n << " vertices, " << graph.edges.size() << " edges\n";
  const auto sweep = run_sweep(graph, config, &writer, &std::cerr);
  results.close();

  const fs::path summary_path = fs::path(out_dir) / "summary.csv";
  std::ofstream summary(summary_path);
  if (!summary) throw Error("cannot write " + summary_path.string());
  write_summary_csv(summary, summarize(sweep.rows));
  std::cerr << "wrote " << results_path.string() << " and " << summary_path.string() << '\n';
  return sweep.any_timeout ? kExitTimeout : kExitOk;
}

int run_solve_command(const std::string& instance_path, const std::string& method_name, double time_limit,
                      const std::string& out_path, const std::string& alpha_out, const SolverFlags& flags) {
  const Method method = parse_method(method_name);
  const Instance inst = load_instance(instance_path);
  SolverOptions opts = flags.build(inst.size());
  opts.time_limit = time_limit;

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Error("cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  Vector alpha;
  bool timed_out = false;
  if (method == Method::PgmChanplusStart || method == Method::PgmInitStart) {
    Vector start = inst.alpha_init;
    if (method == Method::PgmChanplusStart) start = project(local_search_unconstrained(inst).values, inst, opts.bisect_T);
    const auto run = minimize(inst, start, opts);
    write_trace_csv(out, run.trace);
    std::cerr << "objective " << format_double(run.objective) << " after " << run.trace.rows.size()
              << " iterations (" << to_string(run.status) << ")\n";
    alpha = run.alpha;
    timed_out = run.status == RunStatus::TimeLimit;
  } else {
    const Deadline deadline(time_limit);
    BaselineResult run;
    if (method == Method::GradInit) {
      run = baseline_gradient_init(inst, deadline, opts.linear);
    } else {
      const auto chan = local_search_unconstrained(inst);
      run = method == Method::GradChanplus ? baseline_gradient_chanplus(inst, chan, deadline, opts.linear)
                                           : baseline_columnsum_chanplus(inst, chan, deadline, opts.linear);
    }
    out << "method,objective,seconds,steps,status\n"
        << to_string(method) << ',' << format_double(run.objective) << ',' << format_double(deadline.elapsed())
        << ',' << run.steps << ',' << (run.timed_out ? "timeout" : "ok") << '\n';
    alpha = run.alpha;
    timed_out = run.timed_out;
  }
  if (!alpha_out.empty()) {
    std::ofstream a(alpha_out);
    if (!a) throw Error("cannot write " + alpha_out);
    for (double x : alpha) a << format_double(x) << '\n';
  }
  return timed_out ? kExitTimeout : kExitOk;
}

int run_generate_command(const std::string& graph_path, std::uint64_t seed, int p, double budget, double c,
                         bool use_c, const std::string& out_path) {
  const auto graph = load_edge_list(graph_path);
  Instance inst = with_budget(generate_instance(graph, seed), 0.0, parse_p(p));
  if (use_c) {
    inst.budget = budget_from_reference(local_search_unconstrained(inst).values, inst, c);
  } else {
    if (!(budget >= 0.0)) throw UsageError("--k must be non-negative");
    inst.budget = budget;
  }
  save_instance(out_path, inst);
  std::cerr << "wrote " << out_path << " (n=" << inst.size() << ", k=" << format_double(inst.budget) << ")\n";
  return kExitOk;
}

int run_summarize_command(const std::string& results_path, const std::string& out_path) {
  std::ifstream in(results_path);
  if (!in) throw Error("cannot read " + results_path);
  const auto rows = read_results_csv(in);
  if (out_path.empty()) {
    write_summary_csv(std::cout, summarize(rows));
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    write_summary_csv(out, summarize(rows));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resistance optimisation for Friedkin-Johnsen opinion dynamics"};
  app.require_subcommand(1);

  SolverFlags flags;

  auto* sweep = app.add_subcommand("sweep", "run the c-sweep over seeds and methods");
  std::string graph_path, seeds = "10", c_list, methods, out_dir;
  int p = 1;
  double time_limit = 1800.0;
  sweep->add_option("--graph", graph_path, "edge-list file")->required();
  sweep->add_option("--p", p, "budget norm, 1 or 2")->capture_default_str();
  sweep->add_option("--seeds", seeds, "seed count N (0..N-1) or comma list")->capture_default_str();
  sweep->add_option("--c", c_list, "comma list of c values (default 0,0.1,...,1)");
  sweep->add_option("--methods", methods, "comma list of methods (default all)");
  sweep->add_option("--time-limit", time_limit, "seconds per cell")->capture_default_str();
  sweep->add_option("--out", out_dir, "output directory")->required();
  flags.add_to(*sweep);

  auto* solve = app.add_subcommand("solve", "run one method on a serialized instance");
  std::string instance_path, method_name, solve_out, alpha_out;
  double solve_limit = std::numeric_limits<double>::infinity();
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--method", method_name, "method name")->required();
  solve->add_option("--time-limit", solve_limit, "seconds");
  solve->add_option("--out", solve_out, "trace or summary CSV (default stdout)");
  solve->add_option("--alpha-out", alpha_out, "write the final resistances, one per line");
  flags.add_to(*solve);

  auto* generate = app.add_subcommand("generate", "write a seeded instance for a graph");
  std::string gen_graph, gen_out;
  std::uint64_t gen_seed = 0;
  int gen_p = 1;
  double gen_k = 0.0, gen_c = 0.0;
  generate->add_option("--graph", gen_graph, "edge-list file")->required();
  generate->add_option("--seed", gen_seed, "instance seed")->capture_default_str();
  generate->add_option("--p", gen_p, "budget norm, 1 or 2")->capture_default_str();
  auto* k_opt = generate->add_option("--k", gen_k, "absolute budget");
  auto* c_opt = generate->add_option("--c", gen_c, "budget as a fraction of the unconstrained optimum's distance");
  k_opt->excludes(c_opt);
  generate->add_option("--out", gen_out, "instance file")->required();

  auto* summary = app.add_subcommand("summarize", "average a results CSV over seeds");
  std::string summary_in, summary_out;
  summary->add_option("--results", summary_in, "results CSV")->required();
  summary->add_option("--out", summary_out, "summary CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep) return run_sweep_command(graph_path, p, seeds, c_list, methods, time_limit, out_dir, flags);
    if (*solve) return run_solve_command(instance_path, method_name, solve_limit, solve_out, alpha_out, flags);
    if (*generate) return run_generate_command(gen_graph, gen_seed, gen_p, gen_k, gen_c, c_opt->count() > 0, gen_out);
    if (*summary) return run_summarize_command(summary_in, summary_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
