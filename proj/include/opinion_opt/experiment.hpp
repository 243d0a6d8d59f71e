#ifndef OPINION_OPT_EXPERIMENT_HPP
#define OPINION_OPT_EXPERIMENT_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <cstdlib>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "opinion_opt/baselines.hpp"
#include "opinion_opt/error.hpp"
#include "opinion_opt/graph.hpp"
#include "opinion_opt/instance.hpp"
#include "opinion_opt/instance_io.hpp"
#include "opinion_opt/optimizer.hpp"
#include "opinion_opt/projection.hpp"

namespace opinion_opt {

enum class Method { PgmChanplusStart, PgmInitStart, GradChanplus, GradInit, Columnsum };

inline const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::PgmChanplusStart, Method::PgmInitStart, Method::GradChanplus,
                                           Method::GradInit, Method::Columnsum};
  return methods;
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::PgmChanplusStart: return "pgm_chanplus_start";
    case Method::PgmInitStart: return "pgm_init_start";
    case Method::GradChanplus: return "grad_chanplus";
    case Method::GradInit: return "grad_init";
    case Method::Columnsum: return "columnsum";
  }
  return "?";
}

inline Method method_from_string(const std::string& name) {
  for (Method m : all_methods()) {
    if (name == to_string(m)) return m;
  }
  throw InvalidInput("unknown method '" + name + "'");
}

/// Shortest decimal that parses back to the same double.
inline std::string format_short(double x) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

struct SweepConfig {
  std::string graph_path;
  /// Label written to the graph column; defaults to the file stem.
  std::string graph_label;
  NormOrder p = NormOrder::L1;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<double> c_values{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double time_limit_seconds = 1800.0;
  std::vector<Method> methods = all_methods();
  SolverOptions solver;
  LocalSearchOptions local_search;

  void validate() const {
    if (seeds.empty()) throw InvalidInput("sweep needs at least one seed");
    if (c_values.empty()) throw InvalidInput("sweep needs at least one c value");
    for (double c : c_values) {
      if (!(c >= 0.0 && c <= 1.0)) throw InvalidInput("c values must lie in [0,1]");
    }
    if (methods.empty()) throw InvalidInput("sweep needs at least one method");
    if (!(time_limit_seconds > 0.0)) throw InvalidInput("time limit must be positive");
    solver.validate();
  }
};

enum class CellStatus { Ok, Timeout, Skipped };

inline const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Timeout: return "timeout";
    case CellStatus::Skipped: return "skipped";
  }
  return "?";
}

inline CellStatus cell_status_from_string(const std::string& s) {
  if (s == "ok") return CellStatus::Ok;
  if (s == "timeout") return CellStatus::Timeout;
  if (s == "skipped") return CellStatus::Skipped;
  throw InvalidInput("unknown status '" + s + "'");
}

/// One line of the results CSV: graph,seed,p,c,method,objective,seconds,iters,status
struct ResultRow {
  std::string graph;
  std::uint64_t seed = 0;
  int p = 1;
  double c = 0.0;
  std::string method;
  double objective = 0.0;
  double seconds = 0.0;
  std::size_t iters = 0;
  CellStatus status = CellStatus::Ok;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  /// Per-seed reference data, exposed for verification.
  struct SeedInfo {
    std::uint64_t seed = 0;
    double f_init = 0.0;
    double f_chanplus = 0.0;
    double k_prime = 0.0;
  };
  std::vector<SeedInfo> seeds;
  bool any_timeout = false;
  /// PGM objectives that rose with c by more than the soft slack.
  std::vector<std::string> monotonicity_warnings;
};

inline constexpr const char* kResultsHeader = "graph,seed,p,c,method,objective,seconds,iters,status";

/// Serialises rows through one writer; safe to share between sweep workers.
class ResultsWriter {
 public:
  explicit ResultsWriter(std::ostream& out, bool header = true) : out_(out) {
    if (header) out_ << kResultsHeader << '\n';
  }
  void write(const ResultRow& r) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << r.graph << ',' << r.seed << ',' << r.p << ',' << format_short(r.c) << ',' << r.method << ','
         << format_double(r.objective) << ',' << format_double(r.seconds) << ',' << r.iters << ','
         << to_string(r.status) << '\n';
  }

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  ResultsWriter writer(out);
  for (const auto& r : rows) writer.write(r);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_field(const std::string& text, std::size_t row, const char* column) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (text.empty() || in.fail() || !in.eof()) {
    throw InvalidInput("malformed CSV row " + std::to_string(row) + ": bad " + column + " '" + text + "'");
  }
  return value;
}

inline double parse_real_field(const std::string& text, std::size_t row, const char* column) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw InvalidInput("malformed CSV row " + std::to_string(row) + ": bad " + column + " '" + text + "'");
  }
  return v;
}

inline std::string file_stem(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = name.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

}  // namespace detail

/// Parses a results CSV. Row numbers in errors count the header as row 1.
inline std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("malformed CSV row 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw InvalidInput("malformed CSV row 1: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) {
      throw InvalidInput("malformed CSV row " + std::to_string(row_no) + ": expected 9 fields, got " +
                         std::to_string(f.size()));
    }
    ResultRow r;
    r.graph = f[0];
    r.seed = detail::parse_field<std::uint64_t>(f[1], row_no, "seed");
    r.p = detail::parse_field<int>(f[2], row_no, "p");
    r.c = detail::parse_real_field(f[3], row_no, "c");
    r.method = f[4];
    r.objective = detail::parse_real_field(f[5], row_no, "objective");
    r.seconds = detail::parse_real_field(f[6], row_no, "seconds");
    r.iters = detail::parse_field<std::size_t>(f[7], row_no, "iters");
    try {
      r.status = cell_status_from_string(f[8]);
    } catch (const InvalidInput&) {
      throw InvalidInput("malformed CSV row " + std::to_string(row_no) + ": bad status '" + f[8] + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Mean over seeds of one (graph, p, method, c) cell.
struct SummaryRow {
  std::string graph;
  int p = 1;
  std::string method;
  double c = 0.0;
  double mean_objective = 0.0;
  double mean_seconds = 0.0;
  std::size_t seeds = 0;
};

inline constexpr const char* kSummaryHeader = "graph,p,method,c,mean_objective,mean_seconds,seeds";

/// Averages every cell whose seeds all completed; a cell with any timeout or
/// skipped seed is left out entirely.
inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, int, std::string, double>;
  struct Acc {
    double objective = 0.0, seconds = 0.0;
    std::size_t count = 0;
    bool incomplete = false;
    std::size_t first_seen = 0;
  };
  std::map<Key, Acc> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    auto [it, inserted] = cells.try_emplace(Key{r.graph, r.p, r.method, r.c});
    if (inserted) it->second.first_seen = i;
    if (r.status != CellStatus::Ok) {
      it->second.incomplete = true;
      continue;
    }
    it->second.objective += r.objective;
    it->second.seconds += r.seconds;
    ++it->second.count;
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, acc] : cells) {
    if (acc.incomplete || acc.count == 0) continue;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key),
                   acc.objective / static_cast<double>(acc.count), acc.seconds / static_cast<double>(acc.count),
                   acc.count});
  }
  return out;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.graph << ',' << r.p << ',' << r.method << ',' << format_short(r.c) << ','
        << format_double(r.mean_objective) << ',' << format_double(r.mean_seconds) << ',' << r.seeds << '\n';
  }
}

namespace detail {

struct CellOutcome {
  double objective = 0.0;
  std::size_t iters = 0;
  bool timed_out = false;
};

}  // namespace detail

/// Runs the c-sweep on an already loaded graph.
///
/// Per seed: generate the instance, find alpha^Chan+ once by local search and
/// set k' = ||alpha^Chan+ - alpha_init||_p; each (method, c) cell then runs
/// with k = c k'. Seconds include the local search for the methods that start
/// from alpha^Chan+. grad_chanplus walks c downwards and grad_init upwards;
/// after a timeout each skips the rest of its walk.
inline SweepResult run_sweep(const UndirectedGraph& graph, const SweepConfig& config,
                             ResultsWriter* writer = nullptr, std::ostream* log = nullptr) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };
  const std::string label = config.graph_label.empty() ? detail::file_stem(config.graph_path) : config.graph_label;

  SweepResult result;
  for (std::uint64_t seed : config.seeds) {
    Instance inst = with_budget(generate_instance(graph, seed), 0.0, config.p);

    const auto ls_start = Clock::now();
    const CornerSolution chanplus = local_search_unconstrained(inst, config.local_search);
    const double ls_seconds = seconds_since(ls_start);
    const double k_prime = distance(chanplus.values, inst.alpha_init, inst.p);
    result.seeds.push_back({seed, objective(inst, inst.alpha_init, config.solver.linear), chanplus.objective, k_prime});

    for (Method method : config.methods) {
      const bool from_chanplus = method != Method::PgmInitStart && method != Method::GradInit;
      std::vector<double> cs = config.c_values;
      if (method == Method::GradChanplus) std::sort(cs.begin(), cs.end(), std::greater<>());
      if (method == Method::GradInit) std::sort(cs.begin(), cs.end());
      const bool skip_after_timeout = method == Method::GradChanplus || method == Method::GradInit;

      bool skipping = false;
      std::vector<std::pair<double, double>> pgm_curve;
      for (double c : cs) {
        ResultRow row;
        row.graph = label;
        row.seed = seed;
        row.p = to_int(config.p);
        row.c = c;
        row.method = to_string(method);
        if (skipping) {
          row.status = CellStatus::Skipped;
          row.objective = 0.0;
        } else {
          inst.budget = budget_from_reference(chanplus.values, inst, c);
          const double offset = from_chanplus ? ls_seconds : 0.0;
          const double remaining = std::max(config.time_limit_seconds - offset, 1e-9);
          const auto start = Clock::now();
          detail::CellOutcome cell;
          switch (method) {
            case Method::PgmChanplusStart:
            case Method::PgmInitStart: {
              const Vector alpha0 = method == Method::PgmInitStart
                                        ? inst.alpha_init
                                        : project(chanplus.values, inst, config.solver.bisect_T);
              SolverOptions opts = config.solver;
              opts.time_limit = remaining;
              const auto run = minimize(inst, alpha0, opts);
              cell = {run.objective, run.trace.rows.size(), run.status == RunStatus::TimeLimit};
              break;
            }
            case Method::GradChanplus: {
              const auto run = baseline_gradient_chanplus(inst, chanplus, Deadline(remaining), config.solver.linear);
              cell = {run.objective, run.steps, run.timed_out};
              break;
            }
            case Method::GradInit: {
              const auto run = baseline_gradient_init(inst, Deadline(remaining), config.solver.linear);
              cell = {run.objective, run.steps, run.timed_out};
              break;
            }
            case Method::Columnsum: {
              const auto run = baseline_columnsum_chanplus(inst, chanplus, Deadline(remaining), config.solver.linear);
              cell = {run.objective, run.steps, run.timed_out};
              break;
            }
          }
          row.seconds = offset + seconds_since(start);
          row.objective = cell.objective;
          row.iters = cell.iters;
          row.status = cell.timed_out || row.seconds > config.time_limit_seconds ? CellStatus::Timeout
                                                                                 : CellStatus::Ok;
          if (row.status == CellStatus::Timeout) {
            result.any_timeout = true;
            if (skip_after_timeout) skipping = true;
          }
          if ((method == Method::PgmChanplusStart || method == Method::PgmInitStart) &&
              row.status == CellStatus::Ok) {
            pgm_curve.emplace_back(c, row.objective);
          }
        }
        if (writer) writer->write(row);
        result.rows.push_back(std::move(row));
      }

      std::sort(pgm_curve.begin(), pgm_curve.end());
      for (std::size_t i = 1; i < pgm_curve.size(); ++i) {
        if (pgm_curve[i].second > pgm_curve[i - 1].second + 1e-6) {
          std::string msg = std::string(to_string(method)) + " seed " + std::to_string(seed) + ": objective rose from " +
                            format_double(pgm_curve[i - 1].second) + " at c=" + format_short(pgm_curve[i - 1].first) +
                            " to " + format_double(pgm_curve[i].second) + " at c=" + format_short(pgm_curve[i].first);
          if (log) *log << "warning: " << msg << '\n';
          result.monotonicity_warnings.push_back(std::move(msg));
        }
      }
    }
  }
  return result;
}

inline SweepResult run_sweep(const SweepConfig& config, ResultsWriter* writer = nullptr, std::ostream* log = nullptr) {
  return run_sweep(load_edge_list(config.graph_path), config, writer, log);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_EXPERIMENT_HPP
