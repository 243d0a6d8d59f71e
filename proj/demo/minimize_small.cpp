// Minimise the total equilibrium opinion on a small random graph and compare
// the projected gradient method with the greedy baselines.
//
//   minimize_small [n] [seed] [c]

#include <cstdlib>
#include <iostream>

#include "opinion_opt/opinion_opt.hpp"

using namespace opinion_opt;

int main(int argc, char** argv) {
  const auto n = static_cast<std::uint32_t>(argc > 1 ? std::atoi(argv[1]) : 200);
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 0;
  const double c = argc > 3 ? std::atof(argv[3]) : 0.5;

  try {
    const auto graph = preferential_attachment_graph(n, 3, seed);
    Instance inst = with_budget(generate_instance(graph, seed), 0.0, NormOrder::L1);
    const auto chan = local_search_unconstrained(inst);
    inst.budget = budget_from_reference(chan.values, inst, c);

    std::cout << "graph: " << graph.n << " vertices, " << graph.edges.size() << " edges\n"
              << "budget k = " << format_double(inst.budget) << " (c = " << c << ")\n"
              << "f(alpha_init)     = " << format_double(objective(inst, inst.alpha_init)) << '\n'
              << "f(unconstrained) = " << format_double(chan.objective) << '\n';

    const auto pgm = minimize(inst, project(chan.values, inst));
    std::cout << "pgm (projected start): " << format_double(pgm.objective) << " in " << pgm.trace.rows.size()
              << " iterations\n";
    const auto pgm_init = minimize(inst, inst.alpha_init);
    std::cout << "pgm (init start):      " << format_double(pgm_init.objective) << " in "
              << pgm_init.trace.rows.size() << " iterations\n";
    std::cout << "grad_chanplus: " << format_double(baseline_gradient_chanplus(inst, chan).objective) << '\n'
              << "grad_init:     " << format_double(baseline_gradient_init(inst).objective) << '\n'
              << "columnsum:     " << format_double(baseline_columnsum_chanplus(inst, chan).objective) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
