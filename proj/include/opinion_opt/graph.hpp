#ifndef OPINION_OPT_GRAPH_HPP
#define OPINION_OPT_GRAPH_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "opinion_opt/error.hpp"
#include "opinion_opt/rng.hpp"

namespace opinion_opt {

/// Simple undirected graph on vertices 0..n-1. Each edge is stored once with first < second.
struct UndirectedGraph {
  std::uint32_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::vector<std::vector<std::uint32_t>> adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  bool is_connected() const {
    if (n == 0) return false;
    const auto adj = adjacency();
    std::vector<char> seen(n, 0);
    std::queue<std::uint32_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::uint32_t count = 1;
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      for (auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          frontier.push(w);
        }
      }
    }
    return count == n;
  }
};

namespace detail {

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Drops self-loops and duplicates; keeps first occurrence order.
inline UndirectedGraph make_simple(std::uint32_t n,
                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& raw) {
  UndirectedGraph g;
  g.n = n;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.insert(edge_key(a, b)).second) g.edges.emplace_back(a, b);
  }
  return g;
}

}  // namespace detail

/// Keeps the largest connected component, relabelling its vertices in
/// increasing order of their current ids. Ties go to the component holding the
/// smallest vertex id.
inline UndirectedGraph largest_connected_component(const UndirectedGraph& g) {
  const auto adj = g.adjacency();
  std::vector<std::int64_t> component(g.n, -1);
  std::vector<std::uint32_t> sizes;
  for (std::uint32_t root = 0; root < g.n; ++root) {
    if (component[root] >= 0) continue;
    const auto id = static_cast<std::int64_t>(sizes.size());
    sizes.push_back(0);
    std::queue<std::uint32_t> frontier;
    frontier.push(root);
    component[root] = id;
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      ++sizes.back();
      for (auto w : adj[v]) {
        if (component[w] < 0) {
          component[w] = id;
          frontier.push(w);
        }
      }
    }
  }
  if (sizes.empty()) return {};
  const auto best = static_cast<std::int64_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  std::vector<std::uint32_t> relabel(g.n, 0);
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < g.n; ++v) {
    if (component[v] == best) relabel[v] = next++;
  }
  UndirectedGraph out;
  out.n = next;
  for (auto [a, b] : g.edges) {
    if (component[a] == best) out.edges.emplace_back(relabel[a], relabel[b]);
  }
  return out;
}

/// Parses a whitespace-separated edge list ("u v" per line, '#' comments) and
/// returns its largest connected component as a simple graph. Vertex ids are
/// relabelled 0..n-1 in order of first appearance.
inline UndirectedGraph parse_edge_list(std::istream& in) {
  std::unordered_map<std::int64_t, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
  auto intern = [&ids](std::int64_t label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<std::uint32_t>(ids.size()));
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    view.remove_prefix(first);
    if (view.front() == '#') continue;

    std::int64_t ends[2];
    std::size_t pos = 0;
    bool ok = true;
    for (auto& value : ends) {
      while (pos < view.size() && (view[pos] == ' ' || view[pos] == '\t')) ++pos;
      const char* begin = view.data() + pos;
      const char* end = view.data() + view.size();
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr == begin) {
        ok = false;
        break;
      }
      pos = static_cast<std::size_t>(ptr - view.data());
    }
    if (ok) {
      while (pos < view.size() && (view[pos] == ' ' || view[pos] == '\t' || view[pos] == '\r')) ++pos;
      ok = pos == view.size();
    }
    if (!ok) {
      throw InvalidInput("malformed edge list line " + std::to_string(line_no) + ": '" + line + "'");
    }
    const auto a = intern(ends[0]);
    const auto b = intern(ends[1]);
    raw.emplace_back(a, b);
  }

  auto simple = detail::make_simple(static_cast<std::uint32_t>(ids.size()), raw);
  if (simple.edges.empty()) throw InvalidInput("empty graph");
  return largest_connected_component(simple);
}

inline UndirectedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const UndirectedGraph& g) {
  out << "# vertices " << g.n << " edges " << g.edges.size() << "\n";
  for (auto [a, b] : g.edges) out << a << ' ' << b << '\n';
}

/// Path graph 0-1-2-...-(n-1).
inline UndirectedGraph chain_graph(std::uint32_t n) {
  UndirectedGraph g;
  g.n = n;
  g.edges.reserve(n > 0 ? n - 1 : 0);
  for (std::uint32_t i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

/// Barabasi-Albert style graph: each new vertex attaches to `attach` distinct
/// earlier vertices chosen proportionally to degree. Connected for attach >= 1.
inline UndirectedGraph preferential_attachment_graph(std::uint32_t n, std::uint32_t attach,
                                                     std::uint64_t seed) {
  if (attach == 0 || n <= attach) throw InvalidInput("preferential attachment needs n > attach >= 1");
  Rng rng(seed, streams::kSynthetic);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
  std::vector<std::uint32_t> endpoints;
  // seed clique on attach + 1 vertices
  for (std::uint32_t i = 0; i <= attach; ++i) {
    for (std::uint32_t j = i + 1; j <= attach; ++j) {
      raw.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<std::uint32_t> targets;
  for (std::uint32_t v = attach + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < attach) {
      const auto pick = endpoints[rng.next_u64() % endpoints.size()];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
    }
    for (auto t : targets) {
      raw.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return detail::make_simple(n, raw);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_GRAPH_HPP
