#ifndef OPINION_OPT_INSTANCE_IO_HPP
#define OPINION_OPT_INSTANCE_IO_HPP

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "opinion_opt/error.hpp"
#include "opinion_opt/instance.hpp"

namespace opinion_opt {

/// Shortest-safe decimal: 17 significant digits round-trip every double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline double parse_double(const std::string& token, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE) {
    throw InvalidInput("instance file line " + std::to_string(line_no) + ": bad number '" + token + "'");
  }
  return v;
}

inline std::string header_field(const std::string& token, const std::string& key, std::size_t line_no) {
  if (token.rfind(key + "=", 0) != 0) {
    throw InvalidInput("instance file line " + std::to_string(line_no) + ": expected '" + key + "='");
  }
  return token.substr(key.size() + 1);
}

}  // namespace detail

/// Writes the self-describing text container:
///   opinion-opt-instance v1 n=<n> p=<p> k=<k>
///   s / l / u / alpha_init sections, one value per line
///   P section, one "row col value" triplet per line
inline void write_instance(std::ostream& out, const Instance& inst) {
  const std::size_t n = inst.size();
  out << "opinion-opt-instance v1 n=" << n << " p=" << to_int(inst.p) << " k=" << format_double(inst.budget)
      << '\n';
  auto section = [&](const char* name, const std::vector<double>& values) {
    out << name << '\n';
    for (double v : values) out << format_double(v) << '\n';
  };
  section("s", inst.s);
  section("l", inst.lower);
  section("u", inst.upper);
  section("alpha_init", inst.alpha_init);
  out << "P\n";
  const auto offsets = inst.P.row_offsets();
  const auto cols = inst.P.col_indices();
  const auto vals = inst.P.values();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
      out << i << ' ' << cols[e] << ' ' << format_double(vals[e]) << '\n';
    }
  }
}

inline Instance read_instance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw InvalidInput("instance file is empty");
  std::istringstream header(line);
  std::string magic, version, n_tok, p_tok, k_tok;
  header >> magic >> version >> n_tok >> p_tok >> k_tok;
  if (magic != "opinion-opt-instance" || version != "v1") {
    throw InvalidInput("not an opinion-opt-instance v1 file");
  }
  const auto n_str = detail::header_field(n_tok, "n", line_no);
  const auto n = static_cast<std::size_t>(std::stoull(n_str));
  const int p = std::stoi(detail::header_field(p_tok, "p", line_no));

  Instance inst;
  inst.p = norm_order_from_int(p);
  inst.budget = detail::parse_double(detail::header_field(k_tok, "k", line_no), line_no);

  auto read_section = [&](const char* name, std::vector<double>& dst) {
    if (!next_line() || line != name) {
      throw InvalidInput("instance file line " + std::to_string(line_no) + ": expected section '" +
                         name + "'");
    }
    dst.resize(n);
    for (auto& v : dst) {
      if (!next_line()) throw InvalidInput(std::string("truncated section '") + name + "'");
      v = detail::parse_double(line, line_no);
    }
  };
  read_section("s", inst.s);
  read_section("l", inst.lower);
  read_section("u", inst.upper);
  read_section("alpha_init", inst.alpha_init);

  if (!next_line() || line != "P") {
    throw InvalidInput("instance file line " + std::to_string(line_no) + ": expected section 'P'");
  }
  std::vector<Triplet> triplets;
  while (next_line()) {
    std::istringstream row(line);
    unsigned long r = 0, c = 0;
    std::string value, extra;
    if (!(row >> r >> c >> value) || (row >> extra)) {
      throw InvalidInput("instance file line " + std::to_string(line_no) + ": bad triplet");
    }
    triplets.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c),
                        detail::parse_double(value, line_no)});
  }
  inst.P = SparseRowStochasticMatrix::from_triplets(n, std::move(triplets));
  inst.validate();
  return inst;
}

inline void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write instance file '" + path + "'");
  write_instance(out, inst);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file '" + path + "'");
  return read_instance(in);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_INSTANCE_IO_HPP
