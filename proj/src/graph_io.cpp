#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "vnom/graph.hpp"

namespace vnom {

namespace {

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw std::runtime_error(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Graph read_edge_list(std::istream& in, std::string_view source) {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  std::map<std::pair<int, int>, std::pair<double, std::size_t>> edges;

  auto vertex = [&](const std::string& name) {
    auto [it, fresh] = index.emplace(name, static_cast<int>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() == 1) {
      vertex(tok[0]);
      continue;
    }
    if (tok.size() > 3) fail(source, lineno, "expected 'u v [w]', got " + std::to_string(tok.size()) + " fields");
    if (tok[0] == tok[1]) fail(source, lineno, "self-loop on vertex '" + tok[0] + "'");
    double w = 1.0;
    if (tok.size() == 3) {
      const char* b = tok[2].data();
      const char* e = b + tok[2].size();
      auto [ptr, ec] = std::from_chars(b, e, w);
      if (ec != std::errc() || ptr != e) fail(source, lineno, "malformed weight '" + tok[2] + "'");
      if (!std::isfinite(w) || w < 0.0) fail(source, lineno, "weight must be finite and >= 0");
    }
    int u = vertex(tok[0]);
    int v = vertex(tok[1]);
    auto key = std::minmax(u, v);
    auto [it, fresh] = edges.emplace(key, std::make_pair(w, lineno));
    if (!fresh && it->second.first != w)
      fail(source, lineno, "duplicate edge " + tok[0] + " " + tok[1] + " conflicts with weight on line " +
                               std::to_string(it->second.second));
  }

  GraphBuilder b(names.size(), names);
  for (const auto& [key, val] : edges)
    if (val.first != 0.0) b.set_edge(key.first, key.second, val.first);
  return std::move(b).build();
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  return read_edge_list(in, path);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  // Declaring every vertex up front keeps isolates and the vertex order
  // when the file is read back.
  out << "# " << g.size() << " vertices, " << g.edge_count() << " edges\n";
  for (std::size_t v = 0; v < g.size(); ++v) out << g.name(static_cast<int>(v)) << '\n';
  std::ostringstream body;
  body.precision(17);
  for (const Edge& e : g.edges()) {
    body << g.name(e.u) << ' ' << g.name(e.v);
    if (e.weight != 1.0) body << ' ' << e.weight;
    body << '\n';
  }
  out << body.str();
}

}  // namespace vnom
