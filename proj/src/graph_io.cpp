#include "vrbea/graph_io.hpp"

#include "vrbea/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vrbea {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

int parse_int(const std::string& s, int line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(fmt::format("line {}: cannot parse integer '{}'", line_no, s));
  return v;
}

}  // namespace

void write_adjacency_csv(std::ostream& out, const Graph& g) {
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ',';
      out << (i != j && g.has_edge(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

void write_edge_list_csv(std::ostream& out, const Graph& g) {
  out << "# nodes: " << g.size() << '\n' << "i,j\n";
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      if (g.has_edge(i, j)) out << i << ',' << j << '\n';
}

Graph read_adjacency_csv(std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<int> row;
    for (const std::string& cell : split(line, ',')) row.push_back(parse_int(cell, line_no));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw ConfigError("adjacency file is empty");
  Eigen::MatrixXd adj(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw ConfigError(fmt::format("adjacency row {} has {} entries, expected {}", i, rows[i].size(), n));
    for (int j = 0; j < n; ++j) adj(i, j) = rows[i][j];
  }
  return Graph::from_matrix(adj);
}

Graph read_edge_list_csv(std::istream& in, int n) {
  std::vector<std::pair<int, int>> edges;
  int declared = 0;
  bool header_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("nodes:");
      if (pos != std::string::npos) declared = parse_int(trim(line.substr(pos + 6)), line_no);
      continue;
    }
    if (!header_seen) {
      if (line != "i,j") throw ConfigError(fmt::format("line {}: expected header 'i,j'", line_no));
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 2) throw ConfigError(fmt::format("line {}: expected two columns", line_no));
    const int i = parse_int(cells[0], line_no);
    const int j = parse_int(cells[1], line_no);
    if (i < 0 || j < 0 || i == j) throw ConfigError(fmt::format("line {}: invalid edge ({}, {})", line_no, i, j));
    edges.emplace_back(i, j);
  }
  if (!header_seen) throw ConfigError("edge list is missing the 'i,j' header");
  int nodes = n > 0 ? n : declared;
  if (nodes <= 0)
    for (auto [i, j] : edges) nodes = std::max({nodes, i + 1, j + 1});
  if (nodes <= 0) throw ConfigError("cannot determine the node count of an empty edge list");
  Graph g(nodes);
  for (auto [i, j] : edges) {
    if (i >= nodes || j >= nodes) throw ConfigError(fmt::format("edge ({}, {}) exceeds node count {}", i, j, nodes));
    g.set_edge(i, j, true);
  }
  return g;
}

Graph read_graph(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open graph file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream probe(text);
  std::string line;
  bool edge_list = false;
  while (std::getline(probe, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    edge_list = (line == "i,j");
    break;
  }
  std::istringstream body(text);
  return edge_list ? read_edge_list_csv(body, n) : read_adjacency_csv(body);
}

void write_graph(const std::filesystem::path& path, const Graph& g, bool edge_list) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write graph file '{}'", path.string()));
  if (edge_list)
    write_edge_list_csv(out, g);
  else
    write_adjacency_csv(out, g);
}

std::string pack_graph(const Graph& g) {
  std::string bits;
  bits.reserve(static_cast<std::size_t>(g.size()) * (g.size() - 1) / 2);
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j) bits.push_back(g.has_edge(i, j) ? '1' : '0');
  return bits;
}

Graph unpack_graph(const std::string& bits, int n) {
  if (bits.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
    throw ConfigError(fmt::format("packed graph has {} bits, expected {}", bits.size(), n * (n - 1) / 2));
  Graph g(n);
  std::size_t b = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++b) {
      if (bits[b] == '1')
        g.set_edge(i, j, true);
      else if (bits[b] != '0')
        throw ConfigError("packed graph contains a character other than 0/1");
    }
  return g;
}

void write_packed_samples(std::ostream& out, const std::vector<Graph>& graphs,
                          const std::map<std::string, std::string>& header) {
  out << "# vrbea packed samples: one graph per line, upper triangle row-major\n";
  if (!graphs.empty() && !header.count("n")) out << "# n=" << graphs.front().size() << '\n';
  for (const auto& [key, value] : header) out << "# " << key << '=' << value << '\n';
  for (const Graph& g : graphs) out << pack_graph(g) << '\n';
}

std::vector<Graph> read_packed_samples(std::istream& in, std::map<std::string, std::string>* header) {
  std::map<std::string, std::string> fields;
  std::vector<Graph> graphs;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::string key = trim(line.substr(1, eq - 1));
        fields[key] = trim(line.substr(eq + 1));
        if (key == "n") n = parse_int(fields[key], 0);
      }
      continue;
    }
    if (n <= 0) throw ConfigError("packed samples are missing the 'n' header");
    graphs.push_back(unpack_graph(line, n));
  }
  if (header) *header = std::move(fields);
  return graphs;
}

}  // namespace vrbea
