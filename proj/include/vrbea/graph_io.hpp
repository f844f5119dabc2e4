#pragma once

// Graph file formats.
//
// Adjacency CSV: n lines of n comma separated 0/1 values.
// Edge-list CSV: optional "# nodes: <n>" line, header "i,j", then one
//   0-based undirected edge per line with i < j.
// Packed samples: '#' header lines (n, spec, theta, seed, ...) followed by
//   one line per graph holding the C(n,2) upper-triangle entries in
//   row-major order as '0'/'1' characters.

#include "vrbea/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace vrbea {

void write_adjacency_csv(std::ostream& out, const Graph& g);
void write_edge_list_csv(std::ostream& out, const Graph& g);

Graph read_adjacency_csv(std::istream& in);
/// `n` <= 0 takes the node count from the "# nodes:" line, else max index + 1.
Graph read_edge_list_csv(std::istream& in, int n = 0);

/// Detects the format from the first non-comment line.
Graph read_graph(const std::filesystem::path& path, int n = 0);
void write_graph(const std::filesystem::path& path, const Graph& g, bool edge_list = true);

std::string pack_graph(const Graph& g);
Graph unpack_graph(const std::string& bits, int n);

void write_packed_samples(std::ostream& out, const std::vector<Graph>& graphs,
                          const std::map<std::string, std::string>& header);
std::vector<Graph> read_packed_samples(std::istream& in,
                                       std::map<std::string, std::string>* header = nullptr);

}  // namespace vrbea
