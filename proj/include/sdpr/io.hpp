#pragma once

#include "sdpr/linalg.hpp"
#include "sdpr/problem.hpp"

#include <istream>
#include <string>
#include <vector>

namespace sdpr::io {

struct Graph {
  Eigen::Index n = 0;
  std::vector<WeightedEdge> edges;  // 0-based
};

// Whitespace-delimited `i j [w]` lines, 1-indexed, `#` comments. A comment
// of the form `# n=<int>` fixes the vertex count; otherwise it is the
// largest index seen. Missing weights default to 1.
Graph read_edge_list(std::istream& in);

// Matrix Market `coordinate real|integer|pattern symmetric|general`. Only
// off-diagonal entries become edges. In a general file each entry carries
// half its weight, so an entry and its mirror sum to the stored value.
Graph read_matrix_market(std::istream& in);

// Dispatches on the `%%MatrixMarket` banner. Throws InputError when the file
// cannot be opened.
Graph read_graph_file(const std::string& path);

struct ObservationSet {
  Eigen::Index n1 = 0;
  Eigen::Index n2 = 0;
  std::vector<Observation> observations;  // 0-based
};

// First line `# n1=<int> n2=<int>`, then a header `i,j,value`, then one
// 1-indexed observation per line.
ObservationSet read_observations(std::istream& in);
ObservationSet read_observations_file(const std::string& path);

// Plain-text dense matrix: a header line `rows cols` then the entries in
// column-major order, one per line.
void write_dense(std::ostream& out, const Matrix& a);
Matrix read_dense(std::istream& in);

}  // namespace sdpr::io
