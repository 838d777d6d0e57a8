#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netbart/rng.hpp"

namespace netbart {

// Undirected labeled graph over the levels of a network-structured
// categorical predictor. Vertices are referred to by index into the
// ordered label list, which matches the column's level universe.
struct Network {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;  // (u, v) with u < v, sorted
  std::vector<std::vector<int>> adjacency; // sorted neighbor lists

  int size() const { return static_cast<int>(vertices.size()); }
  bool has_edge(int u, int v) const;
  Eigen::MatrixXd adjacency_matrix() const;
};

Network make_network(std::vector<std::string> vertices,
                     const std::vector<std::pair<std::string, std::string>>& edges);

// Edge-list file: one edge per line, two whitespace-separated labels.
// Blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_edge_list(const std::string& path);

// Builds the network over the given vertex universe (schema level order).
Network load_network(const std::string& path, std::vector<std::string> universe);
// Universe taken as the sorted set of labels appearing in the file.
Network load_network(const std::string& path);

struct SpanningTree {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (u, v) with u < v
};

struct VertexBipartition {
  std::vector<int> left;   // sorted, non-empty
  std::vector<int> right;  // sorted, non-empty
};

Network induced_subgraph(const Network& g, const std::vector<int>& vs);
std::vector<std::vector<int>> connected_components(const Network& g);
bool is_connected(const Network& g);

Eigen::MatrixXd laplacian(const Network& g);

// Eigenvector of the second-smallest Laplacian eigenvalue, unit norm,
// sign fixed so the first entry larger than 1e-10 in magnitude is
// positive. Requires a connected graph on >= 2 vertices.
std::vector<double> fiedler_vector(const Network& g);

// Uniformly distributed spanning tree via loop-erased random walks,
// rooted at vertex 0 for a deterministic walk schedule.
SpanningTree wilson_spanning_tree(const Network& g, Rng& rng);

// Kirchhoff matrix-tree count: determinant of a Laplacian cofactor,
// rounded to the nearest integer when exactly representable. A
// disconnected graph yields 0.
double spanning_tree_count(const Network& g);

// The four network splitting strategies. Each returns a bipartition of
// the vertex set into two non-empty sides whose induced subgraphs are
// connected. All require a connected graph on >= 2 vertices.
//
//   gs1: deterministic Fiedler partition (entries > 0 left, rest right).
//   gs2: uniform spanning tree, delete a uniformly chosen edge.
//   gs3: uniform spanning tree, delete edge e with probability
//        proportional to the size of the smaller component it leaves.
//   gs4: Fiedler partition of a uniform spanning tree.
VertexBipartition split_gs1(const Network& g);
VertexBipartition split_gs2(const Network& g, Rng& rng);
VertexBipartition split_gs3(const Network& g, Rng& rng);
VertexBipartition split_gs4(const Network& g, Rng& rng);

// Subset variants used by the decision-rule prior: operate on the
// subgraph induced by `avail` (sorted original indices) and return
// bipartitions in original indices, without materializing a Network.
VertexBipartition split_gs1_on(const Network& g, const std::vector<int>& avail);
VertexBipartition split_gs2_on(const Network& g, const std::vector<int>& avail, Rng& rng);
VertexBipartition split_gs3_on(const Network& g, const std::vector<int>& avail, Rng& rng);
VertexBipartition split_gs4_on(const Network& g, const std::vector<int>& avail, Rng& rng);

bool subset_connected(const Network& g, const std::vector<int>& vs);

// X = U_d S_d^{1/2} from the SVD A = U S V^T with non-increasing singular
// values; each left singular vector's sign is fixed by its first entry
// larger than 1e-10 in magnitude.
Eigen::MatrixXd adjacency_spectral_embedding(const Network& g, int d);
Eigen::MatrixXd adjacency_spectral_embedding(const Eigen::MatrixXd& a, int d);

// R x C grid graph with vertices labeled "v0".."v{RC-1}" row-major.
Network grid_network(int rows, int cols);

}  // namespace netbart
