#include "netbart/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace netbart {

namespace {

constexpr double kZeroTol = 1e-10;

void build_adjacency(Network& g) {
  g.adjacency.assign(g.size(), {});
  for (auto [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
}

}  // namespace

bool Network::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

Eigen::MatrixXd Network::adjacency_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size(), size());
  for (auto [u, v] : edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Network make_network(std::vector<std::string> vertices,
                     const std::vector<std::pair<std::string, std::string>>& edges) {
  Network g;
  g.vertices = std::move(vertices);
  std::map<std::string, int> index;
  for (int i = 0; i < g.size(); ++i) {
    if (!index.emplace(g.vertices[i], i).second) {
      throw std::runtime_error("network: duplicate vertex label '" + g.vertices[i] + "'");
    }
  }
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end()) throw std::runtime_error("network: unknown vertex label '" + a + "'");
    if (ib == index.end()) throw std::runtime_error("network: unknown vertex label '" + b + "'");
    int u = ia->second, v = ib->second;
    if (u == v) throw std::runtime_error("network: self-loop at '" + a + "'");
    if (u > v) std::swap(u, v);
    g.edges.emplace_back(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  build_adjacency(g);
  return g;
}

std::vector<std::pair<std::string, std::string>> read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("network: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra)) {
      throw std::runtime_error("network: malformed edge at " + path + ":" + std::to_string(lineno));
    }
    edges.emplace_back(a, b);
  }
  return edges;
}

Network load_network(const std::string& path, std::vector<std::string> universe) {
  return make_network(std::move(universe), read_edge_list(path));
}

Network load_network(const std::string& path) {
  auto edges = read_edge_list(path);
  std::vector<std::string> labels;
  for (const auto& [a, b] : edges) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  Network g;
  g.vertices = std::move(labels);
  std::map<std::string, int> index;
  for (int i = 0; i < g.size(); ++i) index[g.vertices[i]] = i;
  for (const auto& [a, b] : edges) {
    int u = index[a], v = index[b];
    if (u == v) throw std::runtime_error("network: self-loop at '" + a + "'");
    if (u > v) std::swap(u, v);
    g.edges.emplace_back(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  build_adjacency(g);
  return g;
}

Network induced_subgraph(const Network& g, const std::vector<int>& vs) {
  std::vector<int> sorted(vs);
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::runtime_error("induced_subgraph: duplicate vertex");
  }
  std::vector<int> local(g.size(), -1);
  Network sub;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    int v = sorted[i];
    if (v < 0 || v >= g.size()) throw std::runtime_error("induced_subgraph: unknown vertex");
    local[v] = static_cast<int>(i);
    sub.vertices.push_back(g.vertices[v]);
  }
  for (auto [u, v] : g.edges) {
    if (local[u] >= 0 && local[v] >= 0) sub.edges.emplace_back(local[u], local[v]);
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  build_adjacency(sub);
  return sub;
}

std::vector<std::vector<int>> connected_components(const Network& g) {
  std::vector<int> comp(g.size(), -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    stack.push_back(s);
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      out[id].push_back(u);
      for (int v : g.adjacency[u]) {
        if (comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  // Component order: by smallest member, which is the discovery order.
  return out;
}

bool is_connected(const Network& g) {
  return g.size() <= 1 || connected_components(g).size() == 1;
}

bool subset_connected(const Network& g, const std::vector<int>& vs) {
  if (vs.empty()) return false;
  if (vs.size() == 1) return true;
  std::vector<char> in_set(g.size(), 0), seen(g.size(), 0);
  for (int v : vs) in_set[v] = 1;
  std::vector<int> stack{vs[0]};
  seen[vs[0]] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.adjacency[u]) {
      if (in_set[v] && !seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == vs.size();
}

Eigen::MatrixXd laplacian(const Network& g) {
  Eigen::MatrixXd l = -g.adjacency_matrix();
  for (int i = 0; i < g.size(); ++i) l(i, i) = static_cast<double>(g.adjacency[i].size());
  return l;
}

namespace {

// Sign convention shared by Fiedler vectors and singular vectors: flip so
// the first entry with magnitude above tolerance is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::fabs(v(i)) > kZeroTol) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

std::vector<double> fiedler_of_local(const Network& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g));
  if (es.info() != Eigen::Success) throw std::runtime_error("fiedler_vector: eigensolver failed");
  Eigen::VectorXd v = es.eigenvectors().col(1);
  normalize_sign(v);
  return {v.data(), v.data() + v.size()};
}

// Fiedler split of a connected graph: strictly positive entries left,
// zeros and negatives right. If a side comes out empty, the vertex with
// the smallest magnitude entry crosses over.
std::pair<std::vector<int>, std::vector<int>> fiedler_split_local(const Network& g) {
  std::vector<double> v = fiedler_of_local(g);
  std::vector<int> left, right;
  for (int i = 0; i < g.size(); ++i) {
    (v[i] > kZeroTol ? left : right).push_back(i);
  }
  auto steal_min_abs = [&](std::vector<int>& from, std::vector<int>& to) {
    auto it = std::min_element(from.begin(), from.end(), [&](int a, int b) {
      return std::fabs(v[a]) < std::fabs(v[b]);
    });
    to.push_back(*it);
    from.erase(it);
    std::sort(to.begin(), to.end());
  };
  if (left.empty()) steal_min_abs(right, left);
  if (right.empty()) steal_min_abs(left, right);
  return {std::move(left), std::move(right)};
}

}  // namespace

std::vector<double> fiedler_vector(const Network& g) {
  if (g.size() < 2) throw std::runtime_error("fiedler_vector: need at least 2 vertices");
  if (!is_connected(g)) throw std::runtime_error("fiedler_vector: graph is disconnected");
  return fiedler_of_local(g);
}

SpanningTree wilson_spanning_tree(const Network& g, Rng& rng) {
  if (g.size() < 1) throw std::runtime_error("wilson_spanning_tree: empty graph");
  if (!is_connected(g)) throw std::runtime_error("wilson_spanning_tree: graph is disconnected");
  SpanningTree tree;
  tree.n_vertices = g.size();
  if (g.size() == 1) return tree;

  std::vector<char> in_tree(g.size(), 0);
  std::vector<int> next(g.size(), -1);
  in_tree[0] = 1;
  for (int start = 1; start < g.size(); ++start) {
    if (in_tree[start]) continue;
    // Random walk from `start` until the tree is hit; cycles are erased
    // implicitly by overwriting next[].
    int u = start;
    while (!in_tree[u]) {
      const auto& nbrs = g.adjacency[u];
      next[u] = nbrs[rng.uniform_int(nbrs.size())];
      u = next[u];
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = 1;
      int a = u, b = next[u];
      if (a > b) std::swap(a, b);
      tree.edges.emplace_back(a, b);
      u = next[u];
    }
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

double spanning_tree_count(const Network& g) {
  if (g.size() <= 1) return 1.0;
  Eigen::MatrixXd l = laplacian(g);
  Eigen::MatrixXd minor = l.block(1, 1, g.size() - 1, g.size() - 1);
  double det = minor.partialPivLu().determinant();
  if (det < 0.5) return 0.0;
  if (det < 9.0e15) return std::round(det);
  return det;
}

namespace {

struct LocalView {
  std::vector<int> avail;              // sorted original indices
  std::vector<std::vector<int>> adj;   // local neighbor lists
};

LocalView make_local_view(const Network& g, const std::vector<int>& avail) {
  LocalView view;
  view.avail = avail;
  std::sort(view.avail.begin(), view.avail.end());
  std::vector<int> local(g.size(), -1);
  for (std::size_t i = 0; i < view.avail.size(); ++i) local[view.avail[i]] = static_cast<int>(i);
  view.adj.assign(view.avail.size(), {});
  for (std::size_t i = 0; i < view.avail.size(); ++i) {
    for (int w : g.adjacency[view.avail[i]]) {
      if (local[w] >= 0) view.adj[i].push_back(local[w]);
    }
  }
  return view;
}

Network network_from_local(const LocalView& view) {
  Network sub;
  sub.vertices.resize(view.avail.size());
  for (std::size_t i = 0; i < view.avail.size(); ++i) sub.vertices[i] = std::to_string(i);
  sub.adjacency = view.adj;
  for (int u = 0; u < sub.size(); ++u) {
    for (int v : view.adj[u]) {
      if (u < v) sub.edges.emplace_back(u, v);
    }
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  return sub;
}

Network network_from_tree(const SpanningTree& tree) {
  Network t;
  t.vertices.resize(tree.n_vertices);
  for (int i = 0; i < tree.n_vertices; ++i) t.vertices[i] = std::to_string(i);
  t.edges = tree.edges;
  build_adjacency(t);
  return t;
}

VertexBipartition to_original(const LocalView& view, std::vector<int> left, std::vector<int> right) {
  VertexBipartition out;
  out.left.reserve(left.size());
  out.right.reserve(right.size());
  for (int i : left) out.left.push_back(view.avail[i]);
  for (int i : right) out.right.push_back(view.avail[i]);
  std::sort(out.left.begin(), out.left.end());
  std::sort(out.right.begin(), out.right.end());
  return out;
}

void require_splittable(const LocalView& view, const char* who) {
  if (view.avail.size() < 2) {
    throw std::runtime_error(std::string(who) + ": need at least 2 vertices");
  }
}

// Components of a spanning tree after deleting edge `skip`; left is the
// component holding the smallest vertex.
std::pair<std::vector<int>, std::vector<int>> tree_minus_edge(
    const std::vector<std::vector<int>>& tree_adj, std::pair<int, int> skip) {
  const int n = static_cast<int>(tree_adj.size());
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::vector<int> left;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    left.push_back(u);
    for (int v : tree_adj[u]) {
      int a = std::min(u, v), b = std::max(u, v);
      if (a == skip.first && b == skip.second) continue;
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  std::vector<int> right;
  for (int v = 0; v < n; ++v) {
    if (!seen[v]) right.push_back(v);
  }
  std::sort(left.begin(), left.end());
  return {std::move(left), std::move(right)};
}

std::vector<std::vector<int>> tree_adjacency(const SpanningTree& tree) {
  std::vector<std::vector<int>> adj(tree.n_vertices);
  for (auto [u, v] : tree.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

SpanningTree wilson_on_local(const LocalView& view, Rng& rng) {
  Network sub = network_from_local(view);
  if (!is_connected(sub)) {
    throw std::runtime_error("network split: available set induces a disconnected subgraph");
  }
  return wilson_spanning_tree(sub, rng);
}

}  // namespace

VertexBipartition split_gs1_on(const Network& g, const std::vector<int>& avail) {
  LocalView view = make_local_view(g, avail);
  require_splittable(view, "split_gs1");
  Network sub = network_from_local(view);
  if (!is_connected(sub)) {
    throw std::runtime_error("split_gs1: available set induces a disconnected subgraph");
  }
  auto [left, right] = fiedler_split_local(sub);
  return to_original(view, std::move(left), std::move(right));
}

VertexBipartition split_gs2_on(const Network& g, const std::vector<int>& avail, Rng& rng) {
  LocalView view = make_local_view(g, avail);
  require_splittable(view, "split_gs2");
  SpanningTree tree = wilson_on_local(view, rng);
  auto edge = tree.edges[rng.uniform_int(tree.edges.size())];
  auto [left, right] = tree_minus_edge(tree_adjacency(tree), edge);
  return to_original(view, std::move(left), std::move(right));
}

VertexBipartition split_gs3_on(const Network& g, const std::vector<int>& avail, Rng& rng) {
  LocalView view = make_local_view(g, avail);
  require_splittable(view, "split_gs3");
  SpanningTree tree = wilson_on_local(view, rng);
  auto adj = tree_adjacency(tree);
  const int n = tree.n_vertices;

  // Subtree sizes from a DFS rooted at 0 give each edge's smaller side.
  std::vector<int> parent(n, -1), order;
  order.reserve(n);
  {
    std::vector<int> stack{0};
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      order.push_back(u);
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          parent[v] = u;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<int> subtree(n, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent[*it] >= 0) subtree[parent[*it]] += subtree[*it];
  }
  std::vector<double> weight(tree.edges.size());
  double total = 0.0;
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    auto [u, v] = tree.edges[e];
    int child = (parent[v] == u) ? v : u;
    int s = std::min(subtree[child], n - subtree[child]);
    weight[e] = static_cast<double>(s);
    total += weight[e];
  }
  double target = rng.uniform() * total;
  std::size_t pick = 0;
  double acc = 0.0;
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    acc += weight[e];
    if (target < acc) {
      pick = e;
      break;
    }
    pick = e;  // fall through to the last edge on floating round-off
  }
  auto [left, right] = tree_minus_edge(adj, tree.edges[pick]);
  return to_original(view, std::move(left), std::move(right));
}

VertexBipartition split_gs4_on(const Network& g, const std::vector<int>& avail, Rng& rng) {
  LocalView view = make_local_view(g, avail);
  require_splittable(view, "split_gs4");
  SpanningTree tree = wilson_on_local(view, rng);
  auto [left, right] = fiedler_split_local(network_from_tree(tree));
  return to_original(view, std::move(left), std::move(right));
}

namespace {

std::vector<int> all_indices(const Network& g) {
  std::vector<int> idx(g.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

VertexBipartition split_gs1(const Network& g) { return split_gs1_on(g, all_indices(g)); }
VertexBipartition split_gs2(const Network& g, Rng& rng) { return split_gs2_on(g, all_indices(g), rng); }
VertexBipartition split_gs3(const Network& g, Rng& rng) { return split_gs3_on(g, all_indices(g), rng); }
VertexBipartition split_gs4(const Network& g, Rng& rng) { return split_gs4_on(g, all_indices(g), rng); }

Eigen::MatrixXd adjacency_spectral_embedding(const Network& g, int d) {
  return adjacency_spectral_embedding(g.adjacency_matrix(), d);
}

Eigen::MatrixXd adjacency_spectral_embedding(const Eigen::MatrixXd& a, int d) {
  if (d < 1 || d > a.rows()) throw std::runtime_error("adjacency_spectral_embedding: d out of range");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  Eigen::MatrixXd u = svd.matrixU().leftCols(d);
  Eigen::VectorXd s = svd.singularValues().head(d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd col = u.col(j);
    normalize_sign(col);
    u.col(j) = col;
  }
  return u * s.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Network grid_network(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::runtime_error("grid_network: bad dimensions");
  std::vector<std::string> labels;
  for (int i = 0; i < rows * cols; ++i) labels.push_back("v" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> edges;
  auto id = [&](int r, int c) { return "v" + std::to_string(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return make_network(std::move(labels), edges);
}

}  // namespace netbart
