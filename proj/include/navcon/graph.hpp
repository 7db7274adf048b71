#pragma once

#include <span>
#include <utility>
#include <vector>

#include "navcon/vec2.hpp"

namespace navcon {

/// Dense square matrix, row-major. Small: graph Laplacians for N <= ~20 nodes.
struct SquareMatrix {
  int n = 0;
  std::vector<double> a;

  SquareMatrix() = default;
  explicit SquareMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Edge set induced by a sensing radius over agent positions.
///
/// Undirected mode stores each pair once as (i, j) with i < j. Directed mode
/// stores ordered pairs where (i, j) means "i senses j"; since sensing is
/// mutual at equal radius, build_proximity_graph emits both arcs of a pair.
/// Information flows against the sensing direction: (i, j) carries data j -> i.
struct ProximityGraph {
  int node_count = 0;
  bool directed = false;
  double radius = 0.0;
  std::vector<std::pair<int, int>> edges;
};

/// Laplacian spectrum summary for an undirected graph.
struct SpectralReport {
  std::vector<double> eigenvalues;  // ascending
  double fiedler = 0.0;             // second-smallest eigenvalue
  bool connected = false;
};

/// Eigen-decomposition of a symmetric matrix: values ascending, vectors[k*n..]
/// holding the eigenvector for values[k].
struct SymmetricEigen {
  int n = 0;
  std::vector<double> values;
  std::vector<double> vectors;  // row k = eigenvector k
};

// Threshold on lambda_2 below which a graph is treated as disconnected;
// absorbs eigensolver noise. BFS is the authoritative tie-breaker.
inline constexpr double kConnectivityEps = 1e-8;

/// Builds the proximity graph: edge (i, j) iff ||q_i - q_j|| <= radius, i != j.
/// The boundary is inclusive. Throws InvalidInput on non-finite coordinates,
/// empty input, or radius <= 0.
ProximityGraph build_proximity_graph(std::span<const Vec2> positions, double radius,
                                     bool directed);

/// L = D - A for an undirected graph. Throws InvalidInput on directed input.
SquareMatrix laplacian(const ProximityGraph& graph);

/// All eigenvalues of a symmetric matrix, ascending. Cyclic Jacobi rotations;
/// converged when the off-diagonal Frobenius norm drops below 1e-10 (at most
/// 100 sweeps). Throws InvalidInput if the matrix is asymmetric beyond 1e-12.
std::vector<double> symmetric_eigenvalues(const SquareMatrix& m);

/// Eigenvalues and eigenvectors (same solver as symmetric_eigenvalues).
SymmetricEigen symmetric_eigen(const SquareMatrix& m);

/// Fiedler value lambda_2 of the graph Laplacian plus a connectivity verdict
/// cross-checked against BFS. Requires an undirected graph with >= 2 nodes.
SpectralReport fiedler_value(const ProximityGraph& graph);

/// True iff every node is reachable along undirected edges from node 0.
bool bfs_connected(const ProximityGraph& graph);

/// True iff every node receives information originating at `root`, i.e. is
/// reachable along arcs traversed against the stored sensing direction.
bool has_directed_spanning_tree(const ProximityGraph& graph, int root);

}  // namespace navcon
