#include "navcon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "navcon/errors.hpp"
#include "navcon/kernels.hpp"

namespace navcon {

ProximityGraph build_proximity_graph(std::span<const Vec2> positions, double radius,
                                     bool directed) {
  if (positions.empty()) throw InvalidInput("build_proximity_graph: no positions");
  if (!(radius > 0.0)) throw InvalidInput("build_proximity_graph: radius must be > 0");
  for (const Vec2& p : positions) {
    if (!p.finite()) throw InvalidInput("build_proximity_graph: non-finite coordinate");
  }

  const int n = static_cast<int>(positions.size());
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = positions[i].x;
    ys[i] = positions[i].y;
  }
  std::vector<double> dist(static_cast<std::size_t>(n) * (n - 1) / 2);
  kernels::pairwise_distances(xs, ys, dist);

  ProximityGraph g;
  g.node_count = n;
  g.directed = directed;
  g.radius = radius;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if (dist[k] <= radius) {
        g.edges.emplace_back(i, j);
        if (directed) g.edges.emplace_back(j, i);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

SquareMatrix laplacian(const ProximityGraph& graph) {
  if (graph.directed)
    throw InvalidInput("laplacian: spectral connectivity is defined on undirected graphs");
  SquareMatrix L(graph.node_count);
  for (auto [i, j] : graph.edges) {
    L.at(i, j) -= 1.0;
    L.at(j, i) -= 1.0;
    L.at(i, i) += 1.0;
    L.at(j, j) += 1.0;
  }
  return L;
}

namespace {

double offdiag_frobenius(const SquareMatrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (i != j) s += m.at(i, j) * m.at(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen symmetric_eigen(const SquareMatrix& m) {
  const int n = m.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-12)
        throw InvalidInput("symmetric_eigen: matrix is not symmetric");

  SquareMatrix a = m;
  SquareMatrix v(n);
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

  // Cyclic Jacobi: sweep all (p, q) pairs, rotate away a_pq each time.
  constexpr int kMaxSweeps = 100;
  constexpr double kOffTol = 1e-10;
  for (int sweep = 0; sweep < kMaxSweeps && offdiag_frobenius(a) >= kOffTol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        a.at(p, p) = app - t * apq;
        a.at(q, q) = aqq + t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a.at(r, p);
            const double arq = a.at(r, q);
            a.at(r, p) = a.at(p, r) = arp - s * (arq + tau * arp);
            a.at(r, q) = a.at(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v.at(r, p);
          const double vrq = v.at(r, q);
          v.at(r, p) = vrp - s * (vrq + tau * vrp);
          v.at(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a.at(i, i) < a.at(j, j); });

  SymmetricEigen out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a.at(order[k], order[k]);
    for (int r = 0; r < n; ++r)
      out.vectors[static_cast<std::size_t>(k) * n + r] = v.at(r, order[k]);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& m) {
  return symmetric_eigen(m).values;
}

bool bfs_connected(const ProximityGraph& graph) {
  const int n = graph.node_count;
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : graph.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : adj[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == n;
}

SpectralReport fiedler_value(const ProximityGraph& graph) {
  if (graph.directed)
    throw InvalidInput("fiedler_value: undirected graph required");
  if (graph.node_count < 2)
    throw InvalidInput("fiedler_value: need at least 2 nodes");

  SpectralReport rep;
  rep.eigenvalues = symmetric_eigenvalues(laplacian(graph));
  rep.fiedler = rep.eigenvalues[1];
  const bool spectral = rep.fiedler > kConnectivityEps;
  const bool reachable = bfs_connected(graph);
  // The two verdicts agree except in pathological rounding; BFS wins then.
  rep.connected = (spectral == reachable) ? spectral : reachable;
  return rep;
}

bool has_directed_spanning_tree(const ProximityGraph& graph, int root) {
  if (!graph.directed)
    throw InvalidInput("has_directed_spanning_tree: directed graph required");
  if (root < 0 || root >= graph.node_count)
    throw InvalidInput("has_directed_spanning_tree: root out of range");

  const int n = graph.node_count;
  // Stored (i, j) = "i senses j": information flows j -> i, so traverse j -> i.
  std::vector<std::vector<int>> flow(n);
  for (auto [i, j] : graph.edges) flow[j].push_back(i);

  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(root);
  seen[root] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : flow[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == n;
}

}  // namespace navcon
