#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "scartower/errors.hpp"

namespace scartower {

/// Bounded-degree undirected site graph.  All locality notions in the
/// library (range, diameter, balls) are measured in the graph distance
/// of one of these.  Immutable after construction; queries are pure.
class SiteGraph {
 public:
  SiteGraph() = default;

  static SiteGraph from_edge_list(int n_sites, const std::vector<std::pair<int, int>>& edges) {
    SiteGraph g;
    g.n_ = n_sites;
    g.adj_.assign(static_cast<std::size_t>(n_sites), {});
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n_sites || b >= n_sites)
        throw SiteOutOfGraph("edge endpoint outside graph");
      if (a == b) continue;  // no self-loops
      auto e = std::minmax(a, b);
      if (!seen.insert(e).second) continue;  // no duplicate edges
      g.adj_[static_cast<std::size_t>(a)].push_back(b);
      g.adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    g.finish();
    return g;
  }

  static SiteGraph chain(int n_sites, bool periodic) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n_sites; ++i) edges.emplace_back(i, i + 1);
    if (periodic && n_sites > 2) edges.emplace_back(n_sites - 1, 0);
    return from_edge_list(n_sites, edges);
  }

  /// Sites indexed x + lx*y.
  static SiteGraph square_grid(int lx, int ly, bool periodic) {
    std::vector<std::pair<int, int>> edges;
    auto id = [lx](int x, int y) { return x + lx * y; };
    for (int y = 0; y < ly; ++y) {
      for (int x = 0; x < lx; ++x) {
        if (x + 1 < lx) edges.emplace_back(id(x, y), id(x + 1, y));
        else if (periodic && lx > 2) edges.emplace_back(id(x, y), id(0, y));
        if (y + 1 < ly) edges.emplace_back(id(x, y), id(x, y + 1));
        else if (periodic && ly > 2) edges.emplace_back(id(x, y), id(x, 0));
      }
    }
    return from_edge_list(lx * ly, edges);
  }

  int n_sites() const { return n_; }
  int max_degree() const { return max_degree_; }

  const std::vector<int>& neighbors(int i) const {
    check_site(i);
    return adj_[static_cast<std::size_t>(i)];
  }

  std::vector<std::pair<int, int>> edge_list() const {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n_; ++i)
      for (int j : adj_[static_cast<std::size_t>(i)])
        if (i < j) edges.emplace_back(i, j);
    return edges;
  }

  /// BFS distances from src; -1 marks unreachable sites.
  std::vector<int> bfs_distances(int src) const {
    check_site(src);
    std::vector<int> dist(static_cast<std::size_t>(n_), -1);
    std::deque<int> queue{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj_[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist;
  }

  /// Graph distance; nullopt for disconnected pairs (+infinity to callers).
  std::optional<int> distance(int i, int j) const {
    check_site(i);
    check_site(j);
    const int d = bfs_distances(i)[static_cast<std::size_t>(j)];
    if (d < 0) return std::nullopt;
    return d;
  }

  /// All sites within graph distance r of center, the radius-r shell
  /// included.  Sorted ascending.
  std::vector<int> ball(int center, int r) const {
    check_site(center);
    const auto dist = bfs_distances(center);
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (dist[static_cast<std::size_t>(i)] >= 0 && dist[static_cast<std::size_t>(i)] <= r)
        out.push_back(i);
    return out;
  }

  /// 1 + max pairwise distance; 1 for a singleton, 0 for the empty set.
  int diameter_of(const std::vector<int>& sites) const {
    if (sites.empty()) return 0;
    int max_pair = 0;
    for (std::size_t a = 0; a < sites.size(); ++a) {
      const auto dist = bfs_distances(sites[a]);
      for (std::size_t b = a + 1; b < sites.size(); ++b) {
        const int d = dist[static_cast<std::size_t>(sites[b])];
        if (d < 0) throw DisconnectedSupport("site set spans disconnected components");
        max_pair = std::max(max_pair, d);
      }
    }
    return 1 + max_pair;
  }

  bool connected() const {
    if (n_ == 0) return true;
    const auto dist = bfs_distances(0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
  }

  /// Greedy packing of disjoint radius-r balls: repeatedly take the
  /// smallest surviving site as a center and delete its radius-2r ball.
  /// Returned centers are pairwise farther than 2r apart, and there are
  /// at least ceil(N / (Delta^{2r}+1)) of them.
  std::vector<int> pack_spheres(int r) const {
    std::vector<bool> alive(static_cast<std::size_t>(n_), true);
    std::vector<int> centers;
    for (int v = 0; v < n_; ++v) {
      if (!alive[static_cast<std::size_t>(v)]) continue;
      centers.push_back(v);
      for (int w : ball(v, 2 * r)) alive[static_cast<std::size_t>(w)] = false;
    }
    return centers;
  }

  /// Partition of all sites into layers with pairwise distance > 2r
  /// inside each layer (so their radius-r balls are disjoint).  Greedy
  /// proper coloring of the distance-<=2r conflict graph, smallest
  /// available color first; at most Delta^{2r}+1 layers.
  std::vector<std::vector<int>> disjoint_layers(int r) const {
    std::vector<int> color(static_cast<std::size_t>(n_), -1);
    int n_colors = 0;
    for (int v = 0; v < n_; ++v) {
      std::vector<bool> used(static_cast<std::size_t>(n_colors + 1), false);
      for (int w : ball(v, 2 * r)) {
        if (w == v) continue;
        const int c = color[static_cast<std::size_t>(w)];
        if (c >= 0) used[static_cast<std::size_t>(c)] = true;
      }
      int c = 0;
      while (used[static_cast<std::size_t>(c)]) ++c;
      color[static_cast<std::size_t>(v)] = c;
      n_colors = std::max(n_colors, c + 1);
    }
    std::vector<std::vector<int>> layers(static_cast<std::size_t>(n_colors));
    for (int v = 0; v < n_; ++v) layers[static_cast<std::size_t>(color[static_cast<std::size_t>(v)])].push_back(v);
    return layers;
  }

 private:
  void check_site(int i) const {
    if (i < 0 || i >= n_) throw SiteOutOfGraph("site " + std::to_string(i) + " outside graph of " + std::to_string(n_) + " sites");
  }

  void finish() {
    max_degree_ = 0;
    for (auto& nb : adj_) {
      std::sort(nb.begin(), nb.end());
      max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    }
  }

  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  int max_degree_ = 0;
};

}  // namespace scartower
