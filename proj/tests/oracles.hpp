#pragma once

// Slow reference implementations the tests compare against. None of them
// shares code with the library beyond the plain data types.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "percshape/lattice.hpp"

namespace oracle {

using percshape::Point;

/// One parallel update on sites lo..lo+occ.size()-1, drawing one uniform per
/// unblocked particle in ascending site order. The top site never moves.
template <class Engine>
std::vector<bool> tasep_step(const std::vector<bool>& occ, double p, Engine& rng) {
  std::vector<bool> next = occ;
  std::bernoulli_distribution coin(p);
  for (std::size_t s = 0; s + 1 < occ.size(); ++s) {
    if (occ[s] && !occ[s + 1] && coin(rng)) {
      next[s] = false;
      next[s + 1] = true;
    }
  }
  return next;
}

/// Position after n steps of the k-th particle from the right when every
/// unblocked particle jumps.
inline long deterministic_position(long n, long k) { return 1 - k + std::max(0L, n - k + 1); }

/// Max weight over all up-right paths (1,1) -> (a,b), by recursion over
/// every path. g is 0-indexed.
inline std::int64_t lpp_brute(const std::vector<std::vector<std::int64_t>>& g, int a, int b) {
  std::function<std::int64_t(int, int)> best = [&](int i, int j) -> std::int64_t {
    const std::int64_t w = g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    if (i == 1 && j == 1) return w;
    std::int64_t m = std::numeric_limits<std::int64_t>::min();
    if (i > 1) m = std::max(m, best(i - 1, j));
    if (j > 1) m = std::max(m, best(i, j - 1));
    return w + m;
  };
  return best(a, b);
}

/// Dijkstra on the cross graph over columns [x_lo, x_hi] and rows
/// [y_lo, y_hi]: unit verticals, weight-2 diagonals both ways, horizontal
/// edge (i,j)-(i+1,j) present iff open(i,j). Edges are undirected.
inline std::map<Point, std::int64_t> cross_dijkstra(int x_lo, int x_hi, int y_lo, int y_hi,
                                                    const std::function<bool(int, int)>& open, Point src) {
  std::map<Point, std::int64_t> dist;
  using Item = std::pair<std::int64_t, Point>;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  dist[src] = 0;
  pq.push({0, src});
  auto inside = [&](Point p) { return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi; };
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    std::vector<std::pair<Point, int>> nb{{{u.x, u.y + 1}, 1}, {{u.x, u.y - 1}, 1},
                                          {{u.x + 1, u.y + 1}, 2}, {{u.x + 1, u.y - 1}, 2},
                                          {{u.x - 1, u.y + 1}, 2}, {{u.x - 1, u.y - 1}, 2}};
    if (open(u.x, u.y)) nb.push_back({{u.x + 1, u.y}, 1});
    if (open(u.x - 1, u.y)) nb.push_back({{u.x - 1, u.y}, 1});
    for (const auto& [v, w] : nb) {
      if (!inside(v)) continue;
      auto it = dist.find(v);
      if (it == dist.end() || d + w < it->second) {
        dist[v] = d + w;
        pq.push({d + w, v});
      }
    }
  }
  return dist;
}

/// Unit-weight shortest paths over an explicit set of open edges.
inline std::map<Point, std::int64_t> edge_set_bfs(const std::set<std::pair<Point, Point>>& open_edges, Point src) {
  std::map<Point, std::vector<Point>> adj;
  for (const auto& [a, b] : open_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<Point, std::int64_t> dist{{src, 0}};
  std::queue<Point> q;
  q.push(src);
  while (!q.empty()) {
    const Point u = q.front();
    q.pop();
    for (const Point& v : adj[u]) {
      if (dist.emplace(v, dist[u] + 1).second) q.push(v);
    }
  }
  return dist;
}

}  // namespace oracle
