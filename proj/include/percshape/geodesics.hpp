#pragma once

// Canonical cross-model geodesics built from particle trajectories alone,
// their conversion into Z^2 paths, and the repair of closed edges through
// the boundaries of closed dual clusters.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cross.hpp"
#include "lattice.hpp"
#include "percolation.hpp"
#include "stats.hpp"
#include "tasep.hpp"

namespace percshape {

enum class StepKind : char { E = 'E', NE = 'U', SE = 'D', N = 'N', S = 'S' };

/// Which rule produced the backward step into a column: A = the particle
/// below had just jumped, B = the particle above it moved away, C = no
/// particle above (horizontal step).
enum class GeodesicCase : char { A = 'A', B = 'B', C = 'C' };

inline int step_weight(StepKind k) { return (k == StepKind::NE || k == StepKind::SE) ? 2 : 1; }

struct GeodesicPath {
  std::vector<Point> vertices;        // origin first, target last
  std::vector<StepKind> steps;        // steps[k] joins vertices[k] and vertices[k+1]
  std::vector<GeodesicCase> cases;    // cases[i] produced the step from column i to i+1
  std::int64_t total_weight = 0;
  int final_vertical = 0;             // N/S steps taken in the last column

  int diagonals() const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(),
                                          [](StepKind k) { return k == StepKind::NE || k == StepKind::SE; }));
  }

  std::string case_string() const {
    std::string s;
    for (GeodesicCase c : cases) s.push_back(static_cast<char>(c));
    return s;
  }
};

namespace detail {

/// Read access to a trajectory that refuses to guess outside its window.
class OccupancyView {
public:
  explicit OccupancyView(const Trajectory& t) : t_(&t) {}
  bool operator()(long i, int j) const {
    if (i < 0 || i > t_->steps()) throw std::out_of_range("trajectory does not cover the requested column");
    if (j < t_->window_lo() || j > t_->window_hi()) throw std::out_of_range("trajectory window too small");
    return t_->occupied(i, j);
  }
  /// Particle on the edge below (i,j) and none on the edge above.
  bool good(long i, int j) const { return (*this)(i, j) && !(*this)(i, j + 1); }

private:
  const Trajectory* t_;
};

}  // namespace detail

/// Builds the canonical geodesic from the origin to `target` = (n, j_E)
/// using only the trajectory: a vertical scan in column n to a vertex with
/// a particle just below and an empty edge just above, then n backward
/// steps, each chosen by exactly one of cases A/B/C.
inline GeodesicPath build_geodesic(const Trajectory& traj, Point target) {
  const detail::OccupancyView occ(traj);
  const int n = target.x;
  if (n < 0 || n > traj.steps()) throw std::out_of_range("build_geodesic: trajectory does not reach the target column");

  // Vertical scan in column n.
  int j = target.y;
  int vertical = 0;
  StepKind vertical_kind = StepKind::N;
  if (!occ.good(n, j)) {
    if (!occ(n, j)) {
      // walk down to the first vertex with a particle below; forward steps go up
      while (!occ.good(n, j)) {
        --j;
        ++vertical;
      }
      vertical_kind = StepKind::N;
    } else {
      while (!occ.good(n, j)) {
        ++j;
        ++vertical;
      }
      vertical_kind = StepKind::S;
    }
  }

  std::vector<Point> backward{target};
  std::vector<StepKind> backward_steps;
  for (int k = 0; k < vertical; ++k) {
    const Point last = backward.back();
    backward.push_back({n, vertical_kind == StepKind::N ? last.y - 1 : last.y + 1});
    backward_steps.push_back(vertical_kind);
  }

  std::vector<GeodesicCase> cases(static_cast<std::size_t>(n));
  for (int i = n; i >= 1; --i) {
    // The particle just below (i, j) sits at site j. It had jumped iff site j
    // was empty one step earlier.
    const bool a = !occ(i - 1, j) && occ(i - 1, j - 1);
    const bool b = occ(i - 1, j) && occ(i - 1, j + 1);
    const bool c = occ(i - 1, j) && !occ(i - 1, j + 1);
    if (a + b + c != 1) throw std::logic_error("build_geodesic: backward step is not determined by exactly one case");
    GeodesicCase which;
    StepKind kind;
    int next_j;
    if (a) {
      which = GeodesicCase::A;
      kind = StepKind::NE;
      next_j = j - 1;
    } else if (b) {
      which = GeodesicCase::B;
      kind = StepKind::SE;
      next_j = j + 1;
    } else {
      which = GeodesicCase::C;
      kind = StepKind::E;
      next_j = j;
    }
    if (!occ.good(i - 1, next_j)) throw std::logic_error("build_geodesic: trajectory is not a parallel TASEP path");
    cases[static_cast<std::size_t>(i - 1)] = which;
    backward.push_back({i - 1, next_j});
    backward_steps.push_back(kind);
    j = next_j;
  }
  if (j != 0) throw std::logic_error("build_geodesic: backward construction did not end at the origin");

  GeodesicPath path;
  path.vertices.assign(backward.rbegin(), backward.rend());
  path.steps.assign(backward_steps.rbegin(), backward_steps.rend());
  path.cases = std::move(cases);
  path.final_vertical = vertical;
  for (StepKind k : path.steps) path.total_weight += step_weight(k);
  return path;
}

/// Whether every diagonal step (i,j)->(i+1,j+-1) leaves from a closed
/// horizontal edge (i,j)->(i+1,j).
inline bool diagonals_only_when_closed(const GeodesicPath& path, const CrossConfig& config) {
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const StepKind s = path.steps[k];
    if (s != StepKind::NE && s != StepKind::SE) continue;
    const Point p = path.vertices[k];
    if (config.open(p.x, p.y)) return false;
  }
  return true;
}

/// Structural checks on a path: legal steps, E/NE/SE before the last
/// column, N/S only in it, and weight bookkeeping.
inline bool is_well_formed(const GeodesicPath& path) {
  if (path.vertices.empty() || path.vertices.front() != Point{0, 0}) return false;
  if (path.steps.size() + 1 != path.vertices.size()) return false;
  const int n = path.vertices.back().x;
  std::int64_t w = 0;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const Point a = path.vertices[k];
    const Point b = path.vertices[k + 1];
    const int dx = b.x - a.x;
    const int dy = b.y - a.y;
    switch (path.steps[k]) {
      case StepKind::E: if (dx != 1 || dy != 0) return false; break;
      case StepKind::NE: if (dx != 1 || dy != 1) return false; break;
      case StepKind::SE: if (dx != 1 || dy != -1) return false; break;
      case StepKind::N: if (dx != 0 || dy != 1 || a.x != n) return false; break;
      case StepKind::S: if (dx != 0 || dy != -1 || a.x != n) return false; break;
    }
    w += step_weight(path.steps[k]);
  }
  return w == path.total_weight;
}

enum class EdgeOrigin : char { original_horizontal = 'h', original_vertical = 'v', from_diagonal = 'd' };

/// The geodesic with every diagonal replaced by a vertical edge followed by
/// a horizontal one, so it runs on Z^2 only. `k_set` holds the vertical
/// edges of the source path plus the edges created by the replacement.
struct ModifiedPath {
  std::vector<Point> vertices;
  std::vector<Edge> edges;
  std::vector<EdgeOrigin> origin;
  std::vector<Edge> k_set;

  std::size_t length() const { return edges.size(); }
};

inline ModifiedPath eliminate_diagonals(const GeodesicPath& path) {
  ModifiedPath out;
  out.vertices.push_back(path.vertices.front());
  auto add = [&](Point to, EdgeOrigin o) {
    const Edge e = edge_between(out.vertices.back(), to);
    out.vertices.push_back(to);
    out.edges.push_back(e);
    out.origin.push_back(o);
    if (o != EdgeOrigin::original_horizontal) out.k_set.push_back(e);
  };
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const Point a = path.vertices[k];
    const Point b = path.vertices[k + 1];
    switch (path.steps[k]) {
      case StepKind::E: add(b, EdgeOrigin::original_horizontal); break;
      case StepKind::N:
      case StepKind::S: add(b, EdgeOrigin::original_vertical); break;
      case StepKind::NE:
      case StepKind::SE:
        add({a.x, b.y}, EdgeOrigin::from_diagonal);
        add(b, EdgeOrigin::from_diagonal);
        break;
    }
  }
  std::sort(out.k_set.begin(), out.k_set.end());
  out.k_set.erase(std::unique(out.k_set.begin(), out.k_set.end()), out.k_set.end());
  return out;
}

enum class EdgeClass : char { unbiased = 'u', forced_open = 'o', forced_closed = 'c' };

/// Conditional status of edge e given the trajectory. A horizontal edge
/// (i,j)->(i+1,j) is pinned exactly when site j holds a particle with an
/// empty site j+1 at time i: closed if that particle jumped, open if not.
/// Vertical edges and all other horizontal edges are unbiased.
inline EdgeClass classify_edge(const Trajectory& traj, const Edge& e) {
  if (e.vertical) return EdgeClass::unbiased;
  const detail::OccupancyView occ(traj);
  if (!occ.good(e.x, e.y)) return EdgeClass::unbiased;
  return occ(e.x + 1, e.y) ? EdgeClass::forced_open : EdgeClass::forced_closed;
}

/// Classes of every horizontal edge of the config's rectangle whose
/// particle configuration is visible (rows window_lo..window_hi-1).
struct EdgeClassification {
  int n_cols = 0;
  int row_lo = 0;
  int row_hi = 0;
  std::vector<EdgeClass> h;

  EdgeClass at(const Edge& e) const {
    if (e.vertical) return EdgeClass::unbiased;
    if (e.x < 0 || e.x >= n_cols || e.y < row_lo || e.y > row_hi) throw std::out_of_range("EdgeClassification: edge outside");
    return h[static_cast<std::size_t>(e.x) * static_cast<std::size_t>(row_hi - row_lo + 1) +
             static_cast<std::size_t>(e.y - row_lo)];
  }
  std::size_t forced_count() const {
    return static_cast<std::size_t>(std::count_if(h.begin(), h.end(), [](EdgeClass c) { return c != EdgeClass::unbiased; }));
  }
};

/// Classifies the horizontal edges and checks that pinned edges agree with
/// the config; a disagreement means the trajectory did not come from it.
inline EdgeClassification classify_edges(const Trajectory& traj, const CrossConfig& config) {
  EdgeClassification out;
  out.n_cols = config.n_cols;
  out.row_lo = std::max(config.row_lo, traj.window_lo());
  out.row_hi = std::min(config.row_hi, traj.window_hi() - 1);
  if (traj.steps() < config.n_cols) throw std::invalid_argument("classify_edges: trajectory shorter than the config");
  const std::size_t rows = static_cast<std::size_t>(out.row_hi - out.row_lo + 1);
  out.h.resize(static_cast<std::size_t>(config.n_cols) * rows);
  for (int i = 0; i < config.n_cols; ++i) {
    for (int j = out.row_lo; j <= out.row_hi; ++j) {
      const EdgeClass c = classify_edge(traj, Edge{i, j, false});
      if ((c == EdgeClass::forced_closed && config.open(i, j)) || (c == EdgeClass::forced_open && !config.open(i, j)))
        throw std::invalid_argument("classify_edges: trajectory inconsistent with config");
      out.h[static_cast<std::size_t>(i) * rows + static_cast<std::size_t>(j - out.row_lo)] = c;
    }
  }
  return out;
}

/// The six edges sharing a unit square with e (dual neighbours of e*).
inline std::array<Edge, 6> dual_neighbors(const Edge& e) {
  if (!e.vertical) {
    return {{{e.x, e.y - 1, true}, {e.x + 1, e.y - 1, true}, {e.x, e.y - 1, false},
             {e.x, e.y, true}, {e.x + 1, e.y, true}, {e.x, e.y + 1, false}}};
  }
  return {{{e.x - 1, e.y, false}, {e.x - 1, e.y + 1, false}, {e.x - 1, e.y, true},
           {e.x, e.y, false}, {e.x, e.y + 1, false}, {e.x + 1, e.y, true}}};
}

/// Closed dual component of a bad edge and its open boundary, both given
/// as primal edges.
struct DualCluster {
  std::vector<Edge> closed;    // sorted
  std::vector<Edge> boundary;  // sorted, open
  bool escaped = false;        // reached the box boundary
};

struct DualClusterSet {
  std::vector<DualCluster> clusters;  // ordered by minimal closed edge
  std::vector<int> cluster_of_bad;    // per bad edge, index into clusters
  std::vector<Edge> boundary_union;   // union of all boundaries, sorted

  bool escaped() const {
    return std::any_of(clusters.begin(), clusters.end(), [](const DualCluster& c) { return c.escaped; });
  }
};

/// Explores the closed dual component of each bad edge. Components shared by
/// several bad edges are stored once.
inline DualClusterSet dual_clusters(const BondConfig& bonds, const std::vector<Edge>& bad_edges) {
  const Box& box = bonds.box;
  std::unordered_map<Edge, int, EdgeHash> owner;
  std::vector<DualCluster> found;
  std::vector<int> raw_of_bad;
  for (const Edge& start : bad_edges) {
    if (!box.contains(start)) throw std::out_of_range("dual_clusters: bad edge outside box");
    if (bonds.is_open(start)) throw std::invalid_argument("dual_clusters: bad edge is open");
    if (auto it = owner.find(start); it != owner.end()) {
      raw_of_bad.push_back(it->second);
      continue;
    }
    const int id = static_cast<int>(found.size());
    DualCluster cl;
    std::unordered_set<Edge, EdgeHash> boundary;
    std::vector<Edge> stack{start};
    owner.emplace(start, id);
    while (!stack.empty()) {
      const Edge e = stack.back();
      stack.pop_back();
      cl.closed.push_back(e);
      for (const Edge& f : dual_neighbors(e)) {
        if (!box.contains(f)) {
          cl.escaped = true;
          continue;
        }
        if (bonds.is_open(f)) {
          boundary.insert(f);
        } else if (owner.emplace(f, id).second) {
          stack.push_back(f);
        }
      }
    }
    std::sort(cl.closed.begin(), cl.closed.end());
    cl.boundary.assign(boundary.begin(), boundary.end());
    std::sort(cl.boundary.begin(), cl.boundary.end());
    found.push_back(std::move(cl));
    raw_of_bad.push_back(id);
  }

  // canonical order: by minimal closed edge
  std::vector<int> order(found.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return found[static_cast<std::size_t>(a)].closed.front() < found[static_cast<std::size_t>(b)].closed.front(); });
  std::vector<int> rank(found.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

  DualClusterSet out;
  for (int idx : order) out.clusters.push_back(std::move(found[static_cast<std::size_t>(idx)]));
  for (int raw : raw_of_bad) out.cluster_of_bad.push_back(rank[static_cast<std::size_t>(raw)]);
  for (const DualCluster& c : out.clusters) out.boundary_union.insert(out.boundary_union.end(), c.boundary.begin(), c.boundary.end());
  std::sort(out.boundary_union.begin(), out.boundary_union.end());
  out.boundary_union.erase(std::unique(out.boundary_union.begin(), out.boundary_union.end()), out.boundary_union.end());
  return out;
}

/// Closed edges of the modified path.
inline std::vector<Edge> bad_edges(const ModifiedPath& path, const BondConfig& bonds) {
  std::vector<Edge> bad;
  for (const Edge& e : path.edges) {
    if (!bonds.box.contains(e)) throw std::out_of_range("bad_edges: path leaves the box");
    if (!bonds.is_open(e)) bad.push_back(e);
  }
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

enum class BypassStatus { ok, not_connected, escaped, search_failed };

inline const char* to_string(BypassStatus s) {
  switch (s) {
    case BypassStatus::ok: return "ok";
    case BypassStatus::not_connected: return "not_connected";
    case BypassStatus::escaped: return "escaped";
    case BypassStatus::search_failed: return "search_failed";
  }
  return "?";
}

struct BypassResult {
  BypassStatus status = BypassStatus::search_failed;
  std::vector<Point> path;
  std::int64_t length = 0;
  std::int64_t bound = 0;  // |pi| + |boundary union|
};

/// Shortest open path from the start to the end of `modified` using only
/// open edges of the path and edges of the cluster boundaries.
/// `labels` certifies that the endpoints are connected in the box.
inline BypassResult bypass(const ModifiedPath& modified, const DualClusterSet& clusters, const BondConfig& bonds,
                           const ClusterLabeling& labels) {
  BypassResult res;
  res.bound = static_cast<std::int64_t>(modified.length() + clusters.boundary_union.size());
  const Point src = modified.vertices.front();
  const Point dst = modified.vertices.back();
  if (!bonds.box.contains(src) || !bonds.box.contains(dst) ||
      labels.label[bonds.box.index(src)] != labels.label[bonds.box.index(dst)]) {
    res.status = BypassStatus::not_connected;
    return res;
  }
  if (clusters.escaped()) {
    res.status = BypassStatus::escaped;
    return res;
  }
  std::map<Point, std::vector<Point>> adj;
  auto link = [&](const Edge& e) {
    adj[e.from()].push_back(e.to());
    adj[e.to()].push_back(e.from());
  };
  for (const Edge& e : modified.edges)
    if (bonds.is_open(e)) link(e);
  for (const Edge& e : clusters.boundary_union) link(e);
  adj.try_emplace(src);

  std::map<Point, Point> parent;
  std::vector<Point> queue{src};
  parent.emplace(src, src);
  for (std::size_t head = 0; head < queue.size() && !parent.contains(dst); ++head) {
    const Point u = queue[head];
    for (const Point& w : adj[u]) {
      if (parent.emplace(w, u).second) queue.push_back(w);
    }
  }
  if (!parent.contains(dst)) {
    res.status = BypassStatus::search_failed;
    return res;
  }
  for (Point p = dst;; p = parent.at(p)) {
    res.path.push_back(p);
    if (p == src) break;
  }
  std::reverse(res.path.begin(), res.path.end());
  res.length = static_cast<std::int64_t>(res.path.size()) - 1;
  res.status = BypassStatus::ok;
  return res;
}

/// Open path from `src` to `dst`, unit steps only, within the length bound.
inline bool is_valid_bypass(const BypassResult& r, const BondConfig& bonds, Point src, Point dst) {
  if (r.status != BypassStatus::ok || r.path.empty()) return false;
  if (r.path.front() != src || r.path.back() != dst) return false;
  for (std::size_t k = 0; k + 1 < r.path.size(); ++k) {
    const Point a = r.path[k];
    const Point b = r.path[k + 1];
    if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1) return false;
    const Edge e = edge_between(a, b);
    if (!bonds.box.contains(e) || !bonds.is_open(e)) return false;
  }
  return r.length == static_cast<std::int64_t>(r.path.size()) - 1 && r.length <= r.bound;
}

/// Per-sample sizes feeding the bound statistics.
struct PathCounts {
  std::int64_t k = 0;             // |K|
  std::int64_t b = 0;             // bad edges
  std::int64_t boundary = 0;      // |union of cluster boundaries|
};

struct BoundSummary {
  std::size_t samples = 0;
  double epsilon = 0.0;
  RunningStats k;
  RunningStats b;
  RunningStats boundary;
  RunningStats b_minus_eps_k;  // per-sample B - eps K
};

inline BoundSummary bound_statistics(const std::vector<PathCounts>& runs, double eps) {
  BoundSummary s;
  s.samples = runs.size();
  s.epsilon = eps;
  for (const PathCounts& r : runs) {
    s.k.add(static_cast<double>(r.k));
    s.b.add(static_cast<double>(r.b));
    s.boundary.add(static_cast<double>(r.boundary));
    s.b_minus_eps_k.add(static_cast<double>(r.b) - eps * static_cast<double>(r.k));
  }
  return s;
}

}  // namespace percshape
