#pragma once

// Bond percolation on a box of Z^2: sampling, chemical distances, cluster
// labels and the coupling with the cross model.

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bits.hpp"
#include "cross.hpp"
#include "lattice.hpp"

namespace percshape {

/// Marker for "no open path".
inline constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

/// Vertex box [x_lo, x_hi] x [y_lo, y_hi], inclusive.
struct Box {
  int x_lo = 0;
  int x_hi = 0;
  int y_lo = 0;
  int y_hi = 0;

  int width() const { return x_hi - x_lo + 1; }
  int height() const { return y_hi - y_lo + 1; }
  std::size_t vertex_count() const { return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height()); }
  bool contains(Point p) const { return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi; }
  bool contains(const Edge& e) const { return contains(e.from()) && contains(e.to()); }

  /// Column-major vertex index.
  std::size_t index(Point p) const {
    return static_cast<std::size_t>(p.x - x_lo) * static_cast<std::size_t>(height()) + static_cast<std::size_t>(p.y - y_lo);
  }
  Point point(std::size_t idx) const {
    const auto h = static_cast<std::size_t>(height());
    return {x_lo + static_cast<int>(idx / h), y_lo + static_cast<int>(idx % h)};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Edge states of a box: h line x holds edges (x,y)->(x+1,y) for
/// x in [x_lo, x_hi-1]; v line x holds edges (x,y)->(x,y+1) for
/// y in [y_lo, y_hi-1]. A set bit means open.
struct BondConfig {
  Box box;
  double p = 1.0;
  std::uint64_t seed = 0;
  BitMatrix h;
  BitMatrix v;

  BondConfig() = default;
  BondConfig(Box b, double p_open, std::uint64_t seed_tag = 0)
      : box(b), p(p_open), seed(seed_tag),
        h(static_cast<std::size_t>(b.width() - 1), static_cast<std::size_t>(b.height()), true),
        v(static_cast<std::size_t>(b.width()), static_cast<std::size_t>(b.height() - 1), true) {
    if (b.width() < 2 || b.height() < 2) throw std::invalid_argument("BondConfig: box must be at least 2x2");
  }

  bool h_open(int x, int y) const { return h.test(static_cast<std::size_t>(x - box.x_lo), static_cast<std::size_t>(y - box.y_lo)); }
  bool v_open(int x, int y) const { return v.test(static_cast<std::size_t>(x - box.x_lo), static_cast<std::size_t>(y - box.y_lo)); }

  bool is_open(const Edge& e) const { return e.vertical ? v_open(e.x, e.y) : h_open(e.x, e.y); }
  void set_open(const Edge& e, bool value) {
    auto& m = e.vertical ? v : h;
    m.set(static_cast<std::size_t>(e.x - box.x_lo), static_cast<std::size_t>(e.y - box.y_lo), value);
  }

  friend bool operator==(const BondConfig&, const BondConfig&) = default;
};

template <class Engine>
BondConfig sample_bonds(Box box, double p, Engine& rng, std::uint64_t seed_tag = 0) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_bonds: p outside [0,1]");
  BondConfig c(box, p, seed_tag);
  fill_bernoulli(c.h, p, rng);
  fill_bernoulli(c.v, p, rng);
  return c;
}

/// Calls fn(neighbor_index) for every open edge at vertex `idx`.
template <class Fn>
void for_each_open_neighbor(const BondConfig& c, std::size_t idx, Fn&& fn) {
  const Box& b = c.box;
  const Point p = b.point(idx);
  const auto h = static_cast<std::size_t>(b.height());
  if (p.x < b.x_hi && c.h_open(p.x, p.y)) fn(idx + h);
  if (p.x > b.x_lo && c.h_open(p.x - 1, p.y)) fn(idx - h);
  if (p.y < b.y_hi && c.v_open(p.x, p.y)) fn(idx + 1);
  if (p.y > b.y_lo && c.v_open(p.x, p.y - 1)) fn(idx - 1);
}

/// Breadth-first chemical distance from `src` to every vertex of the box,
/// kUnreachable where no open path exists inside the box.
inline std::vector<std::int32_t> bfs_distances(const BondConfig& c, Point src) {
  if (!c.box.contains(src)) throw std::out_of_range("bfs_distances: source outside box");
  std::vector<std::int32_t> dist(c.box.vertex_count(), kUnreachable);
  std::vector<std::uint32_t> queue;
  queue.reserve(1024);
  const std::size_t s = c.box.index(src);
  dist[s] = 0;
  queue.push_back(static_cast<std::uint32_t>(s));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    const std::int32_t du = dist[u] + 1;
    for_each_open_neighbor(c, u, [&](std::size_t w) {
      if (dist[w] == kUnreachable) {
        dist[w] = du;
        queue.push_back(static_cast<std::uint32_t>(w));
      }
    });
  }
  return dist;
}

inline std::int32_t chemical_distance(const BondConfig& c, Point src, Point dst) {
  if (!c.box.contains(src) || !c.box.contains(dst)) throw std::out_of_range("chemical_distance: endpoint outside box");
  if (src == dst) return 0;
  std::vector<std::int32_t> dist(c.box.vertex_count(), kUnreachable);
  std::vector<std::uint32_t> queue;
  const std::size_t s = c.box.index(src);
  const std::size_t t = c.box.index(dst);
  dist[s] = 0;
  queue.push_back(static_cast<std::uint32_t>(s));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    const std::int32_t du = dist[u] + 1;
    bool found = false;
    for_each_open_neighbor(c, u, [&](std::size_t w) {
      if (dist[w] == kUnreachable) {
        dist[w] = du;
        if (w == t) found = true;
        queue.push_back(static_cast<std::uint32_t>(w));
      }
    });
    if (found) return dist[t];
  }
  return kUnreachable;
}

struct ClusterLabeling {
  std::vector<std::int32_t> label;  // dense label per vertex (box index order)
  std::vector<std::int64_t> size;   // vertices per label
  std::int32_t giant_label = -1;

  std::size_t cluster_count() const { return size.size(); }
};

/// Union-find over open edges; labels are assigned in order of first vertex.
inline ClusterLabeling label_clusters(const BondConfig& c) {
  const Box& b = c.box;
  const std::size_t nv = b.vertex_count();
  std::vector<std::uint32_t> parent(nv);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b2) {
    a = find(a);
    b2 = find(b2);
    if (a == b2) return;
    if (a < b2)
      parent[b2] = a;
    else
      parent[a] = b2;
  };
  const auto h = static_cast<std::uint32_t>(b.height());
  for (int x = b.x_lo; x <= b.x_hi; ++x) {
    const auto base = static_cast<std::uint32_t>(x - b.x_lo) * h;
    const BitRow* hline = x < b.x_hi ? &c.h.line(static_cast<std::size_t>(x - b.x_lo)) : nullptr;
    const BitRow& vline = c.v.line(static_cast<std::size_t>(x - b.x_lo));
    for (std::uint32_t r = 0; r < h; ++r) {
      if (hline && hline->test(r)) unite(base + r, base + h + r);
      if (r + 1 < h && vline.test(r)) unite(base + r, base + r + 1);
    }
  }
  ClusterLabeling out;
  out.label.assign(nv, -1);
  std::vector<std::int32_t> root_label(nv, -1);
  for (std::size_t i = 0; i < nv; ++i) {
    const std::uint32_t r = find(static_cast<std::uint32_t>(i));
    if (root_label[r] < 0) {
      root_label[r] = static_cast<std::int32_t>(out.size.size());
      out.size.push_back(0);
    }
    out.label[i] = root_label[r];
    ++out.size[static_cast<std::size_t>(root_label[r])];
  }
  std::int64_t best = -1;
  for (std::size_t l = 0; l < out.size.size(); ++l) {
    if (out.size[l] > best) {
      best = out.size[l];
      out.giant_label = static_cast<std::int32_t>(l);
    }
  }
  return out;
}

inline bool in_giant(const ClusterLabeling& lab, const Box& box, Point p) {
  return box.contains(p) && lab.label[box.index(p)] == lab.giant_label;
}

/// Cross-model config on columns 0..n_cols and rows row_lo..row_hi whose
/// horizontal edges are the Z^2 horizontal edges.
inline CrossConfig derive_cross(const BondConfig& c, int n_cols, int row_lo, int row_hi) {
  const Box& b = c.box;
  if (b.x_lo > 0 || b.x_hi < n_cols || b.y_lo > row_lo || b.y_hi < row_hi)
    throw std::invalid_argument("derive_cross: rectangle not inside the box");
  CrossConfig out(n_cols, row_lo, row_hi, 1.0 - c.p, c.seed);
  for (int i = 0; i < n_cols; ++i)
    for (int j = row_lo; j <= row_hi; ++j) out.set_open(i, j, c.h_open(i, j));
  return out;
}

/// Whole-box version: columns 0..x_hi, all rows of the box.
inline CrossConfig derive_cross(const BondConfig& c) { return derive_cross(c, c.box.x_hi, c.box.y_lo, c.box.y_hi); }

}  // namespace percshape
