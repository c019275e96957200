#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace percshape {

struct Point {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Unit edge of Z^2: (x,y)->(x+1,y) when horizontal, (x,y)->(x,y+1) when vertical.
struct Edge {
  int x = 0;
  int y = 0;
  bool vertical = false;

  Point from() const { return {x, y}; }
  Point to() const { return vertical ? Point{x, y + 1} : Point{x + 1, y}; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge joining two lattice neighbours, in canonical orientation.
inline Edge edge_between(Point a, Point b) {
  if (a.x == b.x) return {a.x, a.y < b.y ? a.y : b.y, true};
  return {a.x < b.x ? a.x : b.x, a.y, false};
}

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    const std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.x)) << 32) ^
                            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.y)) << 1) ^ (e.vertical ? 1u : 0u);
    return std::hash<std::uint64_t>{}(k * 0x9E3779B97F4A7C15ull);
  }
};

}  // namespace percshape
