#pragma once

// The cross model: Z^2 plus weight-2 diagonals, with only horizontal edges
// random. Distances from the origin, particle extraction and the exact
// distance/current identity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bits.hpp"
#include "tasep.hpp"

namespace percshape {

/// Horizontal edge states on columns 0..n_cols-1 and rows row_lo..row_hi.
/// Bit (i, j - row_lo) is set when edge (i,j)->(i+1,j) is open. Vertical
/// and diagonal edges are always open and carry no state.
struct CrossConfig {
  int n_cols = 0;
  int row_lo = 0;
  int row_hi = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  BitMatrix h_open;

  CrossConfig() = default;
  CrossConfig(int n, int lo, int hi, double eps, std::uint64_t seed_tag = 0)
      : n_cols(n), row_lo(lo), row_hi(hi), epsilon(eps), seed(seed_tag),
        h_open(static_cast<std::size_t>(n), static_cast<std::size_t>(hi - lo + 1), true) {
    if (n < 1) throw std::invalid_argument("CrossConfig: need at least one column of edges");
    if (!(lo <= 0 && hi >= 0)) throw std::invalid_argument("CrossConfig: row range must contain 0");
  }

  int rows() const { return row_hi - row_lo + 1; }
  bool open(int i, int j) const { return h_open.test(static_cast<std::size_t>(i), static_cast<std::size_t>(j - row_lo)); }
  void set_open(int i, int j, bool value) {
    h_open.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j - row_lo), value);
  }

  friend bool operator==(const CrossConfig&, const CrossConfig&) = default;
};

template <class Engine>
CrossConfig sample_cross(int n, int row_lo, int row_hi, double eps, Engine& rng, std::uint64_t seed_tag = 0) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("sample_cross: eps outside [0,1]");
  CrossConfig c(n, row_lo, row_hi, eps, seed_tag);
  fill_bernoulli(c.h_open, 1.0 - eps, rng);
  return c;
}

/// Row range that contains every geodesic from the origin to a site
/// (i, j) with i <= n and |j| <= height. A geodesic has weight at most
/// 3n + height and a step of weight w moves at most w in L1, so it cannot
/// climb past row n + height.
struct RowRange {
  int lo;
  int hi;
};
inline RowRange safe_rows(int n, int height) { return {-(height + n + 2), height + n + 2}; }

/// Narrower range for large runs. Exactness is not assumed here; it is
/// certified per query by `DistanceField::query` / `is_certified`.
inline RowRange compact_rows(int n, int height, double eps) {
  const int m = height + static_cast<int>(std::ceil(eps * n)) + 64;
  return {-m, m};
}

/// Whether a rectangle-restricted distance `d` to (i, j) equals the true
/// cross-model distance. Geodesics never step west, so only an exit through
/// row row_hi+1 or row_lo-1 could be shorter; such a path needs at least i
/// horizontal and 2*(row_hi+1) - j (resp. j - 2*(row_lo-1)) vertical
/// displacement, and every step of weight w displaces at most w in L1.
inline bool is_certified(int i, int j, std::int64_t d, int row_lo, int row_hi) {
  const std::int64_t via_top = static_cast<std::int64_t>(i) + 2 * (static_cast<std::int64_t>(row_hi) + 1) - j;
  const std::int64_t via_bottom = static_cast<std::int64_t>(i) + j - 2 * (static_cast<std::int64_t>(row_lo) - 1);
  return d <= std::min(via_top, via_bottom);
}

/// Column-by-column shortest-path sweep. Column i+1 is obtained from column
/// i by relaxing horizontal (open only) and diagonal edges, then running one
/// upward and one downward pass of unit vertical relaxation.
class CrossSweep {
public:
  static constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max() / 4;

  explicit CrossSweep(const CrossConfig& config)
      : config_(&config), column_(0), cur_(static_cast<std::size_t>(config.rows())), next_(cur_.size()) {
    for (int j = config.row_lo; j <= config.row_hi; ++j) cur_[idx(j)] = std::abs(j);
  }

  int column() const { return column_; }
  bool done() const { return column_ >= config_->n_cols; }
  std::span<const std::int32_t> distances() const { return cur_; }
  std::int32_t at(int j) const { return cur_[idx(j)]; }

  void advance() {
    if (done()) throw std::logic_error("CrossSweep: already at the last column");
    const int rows = config_->rows();
    const BitRow& open = config_->h_open.line(static_cast<std::size_t>(column_));
    const std::int32_t* d = cur_.data();
    std::int32_t* out = next_.data();
    for (int r = 0; r < rows; ++r) {
      std::int32_t v = open.test(static_cast<std::size_t>(r)) ? d[r] + 1 : kInf;
      if (r > 0) v = std::min(v, d[r - 1] + 2);
      if (r + 1 < rows) v = std::min(v, d[r + 1] + 2);
      out[r] = v;
    }
    for (int r = 1; r < rows; ++r) out[r] = std::min(out[r], out[r - 1] + 1);
    for (int r = rows - 2; r >= 0; --r) out[r] = std::min(out[r], out[r + 1] + 1);
    cur_.swap(next_);
    ++column_;
  }

  /// Occupation of column `column()`: site j is occupied iff the distance
  /// drops by one going up from j-1 to j. Window is (row_lo, row_hi].
  ParticleField particles() const {
    ParticleField f(config_->row_lo + 1, config_->row_hi, column_);
    for (int j = config_->row_lo + 1; j <= config_->row_hi; ++j)
      if (cur_[idx(j)] == cur_[idx(j - 1)] - 1) f.set(j);
    return f;
  }

private:
  std::size_t idx(int j) const { return static_cast<std::size_t>(j - config_->row_lo); }

  const CrossConfig* config_;
  int column_;
  std::vector<std::int32_t> cur_;
  std::vector<std::int32_t> next_;
};

/// D(i,j) over columns 0..n_cols and rows row_lo..row_hi.
class DistanceField {
public:
  DistanceField() = default;
  DistanceField(int n_cols, int row_lo, int row_hi)
      : n_cols_(n_cols), row_lo_(row_lo), row_hi_(row_hi),
        values_(static_cast<std::size_t>(n_cols + 1) * static_cast<std::size_t>(row_hi - row_lo + 1), 0) {}

  int n_cols() const { return n_cols_; }
  int row_lo() const { return row_lo_; }
  int row_hi() const { return row_hi_; }
  int rows() const { return row_hi_ - row_lo_ + 1; }

  std::int32_t& at(int i, int j) { return values_[index(i, j)]; }
  std::int32_t at(int i, int j) const { return values_[index(i, j)]; }

  bool certified(int i, int j) const { return is_certified(i, j, at(i, j), row_lo_, row_hi_); }

  /// Exact cross-model distance, or throws when the rectangle cannot
  /// certify it.
  std::int32_t query(int i, int j) const {
    if (i < 0 || i > n_cols_ || j < row_lo_ || j > row_hi_) throw std::out_of_range("DistanceField: site outside rectangle");
    if (!certified(i, j)) throw std::out_of_range("DistanceField: queried site outside safe region");
    return at(i, j);
  }

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(rows()) + static_cast<std::size_t>(j - row_lo_);
  }
  int n_cols_ = 0;
  int row_lo_ = 0;
  int row_hi_ = 0;
  std::vector<std::int32_t> values_;
};

inline DistanceField cross_distance(const CrossConfig& config) {
  DistanceField field(config.n_cols, config.row_lo, config.row_hi);
  CrossSweep sweep(config);
  for (;;) {
    const int i = sweep.column();
    for (int j = config.row_lo; j <= config.row_hi; ++j) field.at(i, j) = sweep.at(j);
    if (sweep.done()) break;
    sweep.advance();
  }
  return field;
}

/// Certified distances D(n_cols, j) for the requested rows, without storing
/// the full field.
inline std::vector<std::int32_t> cross_distance_last_column(const CrossConfig& config, std::span<const int> rows) {
  CrossSweep sweep(config);
  while (!sweep.done()) sweep.advance();
  std::vector<std::int32_t> out;
  out.reserve(rows.size());
  for (int j : rows) {
    if (j < config.row_lo || j > config.row_hi) throw std::out_of_range("cross_distance_last_column: row outside rectangle");
    const std::int32_t d = sweep.at(j);
    if (!is_certified(config.n_cols, j, d, config.row_lo, config.row_hi))
      throw std::out_of_range("cross_distance_last_column: queried site outside safe region");
    out.push_back(d);
  }
  return out;
}

inline Trajectory extract_particles(const DistanceField& field) {
  Trajectory traj;
  traj.snapshots.reserve(static_cast<std::size_t>(field.n_cols()) + 1);
  for (int i = 0; i <= field.n_cols(); ++i) {
    ParticleField f(field.row_lo() + 1, field.row_hi(), i);
    for (int j = field.row_lo() + 1; j <= field.row_hi(); ++j)
      if (field.at(i, j) == field.at(i, j - 1) - 1) f.set(j);
    traj.snapshots.push_back(std::move(f));
  }
  return traj;
}

/// Particle trajectory of a config, streamed through the sweep.
inline Trajectory cross_trajectory(const CrossConfig& config) {
  Trajectory traj;
  traj.snapshots.reserve(static_cast<std::size_t>(config.n_cols) + 1);
  CrossSweep sweep(config);
  traj.snapshots.push_back(sweep.particles());
  while (!sweep.done()) {
    sweep.advance();
    traj.snapshots.push_back(sweep.particles());
  }
  return traj;
}

struct IdentityFailure {
  int n;
  int j;
  std::int64_t distance;
  std::int64_t predicted;
};

/// Exclusion process driven by the edges alone: at time i the particle at
/// s moves iff s+1 is empty and edge (i,s) is closed. Window is the config's
/// row range; the top site never moves.
inline Trajectory tasep_from_edges(const CrossConfig& config) {
  Trajectory traj;
  traj.snapshots.reserve(static_cast<std::size_t>(config.n_cols) + 1);
  traj.snapshots.push_back(tasep_init(config.row_lo, config.row_hi));
  for (int i = 0; i < config.n_cols; ++i) {
    const ParticleField& cur = traj.snapshots.back();
    ParticleField next(cur.window_lo(), cur.window_hi(), i + 1);
    for (int s = config.row_lo; s <= config.row_hi; ++s) {
      if (!cur.occupied(s)) continue;
      const bool moves = s < config.row_hi && !cur.occupied(s + 1) && !config.open(i, s);
      next.set(moves ? s + 1 : s);
    }
    traj.snapshots.push_back(std::move(next));
  }
  return traj;
}

/// Sites (n, j), 0 <= n <= n_cols, 0 <= j <= j_max, where
/// D(n,j) != n + j + 2 J(n,j), with J from the edge-driven process.
inline std::vector<IdentityFailure> distance_current_failures(const CrossConfig& config, int j_max) {
  const DistanceField field = cross_distance(config);
  const Trajectory traj = tasep_from_edges(config);
  std::vector<IdentityFailure> bad;
  for (int n = 0; n <= config.n_cols; ++n) {
    for (int j = 0; j <= j_max; ++j) {
      const std::int64_t predicted = n + j + 2 * current(traj.at_time(n), j);
      if (field.at(n, j) != predicted) bad.push_back({n, j, field.at(n, j), predicted});
    }
  }
  return bad;
}

/// Default query height leaves n_cols + 2 rows of headroom below row_hi.
inline bool distance_current_check(const CrossConfig& config) {
  const int j_max = config.row_hi - config.n_cols - 2;
  if (j_max < 0) throw std::invalid_argument("distance_current_check: rectangle too short for the safe region");
  return distance_current_failures(config, j_max).empty();
}

/// Limit of D(n, n eps lambda) / n.
inline double f_shape(double lambda, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("f_shape: eps must lie in [0,1)");
  const double radicand = 1.0 - eps * (1.0 + lambda * lambda) + lambda * lambda * eps * eps;
  if (radicand < 0.0) throw std::invalid_argument("f_shape: negative radicand");
  return 2.0 - std::sqrt(radicand);
}

/// First-order expansion 1 + eps (1 + lambda^2) / 2.
inline double f_first_order(double lambda, double eps) { return 1.0 + 0.5 * eps * (1.0 + lambda * lambda); }

/// Target row floor(n eps lambda).
inline int target_row(int n, double eps, double lambda) {
  return static_cast<int>(std::floor(static_cast<double>(n) * eps * lambda + 1e-9));
}

}  // namespace percshape
