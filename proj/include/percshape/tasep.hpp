#pragma once

// Discrete-time parallel TASEP on Z with the step initial condition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bits.hpp"

namespace percshape {

/// Occupation of the sites window_lo..window_hi (inclusive) at a given time.
/// Bit `j - window_lo` is set when site j holds a particle.
class ParticleField {
public:
  ParticleField() = default;
  ParticleField(int window_lo, int window_hi, long time = 0)
      : lo_(window_lo), hi_(window_hi), time_(time), bits_(static_cast<std::size_t>(window_hi - window_lo + 1)) {}

  int window_lo() const { return lo_; }
  int window_hi() const { return hi_; }
  long time() const { return time_; }
  void set_time(long t) { time_ = t; }
  std::size_t size() const { return bits_.size(); }
  bool contains(int j) const { return j >= lo_ && j <= hi_; }

  bool occupied(int j) const { return bits_.test(static_cast<std::size_t>(j - lo_)); }
  void set(int j, bool value = true) { bits_.set(static_cast<std::size_t>(j - lo_), value); }

  /// Bounds-checked read.
  bool at(int j) const {
    if (!contains(j)) throw std::out_of_range("ParticleField: site outside window");
    return occupied(j);
  }

  std::size_t particle_count() const { return bits_.count(); }

  BitRow& bits() { return bits_; }
  const BitRow& bits() const { return bits_; }

  friend bool operator==(const ParticleField&, const ParticleField&) = default;

private:
  int lo_ = 0;
  int hi_ = 0;
  long time_ = 0;
  BitRow bits_;
};

/// Snapshots at times 0, 1, ..., steps() over one common window.
struct Trajectory {
  std::vector<ParticleField> snapshots;

  int window_lo() const { return snapshots.front().window_lo(); }
  int window_hi() const { return snapshots.front().window_hi(); }
  long steps() const { return static_cast<long>(snapshots.size()) - 1; }
  const ParticleField& at_time(long t) const { return snapshots.at(static_cast<std::size_t>(t)); }
  bool occupied(long t, int j) const { return snapshots[static_cast<std::size_t>(t)].occupied(j); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Step profile: sites <= 0 occupied.
inline ParticleField tasep_init(int window_lo, int window_hi) {
  if (window_lo >= window_hi) throw std::invalid_argument("tasep_init: window_lo must be < window_hi");
  ParticleField f(window_lo, window_hi, 0);
  for (int j = window_lo; j <= std::min(0, window_hi); ++j) f.set(j);
  return f;
}

/// Window that reproduces the infinite line exactly for `steps` steps when
/// observing sites |j| <= observe_radius.
struct Window {
  int lo;
  int hi;
};
inline Window tasep_window_for(long steps, long observe_radius) {
  const long m = steps + observe_radius + 2;
  return {static_cast<int>(-m), static_cast<int>(m)};
}

namespace detail {

/// Bit o set iff bit o+1 of `occ` is set (i.e. the site to the right is occupied).
inline std::uint64_t right_neighbor_word(const std::vector<std::uint64_t>& w, std::size_t k) {
  std::uint64_t next = w[k] >> 1;
  if (k + 1 < w.size()) next |= w[k + 1] << 63;
  return next;
}

/// Particles whose right neighbor is empty. The top window site is excluded
/// since its target lies outside the window.
inline BitRow movable(const BitRow& occ) {
  BitRow cand(occ.size());
  const auto& w = occ.words();
  auto& c = cand.words();
  for (std::size_t k = 0; k < w.size(); ++k) c[k] = w[k] & ~right_neighbor_word(w, k);
  if (occ.size() > 0) cand.set(occ.size() - 1, false);
  return cand;
}

/// Moves every particle flagged in `movers` one site right.
inline BitRow apply_moves(const BitRow& occ, const BitRow& movers) {
  BitRow out(occ.size());
  const auto& w = occ.words();
  const auto& m = movers.words();
  auto& o = out.words();
  std::uint64_t carry = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    o[k] = (w[k] & ~m[k]) | (m[k] << 1) | carry;
    carry = m[k] >> 63;
  }
  out.trim();
  return out;
}

}  // namespace detail

/// One parallel update. Every particle whose right neighbor is empty in the
/// current snapshot jumps with probability `jump_prob`; one Bernoulli draw is
/// consumed per such particle, in ascending site order.
template <class Engine>
ParticleField tasep_step(const ParticleField& field, double jump_prob, Engine& rng) {
  if (!(jump_prob >= 0.0 && jump_prob <= 1.0)) throw std::invalid_argument("tasep_step: jump probability outside [0,1]");
  BitRow cand = detail::movable(field.bits());
  std::bernoulli_distribution jump(jump_prob);
  auto& c = cand.words();
  for (std::size_t k = 0; k < c.size(); ++k) {
    std::uint64_t bits = c[k];
    std::uint64_t keep = 0;
    while (bits) {
      const std::uint64_t low = bits & (~bits + 1);
      if (jump(rng)) keep |= low;
      bits ^= low;
    }
    c[k] = keep;
  }
  ParticleField next(field.window_lo(), field.window_hi(), field.time() + 1);
  next.bits() = detail::apply_moves(field.bits(), cand);
  return next;
}

/// True iff `after` is reachable from `before` by one parallel update:
/// movers had an empty right neighbor in `before`, nothing else changed.
inline bool is_parallel_update(const ParticleField& before, const ParticleField& after) {
  if (before.window_lo() != after.window_lo() || before.window_hi() != after.window_hi()) return false;
  const BitRow cand = detail::movable(before.bits());
  BitRow movers(before.size());
  const auto& b = before.bits().words();
  const auto& a = after.bits().words();
  const auto& c = cand.words();
  auto& m = movers.words();
  for (std::size_t k = 0; k < b.size(); ++k) {
    m[k] = b[k] & ~a[k];
    if (m[k] & ~c[k]) return false;
  }
  return detail::apply_moves(before.bits(), movers) == after.bits();
}

/// Runs `steps` updates from the step profile, keeping every snapshot.
template <class Engine>
Trajectory run_tasep(int window_lo, int window_hi, long steps, double jump_prob, Engine& rng) {
  Trajectory traj;
  traj.snapshots.reserve(static_cast<std::size_t>(steps) + 1);
  traj.snapshots.push_back(tasep_init(window_lo, window_hi));
  for (long t = 0; t < steps; ++t) traj.snapshots.push_back(tasep_step(traj.snapshots.back(), jump_prob, rng));
  return traj;
}

/// Same dynamics as run_tasep but only the final snapshot is retained.
template <class Engine>
ParticleField run_tasep_final(int window_lo, int window_hi, long steps, double jump_prob, Engine& rng) {
  ParticleField f = tasep_init(window_lo, window_hi);
  for (long t = 0; t < steps; ++t) f = tasep_step(f, jump_prob, rng);
  return f;
}

/// Number of particles strictly right of site j.
///
/// Under the step initial condition the rightmost particle is at most at
/// `time`, so the count is complete once the window reaches past it.
inline long current(const ParticleField& field, int j) {
  if (field.time() >= field.window_hi())
    throw std::out_of_range("current: window does not reach past the rightmost possible particle");
  if (j < field.window_lo() - 1) throw std::out_of_range("current: site left of the window");
  if (j >= field.window_hi()) return 0;
  return static_cast<long>(field.bits().count_from(static_cast<std::size_t>(j + 1 - field.window_lo())));
}

/// Hydrodynamic limit of J(floor(Nx), floor(Ny)) / N. Zero for y above the
/// rightmost-particle front x*eps.
inline double current_limit(double x, double y, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("current_limit: eps outside [0,1]");
  if (!(x > 0.0)) throw std::invalid_argument("current_limit: x must be positive");
  if (y > x * eps) return 0.0;
  if (y < -eps * x) throw std::invalid_argument("current_limit: y below -eps*x");
  if (eps == 0.0) return 0.0;
  const double radicand = (1.0 - eps) * (x * x - y * y / eps);
  return 0.5 * (x - y) - 0.5 * std::sqrt(std::max(0.0, radicand));
}

/// J[n][j] for n = 0..steps and j in [j_lo, j_hi].
class CurrentTable {
public:
  CurrentTable(long steps, int j_lo, int j_hi)
      : steps_(steps), j_lo_(j_lo), j_hi_(j_hi),
        values_(static_cast<std::size_t>((steps + 1) * (j_hi - j_lo + 1)), 0) {}

  long steps() const { return steps_; }
  int j_lo() const { return j_lo_; }
  int j_hi() const { return j_hi_; }
  long& at(long n, int j) { return values_[index(n, j)]; }
  long at(long n, int j) const { return values_[index(n, j)]; }

private:
  std::size_t index(long n, int j) const {
    return static_cast<std::size_t>(n * (j_hi_ - j_lo_ + 1) + (j - j_lo_));
  }
  long steps_;
  int j_lo_;
  int j_hi_;
  std::vector<long> values_;
};

inline CurrentTable current_table(const Trajectory& traj, int j_lo, int j_hi) {
  CurrentTable table(traj.steps(), j_lo, j_hi);
  for (long n = 0; n <= traj.steps(); ++n)
    for (int j = j_lo; j <= j_hi; ++j) table.at(n, j) = current(traj.at_time(n), j);
  return table;
}

/// Unit-increment monotonicity in both indices, and the step-profile first row.
inline bool current_table_is_consistent(const CurrentTable& t) {
  for (int j = t.j_lo(); j <= t.j_hi(); ++j)
    if (t.at(0, j) != std::max(0, -j)) return false;
  for (long n = 0; n <= t.steps(); ++n) {
    for (int j = t.j_lo(); j <= t.j_hi(); ++j) {
      if (j < t.j_hi()) {
        const long d = t.at(n, j) - t.at(n, j + 1);
        if (d != 0 && d != 1) return false;
      }
      if (n < t.steps()) {
        const long d = t.at(n + 1, j) - t.at(n, j);
        if (d != 0 && d != 1) return false;
      }
    }
  }
  return true;
}

}  // namespace percshape
