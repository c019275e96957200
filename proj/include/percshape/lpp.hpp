#pragma once

// Last-passage percolation with geometric weights and its coupling with
// the parallel TASEP.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tasep.hpp"

namespace percshape {

/// A x B table indexed from 1, stored row-major (i = row, j = column).
template <class T>
class Grid1 {
public:
  Grid1() = default;
  Grid1(int rows, int cols, T value = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), value) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  friend bool operator==(const Grid1&, const Grid1&) = default;

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j - 1);
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

/// i.i.d. waiting times on {1, 2, ...} with P(g = m) = eps (1-eps)^(m-1).
struct WeightGrid {
  Grid1<std::int64_t> g;
  double epsilon = 1.0;
};

/// G(i,j) = g(i,j) + max(G(i-1,j), G(i,j-1)), zero on the axes.
struct PassageTable {
  Grid1<std::int64_t> G;
};

template <class Engine>
WeightGrid sample_weights(int A, int B, double eps, Engine& rng) {
  if (A < 1 || B < 1) throw std::invalid_argument("sample_weights: dimensions must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("sample_weights: eps must lie in (0,1]");
  WeightGrid w{Grid1<std::int64_t>(A, B, 1), eps};
  if (eps == 1.0) return w;
  std::geometric_distribution<std::int64_t> failures(eps);
  for (int i = 1; i <= A; ++i)
    for (int j = 1; j <= B; ++j) w.g(i, j) = 1 + failures(rng);
  return w;
}

inline PassageTable passage_times(const WeightGrid& w) {
  const int A = w.g.rows();
  const int B = w.g.cols();
  PassageTable t{Grid1<std::int64_t>(A, B, 0)};
  for (int i = 1; i <= A; ++i) {
    for (int j = 1; j <= B; ++j) {
      const std::int64_t up = i > 1 ? t.G(i - 1, j) : 0;
      const std::int64_t left = j > 1 ? t.G(i, j - 1) : 0;
      t.G(i, j) = w.g(i, j) + std::max(up, left);
    }
  }
  return t;
}

/// Limit of G(floor(Na), floor(Nb)) / N.
inline double psi(double a, double b, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("psi: eps must lie in (0,1]");
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("psi: a and b must be nonnegative");
  return (a + b + 2.0 * std::sqrt((1.0 - eps) * a * b)) / eps;
}

/// Whether the table determines every move made before `horizon`.
///
/// Row index = jump count, column index = particle rank from the right
/// (particle k starts at 1-k). Since passage times grow by at least one per
/// cell, jump A+1 of any particle happens after G(A,1) and particle B+1
/// first jumps after G(1,B); both must be at least the horizon.
inline bool covers_horizon(const PassageTable& t, long horizon) {
  return t.G(t.G.rows(), 1) >= horizon && t.G(1, t.G.cols()) >= horizon;
}

/// TASEP trajectory for times 0..horizon in which particle k completes its
/// i-th jump at time G(i,k). Window is [-B, horizon + 1].
inline Trajectory tasep_from_lpp(const PassageTable& t, long horizon) {
  if (horizon < 0) throw std::invalid_argument("tasep_from_lpp: negative horizon");
  if (!covers_horizon(t, horizon)) throw std::invalid_argument("tasep_from_lpp: table too small for requested horizon");
  const int A = t.G.rows();
  const int B = t.G.cols();
  const int lo = -B;
  const int hi = static_cast<int>(horizon) + 1;
  Trajectory traj;
  traj.snapshots.reserve(static_cast<std::size_t>(horizon) + 1);
  // jumps[k-1] = jumps completed so far by particle k
  std::vector<int> jumps(static_cast<std::size_t>(B), 0);
  for (long time = 0; time <= horizon; ++time) {
    for (int k = 1; k <= B; ++k) {
      int& done = jumps[static_cast<std::size_t>(k - 1)];
      while (done < A && t.G(done + 1, k) <= time) ++done;
    }
    ParticleField f(lo, hi, time);
    f.set(lo);  // particle B+1 never moves before the horizon
    for (int k = 1; k <= B; ++k) f.set(1 - k + jumps[static_cast<std::size_t>(k - 1)]);
    traj.snapshots.push_back(std::move(f));
  }
  return traj;
}

/// Samples a passage table of at least A x B that covers the horizon
/// G(A,B), growing (and resampling) until it does.
template <class Engine>
PassageTable sample_covering_table(int A, int B, double eps, Engine& rng) {
  int rows = A;
  int cols = B + 1;
  for (;;) {
    PassageTable t = passage_times(sample_weights(rows, cols, eps, rng));
    if (covers_horizon(t, t.G(A, B))) return t;
    rows *= 2;
    cols *= 2;
  }
}

/// J(G(A,B), A-B) = B evaluated on `t`, which must cover the horizon G(A,B).
inline bool coupling_identity_holds(const PassageTable& t, int A, int B) {
  const long horizon = t.G(A, B);
  const Trajectory traj = tasep_from_lpp(t, horizon);
  return current(traj.at_time(horizon), A - B) == B;
}

/// Pairs (A,B) with 1 <= B <= A <= max_a violating J(G(A,B), A-B) = B.
/// One trajectory up to G(max_a, max_a) serves every pair.
inline std::vector<std::pair<int, int>> coupling_violations(const PassageTable& t, int max_a) {
  const long horizon = t.G(max_a, max_a);
  const Trajectory traj = tasep_from_lpp(t, horizon);
  std::vector<std::pair<int, int>> bad;
  for (int A = 1; A <= max_a; ++A)
    for (int B = 1; B <= A; ++B)
      if (current(traj.at_time(t.G(A, B)), A - B) != B) bad.emplace_back(A, B);
  return bad;
}

/// Checks J(G(A,B), A-B) = B on one sampled realization.
template <class Engine>
bool verify_coupling(int A, int B, double eps, Engine& rng) {
  if (B < 1 || B > A) throw std::invalid_argument("verify_coupling: need 1 <= B <= A");
  return coupling_identity_holds(sample_covering_table(A, B, eps, rng), A, B);
}

}  // namespace percshape
