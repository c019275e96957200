#pragma once

// Exact trajectory laws on tiny windows, as dyadic rationals, for comparing
// the cross-model particle process with direct TASEP dynamics.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "cross.hpp"
#include "tasep.hpp"

namespace percshape {

/// Probability num / 2^bits with num < 2^bits.
struct DyadicProb {
  std::uint64_t num;
  int bits;
};

/// Trajectory law: key = concatenated occupation words for times 1..steps,
/// mass = numerator over 2^denominator_bits.
struct ExactLaw {
  int denominator_bits = 0;
  std::map<std::vector<std::uint64_t>, std::uint64_t> mass;

  /// Same law expressed over 2^bits (bits >= denominator_bits).
  ExactLaw rescaled(int bits) const {
    if (bits < denominator_bits || bits > 62) throw std::invalid_argument("ExactLaw: cannot rescale");
    ExactLaw out;
    out.denominator_bits = bits;
    for (const auto& [k, m] : mass) out.mass[k] = m << (bits - denominator_bits);
    return out;
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [k, m] : mass) s += m;
    return s;
  }
};

inline bool same_law(const ExactLaw& a, const ExactLaw& b) {
  const int bits = std::max(a.denominator_bits, b.denominator_bits);
  return a.rescaled(bits).mass == b.rescaled(bits).mass;
}

namespace detail {

inline void append_words(std::vector<std::uint64_t>& key, const ParticleField& f) {
  const auto& w = f.bits().words();
  key.insert(key.end(), w.begin(), w.end());
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

/// Law of the extracted particle trajectory over every horizontal-edge
/// configuration of the n_cols x [row_lo, row_hi] rectangle, each edge
/// closed with probability `closed`.
inline ExactLaw cross_trajectory_law(int n_cols, int row_lo, int row_hi, DyadicProb closed) {
  const int edges = n_cols * (row_hi - row_lo + 1);
  if (edges > 30) throw std::invalid_argument("cross_trajectory_law: too many edges to enumerate");
  if (edges * closed.bits > 62) throw std::invalid_argument("cross_trajectory_law: denominator overflow");
  const std::uint64_t open_num = (std::uint64_t{1} << closed.bits) - closed.num;
  ExactLaw law;
  law.denominator_bits = edges * closed.bits;
  CrossConfig config(n_cols, row_lo, row_hi, 0.0);
  const int rows = row_hi - row_lo + 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges); ++mask) {
    int n_closed = 0;
    for (int e = 0; e < edges; ++e) {
      const bool is_closed = (mask >> e) & 1u;
      n_closed += is_closed;
      config.set_open(e / rows, row_lo + e % rows, !is_closed);
    }
    const std::uint64_t weight = detail::ipow(closed.num, n_closed) * detail::ipow(open_num, edges - n_closed);
    if (weight == 0) continue;
    const Trajectory traj = cross_trajectory(config);
    std::vector<std::uint64_t> key;
    for (long t = 1; t <= traj.steps(); ++t) detail::append_words(key, traj.at_time(t));
    law.mass[key] += weight;
  }
  return law;
}

/// Law of `steps` parallel TASEP updates from the step profile on
/// [window_lo, window_hi], by exhaustive branching over jump outcomes.
inline ExactLaw tasep_trajectory_law(int window_lo, int window_hi, int steps, DyadicProb jump) {
  struct Branch {
    ParticleField field;
    std::vector<std::uint64_t> key;
    std::uint64_t num;
    int bits;
  };
  const std::uint64_t stay_num = (std::uint64_t{1} << jump.bits) - jump.num;
  std::vector<Branch> frontier{{tasep_init(window_lo, window_hi), {}, 1, 0}};
  for (int s = 0; s < steps; ++s) {
    std::vector<Branch> next;
    for (const Branch& b : frontier) {
      std::vector<int> cand;
      for (int j = window_lo; j < window_hi; ++j)
        if (b.field.occupied(j) && !b.field.occupied(j + 1)) cand.push_back(j);
      const int k = static_cast<int>(cand.size());
      if (b.bits + k * jump.bits > 62) throw std::invalid_argument("tasep_trajectory_law: denominator overflow");
      for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << k); ++pick) {
        ParticleField f = b.field;
        f.set_time(b.field.time() + 1);
        int jumped = 0;
        for (int c = 0; c < k; ++c) {
          if ((pick >> c) & 1u) {
            f.set(cand[static_cast<std::size_t>(c)], false);
            f.set(cand[static_cast<std::size_t>(c)] + 1, true);
            ++jumped;
          }
        }
        const std::uint64_t w = detail::ipow(jump.num, jumped) * detail::ipow(stay_num, k - jumped);
        if (w == 0) continue;
        Branch nb{f, b.key, b.num * w, b.bits + k * jump.bits};
        detail::append_words(nb.key, f);
        next.push_back(std::move(nb));
      }
    }
    frontier = std::move(next);
  }
  int bits = 0;
  for (const Branch& b : frontier) bits = std::max(bits, b.bits);
  ExactLaw law;
  law.denominator_bits = bits;
  for (const Branch& b : frontier) law.mass[b.key] += b.num << (bits - b.bits);
  return law;
}

}  // namespace percshape
