#pragma once

#include <cstdint>
#include <random>

namespace percshape {

using Rng = std::mt19937_64;

/// Purposes that get their own random stream. Each replica derives one
/// engine per purpose, so changing how much one stage draws never perturbs
/// another stage.
enum class Stream : std::uint32_t {
  tasep_updates = 1,
  lpp_weights = 2,
  cross_edges = 3,
  bond_edges = 4,
  resample = 5,
  shape = 6,
};

/// Engine for (master seed, replica index, purpose).
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t replica, Stream purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return Rng(seq);
}

}  // namespace percshape
