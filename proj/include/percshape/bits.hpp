#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace percshape {

/// Packed row of bits addressed by offset from 0.
class BitRow {
public:
  BitRow() = default;
  explicit BitRow(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t pos) const { return (words_[pos >> 6] >> (pos & 63)) & 1u; }

  void set(std::size_t pos, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
    if (value)
      words_[pos >> 6] |= mask;
    else
      words_[pos >> 6] &= ~mask;
  }

  void flip(std::size_t pos) { words_[pos >> 6] ^= std::uint64_t{1} << (pos & 63); }

  /// Number of set bits in [from, size).
  std::size_t count_from(std::size_t from) const {
    if (from >= size_) return 0;
    std::size_t w = from >> 6;
    std::size_t total = std::popcount(words_[w] & (~std::uint64_t{0} << (from & 63)));
    for (++w; w < words_.size(); ++w) total += std::popcount(words_[w]);
    return total;
  }

  std::size_t count() const { return count_from(0); }

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  /// Clears the padding bits past size().
  void trim() {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  friend bool operator==(const BitRow&, const BitRow&) = default;

private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense bit matrix stored line by line; each line is a BitRow of equal length.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t lines, std::size_t line_len, bool value = false)
      : lines_(lines, BitRow(line_len, value)), line_len_(line_len) {}

  std::size_t lines() const { return lines_.size(); }
  std::size_t line_len() const { return line_len_; }

  bool test(std::size_t line, std::size_t pos) const { return lines_[line].test(pos); }
  void set(std::size_t line, std::size_t pos, bool value = true) { lines_[line].set(pos, value); }
  void flip(std::size_t line, std::size_t pos) { lines_[line].flip(pos); }

  BitRow& line(std::size_t i) { return lines_[i]; }
  const BitRow& line(std::size_t i) const { return lines_[i]; }

  std::size_t count() const {
    std::size_t total = 0;
    for (const auto& l : lines_) total += l.count();
    return total;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
  std::vector<BitRow> lines_;
  std::size_t line_len_ = 0;
};

/// Fills every bit independently with 1 w.p. `p_one`, consuming `rng` in
/// line-major order. Sparse outcomes are drawn by geometric skipping, so the
/// draw count scales with the number of minority bits.
template <class Engine>
void fill_bernoulli(BitMatrix& m, double p_one, Engine& rng) {
  if (!(p_one >= 0.0 && p_one <= 1.0)) throw std::invalid_argument("fill_bernoulli: probability outside [0,1]");
  const std::size_t len = m.line_len();
  const std::size_t total = m.lines() * len;
  const bool minority_is_one = p_one <= 0.5;
  const double q = minority_is_one ? p_one : 1.0 - p_one;
  for (std::size_t i = 0; i < m.lines(); ++i) {
    BitRow fresh(len, !minority_is_one);
    m.line(i) = fresh;
  }
  if (q <= 0.0 || total == 0) return;
  if (q >= 0.5) {
    // p_one == 0.5: plain fair bits
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < m.lines(); ++i)
      for (std::size_t j = 0; j < len; ++j) m.set(i, j, coin(rng));
    return;
  }
  std::geometric_distribution<std::uint64_t> gap(q);
  std::uint64_t pos = gap(rng);
  while (pos < total) {
    m.set(pos / len, pos % len, minority_is_one);
    pos += 1 + gap(rng);
  }
}

}  // namespace percshape
