#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ganeda/random.hpp"

namespace ganeda {

/// Fixed-length bit string. Every element is 0 or 1; the length is set at
/// construction and never changes.
class Genotype {
 public:
  Genotype() = default;
  explicit Genotype(std::size_t n) : bits_(n, 0) {}
  Genotype(std::initializer_list<int> bits);

  /// Parses a string of '0'/'1' characters, e.g. "10110".
  static Genotype from_string(std::string_view text);
  static Genotype random(std::size_t n, Rng& rng);

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count_ones() const noexcept;
  std::string to_string() const;

  friend bool operator==(const Genotype&, const Genotype&) = default;
  friend auto operator<=>(const Genotype&, const Genotype&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const Genotype& a, const Genotype& b);

struct GenotypeHash {
  std::size_t operator()(const Genotype& g) const noexcept;
};

}  // namespace ganeda
