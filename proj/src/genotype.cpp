#include "ganeda/genotype.hpp"

#include <algorithm>

#include "ganeda/errors.hpp"

namespace ganeda {

Genotype::Genotype(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw StructuralError("genotype bits must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

Genotype Genotype::from_string(std::string_view text) {
  Genotype g(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      g.bits_[i] = 1;
    } else if (text[i] != '0') {
      throw StructuralError("genotype string may only contain '0' and '1'");
    }
  }
  return g;
}

Genotype Genotype::random(std::size_t n, Rng& rng) {
  Genotype g(n);
  for (auto& b : g.bits_) b = static_cast<std::uint8_t>(rng() & 1u);
  return g;
}

std::size_t Genotype::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::string Genotype::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::size_t hamming_distance(const Genotype& a, const Genotype& b) {
  if (a.size() != b.size()) throw StructuralError("hamming distance of unequal lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::size_t GenotypeHash::operator()(const Genotype& g) const noexcept {
  // FNV-1a over packed bytes
  std::uint64_t h = 1469598103934665603ull;
  std::uint8_t acc = 0;
  int filled = 0;
  for (auto b : g.bits()) {
    acc = static_cast<std::uint8_t>((acc << 1) | b);
    if (++filled == 8) {
      h = (h ^ acc) * 1099511628211ull;
      acc = 0;
      filled = 0;
    }
  }
  h = (h ^ acc) * 1099511628211ull;
  h = (h ^ g.size()) * 1099511628211ull;
  return static_cast<std::size_t>(h);
}

}  // namespace ganeda
