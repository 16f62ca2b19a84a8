#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ganeda/genotype.hpp"

namespace ganeda {

enum class ProblemKind { OneMax, ConcatTrap, NKLandscape, HIFF };

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view text);

/// Per-variable data of an NK landscape: the k neighbours of variable i and
/// the 2^(k+1) payoffs indexed by the big-endian pattern
/// (bit_i, bit_{j_1}, ..., bit_{j_k}).
struct NkComponent {
  std::vector<std::size_t> neighbors;
  std::vector<double> payoffs;

  friend bool operator==(const NkComponent&, const NkComponent&) = default;
};

/// Immutable benchmark definition. Fitness is maximized.
class ProblemInstance {
 public:
  static ProblemInstance onemax(std::size_t n);
  static ProblemInstance concat_trap(std::size_t n, std::size_t k);
  static ProblemInstance hiff(std::size_t n);
  /// Validates every table; throws InstanceCorruptError on violation.
  static ProblemInstance nk(std::size_t n, std::size_t k, std::vector<NkComponent> components,
                            std::optional<double> known_optimum = std::nullopt);

  ProblemKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  /// Block size for traps, neighbourhood size for NK, 0 otherwise.
  std::size_t k() const noexcept { return k_; }
  const std::vector<NkComponent>& nk_components() const noexcept { return components_; }
  const std::optional<double>& known_optimum() const noexcept { return known_optimum_; }

  ProblemInstance with_known_optimum(std::optional<double> value) const;

  /// Short label used in CSV output, e.g. "trap".
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ProblemInstance(ProblemKind kind, std::size_t n, std::size_t k) : kind_(kind), n_(n), k_(k) {}

  ProblemKind kind_;
  std::size_t n_;
  std::size_t k_;
  std::vector<NkComponent> components_;
  std::optional<double> known_optimum_;
};

double evaluate(const ProblemInstance& instance, const Genotype& g);

/// Deceptive trap of one block with u ones out of k.
double trap_value(std::size_t ones, std::size_t k);

inline constexpr std::size_t kBruteForceMaxBits = 24;

struct Optimum {
  double fitness;
  Genotype genotype;
};

/// Exhaustive search over all 2^n genotypes. Genotypes are enumerated as
/// big-endian integers (position 0 is the most significant bit) and the first
/// maximizer wins, so ties go to the lowest binary value.
Optimum brute_force_optimum(const ProblemInstance& instance);

ProblemInstance generate_nk_instance(std::size_t n, std::size_t k, std::uint64_t seed);

ProblemInstance read_nk_instance(std::istream& in);
ProblemInstance load_nk_instance(const std::filesystem::path& path);
void write_nk_instance(std::ostream& out, const ProblemInstance& instance);
void save_nk_instance(const std::filesystem::path& path, const ProblemInstance& instance);

}  // namespace ganeda
