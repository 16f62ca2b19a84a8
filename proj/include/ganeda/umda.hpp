#pragma once

#include <vector>

#include "ganeda/model.hpp"

namespace ganeda {

/// Univariate marginal model. Each bit is an independent Bernoulli whose
/// probability is the bit's frequency in the selected set, clamped to
/// [1/n, 1 - 1/n]. Requires n >= 3.
class MarginalModel final : public Model {
 public:
  explicit MarginalModel(std::size_t n);

  std::string_view name() const override { return "umda"; }
  void reset(Rng&) override {}
  void fit(std::span<const Genotype> selected, Rng& rng) override;
  void fit(std::span<const Genotype> selected);
  std::vector<Genotype> sample(std::size_t count, Rng& rng) override;

  const std::vector<double>& probabilities() const noexcept { return p_; }
  /// Sets probabilities directly (no clamp); used to drive the sampler in tests.
  void set_probabilities(std::vector<double> p);
  double p_min() const noexcept { return p_min_; }
  double p_max() const noexcept { return p_max_; }

 private:
  std::size_t n_;
  double p_min_;
  double p_max_;
  std::vector<double> p_;
};

}  // namespace ganeda
