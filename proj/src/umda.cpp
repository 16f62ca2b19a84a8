#include "ganeda/umda.hpp"

#include <algorithm>

#include "ganeda/errors.hpp"

namespace ganeda {

MarginalModel::MarginalModel(std::size_t n)
    : n_(n), p_min_(1.0 / static_cast<double>(n)), p_max_(1.0 - 1.0 / static_cast<double>(n)), p_(n, 0.5) {
  if (n < 3) throw ParameterError("marginal model needs n >= 3");
}

void MarginalModel::fit(std::span<const Genotype> selected, Rng&) { fit(selected); }

void MarginalModel::fit(std::span<const Genotype> selected) {
  if (selected.empty()) throw ParameterError("cannot fit marginal model on an empty set");
  std::vector<double> counts(n_, 0.0);
  for (const auto& g : selected) {
    if (g.size() != n_) throw StructuralError("genotype length does not match model");
    for (std::size_t j = 0; j < n_; ++j) counts[j] += g[j];
  }
  const auto m = static_cast<double>(selected.size());
  for (std::size_t j = 0; j < n_; ++j) p_[j] = std::clamp(counts[j] / m, p_min_, p_max_);
}

std::vector<Genotype> MarginalModel::sample(std::size_t count, Rng& rng) {
  std::vector<Genotype> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Genotype g(n_);
    for (std::size_t j = 0; j < n_; ++j) g.set(j, bernoulli(rng, p_[j]));
    out.push_back(std::move(g));
  }
  return out;
}

void MarginalModel::set_probabilities(std::vector<double> p) {
  if (p.size() != n_) throw StructuralError("probability vector length does not match model");
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("probabilities must lie in [0,1]");
  }
  p_ = std::move(p);
}

}  // namespace ganeda
