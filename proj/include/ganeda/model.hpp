#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ganeda/genotype.hpp"
#include "ganeda/random.hpp"

namespace ganeda {

/// Contract every probabilistic model in the EDA satisfies.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string_view name() const = 0;
  /// Called at the start of every generation unless the model warm-starts.
  virtual void reset(Rng& rng) = 0;
  virtual bool warm_start() const { return false; }
  virtual void fit(std::span<const Genotype> selected, Rng& rng) = 0;
  virtual std::vector<Genotype> sample(std::size_t count, Rng& rng) = 0;
};

}  // namespace ganeda
