#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ganeda/model.hpp"
#include "ganeda/nn.hpp"

namespace ganeda {

struct DaeConfig {
  std::size_t hidden = 0;  // 0 means max(1, n / 3)
  nn::Activation hidden_activation = nn::Activation::Sigmoid;
  nn::InitSpec init = nn::InitSpec::normal(0.1);
  double hidden_dropout = 0.0;
  // Per-bit probability of resetting a bit to a uniform random value.
  double corruption = 0.1;
  // Corruption used inside the sampling chain; unset means `corruption`.
  // A heavier rate than in training keeps the chain from copying its seeds.
  std::optional<double> sample_corruption = 0.8;
  std::size_t chain_steps = 1;
  nn::OptimizerConfig optimizer;
  std::size_t epochs = 30;
  std::size_t batch_size = 1;
  bool warm_start = false;
};

struct DaeTrace {
  std::vector<double> mean_reconstruction_loss;  // one entry per epoch

  /// `epoch,mean_reconstruction_loss`
  void write_csv(std::ostream& out) const;
};

/// Denoising autoencoder n -> hidden -> n trained to reconstruct clean
/// genotypes from salt-and-pepper corrupted copies. Sampling runs a short
/// corrupt / reconstruct / Bernoulli chain started from seed genotypes;
/// through the Model interface the seeds are the last fitted set.
class DaeModel final : public Model {
 public:
  DaeModel(std::size_t n, DaeConfig config, Rng& rng);

  std::string_view name() const override { return "dae"; }
  void reset(Rng& rng) override;
  bool warm_start() const override { return config_.warm_start; }
  void fit(std::span<const Genotype> selected, Rng& rng) override;
  std::vector<Genotype> sample(std::size_t count, Rng& rng) override;

  DaeTrace train(std::span<const Genotype> training_set, Rng& rng);
  std::vector<Genotype> sample(std::size_t count, std::span<const Genotype> seeds, Rng& rng) const;

  /// Output probabilities for an uncorrupted input.
  std::vector<double> reconstruct(const Genotype& g) const;
  Genotype corrupt(const Genotype& g, double rate, Rng& rng) const;

  std::size_t n() const noexcept { return n_; }
  const DaeConfig& config() const noexcept { return config_; }
  const DaeTrace& last_trace() const noexcept { return trace_; }
  nn::Network& network() noexcept { return net_; }
  const nn::Network& network() const noexcept { return net_; }

 private:
  double chain_corruption() const { return config_.sample_corruption.value_or(config_.corruption); }

  std::size_t n_;
  DaeConfig config_;
  nn::Network net_;
  nn::OptimizerState state_;
  DaeTrace trace_;
  std::vector<Genotype> seeds_;
};

}  // namespace ganeda
