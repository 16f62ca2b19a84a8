#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ganeda/model.hpp"
#include "ganeda/nn.hpp"

namespace ganeda {

enum class PriorKind { Uniform01, StandardNormal };

struct PriorConfig {
  std::size_t z_dim = 0;  // 0 means "same as n"
  PriorKind distribution = PriorKind::Uniform01;
};

inline nn::OptimizerConfig gan_default_optimizer() {
  nn::OptimizerConfig c;
  c.learning_rate = 0.05;
  return c;
}

struct GanConfig {
  PriorConfig prior;
  std::size_t generator_hidden = 0;      // 0 means "same as n"
  std::size_t discriminator_hidden = 0;  // 0 means "same as n"
  nn::Activation hidden_activation = nn::Activation::Relu;
  nn::InitSpec init = nn::InitSpec::normal(0.1);
  double generator_dropout = 0.0;      // on the generator's hidden layer input
  double discriminator_dropout = 0.0;  // on the discriminator's hidden layer input
  nn::OptimizerConfig generator_optimizer = gan_default_optimizer();
  nn::OptimizerConfig discriminator_optimizer = gan_default_optimizer();
  std::size_t epochs = 5;
  std::size_t batch_size = 1;
  bool warm_start = false;
  // Keep every discriminator (y, t, loss) triple in the trace.
  bool record_steps = false;
};

struct GanEpochStats {
  std::size_t epoch = 0;
  double mean_loss_d = 0.0;
  double mean_loss_g = 0.0;
  double mean_d_real = 0.0;
  double mean_d_fake = 0.0;
};

struct DiscriminatorStep {
  double y;
  int target;
  double loss;
};

struct GanTrace {
  std::vector<GanEpochStats> epochs;
  std::vector<DiscriminatorStep> steps;  // only with record_steps

  /// `epoch,mean_loss_D,mean_loss_G,mean_D_real,mean_D_fake`
  void write_csv(std::ostream& out) const;
};

/// Generator and discriminator MLPs trained by strict 1:1 alternation: for
/// every training example the discriminator takes one step on a generated
/// sample (target 0) and one on the example (target 1); then the generator
/// takes one step descending log(1 - D(G(z))) with the error backpropagated
/// through the frozen discriminator.
class GanModel final : public Model {
 public:
  GanModel(std::size_t n, GanConfig config, Rng& rng);

  std::string_view name() const override { return "gan"; }
  void reset(Rng& rng) override;
  bool warm_start() const override { return config_.warm_start; }
  void fit(std::span<const Genotype> selected, Rng& rng) override;
  std::vector<Genotype> sample(std::size_t count, Rng& rng) override;

  GanTrace train(std::span<const Genotype> training_set, Rng& rng);

  /// D(g) in inference mode.
  double discriminator_score(const Genotype& g) const;
  /// Bernoulli parameters G(z) for a batch of prior draws (rows).
  nn::Matrix generator_probabilities(const nn::Matrix& z) const;
  nn::Matrix sample_prior(std::size_t count, Rng& rng) const;

  std::size_t n() const noexcept { return n_; }
  std::size_t z_dim() const noexcept { return z_dim_; }
  const GanConfig& config() const noexcept { return config_; }
  const GanTrace& last_trace() const noexcept { return trace_; }

  nn::Network& generator() noexcept { return generator_; }
  nn::Network& discriminator() noexcept { return discriminator_; }
  const nn::Network& generator() const noexcept { return generator_; }
  const nn::Network& discriminator() const noexcept { return discriminator_; }

 private:
  std::size_t n_;
  std::size_t z_dim_;
  GanConfig config_;
  nn::Network generator_;
  nn::Network discriminator_;
  nn::OptimizerState generator_state_;
  nn::OptimizerState discriminator_state_;
  GanTrace trace_;
};

/// d/dθ_G of sum over rows of log(1 - D(G(z))): the generator objective's
/// gradient, backpropagated through D. Exposed for gradient checking.
nn::Gradients generator_objective_gradient(const nn::Network& generator, const nn::Network& discriminator,
                                           const nn::Matrix& z, Rng& rng, double* objective = nullptr);

}  // namespace ganeda
