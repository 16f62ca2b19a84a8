#include "ganeda/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ganeda/errors.hpp"

namespace ganeda {

namespace {

nn::Matrix rows_from(std::span<const Genotype> set, std::span<const std::size_t> order, std::size_t begin,
                     std::size_t count) {
  const std::size_t n = set.front().size();
  nn::Matrix m(count, n);
  for (std::size_t r = 0; r < count; ++r) {
    const auto& g = set[order[begin + r]];
    auto row = m.row(r);
    for (std::size_t j = 0; j < n; ++j) row[j] = g[j];
  }
  return m;
}

nn::Network build_network(std::size_t in, std::size_t hidden, std::size_t out, nn::Activation hidden_act,
                          double dropout, nn::InitSpec init, Rng& rng) {
  const std::size_t sizes[] = {in, hidden, out};
  const nn::Activation acts[] = {hidden_act, nn::Activation::Sigmoid};
  auto net = nn::init_network(sizes, acts, init, rng);
  if (dropout > 0.0) net.set_dropout(1, dropout);
  return net;
}

// d log(1 - y) / dy with y clamped
double generator_loss_gradient(double y) { return -1.0 / (1.0 - nn::clamp_probability(y)); }
double generator_loss(double y) { return std::log1p(-nn::clamp_probability(y)); }

}  // namespace

void GanTrace::write_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "epoch,mean_loss_D,mean_loss_G,mean_D_real,mean_D_fake\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << e.mean_loss_d << ',' << e.mean_loss_g << ',' << e.mean_d_real << ','
        << e.mean_d_fake << '\n';
  }
  out.precision(old);
}

GanModel::GanModel(std::size_t n, GanConfig config, Rng& rng)
    : n_(n), z_dim_(config.prior.z_dim == 0 ? n : config.prior.z_dim), config_(std::move(config)) {
  if (n == 0) throw ParameterError("gan needs n >= 1");
  if (config_.batch_size == 0) throw ParameterError("gan batch size must be >= 1");
  config_.generator_optimizer.validate();
  config_.discriminator_optimizer.validate();
  reset(rng);
}

void GanModel::reset(Rng& rng) {
  const std::size_t gh = config_.generator_hidden == 0 ? n_ : config_.generator_hidden;
  const std::size_t dh = config_.discriminator_hidden == 0 ? n_ : config_.discriminator_hidden;
  generator_ = build_network(z_dim_, gh, n_, config_.hidden_activation, config_.generator_dropout, config_.init, rng);
  discriminator_ =
      build_network(n_, dh, 1, config_.hidden_activation, config_.discriminator_dropout, config_.init, rng);
  generator_state_ = {};
  discriminator_state_ = {};
}

nn::Matrix GanModel::sample_prior(std::size_t count, Rng& rng) const {
  nn::Matrix z(count, z_dim_);
  if (config_.prior.distribution == PriorKind::Uniform01) {
    for (auto& v : z.values()) v = uniform01(rng);
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : z.values()) v = normal(rng);
  }
  return z;
}

void GanModel::fit(std::span<const Genotype> selected, Rng& rng) { trace_ = train(selected, rng); }

GanTrace GanModel::train(std::span<const Genotype> training_set, Rng& rng) {
  GanTrace trace;
  if (config_.epochs == 0) return trace;
  if (training_set.empty()) throw ParameterError("cannot fit gan on an empty training set");
  for (const auto& g : training_set) {
    if (g.size() != n_) throw StructuralError("training genotype length does not match model");
  }
  const std::size_t m = training_set.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double sum_loss_d = 0.0;
    double sum_loss_g = 0.0;
    double sum_real = 0.0;
    double sum_fake = 0.0;
    for (std::size_t begin = 0; begin < m; begin += config_.batch_size) {
      const std::size_t count = std::min(config_.batch_size, m - begin);
      const double scale = 1.0 / static_cast<double>(count);

      // discriminator: generated sample (target 0), then training example (target 1)
      const auto fake = nn::forward(generator_, sample_prior(count, rng), nn::Mode::Train, rng);
      const nn::Matrix real = rows_from(training_set, order, begin, count);
      for (int target : {0, 1}) {
        const nn::Matrix& input = target ? real : fake.output();
        const auto rec = nn::forward(discriminator_, input, nn::Mode::Train, rng);
        nn::Matrix grad(count, 1);
        for (std::size_t r = 0; r < count; ++r) {
          const double y = rec.output()(r, 0);
          const double loss = nn::cross_entropy_loss(y, target);
          if (!std::isfinite(loss)) throw NumericError("discriminator loss is not finite");
          sum_loss_d += loss;
          (target ? sum_real : sum_fake) += y;
          if (config_.record_steps) trace.steps.push_back({y, target, loss});
          grad(r, 0) = nn::cross_entropy_gradient(y, target) * scale;
        }
        const auto grads = nn::backward(discriminator_, rec, grad);
        nn::sgd_step(discriminator_, grads, discriminator_state_, config_.discriminator_optimizer, epoch);
      }

      // generator: fresh z, error flows back through D, only G is updated
      const auto gen = nn::forward(generator_, sample_prior(count, rng), nn::Mode::Train, rng);
      const auto judged = nn::forward(discriminator_, gen.output(), nn::Mode::Train, rng);
      nn::Matrix dy(count, 1);
      for (std::size_t r = 0; r < count; ++r) {
        const double y = judged.output()(r, 0);
        const double loss = generator_loss(y);
        if (!std::isfinite(loss)) throw NumericError("generator loss is not finite");
        sum_loss_g += loss;
        dy(r, 0) = generator_loss_gradient(y) * scale;
      }
      const auto through_d = nn::backward(discriminator_, judged, dy);
      const auto grads_g = nn::backward(generator_, gen, through_d.input);
      nn::sgd_step(generator_, grads_g, generator_state_, config_.generator_optimizer, epoch);
    }
    const auto md = static_cast<double>(m);
    trace.epochs.push_back({epoch, sum_loss_d / (2.0 * md), sum_loss_g / md, sum_real / md, sum_fake / md});
  }
  return trace;
}

std::vector<Genotype> GanModel::sample(std::size_t count, Rng& rng) {
  std::vector<Genotype> out;
  if (count == 0) return out;
  out.reserve(count);
  const auto p = generator_probabilities(sample_prior(count, rng));
  for (std::size_t s = 0; s < count; ++s) {
    Genotype g(n_);
    const auto row = p.row(s);
    for (std::size_t j = 0; j < n_; ++j) g.set(j, bernoulli(rng, row[j]));
    out.push_back(std::move(g));
  }
  return out;
}

double GanModel::discriminator_score(const Genotype& g) const {
  if (g.size() != n_) throw StructuralError("genotype length does not match discriminator input");
  nn::Matrix x(1, n_);
  for (std::size_t j = 0; j < n_; ++j) x(0, j) = g[j];
  return nn::predict(discriminator_, x)(0, 0);
}

nn::Matrix GanModel::generator_probabilities(const nn::Matrix& z) const { return nn::predict(generator_, z); }

nn::Gradients generator_objective_gradient(const nn::Network& generator, const nn::Network& discriminator,
                                           const nn::Matrix& z, Rng& rng, double* objective) {
  const auto gen = nn::forward(generator, z, nn::Mode::Train, rng);
  const auto judged = nn::forward(discriminator, gen.output(), nn::Mode::Train, rng);
  nn::Matrix dy(z.rows(), 1);
  double total = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const double y = judged.output()(r, 0);
    total += generator_loss(y);
    dy(r, 0) = generator_loss_gradient(y);
  }
  if (objective) *objective = total;
  const auto through_d = nn::backward(discriminator, judged, dy);
  return nn::backward(generator, gen, through_d.input);
}

}  // namespace ganeda
