#include "ganeda/dae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ganeda/errors.hpp"

namespace ganeda {

void DaeTrace::write_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "epoch,mean_reconstruction_loss\n";
  for (std::size_t e = 0; e < mean_reconstruction_loss.size(); ++e) {
    out << e << ',' << mean_reconstruction_loss[e] << '\n';
  }
  out.precision(old);
}

DaeModel::DaeModel(std::size_t n, DaeConfig config, Rng& rng) : n_(n), config_(std::move(config)) {
  if (n == 0) throw ParameterError("dae needs n >= 1");
  if (!(config_.corruption >= 0.0 && config_.corruption < 1.0)) {
    throw ParameterError("dae corruption must be in [0,1)");
  }
  if (config_.sample_corruption && !(*config_.sample_corruption >= 0.0 && *config_.sample_corruption < 1.0)) {
    throw ParameterError("dae sample corruption must be in [0,1)");
  }
  if (config_.batch_size == 0) throw ParameterError("dae batch size must be >= 1");
  config_.optimizer.validate();
  reset(rng);
}

void DaeModel::reset(Rng& rng) {
  const std::size_t h = config_.hidden == 0 ? std::max<std::size_t>(1, n_ / 3) : config_.hidden;
  const std::size_t sizes[] = {n_, h, n_};
  const nn::Activation acts[] = {config_.hidden_activation, nn::Activation::Sigmoid};
  net_ = nn::init_network(sizes, acts, config_.init, rng);
  if (config_.hidden_dropout > 0.0) net_.set_dropout(1, config_.hidden_dropout);
  state_ = {};
}

Genotype DaeModel::corrupt(const Genotype& g, double rate, Rng& rng) const {
  Genotype out = g;
  if (rate <= 0.0) return out;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (bernoulli(rng, rate)) out.set(j, (rng() & 1u) != 0);
  }
  return out;
}

void DaeModel::fit(std::span<const Genotype> selected, Rng& rng) {
  trace_ = train(selected, rng);
  seeds_.assign(selected.begin(), selected.end());
}

DaeTrace DaeModel::train(std::span<const Genotype> training_set, Rng& rng) {
  DaeTrace trace;
  if (training_set.empty()) throw ParameterError("cannot fit dae on an empty training set");
  for (const auto& g : training_set) {
    if (g.size() != n_) throw StructuralError("training genotype length does not match model");
  }
  const std::size_t m = training_set.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t begin = 0; begin < m; begin += config_.batch_size) {
      const std::size_t count = std::min(config_.batch_size, m - begin);
      nn::Matrix noisy(count, n_);
      for (std::size_t r = 0; r < count; ++r) {
        const auto corrupted = corrupt(training_set[order[begin + r]], config_.corruption, rng);
        for (std::size_t j = 0; j < n_; ++j) noisy(r, j) = corrupted[j];
      }
      const auto rec = nn::forward(net_, noisy, nn::Mode::Train, rng);
      nn::Matrix grad(count, n_);
      const double scale = 1.0 / static_cast<double>(count);
      for (std::size_t r = 0; r < count; ++r) {
        const auto& clean = training_set[order[begin + r]];
        for (std::size_t j = 0; j < n_; ++j) {
          const double y = rec.output()(r, j);
          total += nn::cross_entropy_loss(y, clean[j]);
          grad(r, j) = nn::cross_entropy_gradient(y, clean[j]) * scale;
        }
      }
      if (!std::isfinite(total)) throw NumericError("dae reconstruction loss is not finite");
      const auto grads = nn::backward(net_, rec, grad);
      nn::sgd_step(net_, grads, state_, config_.optimizer, epoch);
    }
    trace.mean_reconstruction_loss.push_back(total / static_cast<double>(m));
  }
  return trace;
}

std::vector<Genotype> DaeModel::sample(std::size_t count, Rng& rng) {
  if (seeds_.empty()) {
    // never fitted: start chains from uniform noise
    std::vector<Genotype> noise;
    noise.reserve(std::max<std::size_t>(count, 1));
    for (std::size_t i = 0; i < std::max<std::size_t>(count, 1); ++i) noise.push_back(Genotype::random(n_, rng));
    return sample(count, noise, rng);
  }
  return sample(count, seeds_, rng);
}

std::vector<Genotype> DaeModel::sample(std::size_t count, std::span<const Genotype> seeds, Rng& rng) const {
  if (count > 0 && seeds.empty()) throw ParameterError("dae sampling needs at least one seed genotype");
  std::vector<Genotype> out;
  out.reserve(count);
  const double rate = chain_corruption();
  for (std::size_t s = 0; s < count; ++s) {
    Genotype g = seeds[s % seeds.size()];
    if (g.size() != n_) throw StructuralError("seed genotype length does not match model");
    for (std::size_t step = 0; step < config_.chain_steps; ++step) {
      const auto p = reconstruct(corrupt(g, rate, rng));
      for (std::size_t j = 0; j < n_; ++j) g.set(j, bernoulli(rng, p[j]));
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<double> DaeModel::reconstruct(const Genotype& g) const {
  if (g.size() != n_) throw StructuralError("genotype length does not match model");
  nn::Matrix x(1, n_);
  for (std::size_t j = 0; j < n_; ++j) x(0, j) = g[j];
  const auto y = nn::predict(net_, x);
  return {y.values().begin(), y.values().end()};
}

}  // namespace ganeda
