#include "ganeda/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "ganeda/errors.hpp"
#include "ganeda/gan.hpp"

namespace ganeda::nn {

double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

GradCheckResult compare_with_finite_differences(const Network& net, const Gradients& analytic,
                                                const std::function<double(const Network&)>& loss, double step) {
  GradCheckResult result;
  Network probe = net;
  auto check = [&](double& param, double grad) {
    const double saved = param;
    param = saved + step;
    probe.touch();
    const double up = loss(probe);
    param = saved - step;
    probe.touch();
    const double down = loss(probe);
    param = saved;
    probe.touch();
    const double numeric = (up - down) / (2.0 * step);
    result.max_relative_error = std::max(result.max_relative_error, relative_error(grad, numeric));
    ++result.parameters_checked;
  };
  for (std::size_t t = 0; t < probe.layer_count(); ++t) {
    auto& layer = probe.layers()[t];
    auto w = layer.weights.values();
    const auto gw = analytic.weights.at(t).values();
    for (std::size_t i = 0; i < w.size(); ++i) check(w[i], gw[i]);
    for (std::size_t o = 0; o < layer.biases.size(); ++o) check(layer.biases[o], analytic.biases.at(t).at(o));
  }
  return result;
}

namespace {

// Independent pre-activation recomputation used only to reject points near
// a relu kink, where central differences are meaningless.
bool near_relu_kink(const Network& net, const Matrix& input, double margin) {
  Matrix current = input;
  for (const auto& layer : net.layers()) {
    Matrix next(current.rows(), layer.out_size());
    for (std::size_t b = 0; b < current.rows(); ++b) {
      for (std::size_t o = 0; o < layer.out_size(); ++o) {
        double a = layer.biases[o];
        for (std::size_t i = 0; i < layer.in_size(); ++i) a += layer.weights(o, i) * current(b, i);
        if (layer.activation == Activation::Relu && std::abs(a) < margin) return true;
        switch (layer.activation) {
          case Activation::Sigmoid: a = 1.0 / (1.0 + std::exp(-a)); break;
          case Activation::Relu: a = std::max(a, 0.0); break;
          case Activation::Linear: break;
        }
        next(b, o) = a;
      }
    }
    current = std::move(next);
  }
  return false;
}

Activation random_activation(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return Activation::Sigmoid;
    case 1: return Activation::Relu;
    default: return Activation::Linear;
  }
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : m.values()) v = normal(rng);
  return m;
}

void randomize_biases(Network& net, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 0.5);
  for (auto& layer : net.layers()) {
    for (auto& b : layer.biases) b = normal(rng);
  }
  net.touch();
}

}  // namespace

bool saturated(const Matrix& probabilities, double margin) {
  return std::any_of(probabilities.values().begin(), probabilities.values().end(),
                     [margin](double y) { return y < margin || y > 1.0 - margin; });
}

GradCheckSuiteResult run_gradient_check_suite(std::size_t configurations, std::uint64_t seed, double kink_margin,
                                              double saturation_margin) {
  GradCheckSuiteResult suite;
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(1, 6);
  std::uniform_int_distribution<std::size_t> depth_dist(1, 3);
  std::uniform_int_distribution<std::size_t> batch_dist(1, 4);

  for (std::size_t c = 0; c < configurations; ++c) {
    // plain network with a cross-entropy loss on sigmoid outputs
    for (;;) {
      const std::size_t depth = depth_dist(rng);
      std::vector<std::size_t> sizes;
      std::vector<Activation> acts;
      for (std::size_t t = 0; t <= depth; ++t) sizes.push_back(size_dist(rng));
      for (std::size_t t = 0; t + 1 < depth; ++t) acts.push_back(random_activation(rng));
      acts.push_back(Activation::Sigmoid);
      Network net = init_network(sizes, acts, InitSpec::normal(1.0), rng);
      randomize_biases(net, rng);
      const std::size_t batch = batch_dist(rng);
      const Matrix input = random_matrix(batch, sizes.front(), rng);
      if (near_relu_kink(net, input, kink_margin) || saturated(predict(net, input), saturation_margin)) continue;
      Matrix targets(batch, sizes.back());
      for (auto& t : targets.values()) t = static_cast<double>(rng() & 1u);

      auto loss_of = [&](const Network& n, const Matrix& x) {
        const Matrix y = predict(n, x);
        double total = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
          total += cross_entropy_loss(y.values()[i], static_cast<int>(targets.values()[i]));
        }
        return total;
      };
      const auto rec = forward(net, input, Mode::Train, rng);
      Matrix dy(batch, sizes.back());
      for (std::size_t i = 0; i < dy.size(); ++i) {
        dy.values()[i] = cross_entropy_gradient(rec.output().values()[i], static_cast<int>(targets.values()[i]));
      }
      const auto grads = backward(net, rec, dy);
      const auto r = compare_with_finite_differences(net, grads, [&](const Network& n) { return loss_of(n, input); });
      suite.network_max_error = std::max(suite.network_max_error, r.max_relative_error);

      // input gradient
      const double h = 1e-5;
      for (std::size_t i = 0; i < input.size(); ++i) {
        Matrix up = input;
        Matrix down = input;
        up.values()[i] += h;
        down.values()[i] -= h;
        const double numeric = (loss_of(net, up) - loss_of(net, down)) / (2.0 * h);
        suite.network_max_error =
            std::max(suite.network_max_error, relative_error(grads.input.values()[i], numeric));
      }
      break;
    }

    // composed log(1 - D(G(z))) through both networks, generator parameters only
    for (;;) {
      const std::size_t z_dim = size_dist(rng);
      const std::size_t n = size_dist(rng);
      const std::size_t gh = size_dist(rng);
      const std::size_t dh = size_dist(rng);
      const std::size_t g_sizes[] = {z_dim, gh, n};
      const std::size_t d_sizes[] = {n, dh, 1};
      const Activation acts[] = {Activation::Relu, Activation::Sigmoid};
      Network g = init_network(g_sizes, acts, InitSpec::normal(1.0), rng);
      Network d = init_network(d_sizes, acts, InitSpec::normal(1.0), rng);
      randomize_biases(g, rng);
      randomize_biases(d, rng);
      const std::size_t batch = batch_dist(rng);
      Matrix z(batch, z_dim);
      for (auto& v : z.values()) v = uniform01(rng);
      if (near_relu_kink(g, z, kink_margin) || near_relu_kink(d, predict(g, z), kink_margin) ||
          saturated(predict(d, predict(g, z)), saturation_margin)) {
        continue;
      }

      const auto grads = generator_objective_gradient(g, d, z, rng);
      auto objective = [&](const Network& gen) {
        const Matrix y = predict(d, predict(gen, z));
        double total = 0.0;
        for (double v : y.values()) total += std::log1p(-v);
        return total;
      };
      const auto r = compare_with_finite_differences(g, grads, objective);
      suite.composed_max_error = std::max(suite.composed_max_error, r.max_relative_error);
      break;
    }
    ++suite.configurations;
  }
  return suite;
}

}  // namespace ganeda::nn
