#include "ganeda/nn.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "ganeda/errors.hpp"

namespace ganeda::nn {

Matrix Matrix::row_vector(std::span<const double> values) {
  Matrix m(1, values.size());
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Relu: return "relu";
    case Activation::Linear: return "linear";
  }
  return "unknown";
}

Activation parse_activation(std::string_view text) {
  if (text == "sigmoid") return Activation::Sigmoid;
  if (text == "relu") return Activation::Relu;
  if (text == "linear") return Activation::Linear;
  throw ParameterError("unknown activation '" + std::string(text) + "' (expected sigmoid|relu|linear)");
}

double sigmoid(double x) {
  double y;
  if (x >= 0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    y = e / (1.0 + e);
  }
  // keep outputs strictly inside (0,1) in floating point
  return std::clamp(y, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

Network::Network(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ParameterError("network needs at least one layer");
  for (std::size_t t = 0; t < layers_.size(); ++t) {
    const auto& l = layers_[t];
    if (l.biases.size() != l.out_size()) throw StructuralError("bias size does not match layer output");
    if (t > 0 && layers_[t - 1].out_size() != l.in_size()) {
      throw StructuralError("layer " + std::to_string(t) + " input does not chain with previous output");
    }
    if (!(l.dropout_rate >= 0.0 && l.dropout_rate < 1.0)) throw ParameterError("dropout rate must be in [0,1)");
  }
}

std::size_t Network::input_size() const { return layers_.empty() ? 0 : layers_.front().in_size(); }
std::size_t Network::output_size() const { return layers_.empty() ? 0 : layers_.back().out_size(); }

void Network::set_dropout(std::size_t layer, double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ParameterError("dropout rate must be in [0,1)");
  layers_.at(layer).dropout_rate = rate;
  ++version_;
}

Network init_network(std::span<const std::size_t> layer_sizes, std::span<const Activation> activations,
                     InitSpec init, Rng& rng) {
  if (layer_sizes.size() < 2) throw ParameterError("network topology needs at least two layer sizes");
  if (activations.size() != layer_sizes.size() - 1) {
    throw ParameterError("need one activation per weight layer");
  }
  if (!(init.scale >= 0.0)) throw ParameterError("init scale must be >= 0");
  std::vector<DenseLayer> layers;
  for (std::size_t t = 0; t + 1 < layer_sizes.size(); ++t) {
    if (layer_sizes[t] == 0 || layer_sizes[t + 1] == 0) throw ParameterError("layer sizes must be positive");
    DenseLayer l;
    l.weights = Matrix(layer_sizes[t + 1], layer_sizes[t]);
    l.biases.assign(layer_sizes[t + 1], 0.0);
    l.activation = activations[t];
    for (auto& w : l.weights.values()) {
      if (init.kind == InitSpec::Kind::Normal) {
        w = init.scale == 0.0 ? 0.0 : std::normal_distribution<double>(0.0, init.scale)(rng);
      } else {
        w = init.scale == 0.0 ? 0.0 : std::uniform_real_distribution<double>(-init.scale, init.scale)(rng);
      }
    }
    layers.push_back(std::move(l));
  }
  return Network(std::move(layers));
}

namespace {

void apply_activation(Activation a, std::span<double> v) {
  switch (a) {
    case Activation::Sigmoid:
      for (auto& x : v) x = sigmoid(x);
      break;
    case Activation::Relu:
      for (auto& x : v) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::Linear: break;
  }
}

}  // namespace

ForwardRecord forward(const Network& net, const Matrix& input, Mode mode, Rng& rng) {
  if (net.layer_count() == 0) throw UsageError("forward on an empty network");
  if (input.cols() != net.input_size()) {
    throw StructuralError("input has " + std::to_string(input.cols()) + " columns, network expects " +
                          std::to_string(net.input_size()));
  }
  ForwardRecord rec;
  rec.mode = mode;
  rec.network = &net;
  rec.network_version = net.version();
  const std::size_t batch = input.rows();
  const Matrix* current = &input;
  for (const auto& layer : net.layers()) {
    Matrix in = *current;
    Matrix mask;
    if (layer.dropout_rate > 0.0) {
      if (mode == Mode::Train) {
        mask = Matrix(in.rows(), in.cols());
        const double keep = 1.0 - layer.dropout_rate;
        for (std::size_t i = 0; i < in.size(); ++i) {
          const double m = bernoulli(rng, keep) ? 1.0 : 0.0;
          mask.values()[i] = m;
          in.values()[i] *= m;
        }
      } else {
        const double keep = 1.0 - layer.dropout_rate;
        for (auto& v : in.values()) v *= keep;
      }
    }
    Matrix out(batch, layer.out_size());
    for (std::size_t b = 0; b < batch; ++b) {
      const auto x = in.row(b);
      auto y = out.row(b);
      for (std::size_t o = 0; o < layer.out_size(); ++o) {
        const auto w = layer.weights.row(o);
        double acc = layer.biases[o];
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * x[i];
        y[o] = acc;
      }
    }
    apply_activation(layer.activation, out.values());
    if (!out.all_finite()) throw NumericError("non-finite activation in forward pass");
    rec.layer_inputs.push_back(std::move(in));
    rec.masks.push_back(std::move(mask));
    rec.outputs.push_back(std::move(out));
    current = &rec.outputs.back();
  }
  return rec;
}

Matrix predict(const Network& net, const Matrix& input) {
  Rng unused(0);  // infer mode draws nothing
  auto rec = forward(net, input, Mode::Infer, unused);
  return std::move(rec.outputs.back());
}

Gradients backward(const Network& net, const ForwardRecord& record, const Matrix& output_gradient) {
  const std::size_t layers = net.layer_count();
  if (record.network != &net || record.network_version != net.version()) {
    throw UsageError("forward record is stale or belongs to another network");
  }
  if (record.mode != Mode::Train) throw UsageError("backward requires a train-mode forward record");
  if (record.outputs.size() != layers || record.layer_inputs.size() != layers) {
    throw UsageError("forward record is incomplete");
  }
  const Matrix& out = record.outputs.back();
  if (output_gradient.rows() != out.rows() || output_gradient.cols() != out.cols()) {
    throw StructuralError("output gradient shape does not match network output");
  }

  Gradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);
  Matrix delta = output_gradient;  // d loss / d activation of current layer
  for (std::size_t t = layers; t-- > 0;) {
    const auto& layer = net.layers()[t];
    const Matrix& y = record.outputs[t];
    const Matrix& x = record.layer_inputs[t];
    // to pre-activation
    auto d = delta.values();
    const auto yv = y.values();
    switch (layer.activation) {
      case Activation::Sigmoid:
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= yv[i] * (1.0 - yv[i]);
        break;
      case Activation::Relu:
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = yv[i] > 0.0 ? d[i] : 0.0;
        break;
      case Activation::Linear: break;
    }
    Matrix dw(layer.out_size(), layer.in_size());
    std::vector<double> db(layer.out_size(), 0.0);
    Matrix dx(x.rows(), layer.in_size());
    for (std::size_t b = 0; b < x.rows(); ++b) {
      const auto xr = x.row(b);
      const auto dr = delta.row(b);
      auto dxr = dx.row(b);
      for (std::size_t o = 0; o < layer.out_size(); ++o) {
        const double e = dr[o];
        if (e == 0.0) continue;
        db[o] += e;
        auto dwr = dw.row(o);
        const auto wr = layer.weights.row(o);
        for (std::size_t i = 0; i < xr.size(); ++i) {
          dwr[i] += e * xr[i];
          dxr[i] += e * wr[i];
        }
      }
    }
    const Matrix& mask = record.masks[t];
    if (mask.size() != 0) {
      for (std::size_t i = 0; i < dx.size(); ++i) dx.values()[i] *= mask.values()[i];
    }
    g.weights[t] = std::move(dw);
    g.biases[t] = std::move(db);
    delta = std::move(dx);
  }
  g.input = std::move(delta);
  return g;
}

double clamp_probability(double y) {
  return std::clamp(y, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

double cross_entropy_loss(double y, int target) {
  const double p = clamp_probability(y);
  return target ? -std::log(p) : -std::log1p(-p);
}

double cross_entropy_gradient(double y, int target) {
  const double p = clamp_probability(y);
  return target ? -1.0 / p : 1.0 / (1.0 - p);
}

double Schedule::at(double epoch) const {
  if (points.empty()) return 1.0;
  if (epoch <= points.front().first) return points.front().second;
  if (epoch >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& [e1, m1] = points[i];
    if (epoch <= e1) {
      const auto& [e0, m0] = points[i - 1];
      const double f = (epoch - e0) / (e1 - e0);
      return m0 + f * (m1 - m0);
    }
  }
  return points.back().second;
}

Schedule Schedule::parse(std::string_view text) {
  Schedule s;
  std::string str(text);
  std::stringstream ss(str);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParameterError("schedule point '" + item + "' is not epoch:multiplier");
    std::size_t used_e = 0;
    std::size_t used_m = 0;
    double e = 0.0;
    double m = 0.0;
    try {
      e = std::stod(item.substr(0, colon), &used_e);
      m = std::stod(item.substr(colon + 1), &used_m);
    } catch (const std::exception&) {
      throw ParameterError("schedule point '" + item + "' is not numeric");
    }
    if (used_e != colon || used_m != item.size() - colon - 1) {
      throw ParameterError("schedule point '" + item + "' has trailing characters");
    }
    if (!s.points.empty() && e <= s.points.back().first) {
      throw ParameterError("schedule epochs must be strictly increasing");
    }
    if (!(m >= 0.0) || !std::isfinite(m)) throw ParameterError("schedule multipliers must be >= 0");
    s.points.emplace_back(e, m);
  }
  return s;
}

std::string Schedule::to_string() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out << ',';
    out << points[i].first << ':' << points[i].second;
  }
  return out.str();
}

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0 && learning_rate < 1.0)) throw ParameterError("learning rate must be in [0,1)");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ParameterError("momentum must be in [0,1)");
  if (!(weight_decay >= 0.0)) throw ParameterError("weight decay must be >= 0");
}

void sgd_step(Network& net, const Gradients& grads, OptimizerState& state, const OptimizerConfig& config,
              std::size_t epoch) {
  const std::size_t layers = net.layer_count();
  if (grads.weights.size() != layers || grads.biases.size() != layers) {
    throw StructuralError("gradient layer count does not match network");
  }
  if (state.weight_velocity.size() != layers) {
    state.weight_velocity.clear();
    state.bias_velocity.clear();
    for (const auto& l : net.layers()) {
      state.weight_velocity.emplace_back(l.out_size(), l.in_size());
      state.bias_velocity.emplace_back(l.out_size(), 0.0);
    }
  }
  const auto e = static_cast<double>(epoch);
  const double alpha = config.learning_rate * config.learning_rate_schedule.at(e);
  const double mu = config.momentum * config.momentum_schedule.at(e);
  const double lambda = config.weight_decay * config.weight_decay_schedule.at(e);
  for (std::size_t t = 0; t < layers; ++t) {
    auto& layer = net.layers()[t];
    const auto& gw = grads.weights[t];
    if (gw.rows() != layer.out_size() || gw.cols() != layer.in_size() ||
        grads.biases[t].size() != layer.out_size()) {
      throw StructuralError("gradient shape does not match layer " + std::to_string(t));
    }
    auto w = layer.weights.values();
    auto vw = state.weight_velocity[t].values();
    const auto g = gw.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      vw[i] = mu * vw[i] - alpha * (g[i] + lambda * w[i]);
      w[i] += vw[i];
    }
    auto& vb = state.bias_velocity[t];
    for (std::size_t o = 0; o < layer.biases.size(); ++o) {
      vb[o] = mu * vb[o] - alpha * grads.biases[t][o];
      layer.biases[o] += vb[o];
    }
  }
  net.touch();
}

void write_weights(std::ostream& out, const Network& net) {
  const auto old = out.precision(17);
  for (std::size_t t = 0; t < net.layer_count(); ++t) {
    const auto& l = net.layers()[t];
    out << "layer " << t << ' ' << l.out_size() << ' ' << l.in_size() << '\n';
    for (std::size_t o = 0; o < l.out_size(); ++o) {
      const auto r = l.weights.row(o);
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
      out << '\n';
    }
    for (std::size_t o = 0; o < l.biases.size(); ++o) out << (o ? " " : "") << l.biases[o];
    out << '\n';
  }
  out.precision(old);
}

}  // namespace ganeda::nn
