#pragma once

// Minimal dense feed-forward network: forward pass with dropout, manual
// backpropagation, and SGD with momentum, weight decay and schedules.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ganeda/random.hpp"

namespace ganeda::nn {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix row_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  void fill(double v);
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr double kProbabilityClamp = 1e-12;

enum class Activation { Sigmoid, Relu, Linear };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

/// Logistic function, clamped to [1e-12, 1 - 1e-12].
double sigmoid(double x);

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> biases;
  Activation activation = Activation::Sigmoid;
  // Probability of dropping each *input* unit of this layer in train mode.
  double dropout_rate = 0.0;

  std::size_t in_size() const noexcept { return weights.cols(); }
  std::size_t out_size() const noexcept { return weights.rows(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

class Network {
 public:
  Network() = default;
  explicit Network(std::vector<DenseLayer> layers);

  std::size_t input_size() const;
  std::size_t output_size() const;
  std::span<const DenseLayer> layers() const noexcept { return layers_; }
  std::span<DenseLayer> layers() noexcept { return layers_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }

  /// Bumped on every parameter update so stale forward records are detected.
  std::uint64_t version() const noexcept { return version_; }
  void touch() noexcept { ++version_; }

  void set_dropout(std::size_t layer, double rate);

  /// Parameter equality; the version counter is ignored.
  bool same_parameters(const Network& other) const { return layers_ == other.layers_; }

 private:
  std::vector<DenseLayer> layers_;
  std::uint64_t version_ = 0;
};

struct InitSpec {
  enum class Kind { Normal, Uniform };
  Kind kind = Kind::Normal;
  double scale = 0.01;  // sigma for Normal, half-width for Uniform

  static InitSpec normal(double sigma) { return {Kind::Normal, sigma}; }
  static InitSpec uniform(double half_width) { return {Kind::Uniform, half_width}; }
};

/// Weights drawn per `init`, biases zero. `activations` has one entry per
/// weight layer (layer_sizes.size() - 1).
Network init_network(std::span<const std::size_t> layer_sizes, std::span<const Activation> activations,
                     InitSpec init, Rng& rng);

enum class Mode { Train, Infer };

/// Everything backward() needs from a forward pass.
struct ForwardRecord {
  std::vector<Matrix> layer_inputs;  // input seen by each layer, after dropout
  std::vector<Matrix> masks;         // train mode only; empty matrix when no dropout
  std::vector<Matrix> outputs;       // post-activation output of each layer
  Mode mode = Mode::Infer;
  std::uint64_t network_version = 0;
  const Network* network = nullptr;

  const Matrix& output() const { return outputs.back(); }
};

/// Rows of `input` are examples. Throws StructuralError on shape mismatch and
/// NumericError when an activation is not finite.
ForwardRecord forward(const Network& net, const Matrix& input, Mode mode, Rng& rng);

/// Inference-mode forward pass returning only the output layer.
Matrix predict(const Network& net, const Matrix& input);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  Matrix input;  // d loss / d network input
};

/// Gradients of a scalar loss given d loss / d network output. Requires a
/// train-mode record produced by the current parameters of `net`.
Gradients backward(const Network& net, const ForwardRecord& record, const Matrix& output_gradient);

double clamp_probability(double y);
/// -[t log y + (1-t) log(1-y)] with y clamped to [eps, 1-eps].
double cross_entropy_loss(double y, int target);
/// d cross_entropy_loss / d y, using the same clamp.
double cross_entropy_gradient(double y, int target);

/// Piecewise-linear multiplier over epochs, held constant outside the
/// given points. Empty means a constant 1.
struct Schedule {
  std::vector<std::pair<double, double>> points;  // (epoch, multiplier), sorted by epoch

  double at(double epoch) const;
  static Schedule parse(std::string_view text);  // "0:1,50:0.1"
  std::string to_string() const;
};

struct OptimizerConfig {
  double learning_rate = 0.1;
  double momentum = 0.0;
  double weight_decay = 0.0;
  Schedule learning_rate_schedule;
  Schedule momentum_schedule;
  Schedule weight_decay_schedule;

  /// Throws ParameterError when out of domain.
  void validate() const;
};

struct OptimizerState {
  std::vector<Matrix> weight_velocity;
  std::vector<std::vector<double>> bias_velocity;
};

/// velocity = momentum * velocity - alpha * (grad + lambda * param);
/// param += velocity. Weight decay is not applied to biases.
void sgd_step(Network& net, const Gradients& grads, OptimizerState& state, const OptimizerConfig& config,
              std::size_t epoch);

/// Debug snapshot: "layer <idx> <out> <in>" header, row-major weights, then
/// biases, 17 significant digits.
void write_weights(std::ostream& out, const Network& net);

}  // namespace ganeda::nn
