#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "ganeda/nn.hpp"

namespace ganeda::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
};

/// True when any output of `probabilities` is outside [margin, 1 - margin].
bool saturated(const Matrix& probabilities, double margin);

/// Relative error with an absolute floor so that two tiny gradients compare
/// as equal: |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor = 1e-6);

/// Compares `analytic` (gradients of `loss` w.r.t. every weight and bias of
/// `net`) with central differences of `loss`. `loss` is re-evaluated on a
/// perturbed copy of `net`.
GradCheckResult compare_with_finite_differences(const Network& net, const Gradients& analytic,
                                                const std::function<double(const Network&)>& loss,
                                                double step = 1e-5);

struct GradCheckSuiteResult {
  std::size_t configurations = 0;
  double network_max_error = 0.0;   // random MLPs, cross-entropy loss, incl. input gradient
  double composed_max_error = 0.0;  // log(1 - D(G(z))) w.r.t. generator parameters
  bool passed(double tolerance = 1e-4) const {
    return network_max_error <= tolerance && composed_max_error <= tolerance;
  }
};

/// Random topologies, weights and batches with dropout off. Configurations
/// whose relu pre-activations sit within `kink_margin` of zero, or whose
/// probability outputs lie outside [saturation_margin, 1 - saturation_margin],
/// are redrawn: central differences of a log-loss computed from a saturated
/// sigmoid lose most of their significant digits.
GradCheckSuiteResult run_gradient_check_suite(std::size_t configurations, std::uint64_t seed,
                                              double kink_margin = 1e-3, double saturation_margin = 1e-3);

}  // namespace ganeda::nn
