#pragma once

#include <span>
#include <vector>

#include "eqcnn/circuit.hpp"
#include "eqcnn/head.hpp"
#include "eqcnn/state.hpp"

namespace eqcnn {

/// Accumulated derivatives of a scalar loss. `params` has one entry per
/// circuit parameter (shared slots summed); `phi` is the derivative with
/// respect to the head phase, meaningful for M2 heads.
struct GradientTape {
  std::vector<double> params;
  double phi = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> distribution;
  GradientTape tape;
};

struct ExpectationGradient {
  double value = 0.0;
  std::vector<double> grads;
};

/// Value and gradient of <psi(theta)| D |psi(theta)> for a diagonal observable
/// D given by one real weight per basis index.
ExpectationGradient expectation_gradient(const CircuitSpec& circuit,
                                         std::span<const double> params,
                                         const QuantumState& input,
                                         std::span<const double> diagonal);

/// Cross-entropy of the head distribution against a one-hot label, with its
/// exact gradient from a single reverse sweep through the circuit.
LossGradient loss_gradient(const CircuitSpec& circuit, std::span<const double> params,
                           const QuantumState& input, const MeasurementHead& head,
                           std::span<const double> label);

}  // namespace eqcnn
