#pragma once

#include <cstddef>
#include <vector>

#include "eqcnn/state.hpp"

namespace eqcnn {

struct CircuitSpec;

enum class HeadMode { M1, M2 };

/// Approximately invariant readout.
///
/// A phase rotation exp(-i phi Z) and a Hadamard are applied to each measured
/// qubit of both registers; the class distribution is the average of the
/// x-register and y-register marginals. M1 pins phi to zero, which makes the
/// readout exactly invariant under the p4m representations.
struct MeasurementHead {
  HeadMode mode = HeadMode::M1;
  double phi = 0.0;
  /// Register size n; the y-register mirror of qubit q is q + n.
  std::size_t n = 1;
  /// Measured x-register qubits (0-based). The first log2(L) are read out.
  std::vector<std::size_t> measured;
  std::size_t num_classes = 2;

  /// Qubits read out per register.
  std::size_t readout_width() const;
  std::vector<std::size_t> x_readout() const;
  std::vector<std::size_t> y_readout() const;

  /// Throws if L is not a power of two, too large, or M1 carries phi != 0.
  void validate() const;
};

/// Head for a built QCNN: reads the circuit's final active qubits.
MeasurementHead make_head(const CircuitSpec& circuit, HeadMode mode, double phi = 0.0,
                          std::size_t num_classes = 2);

/// The readout gates in application order, phase rotation before Hadamard.
std::vector<GateOp> head_gates(const MeasurementHead& head);

/// Distribution over classes from a pre-head state, after the head gates
/// have been applied, computed as (p + p') / 2.
std::vector<double> readout_distribution(const QuantumState& rotated,
                                         const MeasurementHead& head);

/// Applies the head gates to a copy of `state` and reads the distribution.
std::vector<double> measure_head(QuantumState state, const MeasurementHead& head);

}  // namespace eqcnn
