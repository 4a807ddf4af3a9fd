#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqcnn/state.hpp"

namespace eqcnn {

/// One gate position in a circuit. When `param` is set the gate's angle is
/// taken from the parameter vector at that index; several slots may share one
/// index.
struct GateSlot {
  GateOp op;
  std::optional<std::size_t> param;
};

/// Ordered gate list with a parameter-sharing map, plus the layer metadata the
/// QCNN builders record.
struct CircuitSpec {
  std::size_t num_qubits = 0;
  std::size_t num_params = 0;
  std::vector<GateSlot> gates;

  /// Active qubits at the start of each layer; pooling shrinks the set.
  std::vector<std::vector<std::size_t>> active_qubits;
  /// Measured x-register qubits; their y-register mirrors are at +n.
  std::vector<std::size_t> measured;
  /// Parameters that only feed symmetry-breaking bridge gates.
  std::vector<std::size_t> bridge_params;

  /// Throws unless every gate is in range and every parameter index is bound.
  void validate() const;

  /// Number of slots bound to each parameter index.
  std::vector<std::size_t> slot_counts() const;
};

/// The concrete gate for a slot under `params`.
GateOp bind(const GateSlot& slot, std::span<const double> params);

/// Applies the whole circuit in place.
void run_circuit(const CircuitSpec& circuit, std::span<const double> params,
                 QuantumState& state);

/// Qubits touched by a gate.
std::vector<std::size_t> gate_qubits(const GateOp& gate);

}  // namespace eqcnn
