#include "eqcnn/circuit.hpp"

#include <stdexcept>
#include <string>

namespace eqcnn {

std::vector<std::size_t> gate_qubits(const GateOp& gate) {
  return std::visit(
      [](const auto& g) -> std::vector<std::size_t> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PauliRotation>) {
          std::vector<std::size_t> qs;
          for (const auto& [q, letter] : g.generator.factors()) qs.push_back(q);
          return qs;
        } else if constexpr (std::is_same_v<T, Swap>) {
          return {g.qubit_a, g.qubit_b};
        } else {
          return {g.qubit};
        }
      },
      gate);
}

void CircuitSpec::validate() const {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("circuit qubit count out of range");
  }
  std::vector<bool> bound(num_params, false);
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const auto& slot = gates[k];
    for (std::size_t q : gate_qubits(slot.op)) {
      if (q >= num_qubits) {
        throw std::out_of_range("gate " + std::to_string(k) + " touches qubit " +
                                std::to_string(q));
      }
    }
    if (slot.param) {
      if (!is_parametric(slot.op)) {
        throw std::invalid_argument("gate " + std::to_string(k) + " is fixed but bound");
      }
      if (*slot.param >= num_params) {
        throw std::out_of_range("gate " + std::to_string(k) + " binds parameter " +
                                std::to_string(*slot.param));
      }
      bound[*slot.param] = true;
    }
  }
  for (std::size_t p = 0; p < num_params; ++p) {
    if (!bound[p]) throw std::invalid_argument("parameter " + std::to_string(p) + " unbound");
  }
}

std::vector<std::size_t> CircuitSpec::slot_counts() const {
  std::vector<std::size_t> counts(num_params, 0);
  for (const auto& slot : gates) {
    if (slot.param && *slot.param < num_params) ++counts[*slot.param];
  }
  return counts;
}

GateOp bind(const GateSlot& slot, std::span<const double> params) {
  if (!slot.param) return slot.op;
  if (*slot.param >= params.size()) {
    throw std::out_of_range("parameter vector too short for slot");
  }
  return with_angle(slot.op, params[*slot.param]);
}

void run_circuit(const CircuitSpec& circuit, std::span<const double> params,
                 QuantumState& state) {
  if (params.size() != circuit.num_params) {
    throw std::invalid_argument("expected " + std::to_string(circuit.num_params) +
                                " parameters, got " + std::to_string(params.size()));
  }
  if (state.num_qubits() != circuit.num_qubits) {
    throw std::invalid_argument("state and circuit qubit counts differ");
  }
  for (const auto& slot : circuit.gates) apply_gate(state, bind(slot, params));
}

}  // namespace eqcnn
