#include "eqcnn/gradient.hpp"

#include <stdexcept>
#include <string>

#include "eqcnn/loss.hpp"

namespace eqcnn {
namespace {

// 2 Re <lambda| (-i G) psi>
double generator_overlap(const QuantumState& lambda, const QuantumState& psi,
                         const SignedPauliString& generator) {
  QuantumState g_psi = psi;
  apply_pauli(g_psi, generator);
  const Complex overlap = inner_product(lambda, g_psi);
  return 2.0 * overlap.imag();
}

// Walks `gates` backwards from (psi, lambda), where psi is the state after the
// last gate and lambda = O psi for the observable being differentiated.
// Contributions of slot k are added to grads[slot_param[k]].
void reverse_sweep(std::span<const GateOp> gates,
                   std::span<const std::optional<std::size_t>> slot_param,
                   QuantumState psi, QuantumState lambda, std::span<double> grads) {
  for (std::size_t k = gates.size(); k-- > 0;) {
    const GateOp& gate = gates[k];
    if (slot_param[k]) {
      grads[*slot_param[k]] += generator_overlap(lambda, psi, gate_generator(gate));
    }
    if (k == 0) break;
    const GateOp undo = inverse(gate);
    apply_gate(psi, undo);
    apply_gate(lambda, undo);
  }
}

void check_params(const CircuitSpec& circuit, std::span<const double> params,
                  const QuantumState& input) {
  if (params.size() != circuit.num_params) {
    throw std::invalid_argument("expected " + std::to_string(circuit.num_params) +
                                " parameters, got " + std::to_string(params.size()));
  }
  if (input.num_qubits() != circuit.num_qubits) {
    throw std::invalid_argument("input state and circuit qubit counts differ");
  }
}

}  // namespace

ExpectationGradient expectation_gradient(const CircuitSpec& circuit,
                                         std::span<const double> params,
                                         const QuantumState& input,
                                         std::span<const double> diagonal) {
  check_params(circuit, params, input);
  if (diagonal.size() != input.dim()) {
    throw std::invalid_argument("diagonal observable has the wrong length");
  }

  std::vector<GateOp> gates;
  std::vector<std::optional<std::size_t>> slot_param;
  gates.reserve(circuit.gates.size());
  for (const auto& slot : circuit.gates) {
    gates.push_back(bind(slot, params));
    slot_param.push_back(slot.param);
  }

  QuantumState psi = input;
  for (const auto& g : gates) apply_gate(psi, g);

  QuantumState lambda = psi;
  ExpectationGradient out;
  for (std::size_t b = 0; b < psi.dim(); ++b) {
    lambda[b] *= diagonal[b];
    out.value += diagonal[b] * std::norm(psi[b]);
  }
  out.grads.assign(circuit.num_params, 0.0);
  if (!gates.empty()) reverse_sweep(gates, slot_param, std::move(psi), std::move(lambda), out.grads);
  return out;
}

LossGradient loss_gradient(const CircuitSpec& circuit, std::span<const double> params,
                           const QuantumState& input, const MeasurementHead& head,
                           std::span<const double> label) {
  check_params(circuit, params, input);
  head.validate();
  if (label.size() != head.num_classes) {
    throw std::invalid_argument("label has " + std::to_string(label.size()) +
                                " entries but the head has " +
                                std::to_string(head.num_classes) + " classes");
  }

  // Circuit gates followed by the head gates; head phase rotations bind to the
  // extra index num_params.
  const std::size_t phi_index = circuit.num_params;
  std::vector<GateOp> gates;
  std::vector<std::optional<std::size_t>> slot_param;
  for (const auto& slot : circuit.gates) {
    gates.push_back(bind(slot, params));
    slot_param.push_back(slot.param);
  }
  for (const auto& g : head_gates(head)) {
    slot_param.push_back(std::holds_alternative<PhaseRotation>(g)
                             ? std::optional<std::size_t>(phi_index)
                             : std::nullopt);
    gates.push_back(g);
  }

  QuantumState psi = input;
  for (const auto& g : gates) apply_gate(psi, g);

  LossGradient out;
  out.distribution = readout_distribution(psi, head);
  out.loss = cross_entropy(out.distribution, label);
  const auto dloss = cross_entropy_grad(out.distribution, label);

  // Each class probability is the average of two projector expectations, so
  // the cotangent is diagonal: weight(b) = (dL/dp[x-outcome] + dL/dp[y-outcome]) / 2.
  std::vector<std::uint64_t> xbits, ybits;
  for (std::size_t q : head.x_readout()) xbits.push_back(psi.qubit_mask(q));
  for (std::size_t q : head.y_readout()) ybits.push_back(psi.qubit_mask(q));
  auto outcome = [](std::uint64_t b, const std::vector<std::uint64_t>& bits) {
    std::size_t k = 0;
    for (std::uint64_t bit : bits) k = (k << 1) | ((b & bit) ? 1u : 0u);
    return k;
  };
  QuantumState lambda = psi;
  for (std::uint64_t b = 0; b < psi.dim(); ++b) {
    lambda[b] *= 0.5 * (dloss[outcome(b, xbits)] + dloss[outcome(b, ybits)]);
  }

  std::vector<double> grads(circuit.num_params + 1, 0.0);
  reverse_sweep(gates, slot_param, std::move(psi), std::move(lambda), grads);
  out.tape.phi = grads.back();
  grads.pop_back();
  out.tape.params = std::move(grads);
  return out;
}

}  // namespace eqcnn
