#include "eqcnn/head.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "eqcnn/circuit.hpp"

namespace eqcnn {

std::size_t MeasurementHead::readout_width() const {
  return static_cast<std::size_t>(std::countr_zero(num_classes));
}

std::vector<std::size_t> MeasurementHead::x_readout() const {
  return {measured.begin(), measured.begin() + static_cast<std::ptrdiff_t>(readout_width())};
}

std::vector<std::size_t> MeasurementHead::y_readout() const {
  auto qs = x_readout();
  for (auto& q : qs) q += n;
  return qs;
}

void MeasurementHead::validate() const {
  if (num_classes < 2 || !std::has_single_bit(num_classes)) {
    throw std::invalid_argument("class count " + std::to_string(num_classes) +
                                " is not a power of two >= 2");
  }
  if (readout_width() > measured.size()) {
    throw std::invalid_argument(std::to_string(num_classes) + " classes need " +
                                std::to_string(readout_width()) +
                                " measured qubits per register, have " +
                                std::to_string(measured.size()));
  }
  for (std::size_t q : measured) {
    if (q >= n) throw std::out_of_range("measured qubit outside the x-register");
  }
  if (mode == HeadMode::M1 && phi != 0.0) {
    throw std::invalid_argument("M1 head requires phi == 0");
  }
}

MeasurementHead make_head(const CircuitSpec& circuit, HeadMode mode, double phi,
                          std::size_t num_classes) {
  MeasurementHead head;
  head.mode = mode;
  head.phi = mode == HeadMode::M1 ? 0.0 : phi;
  head.n = circuit.num_qubits / 2;
  head.measured = circuit.measured;
  head.num_classes = num_classes;
  head.validate();
  return head;
}

std::vector<GateOp> head_gates(const MeasurementHead& head) {
  std::vector<GateOp> gates;
  for (const auto& register_qubits : {head.x_readout(), head.y_readout()}) {
    for (std::size_t q : register_qubits) {
      gates.emplace_back(PhaseRotation{q, head.phi});
      gates.emplace_back(Hadamard{q});
    }
  }
  return gates;
}

std::vector<double> readout_distribution(const QuantumState& rotated,
                                         const MeasurementHead& head) {
  const auto xs = head.x_readout();
  const auto ys = head.y_readout();
  const auto p = marginal_probs(rotated, xs);
  const auto p_mirror = marginal_probs(rotated, ys);
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = 0.5 * (p[k] + p_mirror[k]);
  return out;
}

std::vector<double> measure_head(QuantumState state, const MeasurementHead& head) {
  head.validate();
  if (state.num_qubits() != 2 * head.n) {
    throw std::invalid_argument("head expects a " + std::to_string(2 * head.n) +
                                "-qubit state");
  }
  for (const auto& gate : head_gates(head)) apply_gate(state, gate);
  return readout_distribution(state, head);
}

}  // namespace eqcnn
