#include "eqcnn/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eqcnn {
namespace {

void check_qubit(const QuantumState& state, std::size_t q) {
  if (q >= state.num_qubits()) {
    throw std::out_of_range("qubit " + std::to_string(q) + " out of range for a " +
                            std::to_string(state.num_qubits()) + "-qubit state");
  }
}

// i^k for k in 0..3.
Complex i_power(int k) {
  switch (k & 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

// Phase picked up by basis state |b> under the Pauli word: P|b> = phase(b) |b ^ flip>.
Complex pauli_phase(const PauliMasks& m, std::uint64_t b, int sign) {
  const bool odd = (std::popcount(b & m.phase) & 1) != 0;
  Complex ph = i_power(m.num_y);
  return (odd ? -ph : ph) * static_cast<double>(sign);
}

void apply_rotation(QuantumState& state, const PauliRotation& rot) {
  const PauliMasks m = rot.generator.masks(state.num_qubits());
  const int sign = rot.generator.sign();
  const double c = std::cos(rot.angle);
  const double s = std::sin(rot.angle);
  auto amps = state.amplitudes();
  const Complex minus_i_sin{0.0, -s};

  if (m.flip == 0) {
    // Diagonal generator: eigenvalue +-1 per basis state.
    const Complex plus = {c, -s};   // exp(-i angle)
    const Complex minus = {c, s};   // exp(+i angle)
    for (std::uint64_t b = 0; b < amps.size(); ++b) {
      const bool odd = (std::popcount(b & m.phase) & 1) != 0;
      const bool positive = (odd ? -1 : 1) * sign > 0;
      amps[b] *= positive ? plus : minus;
    }
    return;
  }

  const std::uint64_t top = std::bit_floor(m.flip);
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    if (b & top) continue;
    const std::uint64_t partner = b ^ m.flip;
    const Complex a0 = amps[b];
    const Complex a1 = amps[partner];
    // (P psi)[b] = phase(partner) * psi[partner] and vice versa.
    amps[b] = c * a0 + minus_i_sin * pauli_phase(m, partner, sign) * a1;
    amps[partner] = c * a1 + minus_i_sin * pauli_phase(m, b, sign) * a0;
  }
}

}  // namespace

QuantumState::QuantumState(std::size_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
  }
  amplitudes_.assign(std::size_t{1} << num_qubits, Complex{});
  amplitudes_[0] = 1.0;
}

QuantumState::QuantumState(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
  }
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
  }
}

std::uint64_t QuantumState::qubit_mask(std::size_t q) const {
  check_qubit(*this, q);
  return std::uint64_t{1} << (num_qubits_ - 1 - q);
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

void QuantumState::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amplitudes_) a /= n;
}

QuantumState basis_state(std::size_t num_qubits, std::uint64_t index) {
  QuantumState state(num_qubits);
  if (index >= state.dim()) {
    throw std::out_of_range("basis index " + std::to_string(index) + " out of range");
  }
  state[0] = 0.0;
  state[index] = 1.0;
  return state;
}

SignedPauliString gate_generator(const GateOp& gate) {
  if (const auto* rot = std::get_if<PauliRotation>(&gate)) return rot->generator;
  if (const auto* ph = std::get_if<PhaseRotation>(&gate)) {
    return SignedPauliString({{ph->qubit, Pauli::Z}});
  }
  throw std::invalid_argument("gate has no generator");
}

bool is_parametric(const GateOp& gate) {
  return std::holds_alternative<PauliRotation>(gate) ||
         std::holds_alternative<PhaseRotation>(gate);
}

double gate_angle(const GateOp& gate) {
  if (const auto* rot = std::get_if<PauliRotation>(&gate)) return rot->angle;
  if (const auto* ph = std::get_if<PhaseRotation>(&gate)) return ph->angle;
  return 0.0;
}

GateOp with_angle(GateOp gate, double angle) {
  if (auto* rot = std::get_if<PauliRotation>(&gate)) rot->angle = angle;
  else if (auto* ph = std::get_if<PhaseRotation>(&gate)) ph->angle = angle;
  else throw std::invalid_argument("fixed gate has no angle");
  return gate;
}

GateOp inverse(const GateOp& gate) {
  if (is_parametric(gate)) return with_angle(gate, -gate_angle(gate));
  return gate;
}

void apply_gate(QuantumState& state, const GateOp& gate) {
  auto amps = state.amplitudes();
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PauliRotation>) {
          apply_rotation(state, g);
        } else if constexpr (std::is_same_v<T, Hadamard>) {
          const std::uint64_t bit = state.qubit_mask(g.qubit);
          const double h = 1.0 / std::sqrt(2.0);
          for (std::uint64_t b = 0; b < amps.size(); ++b) {
            if (b & bit) continue;
            const Complex a0 = amps[b];
            const Complex a1 = amps[b | bit];
            amps[b] = h * (a0 + a1);
            amps[b | bit] = h * (a0 - a1);
          }
        } else if constexpr (std::is_same_v<T, PhaseRotation>) {
          const std::uint64_t bit = state.qubit_mask(g.qubit);
          const Complex down = std::polar(1.0, -g.angle);
          const Complex up = std::polar(1.0, g.angle);
          for (std::uint64_t b = 0; b < amps.size(); ++b) amps[b] *= (b & bit) ? up : down;
        } else if constexpr (std::is_same_v<T, PauliX>) {
          const std::uint64_t bit = state.qubit_mask(g.qubit);
          for (std::uint64_t b = 0; b < amps.size(); ++b) {
            if (!(b & bit)) std::swap(amps[b], amps[b | bit]);
          }
        } else if constexpr (std::is_same_v<T, Swap>) {
          const std::uint64_t ba = state.qubit_mask(g.qubit_a);
          const std::uint64_t bb = state.qubit_mask(g.qubit_b);
          if (ba == bb) throw std::invalid_argument("swap needs two distinct qubits");
          for (std::uint64_t b = 0; b < amps.size(); ++b) {
            // Visit each |..1..0..> / |..0..1..> pair once.
            if ((b & ba) && !(b & bb)) std::swap(amps[b], amps[(b & ~ba) | bb]);
          }
        }
      },
      gate);
}

void apply_pauli(QuantumState& state, const SignedPauliString& pauli) {
  const PauliMasks m = pauli.masks(state.num_qubits());
  const int sign = pauli.sign();
  auto amps = state.amplitudes();
  if (m.flip == 0) {
    for (std::uint64_t b = 0; b < amps.size(); ++b) amps[b] *= pauli_phase(m, b, sign);
    return;
  }
  const std::uint64_t top = std::bit_floor(m.flip);
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    if (b & top) continue;
    const std::uint64_t partner = b ^ m.flip;
    const Complex a0 = amps[b];
    const Complex a1 = amps[partner];
    amps[b] = pauli_phase(m, partner, sign) * a1;
    amps[partner] = pauli_phase(m, b, sign) * a0;
  }
}

std::vector<double> marginal_probs(const QuantumState& state,
                                   std::span<const std::size_t> qubits) {
  if (qubits.empty()) throw std::invalid_argument("marginal over an empty qubit set");
  std::vector<std::uint64_t> bits;
  bits.reserve(qubits.size());
  for (std::size_t q : qubits) {
    const std::uint64_t bit = state.qubit_mask(q);
    for (std::uint64_t seen : bits) {
      if (seen == bit) {
        throw std::invalid_argument("duplicate qubit " + std::to_string(q) + " in marginal");
      }
    }
    bits.push_back(bit);
  }

  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  const auto amps = state.amplitudes();
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    std::size_t outcome = 0;
    for (std::uint64_t bit : bits) outcome = (outcome << 1) | ((b & bit) ? 1u : 0u);
    probs[outcome] += std::norm(amps[b]);
  }
  return probs;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("state dimension mismatch");
  Complex sum{};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t k = 0; k < x.size(); ++k) sum += std::conj(x[k]) * y[k];
  return sum;
}

}  // namespace eqcnn
