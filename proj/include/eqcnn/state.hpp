#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "eqcnn/pauli.hpp"

namespace eqcnn {

using Complex = std::complex<double>;

/// Largest register the dense simulator accepts.
inline constexpr std::size_t kMaxQubits = 20;

/// Dense statevector over `num_qubits` qubits.
///
/// Qubit 0 is the most significant bit of a basis index. For the 2n-qubit
/// image registers this means |i>|j> (x-register first) sits at index
/// i * 2^n + j.
class QuantumState {
 public:
  /// |0...0>.
  explicit QuantumState(std::size_t num_qubits);
  QuantumState(std::size_t num_qubits, std::vector<Complex> amplitudes);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }

  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex& operator[](std::size_t index) { return amplitudes_[index]; }
  const Complex& operator[](std::size_t index) const { return amplitudes_[index]; }

  /// Bit of qubit `q` inside a basis index.
  std::uint64_t qubit_mask(std::size_t q) const;

  double norm() const;
  void normalize();

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

QuantumState basis_state(std::size_t num_qubits, std::uint64_t index);

/// exp(-i * angle * generator).
struct PauliRotation {
  SignedPauliString generator;
  double angle = 0.0;
};

struct Hadamard {
  std::size_t qubit = 0;
};

/// exp(-i * angle * Z): relative phase 2*angle between |0> and |1>.
struct PhaseRotation {
  std::size_t qubit = 0;
  double angle = 0.0;
};

struct PauliX {
  std::size_t qubit = 0;
};

struct Swap {
  std::size_t qubit_a = 0;
  std::size_t qubit_b = 0;
};

using GateOp = std::variant<PauliRotation, Hadamard, PhaseRotation, PauliX, Swap>;

/// Generator G of a parametrised gate exp(-i t G). Throws for fixed gates.
SignedPauliString gate_generator(const GateOp& gate);
bool is_parametric(const GateOp& gate);
double gate_angle(const GateOp& gate);
GateOp with_angle(GateOp gate, double angle);
/// Inverse gate (angle negated for rotations; fixed gates are involutions).
GateOp inverse(const GateOp& gate);

void apply_gate(QuantumState& state, const GateOp& gate);

/// Multiplies the state by a signed Pauli string.
void apply_pauli(QuantumState& state, const SignedPauliString& pauli);

/// Probability of each joint outcome of `qubits`; the first listed qubit is
/// the most significant bit of the outcome index.
std::vector<double> marginal_probs(const QuantumState& state,
                                   std::span<const std::size_t> qubits);

/// <a|b>.
Complex inner_product(const QuantumState& a, const QuantumState& b);

}  // namespace eqcnn
