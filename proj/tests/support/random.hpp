#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numbers>
#include <vector>

#include "eqcnn/circuit.hpp"
#include "eqcnn/rng.hpp"
#include "eqcnn/symmetry.hpp"

namespace testing_support {

inline eqcnn::SignedPauliString random_word(eqcnn::Rng& rng, std::size_t nq, std::size_t max_weight) {
  std::map<std::size_t, eqcnn::Pauli> factors;
  const std::size_t weight = 1 + rng.below(std::min(max_weight, nq));
  while (factors.size() < weight) {
    factors[rng.below(nq)] = static_cast<eqcnn::Pauli>(1 + rng.below(3));
  }
  return eqcnn::SignedPauliString(factors, rng.below(2) ? 1 : -1);
}

/// Random gate list over all GateOp kinds; parametric slots draw from a pool
/// smaller than the slot count so some parameters are shared.
inline eqcnn::CircuitSpec random_circuit(eqcnn::Rng& rng, std::size_t nq, std::size_t num_gates,
                                         bool with_fixed_gates = true) {
  eqcnn::CircuitSpec c;
  c.num_qubits = nq;
  c.num_params = 1 + num_gates / 2;
  for (std::size_t k = 0; k < c.num_params; ++k) {
    c.gates.push_back({eqcnn::PauliRotation{random_word(rng, nq, 3), 0.0}, k});
  }
  while (c.gates.size() < num_gates) {
    const std::size_t kind = with_fixed_gates ? rng.below(5) : rng.below(2) * 2;
    const std::size_t q = rng.below(nq);
    switch (kind) {
      case 0:
        c.gates.push_back({eqcnn::PauliRotation{random_word(rng, nq, 3), 0.0}, rng.below(c.num_params)});
        break;
      case 1: c.gates.push_back({eqcnn::Hadamard{q}, std::nullopt}); break;
      case 2: c.gates.push_back({eqcnn::PhaseRotation{q, 0.0}, rng.below(c.num_params)}); break;
      case 3: c.gates.push_back({eqcnn::PauliX{q}, std::nullopt}); break;
      default: c.gates.push_back({eqcnn::Swap{q, (q + 1 + rng.below(nq - 1)) % nq}, std::nullopt});
    }
  }
  rng.shuffle(c.gates);
  return c;
}

inline std::vector<double> random_params(eqcnn::Rng& rng, std::size_t count) {
  std::vector<double> p(count);
  for (auto& x : p) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return p;
}

}  // namespace testing_support
