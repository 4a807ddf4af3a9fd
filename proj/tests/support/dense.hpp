// Dense-matrix reference implementations used as test oracles. Everything here
// is built from Kronecker products and matrix exponentials, independent of
// the simulator's index arithmetic.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstddef>
#include <span>
#include <variant>

#include "eqcnn/circuit.hpp"
#include "eqcnn/pauli.hpp"
#include "eqcnn/state.hpp"
#include "eqcnn/symmetry.hpp"

namespace dense {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Mat single(char letter) {
  Mat m(2, 2);
  switch (letter) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'H': m << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

/// Operator acting as `op` on qubit q (qubit 0 = leftmost tensor factor).
inline Mat on_qubit(const Mat& op, std::size_t q, std::size_t nq) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = 0; k < nq; ++k) out = kron(out, k == q ? op : single('I'));
  return out;
}

inline Mat pauli(const eqcnn::SignedPauliString& p, std::size_t nq) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = 0; k < nq; ++k) {
    const auto it = p.factors().find(k);
    out = kron(out, it == p.factors().end() ? single('I') : single(eqcnn::to_char(it->second)));
  }
  return static_cast<double>(p.sign()) * out;
}

inline Mat expi(const Mat& generator, double angle) {
  const Mat a = cd(0, -angle) * generator;
  return a.exp();
}

inline Mat gate(const eqcnn::GateOp& op, std::size_t nq) {
  using namespace eqcnn;
  if (const auto* g = std::get_if<PauliRotation>(&op)) return expi(pauli(g->generator, nq), g->angle);
  if (const auto* g = std::get_if<Hadamard>(&op)) return on_qubit(single('H'), g->qubit, nq);
  if (const auto* g = std::get_if<PhaseRotation>(&op)) {
    return expi(on_qubit(single('Z'), g->qubit, nq), g->angle);
  }
  if (const auto* g = std::get_if<PauliX>(&op)) return on_qubit(single('X'), g->qubit, nq);
  const auto& s = std::get<Swap>(op);
  // SWAP = (II + XX + YY + ZZ) / 2.
  Mat out = Mat::Identity(Eigen::Index{1} << nq, Eigen::Index{1} << nq);
  for (char c : {'X', 'Y', 'Z'}) {
    out += on_qubit(single(c), s.qubit_a, nq) * on_qubit(single(c), s.qubit_b, nq);
  }
  return 0.5 * out;
}

inline Mat circuit(const eqcnn::CircuitSpec& spec, std::span<const double> params) {
  Mat u = Mat::Identity(Eigen::Index{1} << spec.num_qubits, Eigen::Index{1} << spec.num_qubits);
  for (const auto& slot : spec.gates) u = gate(eqcnn::bind(slot, params), spec.num_qubits) * u;
  return u;
}

inline Vec vec(const eqcnn::QuantumState& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t k = 0; k < s.dim(); ++k) v(static_cast<Eigen::Index>(k)) = s[k];
  return v;
}

inline eqcnn::QuantumState state(const Vec& v, std::size_t nq) {
  std::vector<eqcnn::Complex> amps(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) amps[static_cast<std::size_t>(k)] = v(k);
  return eqcnn::QuantumState(nq, std::move(amps));
}

/// Pixel-space maps on an N x N grid, written directly from their
/// geometric definitions.
inline std::pair<std::size_t, std::size_t> pixel_map(eqcnn::GroupElement g, std::size_t N,
                                                     std::size_t i, std::size_t j) {
  using G = eqcnn::GroupElement;
  const std::size_t m = N - 1;
  switch (g) {
    case G::e: return {i, j};
    case G::r: return {m - j, i};
    case G::r2: return {m - i, m - j};
    case G::r3: return {j, m - i};
    case G::tx: return {m - i, j};
    case G::ty: return {i, m - j};
    case G::d1: return {m - j, m - i};
    case G::d2: return {j, i};
  }
  return {i, j};
}

/// Permutation matrix sending |i>|j> to |g(i,j)> with N = 2^n.
inline Mat rep_from_pixels(eqcnn::GroupElement g, std::size_t n) {
  const std::size_t N = std::size_t{1} << n;
  Mat m = Mat::Zero(static_cast<Eigen::Index>(N * N), static_cast<Eigen::Index>(N * N));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const auto [a, b] = pixel_map(g, N, i, j);
      m(static_cast<Eigen::Index>(a * N + b), static_cast<Eigen::Index>(i * N + j)) = 1.0;
    }
  }
  return m;
}

/// Structured action as a product of dense X layers and SWAPs.
inline Mat structured(const eqcnn::StructuredAction& v) {
  const std::size_t nq = 2 * v.n;
  Mat out = Mat::Identity(Eigen::Index{1} << nq, Eigen::Index{1} << nq);
  if (v.exchange) {
    for (std::size_t q = 0; q < v.n; ++q) out = gate(eqcnn::Swap{q, q + v.n}, nq) * out;
  }
  for (std::size_t q = 0; q < nq; ++q) {
    if ((v.flip_mask >> q) & 1U) out = on_qubit(single('X'), q, nq) * out;
  }
  return out;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace dense
