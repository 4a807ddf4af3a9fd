#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "eqcnn/circuit.hpp"
#include "eqcnn/embedding.hpp"
#include "eqcnn/head.hpp"

namespace eqcnn {

enum class Architecture { equiv, appr_equiv, nonequiv };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view name);

/// Gate templates with block-local parameter indices 0..num_params-1.
struct FilterBlock {
  std::vector<GateSlot> gates;
  std::size_t num_params = 0;
};

/// Equivariant two-qubit filter: R_X(a), R_X(b), R_YY(a,b), R_ZZ(a,b).
FilterBlock build_u2(std::size_t a, std::size_t b);

/// Equivariant four-qubit filter on a mirrored quad (i, j, i+n, j+n): one
/// rotation per word σσσ'σ', with the (σ,σ') and (σ',σ) words sharing a slot.
/// Slots: XXXX, YYYY, ZZZZ, {XXYY, YYXX}, {XXZZ, ZZXX}, {YYZZ, ZZYY}.
FilterBlock build_u4(const std::array<std::size_t, 4>& quad, std::size_t n);

/// Non-equivariant SO(4) filter: magic-basis conjugate of two independent
/// Y-Z-Y single-qubit rotation triples, written as six Pauli rotations.
FilterBlock build_so4_filter(std::size_t a, std::size_t b);

/// Relabels every qubit of a block through `map`.
FilterBlock relabel(const FilterBlock& block, std::span<const std::size_t> map);

/// Full QCNN: scanning U2 layers (equivariant variants), then learning and
/// pooling stages until log2(num_classes) qubits per register remain.
CircuitSpec build_qcnn(Architecture arch, std::size_t n, std::size_t num_classes = 2);

/// caa_embed -> circuit -> head.
std::vector<double> predict(const CircuitSpec& circuit, std::span<const double> params,
                            const MeasurementHead& head, const Image& image);

}  // namespace eqcnn
