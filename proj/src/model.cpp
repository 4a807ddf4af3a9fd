#include "eqcnn/model.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "eqcnn/symmetry.hpp"

namespace eqcnn {
namespace {

SignedPauliString word(std::initializer_list<std::pair<std::size_t, Pauli>> factors,
                       int sign = +1) {
  std::map<std::size_t, Pauli> m;
  for (const auto& [q, p] : factors) m.emplace(q, p);
  return SignedPauliString(std::move(m), sign);
}

GateSlot rotation(SignedPauliString generator, std::size_t param) {
  return GateSlot{PauliRotation{std::move(generator), 0.0}, param};
}

void check_pair(std::size_t a, std::size_t b) {
  if (a == b) throw std::invalid_argument("filter needs two distinct qubits");
}

class QcnnBuilder {
 public:
  QcnnBuilder(std::size_t n) : n_(n) {
    spec_.num_qubits = 2 * n;
  }

  std::size_t n() const { return n_; }

  // Appends `block` (optionally with its y-register mirror, sharing the same
  // parameters) using parameters starting at `offset`.
  void append(const FilterBlock& block, std::size_t offset) {
    for (const auto& slot : block.gates) {
      GateSlot s = slot;
      if (s.param) *s.param += offset;
      spec_.gates.push_back(std::move(s));
    }
  }

  void append_mirrored(const FilterBlock& block, std::size_t offset) {
    append(block, offset);
    std::vector<std::size_t> map(2 * n_);
    for (std::size_t q = 0; q < 2 * n_; ++q) map[q] = q < n_ ? q + n_ : q - n_;
    append(relabel(block, map), offset);
  }

  std::size_t reserve(std::size_t count) {
    const std::size_t offset = spec_.num_params;
    spec_.num_params += count;
    return offset;
  }

  CircuitSpec& spec() { return spec_; }

 private:
  std::size_t n_;
  CircuitSpec spec_;
};

std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(
    const std::vector<std::size_t>& line, std::size_t start) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = start; k + 1 < line.size(); k += 2) pairs.emplace_back(line[k], line[k + 1]);
  return pairs;
}

// One U2 parameter set shared by every pair in the sublayer and its mirror.
void u2_sublayer(QcnnBuilder& b, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  if (pairs.empty()) return;
  const std::size_t offset = b.reserve(4);
  for (const auto& [p, q] : pairs) b.append_mirrored(build_u2(p, q), offset);
}

void u4_sublayer(QcnnBuilder& b, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  if (pairs.empty()) return;
  const std::size_t offset = b.reserve(6);
  const std::size_t n = b.n();
  for (const auto& [p, q] : pairs) b.append(build_u4({p, q, p + n, q + n}, n), offset);
}

void so4_sublayer(QcnnBuilder& b, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  if (pairs.empty()) return;
  const std::size_t offset = b.reserve(6);
  for (const auto& [p, q] : pairs) b.append(build_so4_filter(p, q), offset);
}

// U2 across the register boundary plus its image under V_r, so that the
// bridge commutes with the rotations but not with the reflections.
void bridge(QcnnBuilder& b, std::size_t x_last, std::size_t y_first) {
  const std::size_t offset = b.reserve(4);
  const FilterBlock block = build_u2(x_last, y_first);
  b.append(block, offset);
  const StructuredAction rot = structured_rep(GroupElement::r, b.n());
  FilterBlock image = block;
  for (auto& slot : image.gates) {
    auto& r = std::get<PauliRotation>(slot.op);
    r.generator = conjugate_pauli(r.generator, rot);
  }
  b.append(image, offset);
  for (std::size_t k = 0; k < 4; ++k) b.spec().bridge_params.push_back(offset + k);
}

}  // namespace

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::equiv:
      return "equiv";
    case Architecture::appr_equiv:
      return "appr_equiv";
    case Architecture::nonequiv:
      return "nonequiv";
  }
  return "?";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "equiv") return Architecture::equiv;
  if (name == "appr_equiv") return Architecture::appr_equiv;
  if (name == "nonequiv") return Architecture::nonequiv;
  throw std::invalid_argument("unknown architecture '" + std::string(name) +
                              "' (expected equiv, appr_equiv or nonequiv)");
}

FilterBlock build_u2(std::size_t a, std::size_t b) {
  check_pair(a, b);
  FilterBlock block;
  block.num_params = 4;
  block.gates.push_back(rotation(word({{a, Pauli::X}}), 0));
  block.gates.push_back(rotation(word({{b, Pauli::X}}), 1));
  block.gates.push_back(rotation(word({{a, Pauli::Y}, {b, Pauli::Y}}), 2));
  block.gates.push_back(rotation(word({{a, Pauli::Z}, {b, Pauli::Z}}), 3));
  return block;
}

FilterBlock build_u4(const std::array<std::size_t, 4>& quad, std::size_t n) {
  const auto [i, j, mi, mj] = quad;
  if (i == j || i >= n || j >= n || mi != i + n || mj != j + n) {
    throw std::invalid_argument("U4 needs a mirrored quad (i, j, i+n, j+n) with i != j < n");
  }
  auto pair_word = [&](Pauli s, Pauli t) {
    return word({{i, s}, {j, s}, {mi, t}, {mj, t}});
  };
  constexpr Pauli X = Pauli::X, Y = Pauli::Y, Z = Pauli::Z;
  FilterBlock block;
  block.num_params = 6;
  block.gates.push_back(rotation(pair_word(X, X), 0));
  block.gates.push_back(rotation(pair_word(Y, Y), 1));
  block.gates.push_back(rotation(pair_word(Z, Z), 2));
  const std::array<std::pair<Pauli, Pauli>, 3> mixed = {{{X, Y}, {X, Z}, {Y, Z}}};
  for (std::size_t k = 0; k < mixed.size(); ++k) {
    const auto [s, t] = mixed[k];
    block.gates.push_back(rotation(pair_word(s, t), 3 + k));
    block.gates.push_back(rotation(pair_word(t, s), 3 + k));
  }
  return block;
}

FilterBlock build_so4_filter(std::size_t a, std::size_t b) {
  check_pair(a, b);
  // Magic-basis images M†(P)M of Y⊗I, Z⊗I, I⊗Y, I⊗Z.
  const SignedPauliString ya = word({{a, Pauli::X}, {b, Pauli::Y}}, -1);
  const SignedPauliString za = word({{a, Pauli::Z}, {b, Pauli::Y}}, -1);
  const SignedPauliString yb = word({{a, Pauli::Y}, {b, Pauli::X}}, +1);
  const SignedPauliString zb = word({{b, Pauli::Y}}, -1);
  FilterBlock block;
  block.num_params = 6;
  block.gates.push_back(rotation(ya, 0));
  block.gates.push_back(rotation(za, 1));
  block.gates.push_back(rotation(ya, 2));
  block.gates.push_back(rotation(yb, 3));
  block.gates.push_back(rotation(zb, 4));
  block.gates.push_back(rotation(yb, 5));
  return block;
}

FilterBlock relabel(const FilterBlock& block, std::span<const std::size_t> map) {
  auto m = [&](std::size_t q) {
    if (q >= map.size()) throw std::out_of_range("relabel map too short");
    return map[q];
  };
  FilterBlock out = block;
  for (auto& slot : out.gates) {
    std::visit(
        [&](auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, PauliRotation>) {
            std::map<std::size_t, Pauli> factors;
            for (const auto& [q, letter] : g.generator.factors()) factors.emplace(m(q), letter);
            g.generator = SignedPauliString(std::move(factors), g.generator.sign());
          } else if constexpr (std::is_same_v<T, Swap>) {
            g.qubit_a = m(g.qubit_a);
            g.qubit_b = m(g.qubit_b);
          } else {
            g.qubit = m(g.qubit);
          }
        },
        slot.op);
  }
  return out;
}

CircuitSpec build_qcnn(Architecture arch, std::size_t n, std::size_t num_classes) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("QCNN register size n must be even and >= 2, got " +
                                std::to_string(n));
  }
  if (2 * n > kMaxQubits) throw std::invalid_argument("register size too large");
  if (num_classes < 2 || !std::has_single_bit(num_classes)) {
    throw std::invalid_argument("class count must be a power of two >= 2");
  }
  const std::size_t width = static_cast<std::size_t>(std::countr_zero(num_classes));
  if (width > n) throw std::invalid_argument("too many classes for the register size");

  QcnnBuilder b(n);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);

  auto with_mirror = [&](const std::vector<std::size_t>& xs) {
    std::vector<std::size_t> all = xs;
    for (std::size_t q : xs) all.push_back(q + n);
    return all;
  };

  if (arch != Architecture::nonequiv) {
    b.spec().active_qubits.push_back(with_mirror(active));
    u2_sublayer(b, adjacent_pairs(active, 0));
    u2_sublayer(b, adjacent_pairs(active, 1));
  }

  while (active.size() > 1 && active.size() / 2 >= width) {
    b.spec().active_qubits.push_back(with_mirror(active));
    switch (arch) {
      case Architecture::equiv:
        u4_sublayer(b, adjacent_pairs(active, 0));
        u4_sublayer(b, adjacent_pairs(active, 1));
        break;
      case Architecture::appr_equiv:
        u2_sublayer(b, adjacent_pairs(active, 0));
        u2_sublayer(b, adjacent_pairs(active, 1));
        bridge(b, active.back(), active.front() + n);
        break;
      case Architecture::nonequiv: {
        const auto line = with_mirror(active);
        so4_sublayer(b, adjacent_pairs(line, 0));
        so4_sublayer(b, adjacent_pairs(line, 1));
        break;
      }
    }

    // Pooling: a filter on each (dropped, kept) pair, then the dropped qubit retires.
    const auto pool_pairs = adjacent_pairs(active, 0);
    if (arch == Architecture::nonequiv) {
      so4_sublayer(b, adjacent_pairs(with_mirror(active), 0));
    } else {
      u2_sublayer(b, pool_pairs);
    }
    std::vector<std::size_t> kept;
    for (const auto& [dropped, keep] : pool_pairs) kept.push_back(keep);
    if (active.size() % 2 == 1) kept.push_back(active.back());
    active = std::move(kept);
  }

  b.spec().active_qubits.push_back(with_mirror(active));
  b.spec().measured = active;
  b.spec().validate();
  return std::move(b.spec());
}

std::vector<double> predict(const CircuitSpec& circuit, std::span<const double> params,
                            const MeasurementHead& head, const Image& image) {
  QuantumState state = caa_embed(image);
  run_circuit(circuit, params, state);
  return measure_head(std::move(state), head);
}

}  // namespace eqcnn
