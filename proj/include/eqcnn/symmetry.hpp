#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqcnn/circuit.hpp"
#include "eqcnn/pauli.hpp"
#include "eqcnn/state.hpp"

namespace eqcnn {

/// Elements of the p4m point group acting on an N x N pixel grid.
/// d1 is the anti-diagonal reflection r∘tx and d2 the transposition tx∘r.
enum class GroupElement : std::uint8_t { e, r, r2, r3, tx, ty, d1, d2 };

inline constexpr std::array<GroupElement, 8> kAllElements = {
    GroupElement::e,  GroupElement::r,  GroupElement::r2, GroupElement::r3,
    GroupElement::tx, GroupElement::ty, GroupElement::d1, GroupElement::d2};

std::string_view to_string(GroupElement g);
GroupElement parse_group_element(std::string_view name);

/// Composition (g∘h)(x) = g(h(x)).
GroupElement compose(GroupElement g, GroupElement h);
GroupElement inverse(GroupElement g);

/// Unitary V = X[flip_mask] · S^exchange on a 2n-qubit CAA register, where S
/// swaps qubit i with qubit i+n for all i < n and X[mask] applies Pauli X to
/// every qubit in `flip_mask` (bit q set = qubit q). S is applied first.
struct StructuredAction {
  std::size_t n = 1;
  std::uint64_t flip_mask = 0;
  bool exchange = false;

  static StructuredAction identity(std::size_t n);
  /// X on the listed qubits, no exchange.
  static StructuredAction x_layer(std::size_t n, std::span<const std::size_t> qubits);

  StructuredAction then(const StructuredAction& first) const;  // this ∘ first
  friend bool operator==(const StructuredAction&, const StructuredAction&) = default;
};

/// Induced representation of a group element in structured form.
StructuredAction structured_rep(GroupElement g, std::size_t n);

/// Basis permutation: `mapping[b]` is the image of basis index b. Every p4m
/// representation on the CAA register is a pure permutation (all signs +1).
struct BasisPermutation {
  std::size_t n = 1;
  std::vector<std::uint64_t> mapping;

  BasisPermutation compose(const BasisPermutation& first) const;  // this ∘ first
  bool is_bijection() const;
  /// V|psi>.
  QuantumState apply(const QuantumState& state) const;
  friend bool operator==(const BasisPermutation&, const BasisPermutation&) = default;
};

BasisPermutation to_permutation(const StructuredAction& action);
BasisPermutation induced_rep(GroupElement g, std::size_t n);

struct GroupMember {
  GroupElement element;
  BasisPermutation rep;
};

/// All eight elements with their permutations, in kAllElements order.
std::vector<GroupMember> group_elements(std::size_t n);

/// V† P V for the structured unitary V.
SignedPauliString conjugate_pauli(const SignedPauliString& p, const StructuredAction& v);

/// Real linear combination of unsigned Pauli words; zero terms are dropped.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(const SignedPauliString& p);

  void add(const SignedPauliString& p, double coefficient);
  void add(const PauliSum& other, double scale = 1.0);

  const std::map<SignedPauliString, double>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  double coefficient(const SignedPauliString& word) const;
  std::string to_string() const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  std::map<SignedPauliString, double> terms_;
};

/// (1/|reps|) Σ_V V† P V, collected over identical words.
PauliSum twirl(const SignedPauliString& p, std::span<const StructuredAction> reps);
PauliSum twirl(const PauliSum& sum, std::span<const StructuredAction> reps);

/// Named subgroups used by the CLI: "x-flip", "y-flip", "xy-flip",
/// "exchange", "rotation", "p4m".
std::vector<StructuredAction> subgroup_actions(std::string_view name, std::size_t n);

/// True iff the word commutes with V_x and V_y, i.e. it has an even number
/// of Y/Z factors on each register.
bool is_equivariant_generator(const SignedPauliString& p, std::size_t n);

enum class WordForm {
  any,
  /// Weight-4 words σσσ'σ' on a mirrored quad (i, j, i+n, j+n).
  mirrored_pairs,
};

/// Every equivariant Pauli word supported on `support` with weight at most
/// `max_weight`, in lexicographic order (support order, I < X < Y < Z).
std::vector<SignedPauliString> enumerate_equivariant_gateset(
    std::span<const std::size_t> support, std::size_t n, std::size_t max_weight,
    WordForm form = WordForm::any);

struct AuditOptions {
  std::size_t parameter_draws = 20;
  std::size_t states_per_draw = 2;
  std::uint64_t seed = 0;
  /// Parameters held at zero during the audit (e.g. bridge angles).
  std::vector<std::size_t> frozen_params;
  double tolerance = 1e-10;
};

struct AuditReport {
  std::array<double, 8> defect{};  // indexed like kAllElements
  double tolerance = 1e-10;

  double defect_for(GroupElement g) const { return defect[static_cast<std::size_t>(g)]; }
  bool passes(GroupElement g) const { return defect_for(g) < tolerance; }
  bool equivariant() const;
};

/// Largest |U V psi - V U psi| over random parameters and random states.
AuditReport audit_circuit(const CircuitSpec& circuit, std::size_t n,
                          const AuditOptions& options = {});

/// Haar-like random state (normalized complex Gaussian vector).
QuantumState random_state(std::size_t num_qubits, std::uint64_t seed);

}  // namespace eqcnn
