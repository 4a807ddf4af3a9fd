#include "eqcnn/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "eqcnn/rng.hpp"

namespace eqcnn {
namespace {

std::uint64_t low_mask(std::size_t n) { return (std::uint64_t{1} << n) - 1; }

// Exchanges register labels inside a qubit-indexed mask.
std::uint64_t exchange_mask(std::uint64_t mask, std::size_t n) {
  return ((mask & low_mask(n)) << n) | ((mask >> n) & low_mask(n));
}

void check_register(std::size_t n) {
  if (n < 1) throw std::invalid_argument("register size n must be >= 1");
  if (2 * n > kMaxQubits) throw std::invalid_argument("register size n too large");
}

std::size_t mirror_qubit(std::size_t q, std::size_t n) { return q < n ? q + n : q - n; }

}  // namespace

std::string_view to_string(GroupElement g) {
  switch (g) {
    case GroupElement::e:
      return "e";
    case GroupElement::r:
      return "r";
    case GroupElement::r2:
      return "r2";
    case GroupElement::r3:
      return "r3";
    case GroupElement::tx:
      return "tx";
    case GroupElement::ty:
      return "ty";
    case GroupElement::d1:
      return "d1";
    case GroupElement::d2:
      return "d2";
  }
  return "?";
}

GroupElement parse_group_element(std::string_view name) {
  for (GroupElement g : kAllElements) {
    if (to_string(g) == name) return g;
  }
  throw std::invalid_argument("unknown group element '" + std::string(name) + "'");
}

StructuredAction StructuredAction::identity(std::size_t n) {
  check_register(n);
  return StructuredAction{n, 0, false};
}

StructuredAction StructuredAction::x_layer(std::size_t n, std::span<const std::size_t> qubits) {
  StructuredAction a = identity(n);
  for (std::size_t q : qubits) {
    if (q >= 2 * n) throw std::out_of_range("X layer qubit outside the register");
    a.flip_mask |= std::uint64_t{1} << q;
  }
  return a;
}

StructuredAction StructuredAction::then(const StructuredAction& first) const {
  if (first.n != n) throw std::invalid_argument("register sizes differ");
  // X[a] S^ea X[b] S^eb = X[a ^ S^ea(b)] S^(ea ^ eb)
  const std::uint64_t moved = exchange ? exchange_mask(first.flip_mask, n) : first.flip_mask;
  return StructuredAction{n, flip_mask ^ moved, exchange != first.exchange};
}

StructuredAction structured_rep(GroupElement g, std::size_t n) {
  check_register(n);
  const std::uint64_t x = low_mask(n);
  const std::uint64_t y = low_mask(n) << n;
  switch (g) {
    case GroupElement::e:
      return {n, 0, false};
    case GroupElement::r:
      return {n, x, true};
    case GroupElement::r2:
      return {n, x | y, false};
    case GroupElement::r3:
      return {n, y, true};
    case GroupElement::tx:
      return {n, x, false};
    case GroupElement::ty:
      return {n, y, false};
    case GroupElement::d1:
      return {n, x | y, true};
    case GroupElement::d2:
      return {n, 0, true};
  }
  throw std::invalid_argument("bad group element");
}

GroupElement compose(GroupElement g, GroupElement h) {
  const StructuredAction product = structured_rep(g, 1).then(structured_rep(h, 1));
  for (GroupElement k : kAllElements) {
    if (structured_rep(k, 1) == product) return k;
  }
  throw std::logic_error("p4m composition left the group");
}

GroupElement inverse(GroupElement g) {
  for (GroupElement k : kAllElements) {
    if (compose(g, k) == GroupElement::e) return k;
  }
  throw std::logic_error("p4m element without inverse");
}

BasisPermutation to_permutation(const StructuredAction& action) {
  check_register(action.n);
  const std::size_t n = action.n;
  const std::size_t total = 2 * n;
  const std::uint64_t dim = std::uint64_t{1} << total;
  std::uint64_t flip_bits = 0;
  for (std::size_t q = 0; q < total; ++q) {
    if (action.flip_mask & (std::uint64_t{1} << q)) flip_bits |= std::uint64_t{1} << (total - 1 - q);
  }
  BasisPermutation perm{n, std::vector<std::uint64_t>(dim)};
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::uint64_t image = b;
    if (action.exchange) {
      const std::uint64_t i = b >> n;
      const std::uint64_t j = b & low_mask(n);
      image = (j << n) | i;
    }
    perm.mapping[b] = image ^ flip_bits;
  }
  return perm;
}

BasisPermutation induced_rep(GroupElement g, std::size_t n) {
  return to_permutation(structured_rep(g, n));
}

BasisPermutation BasisPermutation::compose(const BasisPermutation& first) const {
  if (first.mapping.size() != mapping.size()) throw std::invalid_argument("permutation sizes differ");
  BasisPermutation out{n, std::vector<std::uint64_t>(mapping.size())};
  for (std::size_t b = 0; b < mapping.size(); ++b) out.mapping[b] = mapping[first.mapping[b]];
  return out;
}

bool BasisPermutation::is_bijection() const {
  std::vector<bool> hit(mapping.size(), false);
  for (std::uint64_t m : mapping) {
    if (m >= mapping.size() || hit[m]) return false;
    hit[m] = true;
  }
  return true;
}

QuantumState BasisPermutation::apply(const QuantumState& state) const {
  if (state.dim() != mapping.size()) throw std::invalid_argument("state does not match permutation");
  QuantumState out(state.num_qubits());
  auto dst = out.amplitudes();
  const auto src = state.amplitudes();
  for (std::size_t b = 0; b < src.size(); ++b) dst[mapping[b]] = src[b];
  return out;
}

std::vector<GroupMember> group_elements(std::size_t n) {
  check_register(n);
  std::vector<GroupMember> members;
  members.reserve(kAllElements.size());
  for (GroupElement g : kAllElements) members.push_back({g, induced_rep(g, n)});
  return members;
}

SignedPauliString conjugate_pauli(const SignedPauliString& p, const StructuredAction& v) {
  const std::size_t n = v.n;
  int sign = p.sign();
  std::map<std::size_t, Pauli> factors;
  for (const auto& [q, letter] : p.factors()) {
    if (q >= 2 * n) {
      throw std::out_of_range("Pauli factor on qubit " + std::to_string(q) +
                              " outside the 2n-qubit register");
    }
    // X Y X = -Y and X Z X = -Z on flipped qubits.
    if ((v.flip_mask & (std::uint64_t{1} << q)) && letter != Pauli::X) sign = -sign;
    factors.emplace(v.exchange ? mirror_qubit(q, n) : q, letter);
  }
  return SignedPauliString(std::move(factors), sign);
}

PauliSum::PauliSum(const SignedPauliString& p) { add(p, 1.0); }

void PauliSum::add(const SignedPauliString& p, double coefficient) {
  const SignedPauliString word = p.unsigned_word();
  double& c = terms_[word];
  c += coefficient * p.sign();
  if (std::abs(c) < 1e-14) terms_.erase(word);
}

void PauliSum::add(const PauliSum& other, double scale) {
  for (const auto& [word, c] : other.terms_) add(word, c * scale);
}

double PauliSum::coefficient(const SignedPauliString& word) const {
  auto it = terms_.find(word.unsigned_word());
  if (it == terms_.end()) return 0.0;
  return it->second * word.sign();
}

std::string PauliSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [word, c] : terms_) {
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    first = false;
    const double mag = std::abs(c);
    if (mag != 1.0) out << mag << "*";
    out << word.to_string();
  }
  return out.str();
}

PauliSum twirl(const SignedPauliString& p, std::span<const StructuredAction> reps) {
  return twirl(PauliSum(p), reps);
}

PauliSum twirl(const PauliSum& sum, std::span<const StructuredAction> reps) {
  if (reps.empty()) throw std::invalid_argument("twirl over an empty set");
  PauliSum out;
  const double weight = 1.0 / static_cast<double>(reps.size());
  for (const auto& v : reps) {
    for (const auto& [word, c] : sum.terms()) out.add(conjugate_pauli(word, v), c * weight);
  }
  return out;
}

std::vector<StructuredAction> subgroup_actions(std::string_view name, std::size_t n) {
  std::vector<GroupElement> elements;
  using G = GroupElement;
  if (name == "x-flip") elements = {G::e, G::tx};
  else if (name == "y-flip") elements = {G::e, G::ty};
  else if (name == "xy-flip") elements = {G::e, G::tx, G::ty, G::r2};
  else if (name == "exchange") elements = {G::e, G::d2};
  else if (name == "rotation") elements = {G::e, G::r, G::r2, G::r3};
  else if (name == "p4m") elements.assign(kAllElements.begin(), kAllElements.end());
  else throw std::invalid_argument("unknown group '" + std::string(name) + "'");
  std::vector<StructuredAction> actions;
  for (G g : elements) actions.push_back(structured_rep(g, n));
  return actions;
}

bool is_equivariant_generator(const SignedPauliString& p, std::size_t n) {
  int x_count = 0;
  int y_count = 0;
  for (const auto& [q, letter] : p.factors()) {
    if (q >= 2 * n) throw std::out_of_range("generator support outside the 2n-qubit register");
    if (letter == Pauli::X) continue;
    (q < n ? x_count : y_count) += 1;
  }
  return x_count % 2 == 0 && y_count % 2 == 0;
}

std::vector<SignedPauliString> enumerate_equivariant_gateset(
    std::span<const std::size_t> support, std::size_t n, std::size_t max_weight,
    WordForm form) {
  if (support.size() > 4) throw std::invalid_argument("support larger than 4 qubits");
  if (max_weight > 4) throw std::invalid_argument("max_weight larger than 4");
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (support[a] >= 2 * n) throw std::out_of_range("support qubit outside the register");
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      if (support[a] == support[b]) throw std::invalid_argument("support has duplicate qubits");
    }
  }
  if (form == WordForm::mirrored_pairs) {
    const bool ok = support.size() == 4 && support[0] < n && support[1] < n &&
                    support[2] == support[0] + n && support[3] == support[1] + n;
    if (!ok) throw std::invalid_argument("mirrored-pair form needs a quad (i, j, i+n, j+n)");
  }

  std::vector<SignedPauliString> words;
  const std::size_t k = support.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 4;
  std::vector<int> letters(k);
  for (std::size_t code = 1; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = k; i-- > 0;) {
      letters[i] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    std::map<std::size_t, Pauli> factors;
    for (std::size_t i = 0; i < k; ++i) {
      if (letters[i] != 0) factors.emplace(support[i], static_cast<Pauli>(letters[i]));
    }
    if (factors.size() > max_weight) continue;
    if (form == WordForm::mirrored_pairs &&
        (factors.size() != 4 || letters[0] != letters[1] || letters[2] != letters[3])) {
      continue;
    }
    SignedPauliString word(std::move(factors));
    if (is_equivariant_generator(word, n)) words.push_back(std::move(word));
  }
  return words;
}

bool AuditReport::equivariant() const {
  return std::all_of(defect.begin(), defect.end(), [&](double d) { return d < tolerance; });
}

QuantumState random_state(std::size_t num_qubits, std::uint64_t seed) {
  Rng rng(seed);
  QuantumState state(num_qubits);
  for (auto& a : state.amplitudes()) a = Complex(rng.normal(), rng.normal());
  state.normalize();
  return state;
}

AuditReport audit_circuit(const CircuitSpec& circuit, std::size_t n, const AuditOptions& options) {
  check_register(n);
  if (circuit.num_qubits != 2 * n) {
    throw std::invalid_argument("circuit has " + std::to_string(circuit.num_qubits) +
                                " qubits, expected 2n = " + std::to_string(2 * n));
  }
  const auto members = group_elements(n);
  AuditReport report;
  report.tolerance = options.tolerance;

  Rng rng(options.seed);
  std::vector<double> params(circuit.num_params);
  for (std::size_t draw = 0; draw < options.parameter_draws; ++draw) {
    for (auto& p : params) p = rng.uniform(-std::numbers::pi, std::numbers::pi);
    for (std::size_t f : options.frozen_params) {
      if (f < params.size()) params[f] = 0.0;
    }
    for (std::size_t s = 0; s < options.states_per_draw; ++s) {
      const QuantumState psi = random_state(2 * n, rng.next());
      QuantumState u_psi = psi;
      run_circuit(circuit, params, u_psi);
      for (std::size_t k = 0; k < members.size(); ++k) {
        QuantumState u_v_psi = members[k].rep.apply(psi);
        run_circuit(circuit, params, u_v_psi);
        const QuantumState v_u_psi = members[k].rep.apply(u_psi);
        double worst = 0.0;
        for (std::size_t b = 0; b < psi.dim(); ++b) {
          worst = std::max(worst, std::abs(u_v_psi[b] - v_u_psi[b]));
        }
        report.defect[k] = std::max(report.defect[k], worst);
      }
    }
  }
  return report;
}

}  // namespace eqcnn
