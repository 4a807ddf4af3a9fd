#include "eqcnn/pauli.hpp"

#include <cctype>
#include <sstream>
#include <tuple>

namespace eqcnn {

char to_char(Pauli p) {
  switch (p) {
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

PauliParseError::PauliParseError(const std::string& what, std::size_t position)
    : std::invalid_argument(what + " at position " + std::to_string(position)),
      position_(position) {}

SignedPauliString::SignedPauliString(std::map<std::size_t, Pauli> factors, int sign)
    : factors_(std::move(factors)), sign_(sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("Pauli string sign must be +1 or -1");
  }
}

SignedPauliString SignedPauliString::parse(std::string_view text) {
  std::size_t pos = 0;
  int sign = +1;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    sign = text[pos] == '-' ? -1 : +1;
    ++pos;
  }
  if (pos >= text.size()) {
    throw PauliParseError("empty Pauli word", pos);
  }
  if (text.substr(pos) == "I") {
    return SignedPauliString({}, sign);
  }

  std::map<std::size_t, Pauli> factors;
  while (pos < text.size()) {
    const std::size_t letter_pos = pos;
    Pauli letter;
    switch (text[pos]) {
      case 'X':
        letter = Pauli::X;
        break;
      case 'Y':
        letter = Pauli::Y;
        break;
      case 'Z':
        letter = Pauli::Z;
        break;
      default:
        throw PauliParseError(std::string("expected one of X, Y, Z but found '") +
                                  text[pos] + "'",
                              pos);
    }
    ++pos;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw PauliParseError("missing qubit index after Pauli letter", pos);
    }
    std::size_t qubit = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      qubit = qubit * 10 + static_cast<std::size_t>(text[pos] - '0');
      if (qubit > 63) {
        throw PauliParseError("qubit index too large", letter_pos + 1);
      }
      ++pos;
    }
    if (!factors.emplace(qubit, letter).second) {
      throw PauliParseError("qubit " + std::to_string(qubit) + " repeated", letter_pos);
    }
  }
  return SignedPauliString(std::move(factors), sign);
}

std::size_t SignedPauliString::span() const noexcept {
  return factors_.empty() ? 0 : factors_.rbegin()->first + 1;
}

SignedPauliString SignedPauliString::with_sign(int sign) const {
  return SignedPauliString(factors_, sign);
}

PauliMasks SignedPauliString::masks(std::size_t num_qubits) const {
  PauliMasks m;
  for (const auto& [qubit, letter] : factors_) {
    if (qubit >= num_qubits) {
      throw std::out_of_range("Pauli factor on qubit " + std::to_string(qubit) +
                              " outside a " + std::to_string(num_qubits) + "-qubit register");
    }
    const std::uint64_t bit = std::uint64_t{1} << (num_qubits - 1 - qubit);
    if (letter == Pauli::X || letter == Pauli::Y) m.flip |= bit;
    if (letter == Pauli::Z || letter == Pauli::Y) m.phase |= bit;
    if (letter == Pauli::Y) ++m.num_y;
  }
  return m;
}

bool SignedPauliString::commutes_with(const SignedPauliString& other) const {
  int anticommuting = 0;
  for (const auto& [qubit, letter] : factors_) {
    auto it = other.factors_.find(qubit);
    if (it != other.factors_.end() && it->second != letter) ++anticommuting;
  }
  return anticommuting % 2 == 0;
}

std::string SignedPauliString::to_string() const {
  std::ostringstream out;
  if (sign_ < 0) out << '-';
  if (factors_.empty()) {
    out << 'I';
    return out.str();
  }
  for (const auto& [qubit, letter] : factors_) out << to_char(letter) << qubit;
  return out.str();
}

bool operator<(const SignedPauliString& a, const SignedPauliString& b) {
  return std::tie(a.factors_, a.sign_) < std::tie(b.factors_, b.sign_);
}

}  // namespace eqcnn
