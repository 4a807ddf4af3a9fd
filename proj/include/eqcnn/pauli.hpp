#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eqcnn {

enum class Pauli : std::uint8_t { X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// Raised when a textual Pauli word cannot be parsed. `position` is the
/// zero-based character offset of the offending input.
class PauliParseError : public std::invalid_argument {
 public:
  PauliParseError(const std::string& what, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Bit masks of a Pauli word for a register of `num_qubits` qubits, using the
/// simulator's layout (qubit 0 is the most significant bit of a basis index).
/// `flip` holds X and Y factors, `phase` holds Z and Y factors.
struct PauliMasks {
  std::uint64_t flip = 0;
  std::uint64_t phase = 0;
  int num_y = 0;
};

/// A tensor product of single-qubit Paulis with an overall sign of +1 or -1.
/// Qubits that are not listed carry the identity.
class SignedPauliString {
 public:
  SignedPauliString() = default;
  SignedPauliString(std::map<std::size_t, Pauli> factors, int sign = +1);

  /// Parses words such as "Y0Y1", "-Z0Z2", "+X3" or "I".
  static SignedPauliString parse(std::string_view text);

  int sign() const noexcept { return sign_; }
  const std::map<std::size_t, Pauli>& factors() const noexcept { return factors_; }
  std::size_t weight() const noexcept { return factors_.size(); }
  bool is_identity() const noexcept { return factors_.empty(); }

  /// Highest qubit index touched plus one (0 for the identity).
  std::size_t span() const noexcept;

  SignedPauliString with_sign(int sign) const;
  SignedPauliString negated() const { return with_sign(-sign_); }
  /// Same word with the sign dropped to +1.
  SignedPauliString unsigned_word() const { return with_sign(+1); }

  PauliMasks masks(std::size_t num_qubits) const;

  /// Whether the two words commute as operators (signs are irrelevant).
  bool commutes_with(const SignedPauliString& other) const;

  std::string to_string() const;

  friend bool operator==(const SignedPauliString&, const SignedPauliString&) = default;
  /// Orders by word first, then sign, so words can key ordered containers.
  friend bool operator<(const SignedPauliString& a, const SignedPauliString& b);

 private:
  std::map<std::size_t, Pauli> factors_;
  int sign_ = +1;
};

}  // namespace eqcnn
