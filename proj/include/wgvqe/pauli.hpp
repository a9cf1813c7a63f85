#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgvqe/linalg.hpp"
#include "wgvqe/state.hpp"

namespace wgvqe {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis. The letter at position k acts on
/// qubit k, and qubit 0 is the most significant bit of a basis index, so
/// "IIX" flips the least significant bit.
class PauliString {
 public:
  PauliString() = default;
  /// Parses letters from {I, X, Y, Z}; length is the qubit count (1..12).
  explicit PauliString(std::string_view letters);
  static PauliString identity(int n_qubits);
  static PauliString from_masks(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  int n_qubits() const noexcept { return n_; }
  Pauli at(int qubit) const;
  /// Index-space masks; qubit k maps to bit (n-1-k).
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  std::uint64_t support_mask() const noexcept { return x_ | z_; }
  int y_count() const noexcept { return __builtin_popcountll(x_ & z_); }
  bool is_identity() const noexcept { return (x_ | z_) == 0; }
  std::string str() const;

  /// Lexicographic order of str() with I < X < Y < Z.
  std::strong_ordering operator<=>(const PauliString& other) const;
  bool operator==(const PauliString& other) const = default;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliTerm {
  double coeff = 0.0;
  PauliString pauli;
};

/// Real-weighted sum of Pauli strings.
///
/// Terms are kept sorted lexicographically, duplicates are merged and terms
/// with |coeff| < kPruneThreshold are dropped. Coefficients must be finite.
class PauliSum {
 public:
  static constexpr double kPruneThreshold = 1e-12;

  PauliSum() = default;
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const noexcept { return n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  /// Coefficient of `p`, zero when absent.
  double coefficient(const PauliString& p) const;
  double coefficient(std::string_view letters) const { return coefficient(PauliString(letters)); }
  /// Coefficient of the all-identity string.
  double identity_coefficient() const;

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Pauli-basis coefficients trace(P M) / 2^n of a Hermitian matrix.
/// Throws InvalidArgument for non-square or non-power-of-two input, more
/// than 12 qubits, or Hermiticity defect above 1e-10 (message carries it).
PauliSum decompose_hermitian(const CMatrix& matrix);
PauliSum decompose_hermitian(const RMatrix& matrix);

/// Dense matrix of a Pauli sum.
CMatrix to_matrix(const PauliSum& sum);
/// Dense matrix of a single string.
CMatrix to_matrix(const PauliString& p);

/// Sum_i alpha_i <P_i>; throws on dimension mismatch or unnormalized input.
double exact_expectation(const PauliSum& sum, const StateVector& state);
double exact_expectation(const PauliSum& sum, const DensityMatrix& state);
/// <P> for one string.
double exact_expectation(const PauliString& p, const StateVector& state);
double exact_expectation(const PauliString& p, const DensityMatrix& state);

/// JSON: {"n_qubits": n, "terms": [{"coeff": c, "pauli": "IXZ"}, ...]}
void to_json(nlohmann::json& j, const PauliSum& sum);
void from_json(const nlohmann::json& j, PauliSum& sum);

}  // namespace wgvqe
