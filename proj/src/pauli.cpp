#include "wgvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include <fmt/format.h>

#include "wgvqe/error.hpp"
#include "wgvqe/kernels.hpp"

namespace wgvqe {

namespace {

std::uint64_t qubit_bit(int n, int qubit) { return std::uint64_t{1} << (n - 1 - qubit); }

// Base-4 key with qubit 0 most significant and I<X<Y<Z.
std::uint64_t order_key(const PauliString& p) {
  std::uint64_t key = 0;
  for (int q = 0; q < p.n_qubits(); ++q) key = key * 4 + static_cast<std::uint64_t>(p.at(q));
  return key;
}

void fast_walsh_hadamard(std::vector<cplx>& v) {
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j) {
        const cplx a = v[j];
        const cplx b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
}

}  // namespace

PauliString::PauliString(std::string_view letters) : n_(static_cast<int>(letters.size())) {
  check_qubit_count(n_, "PauliString");
  for (int q = 0; q < n_; ++q) {
    const std::uint64_t b = qubit_bit(n_, q);
    switch (letters[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': x_ |= b; break;
      case 'Y': x_ |= b; z_ |= b; break;
      case 'Z': z_ |= b; break;
      default:
        throw InvalidArgument(fmt::format("PauliString: invalid letter '{}' in \"{}\"",
                                          letters[static_cast<std::size_t>(q)], letters));
    }
  }
}

PauliString PauliString::identity(int n_qubits) {
  check_qubit_count(n_qubits, "PauliString::identity");
  PauliString p;
  p.n_ = n_qubits;
  return p;
}

PauliString PauliString::from_masks(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask) {
  check_qubit_count(n_qubits, "PauliString::from_masks");
  const std::uint64_t full = (std::uint64_t{1} << n_qubits) - 1;
  if ((x_mask | z_mask) & ~full) throw InvalidArgument("PauliString::from_masks: mask out of range");
  PauliString p;
  p.n_ = n_qubits;
  p.x_ = x_mask;
  p.z_ = z_mask;
  return p;
}

Pauli PauliString::at(int qubit) const {
  if (qubit < 0 || qubit >= n_) throw InvalidArgument("PauliString::at: qubit out of range");
  const std::uint64_t b = qubit_bit(n_, qubit);
  const bool x = x_ & b;
  const bool z = z_ & b;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

std::string PauliString::str() const {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = kLetters[static_cast<int>(at(q))];
  return s;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
  if (auto c = n_ <=> other.n_; c != 0) return c;
  return order_key(*this) <=> order_key(other);
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : n_(n_qubits) {
  check_qubit_count(n_qubits, "PauliSum");
  std::map<PauliString, double> merged;
  for (const PauliTerm& t : terms) {
    if (t.pauli.n_qubits() != n_qubits)
      throw InvalidArgument(fmt::format("PauliSum: term {} does not act on {} qubits",
                                        t.pauli.str(), n_qubits));
    if (!std::isfinite(t.coeff))
      throw InvalidArgument(fmt::format("PauliSum: non-finite coefficient on {}", t.pauli.str()));
    merged[t.pauli] += t.coeff;
  }
  for (const auto& [p, c] : merged)
    if (std::abs(c) >= kPruneThreshold) terms_.push_back({c, p});
}

double PauliSum::coefficient(const PauliString& p) const {
  auto it = std::ranges::lower_bound(terms_, p, {}, &PauliTerm::pauli);
  return (it != terms_.end() && it->pauli == p) ? it->coeff : 0.0;
}

double PauliSum::identity_coefficient() const {
  if (n_ == 0) return 0.0;
  return coefficient(PauliString::identity(n_));
}

PauliSum decompose_hermitian(const CMatrix& m) {
  const std::size_t dim = m.rows();
  if (dim == 0 || m.cols() != dim) throw InvalidArgument("decompose_hermitian: matrix must be square");
  if (!std::has_single_bit(dim) || dim < 2)
    throw InvalidArgument(fmt::format("decompose_hermitian: dimension {} is not a power of two", dim));
  const int n = std::countr_zero(dim);
  check_qubit_count(n, "decompose_hermitian");
  const double defect = hermitian_defect(m);
  if (defect > 1e-10)
    throw InvalidArgument(
        fmt::format("decompose_hermitian: matrix is not Hermitian (max asymmetry {:.3e})", defect));

  // For a fixed X-mask, tr(P M) over all Z-masks is a Walsh-Hadamard
  // transform of the diagonal band v[j] = M[j][j^x], times i^{#Y}.
  std::vector<PauliTerm> terms;
  std::vector<cplx> band(dim);
  const double norm = 1.0 / static_cast<double>(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    bool any = false;
    for (std::uint64_t j = 0; j < dim; ++j) {
      band[j] = m(j, j ^ x);
      any = any || band[j] != cplx{};
    }
    if (!any) continue;
    fast_walsh_hadamard(band);
    for (std::uint64_t z = 0; z < dim; ++z) {
      const cplx c = kernels::pauli_phase(0, 0, std::popcount(x & z)) * band[z] * norm;
      if (std::abs(c.imag()) > 1e-10 * std::max(1.0, std::abs(c.real())))
        throw Error("decompose_hermitian: complex Pauli coefficient from Hermitian input");
      if (std::abs(c.real()) >= PauliSum::kPruneThreshold)
        terms.push_back({c.real(), PauliString::from_masks(n, x, z)});
    }
  }
  return PauliSum(n, std::move(terms));
}

PauliSum decompose_hermitian(const RMatrix& m) { return decompose_hermitian(to_complex(m)); }

CMatrix to_matrix(const PauliString& p) {
  const std::size_t dim = std::size_t{1} << p.n_qubits();
  CMatrix out(dim, dim);
  for (std::uint64_t b = 0; b < dim; ++b)
    out(b ^ p.x_mask(), b) = kernels::pauli_phase(b, p.z_mask(), p.y_count());
  return out;
}

CMatrix to_matrix(const PauliSum& sum) {
  if (sum.n_qubits() == 0) throw InvalidArgument("to_matrix: empty PauliSum has no qubit count");
  const std::size_t dim = std::size_t{1} << sum.n_qubits();
  CMatrix out(dim, dim);
  for (const PauliTerm& t : sum.terms()) {
    const PauliString& p = t.pauli;
    for (std::uint64_t b = 0; b < dim; ++b)
      out(b ^ p.x_mask(), b) += t.coeff * kernels::pauli_phase(b, p.z_mask(), p.y_count());
  }
  return out;
}

namespace {

double checked_real(cplx v, const char* where) {
  if (std::abs(v.imag()) >= 1e-10) throw Error(fmt::format("{}: imaginary residue {:.3e}", where, v.imag()));
  return v.real();
}

void check_state(int n_sum, const StateVector& s) {
  if (s.n_qubits() != n_sum)
    throw InvalidArgument(fmt::format("exact_expectation: operator acts on {} qubits, state has {}",
                                      n_sum, s.n_qubits()));
  if (std::abs(s.norm() - 1.0) > 1e-9) throw InvalidArgument("exact_expectation: state is not normalized");
}

void check_state(int n_sum, const DensityMatrix& s) {
  if (s.n_qubits() != n_sum)
    throw InvalidArgument(fmt::format("exact_expectation: operator acts on {} qubits, state has {}",
                                      n_sum, s.n_qubits()));
  if (std::abs(s.trace() - cplx(1.0)) > 1e-9) throw InvalidArgument("exact_expectation: trace is not 1");
}

}  // namespace

double exact_expectation(const PauliString& p, const StateVector& s) {
  check_state(p.n_qubits(), s);
  return checked_real(kernels::parallel::pauli_expectation(s.amplitudes(), p.x_mask(), p.z_mask(), p.y_count()),
                      "exact_expectation");
}

double exact_expectation(const PauliString& p, const DensityMatrix& s) {
  check_state(p.n_qubits(), s);
  return checked_real(
      kernels::parallel::pauli_trace(s.entries(), s.dim(), p.x_mask(), p.z_mask(), p.y_count()),
      "exact_expectation");
}

double exact_expectation(const PauliSum& sum, const StateVector& s) {
  check_state(sum.n_qubits(), s);
  cplx acc{};
  for (const PauliTerm& t : sum.terms())
    acc += t.coeff * kernels::parallel::pauli_expectation(s.amplitudes(), t.pauli.x_mask(),
                                                          t.pauli.z_mask(), t.pauli.y_count());
  return checked_real(acc, "exact_expectation");
}

double exact_expectation(const PauliSum& sum, const DensityMatrix& s) {
  check_state(sum.n_qubits(), s);
  cplx acc{};
  for (const PauliTerm& t : sum.terms())
    acc += t.coeff * kernels::parallel::pauli_trace(s.entries(), s.dim(), t.pauli.x_mask(),
                                                    t.pauli.z_mask(), t.pauli.y_count());
  return checked_real(acc, "exact_expectation");
}

void to_json(nlohmann::json& j, const PauliSum& sum) {
  j = nlohmann::json::object();
  j["n_qubits"] = sum.n_qubits();
  auto terms = nlohmann::json::array();
  for (const PauliTerm& t : sum.terms()) terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.str()}});
  j["terms"] = std::move(terms);
}

void from_json(const nlohmann::json& j, PauliSum& sum) {
  const int n = j.at("n_qubits").get<int>();
  std::vector<PauliTerm> terms;
  for (const auto& t : j.at("terms"))
    terms.push_back({t.at("coeff").get<double>(), PauliString(t.at("pauli").get<std::string>())});
  sum = PauliSum(n, std::move(terms));
}

}  // namespace wgvqe
