#include "wgvqe/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "wgvqe/error.hpp"
#include "wgvqe/format.hpp"

namespace wgvqe {

std::string_view to_string(ModeFamily f) { return f == ModeFamily::TM ? "TM" : "TE"; }

ModeFamily parse_mode_family(std::string_view s) {
  if (s == "tm" || s == "TM") return ModeFamily::TM;
  if (s == "te" || s == "TE") return ModeFamily::TE;
  throw InvalidArgument(fmt::format("unknown mode family \"{}\" (expected tm or te)", s));
}

WaveguideOperator build_operator(ModeFamily family, int n_qubits, double dl) {
  check_qubit_count(n_qubits, "build_operator");
  if (!(dl > 0.0) || !std::isfinite(dl))
    throw InvalidArgument(fmt::format("build_operator: grid step must be positive, got {}", dl));
  const std::size_t n = std::size_t{1} << n_qubits;
  const double s = 1.0 / (dl * dl);
  const double wall = family == ModeFamily::TM ? 3.0 : 1.0;

  WaveguideOperator op;
  op.family = family;
  op.n_qubits = n_qubits;
  op.grid_nodes = n;
  op.dl = dl;
  op.matrix = RMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    op.matrix(i, i) = (i == 0 || i == n - 1 ? wall : 2.0) * s;
    if (i + 1 < n) op.matrix(i, i + 1) = op.matrix(i + 1, i) = -s;
  }
  op.pauli = decompose_hermitian(op.matrix);
  return op;
}

std::vector<EigenPair> reference_spectrum(const WaveguideOperator& op, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > op.grid_nodes)
    throw InvalidArgument(fmt::format("reference_spectrum: k must be in [1, {}], got {}", op.grid_nodes, k));
  auto pairs = jacobi_eigensolve(op.matrix);
  pairs.resize(static_cast<std::size_t>(k));
  return pairs;
}

ModeField compose_mode(ModeFamily family, const EigenPair& x, const EigenPair& y, int m, int n) {
  if (x.vector.size() != y.vector.size() || x.vector.empty())
    throw InvalidArgument("compose_mode: x and y solutions must have the same nonzero length");
  const std::size_t len = x.vector.size();
  ModeField f;
  f.family = family;
  f.m = m;
  f.n = n;
  f.kc2 = x.value + y.value;
  f.grid = RMatrix(len, len);
  double peak = 0.0;
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j < len; ++j) {
      f.grid(i, j) = x.vector[i] * y.vector[j];
      peak = std::max(peak, std::abs(f.grid(i, j)));
    }
  if (peak == 0.0) throw InvalidArgument("compose_mode: zero field");
  for (double& v : f.grid.data()) v /= peak;
  return f;
}

int eigenpair_for_index(ModeFamily family, int index) {
  const int k = family == ModeFamily::TM ? index - 1 : index;
  if (k < 0) throw InvalidArgument(fmt::format("mode index {} invalid for {}", index, to_string(family)));
  return k;
}

ModeLabel parse_mode_label(std::string_view label) {
  if (label.size() != 4) throw InvalidArgument(fmt::format("mode label \"{}\" must look like TM11 or TE01", label));
  const ModeFamily fam = parse_mode_family(label.substr(0, 2));
  const auto digit = [&](char c) {
    if (c < '0' || c > '9') throw InvalidArgument(fmt::format("mode label \"{}\" has a non-digit index", label));
    return c - '0';
  };
  ModeLabel out{fam, digit(label[2]), digit(label[3])};
  eigenpair_for_index(fam, out.m);
  eigenpair_for_index(fam, out.n);
  if (fam == ModeFamily::TE && out.m == 0 && out.n == 0)
    throw InvalidArgument("TE00 is not a propagating mode");
  return out;
}

void write_field_csv(std::ostream& out, const ModeField& field) {
  const std::size_t n = field.grid.rows();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << 'x' << i;
  out << '\n';
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << fmt9(field.grid(i, j));
    out << '\n';
  }
}

RMatrix read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("field CSV: missing header");
  const std::size_t n = static_cast<std::size_t>(std::ranges::count(line, ',')) + 1;
  RMatrix grid(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(in, line)) throw IoError("field CSV: too few rows");
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(row, cell, ',')) throw IoError("field CSV: short row");
      grid(i, j) = std::stod(cell);
    }
  }
  return grid;
}

nlohmann::json field_metadata(const ModeField& f) {
  return {{"family", std::string(to_string(f.family))}, {"m", f.m}, {"n", f.n}, {"kc2", round9(f.kc2)}};
}

nlohmann::json operator_matrix_json(const WaveguideOperator& op) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < op.grid_nodes; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < op.grid_nodes; ++j) row.push_back(round9(op.matrix(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"family", std::string(to_string(op.family))},
          {"n_qubits", op.n_qubits},
          {"grid_nodes", op.grid_nodes},
          {"dl", op.dl},
          {"matrix", std::move(rows)}};
}

}  // namespace wgvqe
