#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgvqe/linalg.hpp"
#include "wgvqe/pauli.hpp"

namespace wgvqe {

/// TM: Dirichlet walls (E_z = 0). TE: Neumann walls (dH_z/dn = 0).
enum class ModeFamily { TM, TE };

std::string_view to_string(ModeFamily f);
/// Accepts "tm"/"TM"/"te"/"TE".
ModeFamily parse_mode_family(std::string_view s);

/// Second-order central-difference operator -d^2/dl^2 on N = 2^n nodes,
/// together with its Pauli decomposition.
struct WaveguideOperator {
  ModeFamily family = ModeFamily::TM;
  int n_qubits = 0;
  std::size_t grid_nodes = 0;
  double dl = 1.0;
  RMatrix matrix;
  PauliSum pauli;
};

/// Tridiagonal operator with off-diagonals -1/dl^2 and diagonal
/// [3,2,...,2,3]/dl^2 (TM) or [1,2,...,2,1]/dl^2 (TE).
WaveguideOperator build_operator(ModeFamily family, int n_qubits, double dl = 1.0);

/// Lowest k eigenpairs of op.matrix, ascending, sign-normalized.
std::vector<EigenPair> reference_spectrum(const WaveguideOperator& op, int k);

/// Longitudinal field sample grid of a separable 2-D mode.
struct ModeField {
  ModeFamily family = ModeFamily::TM;
  int m = 0;      ///< x-axis mode index
  int n = 0;      ///< y-axis mode index
  double kc2 = 0; ///< cutoff wavenumber squared, lambda_x + lambda_y
  RMatrix grid;   ///< grid(i, j) = X[i] * Y[j], max |grid| = 1
};

/// Outer product of the two 1-D solutions, max-normalized.
ModeField compose_mode(ModeFamily family, const EigenPair& x_solution, const EigenPair& y_solution,
                       int m = 0, int n = 0);

/// Which 1-D eigenpair feeds an axis for mode index `index`: TM indices
/// start at 1, TE indices at 0.
int eigenpair_for_index(ModeFamily family, int index);

struct ModeLabel {
  ModeFamily family;
  int m;
  int n;
};
/// Parses labels like "TM11", "TE01", "TM21".
ModeLabel parse_mode_label(std::string_view label);

/// CSV with header x0..x{N-1} and one row per y index.
void write_field_csv(std::ostream& out, const ModeField& field);
/// Reads a grid written by write_field_csv (the transpose is undone).
RMatrix read_field_csv(std::istream& in);
/// {"family": "TM", "m": 1, "n": 1, "kc2": ...}
nlohmann::json field_metadata(const ModeField& field);

nlohmann::json operator_matrix_json(const WaveguideOperator& op);

}  // namespace wgvqe
