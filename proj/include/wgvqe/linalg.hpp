#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wgvqe {

using cplx = std::complex<double>;

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::span<T> row(std::size_t r) { return std::span<T>(data_).subspan(r * cols_, cols_); }
  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(data_).subspan(r * cols_, cols_);
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RMatrix = Matrix<double>;
using CMatrix = Matrix<cplx>;

CMatrix to_complex(const RMatrix& m);

/// Largest |m(i,j) - conj(m(j,i))|.
double hermitian_defect(const CMatrix& m);

/// Largest entrywise |a - b|. Shapes must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

/// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Pairs are returned in ascending order of eigenvalue with
/// unit-norm vectors whose first non-negligible component is positive.
///
/// Throws ConvergenceError (carrying the worst residual ||Av - lv||) if the
/// residual bound is not met within max_sweeps sweeps.
std::vector<EigenPair> jacobi_eigensolve(const RMatrix& a, double residual_tol = 1e-10,
                                         int max_sweeps = 100);

/// Flips the sign of v so its first component with |v_i| > 1e-12 is positive.
void fix_sign(std::span<double> v);

}  // namespace wgvqe
