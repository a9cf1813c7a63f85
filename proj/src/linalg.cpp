#include "wgvqe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wgvqe/error.hpp"

namespace wgvqe {

CMatrix to_complex(const RMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  std::ranges::transform(m.data(), out.data().begin(), [](double v) { return cplx(v, 0.0); });
  return out;
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("hermitian_defect: matrix is not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

void fix_sign(std::span<double> v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

namespace {

double off_diagonal_norm2(const RMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return s;
}

double residual(const RMatrix& a, std::span<const double> v, double lambda) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double av = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) av += a(i, j) * v[j];
    const double d = av - lambda * v[i];
    r2 += d * d;
  }
  return std::sqrt(r2);
}

}  // namespace

std::vector<EigenPair> jacobi_eigensolve(const RMatrix& input, double residual_tol,
                                         int max_sweeps) {
  const std::size_t n = input.rows();
  if (n == 0 || input.cols() != n) throw InvalidArgument("jacobi_eigensolve: matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * std::max(1.0, std::abs(input(i, j))))
        throw InvalidArgument("jacobi_eigensolve: matrix is not symmetric");

  double scale = 0.0;
  for (double x : input.data()) scale = std::max(scale, std::abs(x));
  const double tol = residual_tol * std::max(1.0, scale);

  RMatrix a = input;
  RMatrix v = RMatrix::identity(n);

  const auto worst_residual = [&] {
    double worst = 0.0;
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) col[i] = v(i, k);
      worst = std::max(worst, residual(input, col, a(k, k)));
    }
    return worst;
  };

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    const double off = off_diagonal_norm2(a);
    if (off <= 1e-30 * std::max(1.0, scale * scale)) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  const double res = worst_residual();
  if (res >= tol)
    throw ConvergenceError("jacobi_eigensolve: residual above tolerance after iteration cap", res);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  std::vector<EigenPair> pairs;
  pairs.reserve(n);
  for (std::size_t k : order) {
    EigenPair ep;
    ep.value = a(k, k);
    ep.vector.resize(n);
    for (std::size_t i = 0; i < n; ++i) ep.vector[i] = v(i, k);
    const double nrm = std::sqrt(std::inner_product(ep.vector.begin(), ep.vector.end(),
                                                    ep.vector.begin(), 0.0));
    for (double& x : ep.vector) x /= nrm;
    fix_sign(ep.vector);
    pairs.push_back(std::move(ep));
  }
  return pairs;
}

}  // namespace wgvqe
