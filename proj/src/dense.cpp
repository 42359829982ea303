#include "kfm/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kfm {

double Matrix::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_; ++j) row += std::fabs((*this)(i, j));
    best = std::max(best, row);
  }
  return best;
}

std::vector<double> Matrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("Matrix::multiply: size mismatch");
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix cholesky_factor(const Matrix& a) {
  const int n = a.size();
  Matrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw std::runtime_error("cholesky: matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

std::vector<double> solve_lower(const Matrix& l, std::vector<double> b) {
  const int n = l.size();
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  return b;
}

std::vector<double> solve_lower_transposed(const Matrix& l, std::vector<double> b) {
  const int n = l.size();
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
  return b;
}

namespace {

double off_diagonal_norm(const Matrix& b) {
  double s = 0.0;
  const int n = b.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += b(i, j) * b(i, j);
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& b) {
  double s = 0.0;
  const int n = b.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += b(i, j) * b(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenResult jacobi_eigensymmetric(Matrix b, double tol, int max_sweeps) {
  const int n = b.size();
  Matrix v(n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;
  if (n == 0) return {};

  const double stop = tol * std::max(1.0, frobenius_norm(b));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(b) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = b(p, q);
        if (apq == 0.0) continue;
        double app = b(p, p), aqq = b(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double bkp = b(k, p), bkq = b(k, q);
          b(k, p) = c * bkp - s * bkq;
          b(k, q) = s * bkp + c * bkq;
        }
        for (int k = 0; k < n; ++k) {
          double bpk = b(p, k), bqk = b(q, k);
          b(p, k) = c * bpk - s * bqk;
          b(q, k) = s * bpk + c * bqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenResult result;
  result.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = b(i, i);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] > diag[j]; });
  result.vectors.assign(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    result.values[k] = diag[order[k]];
    for (int i = 0; i < n; ++i) result.vectors[k][i] = v(i, order[k]);
  }
  return result;
}

double pairwise_sum(std::span<const double> xs) {
  const size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace kfm
