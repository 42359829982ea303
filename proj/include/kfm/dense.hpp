#ifndef KFM_DENSE_HPP
#define KFM_DENSE_HPP

#include <span>
#include <vector>

namespace kfm {

/// Dense square matrix, row-major. Small problems only.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  double inf_norm() const;
  std::vector<double> multiply(const std::vector<double>& x) const;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Lower Cholesky factor of an SPD matrix; throws std::runtime_error on breakdown.
Matrix cholesky_factor(const Matrix& a);

/// Solves L y = b (lower triangular).
std::vector<double> solve_lower(const Matrix& l, std::vector<double> b);

/// Solves L^T y = b.
std::vector<double> solve_lower_transposed(const Matrix& l, std::vector<double> b);

struct EigenResult {
  std::vector<double> values;               // descending
  std::vector<std::vector<double>> vectors; // orthonormal, vectors[k] pairs with values[k]
};

/** Cyclic Jacobi diagonalization of a symmetric matrix. Sweeps until the
 *  off-diagonal Frobenius norm drops below tol * max(1, ||B||_F). */
EigenResult jacobi_eigensymmetric(Matrix b, double tol = 1e-13, int max_sweeps = 64);

/// Deterministic pairwise summation (fixed reduction tree).
double pairwise_sum(std::span<const double> xs);

}  // namespace kfm

#endif
