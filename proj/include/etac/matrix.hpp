#pragma once

#include <cstddef>
#include <vector>

namespace etac {

using Vector = std::vector<double>;

/// Dense square matrix, row-major. Sized for the small graphs this
/// toolkit works with (n up to a few hundred).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  bool operator==(const Matrix& other) const = default;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

Vector matvec(const Matrix& m, const Vector& x);

/// x^T M x, accumulated in fixed row-major order.
double quad_form(const Matrix& m, const Vector& x);

/// (M + M^T) / 2
Matrix symmetric_part(const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);

struct JacobiResult {
  Vector eigenvalues;  // sorted ascending
  int sweeps = 0;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Iterates full sweeps until the off-diagonal Frobenius norm drops
/// below `off_tol`; throws EigenConvergenceError if `max_sweeps`
/// sweeps do not get there.
JacobiResult jacobi_eigenvalues(Matrix a, double off_tol = 1e-12, int max_sweeps = 60);

}  // namespace etac
