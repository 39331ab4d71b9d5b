#include "etac/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "etac/errors.hpp"

namespace etac {

Vector matvec(const Matrix& m, const Vector& x) {
  const int n = m.size();
  Vector y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double quad_form(const Matrix& m, const Vector& x) {
  const int n = m.size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += m(i, j) * x[j];
    acc += x[i] * row;
  }
  return acc;
}

Matrix symmetric_part(const Matrix& m) {
  const int n = m.size();
  Matrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  const int n = a.size();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double dot(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

namespace {

double off_diagonal_norm(const Matrix& a) {
  const int n = a.size();
  double acc = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q) acc += a(p, q) * a(p, q);
  return std::sqrt(acc);
}

}  // namespace

JacobiResult jacobi_eigenvalues(Matrix a, double off_tol, int max_sweeps) {
  const int n = a.size();
  JacobiResult result;
  if (n == 1) {
    result.eigenvalues = {a(0, 0)};
    return result;
  }

  int sweep = 0;
  while (off_diagonal_norm(a) > off_tol) {
    if (sweep >= max_sweeps) {
      std::ostringstream msg;
      msg << "jacobi eigenvalue iteration did not reach off-diagonal norm " << off_tol
          << " in " << max_sweeps << " sweeps (residual " << off_diagonal_norm(a) << ")";
      throw EigenConvergenceError(msg.str());
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double sign = theta < 0.0 ? -1.0 : 1.0;
        const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = arp - s * (arq + tau * arp);
          a(p, r) = a(r, p);
          a(r, q) = arq + s * (arp - tau * arq);
          a(q, r) = a(r, q);
        }
      }
    }
    ++sweep;
  }

  result.sweeps = sweep;
  result.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) result.eigenvalues[i] = a(i, i);
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end());
  return result;
}

}  // namespace etac
