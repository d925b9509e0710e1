#pragma once

// Hand-rolled reference computations for the linear-algebra tests. These stay
// deliberately naive (adjugate formulas, Gauss-Jordan elimination) so they
// share no code path with the library.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "hdridge/rng.hpp"

namespace hdridge::test {

// 2x2 ridge solve by explicit adjugate inverse of X^T X + lambda I.
inline Eigen::Vector2d ridge_2x2_adjugate(const Eigen::MatrixXd& x,
                                          const Eigen::VectorXd& y, double lambda) {
  if (x.cols() != 2) throw std::invalid_argument("ridge_2x2_adjugate: need d = 2");
  double a11 = lambda, a12 = 0.0, a22 = lambda;
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    a11 += x(i, 0) * x(i, 0);
    a12 += x(i, 0) * x(i, 1);
    a22 += x(i, 1) * x(i, 1);
    b[0] += x(i, 0) * y[i];
    b[1] += x(i, 1) * y[i];
  }
  const double det = a11 * a22 - a12 * a12;
  return Eigen::Vector2d((a22 * b[0] - a12 * b[1]) / det,
                         (-a12 * b[0] + a11 * b[1]) / det);
}

// Dense inverse by Gauss-Jordan elimination with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
  const Eigen::Index m = a.rows();
  if (a.cols() != m) throw std::invalid_argument("gauss_jordan_inverse: need square");
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index col = 0; col < m; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < m; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0)
      throw std::invalid_argument("gauss_jordan_inverse: singular matrix");
    a.row(col).swap(a.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    const double scale = a(col, col);
    a.row(col) /= scale;
    inv.row(col) /= scale;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (r == col) continue;
      const double factor = a(r, col);
      if (factor != 0.0) {
        a.row(r) -= factor * a.row(col);
        inv.row(r) -= factor * inv.row(col);
      }
    }
  }
  return inv;
}

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
// convention fixed by the diagonal of R.
inline Eigen::MatrixXd haar_orthogonal(int d, RngStream& rng) {
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.standard_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace hdridge::test
