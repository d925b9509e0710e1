#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hdridge/estimators.hpp"
#include "hdridge/model.hpp"
#include "hdridge/mp_law.hpp"

namespace hdridge {

// Ordered eigenvalues s_1 >= ... >= s_d of n^-1 X^T X, zeros included when
// d > n (at least d - n of them are exact).
struct SpectralSummary {
  Eigen::VectorXd eigenvalues;  // descending, length d
  int d = 0;
  int n = 0;

  int zero_count() const {
    int count = 0;
    for (Eigen::Index j = eigenvalues.size() - 1; j >= 0 && eigenvalues[j] == 0.0; --j)
      ++count;
    return count;
  }
};

// Eigendecomposition of the smaller Gram matrix (X^T X / n or X X^T / n);
// the two share their nonzero spectrum. Eigenvalues in
// [-1e-10 * s_1, 0) are rounding noise and clamp to zero; anything more
// negative means the solver failed.
inline SpectralSummary spectrum_of(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (n < 1 || d < 1) throw std::domain_error("spectrum: empty design matrix");

  Eigen::MatrixXd gram;
  if (d <= n)
    gram.noalias() = x.transpose() * x / static_cast<double>(n);
  else
    gram.noalias() = x * x.transpose() / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver did not converge");

  Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  const double top = std::max(ev[ev.size() - 1], 0.0);
  const double clamp_floor = -1e-10 * std::max(top, 1e-300);
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    if (ev[j] < clamp_floor)
      throw std::runtime_error("spectrum: eigenvalue " + std::to_string(ev[j]) +
                               " below clamp threshold; solver failure suspected");
    if (ev[j] < 0.0) ev[j] = 0.0;
  }

  SpectralSummary out;
  out.d = d;
  out.n = n;
  out.eigenvalues = Eigen::VectorXd::Zero(d);
  const int m = static_cast<int>(ev.size());
  for (int j = 0; j < m; ++j) out.eigenvalues[j] = ev[m - 1 - j];
  return out;
}

inline SpectralSummary spectrum(const DataSet& data) {
  validate_shapes(data);
  return spectrum_of(data.x);
}

// Single-draw oracle ridge risk functional,
//   tr{(X^T X + d/tau^2 I)^-1} = sum_j 1/(n s_j + d/tau^2),
// whose expectation is the oracle ridge risk. tau = 0 returns 0 (null
// estimator convention); tau = +inf yields tr{(X^T X)^-1} and requires a
// nonsingular spectrum.
inline double exact_ridge_risk(const SpectralSummary& spec, SignalStrength tau) {
  const double t = tau.value();
  if (t == 0.0) return 0.0;
  const double lambda = std::isinf(t) ? 0.0 : spec.d / (t * t);
  if (lambda == 0.0 && spec.eigenvalues[spec.eigenvalues.size() - 1] <= 0.0)
    throw std::domain_error("exact_ridge_risk: singular spectrum with infinite tau");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j)
    sum += 1.0 / (spec.n * spec.eigenvalues[j] + lambda);
  return sum;
}

// Single-draw risk of the ridge estimator at an arbitrary finite parameter t,
//   sum_j (t^4 n s_j + d tau^2) / (t^2 n s_j + d)^2.
// Equals exact_ridge_risk at t = tau, where it is minimized.
inline double general_t_ridge_risk(const SpectralSummary& spec, SignalStrength tau,
                                   RidgeParam t) {
  if (t.kind() == RidgeParam::Kind::infinite)
    throw std::domain_error("general_t_ridge_risk: t must be finite");
  const double tv = t.value();
  const double tau2 = tau.value() * tau.value();
  const double d = static_cast<double>(spec.d);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
    const double ns = spec.n * spec.eigenvalues[j];
    const double denom = tv * tv * ns + d;
    sum += (tv * tv * tv * tv * ns + d * tau2) / (denom * denom);
  }
  return sum;
}

// Exact Kolmogorov distance between the empirical spectral distribution and
// the MP law at ratio d/n: the supremum is attained at an eigenvalue jump,
// comparing both one-sided limits (the MP atom at zero is itself a jump, and
// coincides with an eigenvalue when d > n).
inline double esd_kolmogorov_distance(const SpectralSummary& spec) {
  const AspectRatio rho(static_cast<double>(spec.d) / spec.n);
  const double inv_d = 1.0 / spec.d;
  std::vector<double> sorted(spec.eigenvalues.data(),
                             spec.eigenvalues.data() + spec.eigenvalues.size());
  std::sort(sorted.begin(), sorted.end());

  double sup = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double x = sorted[i];
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == x) ++j;
    const double esd_left = static_cast<double>(i) * inv_d;
    const double esd_right = static_cast<double>(j) * inv_d;
    const double mp_right = mp_cdf(rho, x);
    const double mp_left = (x == 0.0) ? 0.0 : mp_right;  // MP jumps only at 0
    sup = std::max(sup, std::fabs(esd_right - mp_right));
    sup = std::max(sup, std::fabs(esd_left - mp_left));
    i = j;
  }
  return sup;
}

// Single-draw value of the Thm-2 bound on the gap between the oracle ridge
// risk and the spherical minimax risk. s_1 >= ... >= s_(d^n) are the nonzero
// eigenvalues; for d > n the bound involves the n x n companion Gram matrix:
//   d <= n: (1/d)(s_1/s_d) tr{(X^T X + d/tau^2 I_d)^-1}
//   d > n:  (1/n)(s_1/s_n) tr{(X X^T + d/tau^2 I_n)^-1}
//           + 2(d-n)/(tau^2 (n-2)) tr{(X X^T + d/tau^2 I_n)^-2}.
inline double theorem2_gap_bound(const SpectralSummary& spec, SignalStrength tau) {
  if (spec.n <= 2) throw std::domain_error("theorem2_gap_bound: requires n > 2");
  const double t = tau.value();
  if (!(t > 0.0) || std::isinf(t))
    throw std::domain_error("theorem2_gap_bound: requires finite tau > 0");

  const int m = std::min(spec.d, spec.n);
  const double s_top = spec.eigenvalues[0];
  const double s_bottom = spec.eigenvalues[m - 1];  // smallest nonzero index
  if (s_bottom < 1e-12)
    throw std::runtime_error("theorem2_gap_bound: near-singular draw (smallest nonzero "
                             "eigenvalue below 1e-12)");
  const double lambda = spec.d / (t * t);
  const double ratio = s_top / s_bottom;

  if (spec.d <= spec.n) {
    double trace = 0.0;
    for (int j = 0; j < spec.d; ++j)
      trace += 1.0 / (spec.n * spec.eigenvalues[j] + lambda);
    return ratio * trace / spec.d;
  }
  double trace1 = 0.0, trace2 = 0.0;
  for (int j = 0; j < m; ++j) {
    const double denom = spec.n * spec.eigenvalues[j] + lambda;
    trace1 += 1.0 / denom;
    trace2 += 1.0 / (denom * denom);
  }
  return ratio * trace1 / spec.n +
         2.0 * (spec.d - spec.n) / (t * t * (spec.n - 2)) * trace2;
}

}  // namespace hdridge
