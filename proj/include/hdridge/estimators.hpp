#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "hdridge/model.hpp"

namespace hdridge {

// Ridge parameter t in [0, inf]. t is the signal scale of the paper's
// parameterization, with penalty lambda = d/t^2; t = 0 selects the null
// estimator and t = inf the OLS estimator.
class RidgeParam {
 public:
  enum class Kind { zero, finite, infinite };

  static RidgeParam zero() { return RidgeParam(Kind::zero, 0.0); }
  static RidgeParam infinite() {
    return RidgeParam(Kind::infinite, std::numeric_limits<double>::infinity());
  }
  static RidgeParam finite(double t) {
    if (!(std::isfinite(t) && t > 0.0))
      throw std::domain_error("RidgeParam::finite: t must be finite and positive");
    return RidgeParam(Kind::finite, t);
  }
  // Maps 0 and +inf onto their first-class kinds.
  static RidgeParam from_value(double t) {
    if (std::isnan(t) || t < 0.0)
      throw std::domain_error("RidgeParam: t must lie in [0, inf]");
    if (t == 0.0) return zero();
    if (std::isinf(t)) return infinite();
    return finite(t);
  }

  Kind kind() const { return kind_; }
  double value() const { return t_; }

 private:
  RidgeParam(Kind kind, double t) : kind_(kind), t_(t) {}
  Kind kind_;
  double t_;
};

inline double lambda_from_t(double t, int d) { return d / (t * t); }
inline double t_from_lambda(double lambda, int d) { return std::sqrt(d / lambda); }

struct EstimatorId {
  enum class Kind { ridge, ols, null_estimator, adaptive_ridge };

  static EstimatorId ridge(RidgeParam t) { return {Kind::ridge, t.value()}; }
  static EstimatorId ols() { return {Kind::ols, 0.0}; }
  static EstimatorId null_estimator() { return {Kind::null_estimator, 0.0}; }
  static EstimatorId adaptive_ridge() { return {Kind::adaptive_ridge, 0.0}; }

  Kind kind;
  double t;  // meaningful for Kind::ridge only

  std::string name() const {
    switch (kind) {
      case Kind::ridge: return "ridge";
      case Kind::ols: return "ols";
      case Kind::null_estimator: return "null";
      case Kind::adaptive_ridge: return "adaptive_ridge";
    }
    return "?";
  }
};

struct Estimate {
  Eigen::VectorXd beta_hat;
  EstimatorId id;
  std::optional<double> tau_hat;  // present for the adaptive ridge
};

namespace detail {

inline void require_finite(const DataSet& data) {
  if (!data.x.allFinite() || !data.y.allFinite())
    throw std::domain_error("estimator: dataset contains non-finite entries");
}

// Minimum-norm least squares via SVD; singular values below
// max(d,n) * eps * sigma_max count as zero.
inline Eigen::VectorXd pseudo_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(static_cast<double>(std::max(x.rows(), x.cols())) *
                   std::numeric_limits<double>::epsilon());
  return svd.solve(y);
}

// Solves (X^T X + lambda I) beta = X^T y through the Gram matrix of the
// smaller side: for d > n the dual identity
// (X^T X + lambda I)^-1 X^T = X^T (X X^T + lambda I)^-1 keeps the solve at
// O(min(d,n)^3).
inline Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                   double lambda) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (d <= n) {
    Eigen::MatrixXd a = x.transpose() * x;
    a.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return llt.solve(x.transpose() * y);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("ridge: SPD solve failed");
    return ldlt.solve(x.transpose() * y);
  }
  Eigen::MatrixXd b = x * x.transpose();
  b.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() == Eigen::Success) return x.transpose() * llt.solve(y);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(b);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("ridge: SPD solve failed");
  return x.transpose() * ldlt.solve(y);
}

}  // namespace detail

inline Estimate null_estimate(int d) {
  if (d < 1) throw std::domain_error("null_estimate: d must be positive");
  return {Eigen::VectorXd::Zero(d), EstimatorId::null_estimator(), std::nullopt};
}

inline Estimate ols(const DataSet& data) {
  validate_shapes(data);
  detail::require_finite(data);
  return {detail::pseudo_solve(data.x, data.y), EstimatorId::ols(), std::nullopt};
}

// beta_hat_r(t) = (X^T X + d/t^2 I)^-1 X^T y, with beta_hat_r(0) = 0 and
// beta_hat_r(inf) = OLS (Moore-Penrose when X^T X is singular).
inline Estimate ridge(const DataSet& data, RidgeParam t) {
  validate_shapes(data);
  detail::require_finite(data);
  const int d = static_cast<int>(data.d());
  switch (t.kind()) {
    case RidgeParam::Kind::zero:
      return {Eigen::VectorXd::Zero(d), EstimatorId::ridge(t), std::nullopt};
    case RidgeParam::Kind::infinite:
      return {detail::pseudo_solve(data.x, data.y), EstimatorId::ridge(t), std::nullopt};
    case RidgeParam::Kind::finite:
      break;
  }
  const double lambda = lambda_from_t(t.value(), d);
  return {detail::ridge_solve(data.x, data.y, lambda), EstimatorId::ridge(t), std::nullopt};
}

// tau_hat^2 = max(||y||^2/n - 1, 0).
inline double adaptive_tau_squared(const DataSet& data) {
  validate_shapes(data);
  if (data.n() < 1) throw std::domain_error("adaptive_tau_squared: empty dataset");
  return std::max(data.y.squaredNorm() / static_cast<double>(data.n()) - 1.0, 0.0);
}

// Adaptive ridge: plug tau_hat into the ridge estimator (t = 0 convention
// when tau_hat = 0).
inline Estimate adaptive_ridge(const DataSet& data) {
  const double tau_sq = adaptive_tau_squared(data);
  const double tau_hat = std::sqrt(tau_sq);
  Estimate est = ridge(data, RidgeParam::from_value(tau_hat));
  est.id = EstimatorId::adaptive_ridge();
  est.tau_hat = tau_hat;
  return est;
}

// Max-abs deviation from orthogonal equivariance, Def. of
// beta_hat(y, XU) = U^T beta_hat(y, X). u must satisfy U^T U = I to 1e-12.
template <typename Estimator>
double check_equivariance(Estimator&& estimator, const DataSet& data,
                          const Eigen::MatrixXd& u) {
  const Eigen::Index d = data.d();
  if (u.rows() != d || u.cols() != d)
    throw std::domain_error("check_equivariance: u must be d x d");
  const double ortho_dev =
      (u.transpose() * u - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (ortho_dev > 1e-12)
    throw std::domain_error("check_equivariance: u is not orthogonal");

  DataSet rotated{data.x * u, data.y, std::nullopt};
  const Eigen::VectorXd lhs = estimator(rotated).beta_hat;
  const Eigen::VectorXd rhs = u.transpose() * estimator(data).beta_hat;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace hdridge
