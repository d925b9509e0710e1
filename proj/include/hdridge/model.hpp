#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "hdridge/mp_law.hpp"
#include "hdridge/rng.hpp"

namespace hdridge {

// One simulation regime: y = X beta + eps with X (n x d) standard Gaussian,
// eps standard Gaussian, ||beta|| = tau.
struct ModelConfig {
  ModelConfig(int d_, int n_, SignalStrength tau_, std::uint64_t seed_)
      : d(d_), n(n_), tau(tau_), seed(seed_) {
    if (d < 1 || n < 1)
      throw std::domain_error("ModelConfig: d and n must be positive");
  }

  int d;
  int n;
  SignalStrength tau;
  std::uint64_t seed;

  double aspect_ratio() const { return static_cast<double>(d) / n; }
};

// Immutable after construction; row i of x is the i-th observation.
struct DataSet {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::optional<Eigen::VectorXd> beta_true;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index d() const { return x.cols(); }
};

inline void validate_shapes(const DataSet& data) {
  if (data.y.size() != data.x.rows())
    throw std::domain_error("DataSet: y length must match row count of x");
  if (data.beta_true && data.beta_true->size() != data.x.cols())
    throw std::domain_error("DataSet: beta_true length must match column count of x");
}

struct SphereSample {
  Eigen::VectorXd beta;
  double tau;
};

// Uniform draw from the sphere of radius tau: beta = tau * z / ||z|| with z
// standard Gaussian. Always consumes exactly d normal variates.
inline SphereSample sample_sphere(int d, SignalStrength tau, RngStream& rng) {
  if (d < 1) throw std::domain_error("sample_sphere: d must be positive");
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z[i] = rng.standard_normal();
  const double norm = z.norm();
  if (norm == 0.0) throw std::runtime_error("sample_sphere: degenerate Gaussian draw");
  SphereSample out;
  out.tau = tau.value();
  out.beta = (out.tau / norm) * z;
  return out;
}

// Draws X and eps and forms y = X beta + eps. Draw order is part of the
// reproducibility contract: X row by row (each row left to right), then eps.
inline DataSet generate(const ModelConfig& config, const Eigen::VectorXd& beta,
                        RngStream& rng) {
  if (beta.size() != config.d)
    throw std::domain_error("generate: beta length does not match config.d");
  if (!beta.allFinite())
    throw std::domain_error("generate: beta must be finite");
  DataSet data;
  data.x.resize(config.n, config.d);
  for (int i = 0; i < config.n; ++i)
    for (int j = 0; j < config.d; ++j) data.x(i, j) = rng.standard_normal();
  Eigen::VectorXd eps(config.n);
  for (int i = 0; i < config.n; ++i) eps[i] = rng.standard_normal();
  data.y = data.x * beta + eps;
  data.beta_true = beta;
  return data;
}

}  // namespace hdridge
