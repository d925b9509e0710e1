#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hdridge {

inline constexpr double kPi = 3.14159265358979323846;

// Limiting aspect ratio rho = lim d/n, finite and positive. The extended
// endpoints 0 and infinity are meaningful only for asymptotic risk limits and
// live in RhoLimit instead, which keeps the domain of the MP distribution
// functions honest.
class AspectRatio {
 public:
  explicit AspectRatio(double rho) : rho_(rho) {
    if (!(std::isfinite(rho) && rho > 0.0))
      throw std::domain_error("AspectRatio: rho must be finite and positive");
  }
  double value() const { return rho_; }

 private:
  double rho_;
};

class RhoLimit {
 public:
  enum class Kind { zero, finite, infinity };

  static RhoLimit zero() { return RhoLimit(Kind::zero, 0.0); }
  static RhoLimit infinity() {
    return RhoLimit(Kind::infinity, std::numeric_limits<double>::infinity());
  }
  static RhoLimit finite(double rho) {
    return RhoLimit(Kind::finite, AspectRatio(rho).value());
  }

  Kind kind() const { return kind_; }
  double value() const {
    if (kind_ != Kind::finite)
      throw std::domain_error("RhoLimit: value() requires a finite ratio");
    return rho_;
  }

 private:
  RhoLimit(Kind kind, double rho) : kind_(kind), rho_(rho) {}
  Kind kind_;
  double rho_;
};

// Signal strength tau = ||beta||, the sphere radius. +infinity is accepted
// (it selects the no-shrinkage limit where a consumer defines one).
class SignalStrength {
 public:
  explicit SignalStrength(double tau) : tau_(tau) {
    if (std::isnan(tau) || tau < 0.0)
      throw std::domain_error("SignalStrength: tau must be nonnegative");
  }
  double value() const { return tau_; }

 private:
  double tau_;
};

// Support of the MP law: continuous density on (a,b) with
// a = (1-sqrt(rho))^2, b = (1+sqrt(rho))^2, plus an atom at zero of mass
// max(1-1/rho, 0) when rho > 1.
struct MPSupport {
  double a = 0.0;
  double b = 0.0;
  double point_mass_at_zero = 0.0;
};

inline MPSupport mp_support(AspectRatio rho) {
  const double r = rho.value();
  const double sq = std::sqrt(r);
  MPSupport s;
  s.a = (1.0 - sq) * (1.0 - sq);
  s.b = (1.0 + sq) * (1.0 + sq);
  s.point_mass_at_zero = std::max(1.0 - 1.0 / r, 0.0);
  return s;
}

// Continuous part of the MP density,
//   f_rho(z) = sqrt((b-z)(z-a)) / (2 pi rho z)   for z in (a,b), else 0.
// The atom at zero is reported separately through MPSupport.
inline double mp_density(AspectRatio rho, double z) {
  if (!std::isfinite(z)) throw std::domain_error("mp_density: z must be finite");
  const MPSupport s = mp_support(rho);
  if (z <= s.a || z >= s.b) return 0.0;
  return std::sqrt((s.b - z) * (z - s.a)) / (2.0 * kPi * rho.value() * z);
}

// MP cumulative distribution function including the atom at zero.
//
// Closed form: substituting z = 1 + rho - 2 sqrt(rho) cos(phi), phi in
// [0, pi], the partial mass of the continuous part integrates to
//   (1/pi) [ sin(phi)/sqrt(rho) + (1+rho)/(2 rho) phi ]
//   - (|1-rho|/(pi rho)) atan( (1+sqrt(rho))/|1-sqrt(rho)| * tan(phi/2) ),
// with the arctangent term dropping out at rho = 1.
inline double mp_cdf(AspectRatio rho, double s) {
  if (std::isnan(s)) throw std::domain_error("mp_cdf: s must not be NaN");
  const double r = rho.value();
  const MPSupport sup = mp_support(rho);
  if (s < 0.0) return 0.0;
  if (s <= sup.a) return sup.point_mass_at_zero;
  if (s >= sup.b) return 1.0;

  const double sqr = std::sqrt(r);
  const double cosphi = std::min(1.0, std::max(-1.0, (1.0 + r - s) / (2.0 * sqr)));
  const double phi = std::acos(cosphi);

  double cont;
  if (r == 1.0) {
    cont = (std::sin(phi) + phi) / kPi;
  } else {
    cont = (std::sin(phi) / sqr + (1.0 + r) / (2.0 * r) * phi) / kPi;
    const double slope = (1.0 + sqr) / std::fabs(1.0 - sqr);
    cont -= std::fabs(1.0 - r) / (kPi * r) * std::atan(slope * std::tan(phi / 2.0));
  }
  return std::min(sup.point_mass_at_zero + cont, 1.0);
}

// Stieltjes transform of the MP law for s < 0:
//   m_rho(s) = -(1/(2 rho s)) { s + rho - 1 + sqrt((s + rho - 1)^2 - 4 rho s) }.
// The discriminant is (s+rho-1)^2 + 4 rho |s| > 0, and when s + rho - 1 < 0
// the outer sum is rewritten as -4 rho s / (sqrt(disc) - (s+rho-1)) to avoid
// cancellation.
inline double mp_stieltjes(AspectRatio rho, double s) {
  if (!(std::isfinite(s) && s < 0.0))
    throw std::domain_error("mp_stieltjes: s must be finite and negative");
  const double r = rho.value();
  const double u = s + r - 1.0;
  const double disc = std::max(u * u - 4.0 * r * s, 0.0);
  const double root = std::sqrt(disc);
  const double sum = (u >= 0.0) ? u + root : (-4.0 * r * s) / (root - u);
  return -sum / (2.0 * r * s);
}

// Asymptotic risk of the oracle ridge estimator when d/n -> rho:
//   R_r(tau, rho) = (1/(2 rho)) [ tau^2 (rho-1) - rho
//                                 + sqrt({tau^2 (rho-1) - rho}^2 + 4 rho^2 tau^2) ],
// extended continuously by R_r(tau, 0) = 0 and R_r(tau, inf) = tau^2.
// Equals rho * m_rho(-rho/tau^2) for tau > 0. Cancellation when the bracket
// is negative is avoided the same way as in mp_stieltjes.
inline double asymptotic_risk(SignalStrength tau, RhoLimit rho) {
  const double t = tau.value();
  if (!std::isfinite(t))
    throw std::domain_error("asymptotic_risk: tau must be finite");
  switch (rho.kind()) {
    case RhoLimit::Kind::zero:
      return 0.0;
    case RhoLimit::Kind::infinity:
      return t * t;
    case RhoLimit::Kind::finite:
      break;
  }
  const double r = rho.value();
  const double x = t * t * (r - 1.0) - r;
  const double y = 2.0 * r * t;
  const double root = std::hypot(x, y);
  const double sum = (x >= 0.0) ? x + root : (y * y) / (root - x);
  return sum / (2.0 * r);
}

// Low-dimensional (d/n -> 0) asymptotic risk R_r^0(tau, rho) = rho tau^2 / (rho + tau^2),
// with the conventions R_r^0(0,0) = 0 and R_r^0(inf, rho) = rho.
inline double asymptotic_risk_low_dim(SignalStrength tau, double rho) {
  if (!(std::isfinite(rho) && rho >= 0.0))
    throw std::domain_error("asymptotic_risk_low_dim: rho must be finite and nonnegative");
  const double t = tau.value();
  if (std::isinf(t)) return rho;
  if (t == 0.0) return 0.0;
  return rho * t * t / (rho + t * t);
}

}  // namespace hdridge
