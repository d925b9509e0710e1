#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hdridge {

// Pairwise (cascade) summation: the reduction tree depends only on the length
// of the input, so aggregates are reproducible no matter how the values were
// produced or scheduled.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct MeanStdError {
  double mean = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double sample_sd = std::numeric_limits<double>::quiet_NaN();
};

// Sample mean with standard error sd/sqrt(n). std_error is defined only for
// n >= 2; a single observation yields NaN spread fields.
inline MeanStdError mean_and_std_error(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_and_std_error: empty sample");
  MeanStdError out;
  out.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = xs[i] - out.mean;
    sq[i] = c * c;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
  out.sample_sd = std::sqrt(var);
  out.std_error = out.sample_sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

struct LineFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

// Least-squares slope of log(value) against log(n). Returns NaN when any
// value is non-positive (log undefined; happens e.g. for identically-zero
// gaps at tau = 0).
inline double fitted_loglog_slope(std::span<const double> n, std::span<const double> value) {
  std::vector<double> lx(n.size()), ly(value.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(value[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    lx[i] = std::log(n[i]);
    ly[i] = std::log(value[i]);
  }
  return fit_line(lx, ly).slope;
}

// Shortest round-trip decimal representation ("inf"/"nan" spelled out).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

// Runs fn(i) for i in [0, count) over a fixed block partition. Results must
// be written to caller-owned per-index storage; the partition does not affect
// them. The lowest-index exception wins so failures are deterministic too.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (count <= 0) return;
  threads = std::max(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        break;
      }
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      const int begin = static_cast<int>(static_cast<long long>(count) * t / threads);
      const int end = static_cast<int>(static_cast<long long>(count) * (t + 1) / threads);
      pool.emplace_back([&, begin, end] {
        for (int i = begin; i < end; ++i) {
          try {
            fn(i);
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail
}  // namespace hdridge
