#pragma once

// Reference values computed independently of the library: textbook photon
// statistics, a quadrature-unit fidelity formula, bisection, series sums.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// |<alpha|beta>|^2 for coherent states.
inline double coherent_overlap(double alpha, double beta) {
  return std::exp(-(alpha - beta) * (alpha - beta));
}

/// Fidelity of thermal states with mean photon numbers n1, n2.
inline double thermal_fidelity(double n1, double n2) {
  const double root = std::sqrt((n1 + 1.0) * (n2 + 1.0)) - std::sqrt(n1 * n2);
  return 1.0 / (root * root);
}

/// Geometric distribution: mean n, variance n^2 + n.
inline double thermal_variance(double n) { return n * n + n; }

/// Photon-number distribution of S(r)|0>, truncated at n_max.
inline std::vector<double> squeezed_vacuum_distribution(double r, int n_max) {
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double t = std::tanh(r);
  // P(2m) = tanh^{2m} r (2m)! / (2^m m!)^2 / cosh r, built by the ratio
  // P(2m+2)/P(2m) = t^2 (2m+1)(2m+2) / (4 (m+1)^2).
  double term = 1.0 / std::cosh(r);
  for (int m = 0; 2 * m <= n_max; ++m) {
    p[2 * m] = term;
    term *= t * t * (2.0 * m + 1.0) * (2.0 * m + 2.0) / (4.0 * (m + 1.0) * (m + 1.0));
  }
  return p;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

inline Moments moments(const std::vector<double>& p) {
  Moments m;
  double second = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    m.mean += n * p[n];
    second += static_cast<double>(n) * n * p[n];
  }
  m.variance = second - m.mean * m.mean;
  return m;
}

/// Single-mode fidelity in units where the vacuum covariance is the identity
/// (V = 2 cm, displacement scaled by sqrt 2):
/// F = 2 / (sqrt(D + d) - sqrt(d)) exp(-1/2 u^T (V1+V2)^{-1} u),
/// D = det(V1 + V2), d = (det V1 - 1)(det V2 - 1).
inline double quadrature_fidelity(const Eigen::Vector2d& mean1, const Eigen::Matrix2d& cm1,
                                  const Eigen::Vector2d& mean2, const Eigen::Matrix2d& cm2) {
  const Eigen::Matrix2d v1 = 2.0 * cm1;
  const Eigen::Matrix2d v2 = 2.0 * cm2;
  const Eigen::Vector2d u = std::sqrt(2.0) * (mean2 - mean1);
  const Eigen::Matrix2d sum = v1 + v2;
  const double big = sum.determinant();
  const double small = std::max(0.0, (v1.determinant() - 1.0) * (v2.determinant() - 1.0));
  const double gauss = std::exp(-0.5 * u.dot(sum.inverse() * u));
  return 2.0 / (std::sqrt(big + small) - std::sqrt(small)) * gauss;
}

/// Root of a monotone function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi,
                     int iterations = 200) {
  const bool increasing = f(hi) > f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// PSSV photon number per mode straight from the coefficients (1 + n) y^n.
inline double pssv_energy_series(double y) {
  double norm = 0.0;
  double energy = 0.0;
  const double q = y * y;
  double qn = 1.0;
  for (int n = 0; n < 100000; ++n) {
    const double w = (1.0 + n) * (1.0 + n) * qn;
    norm += w;
    energy += n * w;
    qn *= q;
    if (w < 1e-22 * norm && n > 10) break;
  }
  return energy / norm;
}

/// sum (1+n)^2 q^n = (1 + q) / (1 - q)^3.
inline double squared_linear_series(double q) { return (1.0 + q) / std::pow(1.0 - q, 3); }

/// Entropy of a single-mode Gaussian state with symplectic eigenvalue d.
inline double gaussian_entropy(double d) {
  if (d <= 0.5) return 0.0;
  return (d + 0.5) * std::log(d + 0.5) - (d - 0.5) * std::log(d - 0.5);
}

/// Non-Gaussianity of the PSSV family for large energy: two symplectic
/// eigenvalues sqrt(3)/2.
inline double pssv_limit_nongaussianity() { return 2.0 * gaussian_entropy(std::sqrt(3.0) / 2.0); }

/// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
