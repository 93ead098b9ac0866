#include "cvfid/gaussian_two.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include <fmt/core.h>

#include "cvfid/errors.hpp"
#include "cvfid/gaussian_single.hpp"

namespace cvfid {

namespace {

constexpr double kBonaFideTol = 1e-10;
constexpr double kSeparableTol = 1e-12;
constexpr double kPureTol = 1e-13;
constexpr double kDiscriminantTol = 1e-10;
constexpr double kXTol = 1e-9;

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(fmt::format("{} must lie in [0,1], got {}", name, v));
  }
}

void check_energy(const EnergyParams2& p) {
  if (!(p.N >= 0.0) || !std::isfinite(p.N)) {
    throw DomainError(fmt::format("total energy N must be >= 0, got {}", p.N));
  }
  check_fraction(p.beta, "beta");
  check_fraction(p.gamma, "gamma");
}

// sqrt((Delta +- sqrt(Delta^2 - 4 I4)) / 2), the minus branch via I4 / nu_+^2.
SymplecticPair eigen_pair(double delta, double i4) {
  double disc = delta * delta - 4.0 * i4;
  if (disc < 0.0) {
    if (disc < -kDiscriminantTol * std::max(1.0, delta * delta)) {
      throw NumericalConsistencyError(
          fmt::format("symplectic discriminant is negative: {:.3g}", disc));
    }
    disc = 0.0;
  }
  const double plus_sq = 0.5 * (delta + std::sqrt(disc));
  if (!(plus_sq > 0.0)) {
    throw NumericalConsistencyError("symplectic eigenvalue is not positive");
  }
  const double minus_sq = std::max(i4, 0.0) / plus_sq;
  return {std::sqrt(plus_sq), std::sqrt(minus_sq)};
}

// Whether the smaller root of t^2 - delta t + i4 is at least 1/4, i.e. nu_- >= 1/2.
// Both roots are >= 1/4 iff their sum is >= 1/2 and the polynomial is >= 0 at
// 1/4.  Unlike nu_- itself this stays well conditioned when nu_+ = nu_-.
// Rounding in delta and i4 grows with the square and fourth power of the
// largest matrix entry, and the tolerances scale the same way.
bool minus_at_least_half(double delta, double i4, double tol, double magnitude) {
  const double m2 = magnitude * magnitude;
  const double margin = 0.25 + 4.0 * i4 - delta;
  return delta >= 0.5 - tol * m2 && margin >= -tol * m2 * m2;
}

double magnitude(const Eigen::Matrix4d& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

// nu_k - 1/2 for both symplectic eigenvalues, read off the Hermitian matrix
// cm^{1/2} (i Omega) cm^{1/2} whose spectrum is +-nu_k.  The absolute error
// is about eps * |cm|, so nearly pure states keep their relative accuracy,
// which the invariants or a 4x4 determinant lose below eps * |cm|^4.
Eigen::Vector2d symplectic_excess(const Eigen::Matrix4d& cm) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(cm);
  const Eigen::Matrix4cd root = es.operatorSqrt().cast<std::complex<double>>();
  const Eigen::Matrix4cd i_omega = std::complex<double>(0.0, 1.0) * symplectic_form().cast<std::complex<double>>();
  const Eigen::Matrix4cd h = root * i_omega * root;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(h, Eigen::EigenvaluesOnly);
  return {std::max(0.0, hs.eigenvalues()(2) - 0.5), std::max(0.0, hs.eigenvalues()(3) - 0.5)};
}

// det(cm + i/2 Omega) = prod_k (nu_k - 1/2)(nu_k + 1/2).
double uncertainty_factor(const Eigen::Matrix4d& cm) {
  const Eigen::Vector2d e = symplectic_excess(cm);
  return e(0) * (e(0) + 1.0) * e(1) * (e(1) + 1.0);
}

}  // namespace

GaussianState2::GaussianState2(const Eigen::Matrix4d& cm) : cm_(cm) {
  if (!cm.allFinite()) throw DomainError("covariance matrix contains non-finite entries");
  const double scale = std::max(1.0, cm.cwiseAbs().maxCoeff());
  if ((cm - cm.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("covariance matrix is not symmetric");
  }
  cm_ = 0.5 * (cm + cm.transpose());
  Eigen::LLT<Eigen::Matrix4d> llt(cm_);
  if (llt.info() != Eigen::Success) {
    throw DomainError("covariance matrix is not positive definite");
  }
  const auto inv = symplectic_invariants(*this);
  if (!minus_at_least_half(inv.I1 + inv.I2 + 2.0 * inv.I3, inv.I4, kBonaFideTol, magnitude(cm_))) {
    const SymplecticPair nu = symplectic_eigenvalues(*this);
    throw DomainError(fmt::format(
        "covariance matrix is not bona fide: smallest symplectic eigenvalue {:.12g} < 1/2",
        nu.minus));
  }
}

GaussianState2 GaussianState2::from_blocks(double A, double B, double C) {
  Eigen::Matrix4d cm = Eigen::Matrix4d::Zero();
  cm(0, 0) = cm(1, 1) = 0.5 * A;
  cm(2, 2) = cm(3, 3) = 0.5 * B;
  cm(0, 2) = cm(2, 0) = 0.5 * C;
  cm(1, 3) = cm(3, 1) = -0.5 * C;
  return GaussianState2(cm);
}

GaussianState2 GaussianState2::vacuum() { return from_blocks(1.0, 1.0, 0.0); }

BlockCoefficients sts2_blocks(const EnergyParams2& p) {
  check_energy(p);
  const double N = p.N;
  const double bN = p.beta * N;
  const double denom = 1.0 + bN;
  BlockCoefficients out;
  out.A = 1.0 + (2.0 * p.gamma * (1.0 - p.beta) * N + bN * (1.0 + N)) / denom;
  out.B = 1.0 + (2.0 * (1.0 - p.gamma) * (1.0 - p.beta) * N + bN * (1.0 + N)) / denom;
  out.C = (1.0 + N) * std::sqrt(bN * (2.0 + bN)) / denom;
  return out;
}

GaussianState2 sts2_from_energy(const EnergyParams2& p) {
  const auto b = sts2_blocks(p);
  return GaussianState2::from_blocks(b.A, b.B, b.C);
}

PhysicalParams2 physical_from_energy(const EnergyParams2& p) {
  check_energy(p);
  PhysicalParams2 out;
  out.n_squeezed = 0.5 * p.beta * p.N;
  const double thermal = (1.0 - p.beta) * p.N / (1.0 + p.beta * p.N);
  out.n_thermal1 = p.gamma * thermal;
  out.n_thermal2 = (1.0 - p.gamma) * thermal;
  return out;
}

EnergyParams2 energy_from_physical(const PhysicalParams2& p) {
  if (!(p.n_squeezed >= 0.0 && p.n_thermal1 >= 0.0 && p.n_thermal2 >= 0.0)) {
    throw DomainError("photon numbers must be >= 0");
  }
  EnergyParams2 out;
  const double thermal = p.n_thermal1 + p.n_thermal2;
  out.N = 2.0 * p.n_squeezed + thermal * (1.0 + 2.0 * p.n_squeezed);
  out.beta = out.N > 0.0 ? 2.0 * p.n_squeezed / out.N : 0.0;
  out.gamma = thermal > 0.0 ? p.n_thermal1 / thermal : 0.5;
  return out;
}

SymplecticInvariants symplectic_invariants(const GaussianState2& s) {
  const Eigen::Matrix4d& cm = s.cm();
  SymplecticInvariants inv;
  inv.I1 = cm.block<2, 2>(0, 0).determinant();
  inv.I2 = cm.block<2, 2>(2, 2).determinant();
  inv.I3 = cm.block<2, 2>(0, 2).determinant();
  inv.I4 = cm.determinant();
  return inv;
}

SymplecticPair symplectic_eigenvalues(const GaussianState2& s) {
  const auto inv = symplectic_invariants(s);
  return eigen_pair(inv.I1 + inv.I2 + 2.0 * inv.I3, inv.I4);
}

SymplecticPair ppt_symplectic_eigenvalues(const GaussianState2& s) {
  const auto inv = symplectic_invariants(s);
  return eigen_pair(inv.I1 + inv.I2 - 2.0 * inv.I3, inv.I4);
}

bool is_separable(const GaussianState2& s) {
  const auto inv = symplectic_invariants(s);
  return minus_at_least_half(inv.I1 + inv.I2 - 2.0 * inv.I3, inv.I4, kSeparableTol, magnitude(s.cm()));
}

bool is_pure(const GaussianState2& s) {
  return symplectic_excess(s.cm()).maxCoeff() <= kPureTol * magnitude(s.cm());
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  return omega;
}

Fidelity2Terms fidelity2_terms(const GaussianState2& a, const GaussianState2& b) {
  Fidelity2Terms t;
  const Eigen::Matrix4d sum = a.cm() + b.cm();
  t.det_sum = sum.determinant();
  if (!(t.det_sum > 0.0)) {
    throw DomainError("sum of covariance matrices is not positive definite");
  }
  if (is_pure(a) || is_pure(b)) {
    // Tr(rho1 rho2) for a pure operand; X = 1 exactly.
    t.X = 1.0;
    t.fidelity = detail::clamp_fidelity(1.0 / std::sqrt(t.det_sum));
    return t;
  }

  const Eigen::Matrix4d omega = symplectic_form();
  const Eigen::Matrix4d m = omega * a.cm() * omega * b.cm() - 0.25 * Eigen::Matrix4d::Identity();
  t.E1 = m.determinant() / t.det_sum;
  if (t.E1 < 0.0) {
    if (t.E1 < -kXTol) {
      throw NumericalConsistencyError(fmt::format("E1 is negative: {:.3g}", t.E1));
    }
    t.E1 = 0.0;
  }
  t.E2 = uncertainty_factor(a.cm()) * uncertainty_factor(b.cm()) / t.det_sum;
  t.X = 2.0 * std::sqrt(t.E1) + 2.0 * std::sqrt(t.E2) + 0.5;
  double excess = t.X - 1.0;
  if (excess < 0.0) {
    if (excess < -kXTol) {
      throw NumericalConsistencyError(fmt::format("X = {:.12g} is below 1", t.X));
    }
    excess = 0.0;
  }
  const double root = std::sqrt(t.X) + std::sqrt(excess);
  t.fidelity = detail::clamp_fidelity(root * root / std::sqrt(t.det_sum));
  return t;
}

double fidelity2(const GaussianState2& a, const GaussianState2& b) {
  return fidelity2_terms(a, b).fidelity;
}

}  // namespace cvfid
