#include "cvfid/gaussian_single.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "cvfid/errors.hpp"

namespace cvfid {

namespace {

constexpr double kUncertaintyTol = 1e-12;
constexpr double kPureTol = 1e-12;
constexpr double kClassicalTol = 1e-12;
constexpr double kFidelityOvershootTol = 1e-8;

}  // namespace

GaussianState1::GaussianState1(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cm)
    : mean_(mean), cm_(cm) {
  if (!mean.allFinite() || !cm.allFinite()) {
    throw DomainError("covariance matrix or mean contains non-finite entries");
  }
  const double scale = std::max(1.0, cm.cwiseAbs().maxCoeff());
  if (std::abs(cm(0, 1) - cm(1, 0)) > 1e-12 * scale) {
    throw DomainError("covariance matrix is not symmetric");
  }
  cm_(1, 0) = cm_(0, 1);
  if (cm_(0, 0) <= 0.0 || cm_.determinant() <= 0.0) {
    throw DomainError("covariance matrix is not positive definite");
  }
  if (cm_.determinant() < 0.25 - kUncertaintyTol) {
    throw DomainError(
        fmt::format("covariance matrix violates the uncertainty relation: det = {:.12g} < 1/4",
                    cm_.determinant()));
  }
}

GaussianState1 GaussianState1::vacuum() {
  return GaussianState1(Eigen::Vector2d::Zero(), 0.5 * Eigen::Matrix2d::Identity());
}

GaussianState1 dsts1_from_physical(const Dsts1Params& p) {
  if (!(p.n_thermal >= 0.0)) {
    throw DomainError(fmt::format("thermal photon number must be >= 0, got {}", p.n_thermal));
  }
  const double nu = p.n_thermal + 0.5;
  Eigen::Matrix2d cm = Eigen::Matrix2d::Zero();
  cm(0, 0) = nu * std::exp(2.0 * p.r);
  cm(1, 1) = nu * std::exp(-2.0 * p.r);
  return GaussianState1(Eigen::Vector2d(std::sqrt(2.0) * p.x, 0.0), cm);
}

PhysicalParams1 energy_to_physical(const EnergyParams1& p) {
  if (!(p.N >= 0.0)) {
    throw DomainError(fmt::format("kernel energy N must be >= 0, got {}", p.N));
  }
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) {
    throw DomainError(fmt::format("squeezing fraction beta must lie in [0,1], got {}", p.beta));
  }
  PhysicalParams1 out;
  out.n_squeezed = p.beta * p.N;
  out.n_thermal = (1.0 - p.beta) * p.N / (1.0 + 2.0 * p.beta * p.N);
  out.r = -std::asinh(std::sqrt(out.n_squeezed));
  return out;
}

EnergyParams1 physical_to_energy(double n_thermal, double n_squeezed, double x) {
  if (!(n_thermal >= 0.0) || !(n_squeezed >= 0.0)) {
    throw DomainError("photon numbers must be >= 0");
  }
  EnergyParams1 out;
  out.N = n_thermal + n_squeezed + 2.0 * n_thermal * n_squeezed;
  out.beta = out.N > 0.0 ? n_squeezed / out.N : 0.0;
  out.x = x;
  return out;
}

Dsts1Params dsts1_params(const EnergyParams1& p) {
  const auto phys = energy_to_physical(p);
  return {p.x, phys.r, phys.n_thermal};
}

GaussianState1 dsts1_from_energy(const EnergyParams1& p) {
  return dsts1_from_physical(dsts1_params(p));
}

double mean_photon(const GaussianState1& s) {
  return 0.5 * s.cm().trace() - 0.5 + 0.5 * s.mean().squaredNorm();
}

double photon_variance(const GaussianState1& s) {
  const Eigen::Matrix2d& cm = s.cm();
  return 0.5 * (cm * cm).trace() - 0.25 + s.mean().dot(cm * s.mean());
}

double fano_factor(const GaussianState1& s) {
  const double n = mean_photon(s);
  if (n <= 1e-14) {
    throw UndefinedQuantityError("Fano factor is undefined for zero mean photon number");
  }
  return photon_variance(s) / n;
}

bool is_sub_poissonian(const GaussianState1& s) { return fano_factor(s) < 1.0; }

bool is_classical(const GaussianState1& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s.cm(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= 0.5 - kClassicalTol;
}

namespace detail {

double clamp_fidelity(double f) {
  if (!std::isfinite(f)) {
    throw NumericalConsistencyError("fidelity evaluated to a non-finite value");
  }
  if (f > 1.0) {
    if (f - 1.0 > kFidelityOvershootTol) {
      throw NumericalConsistencyError(
          fmt::format("fidelity exceeds 1 by {:.3g}, beyond rounding tolerance", f - 1.0));
    }
    return 1.0;
  }
  return std::max(f, 0.0);
}

}  // namespace detail

double fidelity1(const GaussianState1& a, const GaussianState1& b) {
  const Eigen::Matrix2d sum = a.cm() + b.cm();
  const double det_sum = sum.determinant();
  if (!(sum(0, 0) > 0.0 && det_sum > 0.0)) {
    throw DomainError("sum of covariance matrices is not positive definite");
  }
  auto mixedness = [](const GaussianState1& s) {
    const double m = s.cm().determinant() - 0.25;
    return std::abs(m) < kPureTol ? 0.0 : std::max(m, 0.0);
  };
  const double delta = 4.0 * mixedness(a) * mixedness(b);
  const Eigen::Vector2d d = a.mean() - b.mean();
  const double exponent = -0.5 * d.dot(sum.inverse() * d);
  // 1/(sqrt(D+d) - sqrt(d)) rewritten without the subtraction.
  const double f = std::exp(exponent) * (std::sqrt(det_sum + delta) + std::sqrt(delta)) / det_sum;
  return detail::clamp_fidelity(f);
}

double bures_distance(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw DomainError(fmt::format("fidelity must lie in [0,1], got {}", fidelity));
  }
  return std::sqrt(2.0 * (1.0 - std::sqrt(fidelity)));
}

TraceDistanceBounds trace_distance_bounds(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw DomainError(fmt::format("fidelity must lie in [0,1], got {}", fidelity));
  }
  return {1.0 - std::sqrt(fidelity), std::sqrt(1.0 - fidelity)};
}

}  // namespace cvfid
