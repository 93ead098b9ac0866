#pragma once

// Single-mode displaced squeezed thermal states (DSTS1).
//
// Conventions: quadratures x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
// so the vacuum covariance matrix is diag(1/2, 1/2) and a real displacement
// amplitude x gives the mean vector (sqrt(2) x, 0).

#include <Eigen/Core>

namespace cvfid {

/// Mean vector and covariance matrix of a single-mode Gaussian state.
/// The constructor enforces symmetry, positive definiteness and the
/// uncertainty relation det(cm) >= 1/4.
class GaussianState1 {
 public:
  GaussianState1(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cm);

  const Eigen::Vector2d& mean() const { return mean_; }
  const Eigen::Matrix2d& cm() const { return cm_; }

  static GaussianState1 vacuum();

  friend bool operator==(const GaussianState1&, const GaussianState1&) = default;

 private:
  Eigen::Vector2d mean_;
  Eigen::Matrix2d cm_;
};

/// Physical parameters of rho(x, r, n_T) = D(x) S(r) nu_th(n_T) S^dag(r) D^dag(x)
/// with S(r) = exp(r (a^dag^2 - a^2)/2) and D(x) = exp(x (a^dag - a)).
struct Dsts1Params {
  double x = 0.0;
  double r = 0.0;
  double n_thermal = 0.0;
};

/// Energy parametrization: kernel photon number N, squeezing fraction beta
/// and displacement x.
struct EnergyParams1 {
  double N = 0.0;
  double beta = 0.0;
  double x = 0.0;
};

struct PhysicalParams1 {
  double n_thermal = 0.0;
  double n_squeezed = 0.0;
  double r = 0.0;
};

GaussianState1 dsts1_from_physical(const Dsts1Params& p);

/// n_T = (1-beta) N / (1 + 2 beta N), n_S = beta N.
///
/// The squeezing parameter is returned as r = -arcsinh(sqrt(n_S)), i.e. the
/// state is squeezed along the displacement quadrature.  With r >= 0 and a
/// real displacement every member of the family is super-Poissonian.
PhysicalParams1 energy_to_physical(const EnergyParams1& p);

/// Inverse of energy_to_physical for the kernel: (n_T, n_S) -> (N, beta).
/// beta is reported as 0 when N = 0.
EnergyParams1 physical_to_energy(double n_thermal, double n_squeezed, double x = 0.0);

/// Full DSTS1 parameters for the energy parametrization.
Dsts1Params dsts1_params(const EnergyParams1& p);
GaussianState1 dsts1_from_energy(const EnergyParams1& p);

/// <a^dag a> = (cm11 + cm22)/2 - 1/2 + |mean|^2 / 2.
double mean_photon(const GaussianState1& s);

/// Var(n) = Tr(cm^2)/2 - 1/4 + mean^T cm mean.
double photon_variance(const GaussianState1& s);

/// Var(n) / <n>.  Throws UndefinedQuantityError for the vacuum.
double fano_factor(const GaussianState1& s);

bool is_sub_poissonian(const GaussianState1& s);

/// A Gaussian P-function is regular iff cm dominates the vacuum covariance,
/// i.e. the smallest eigenvalue of cm is at least 1/2 (boundary inclusive).
bool is_classical(const GaussianState1& s);

/// Uhlmann fidelity between two single-mode Gaussian states:
///   F = exp(-d^T (s1+s2)^{-1} d / 2) / (sqrt(Delta + delta) - sqrt(delta)),
/// Delta = det(s1+s2), delta = 4 prod_k (det s_k - 1/4), d = mean1 - mean2.
double fidelity1(const GaussianState1& a, const GaussianState1& b);

/// sqrt(2 (1 - sqrt(F))).
double bures_distance(double fidelity);

struct TraceDistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// 1 - sqrt(F) <= D_tr <= sqrt(1 - F).
TraceDistanceBounds trace_distance_bounds(double fidelity);

namespace detail {
/// Clamp a fidelity that overshoots 1 by rounding; larger excess is an error.
double clamp_fidelity(double f);
}  // namespace detail

}  // namespace cvfid
