#pragma once

// Two-mode zero-mean Gaussian states, in particular two-mode squeezed
// thermal states (STS2).  Quadrature ordering is (x1, p1, x2, p2) and the
// vacuum covariance matrix is I/2.

#include <Eigen/Core>

namespace cvfid {

/// 4x4 covariance matrix of a zero-mean two-mode Gaussian state.  The
/// constructor checks symmetry, positive definiteness and the bona fide
/// condition (smallest symplectic eigenvalue >= 1/2).
class GaussianState2 {
 public:
  explicit GaussianState2(const Eigen::Matrix4d& cm);

  /// cm = 1/2 [[A I, C sz], [C sz, B I]].
  static GaussianState2 from_blocks(double A, double B, double C);
  static GaussianState2 vacuum();

  const Eigen::Matrix4d& cm() const { return cm_; }

  friend bool operator==(const GaussianState2&, const GaussianState2&) = default;

 private:
  Eigen::Matrix4d cm_;
};

/// Energy parametrization: total energy N, squeezed-photon fraction beta and
/// thermal-photon split gamma = n_T1 / (n_T1 + n_T2).
struct EnergyParams2 {
  double N = 0.0;
  double beta = 0.0;
  double gamma = 0.5;
};

struct PhysicalParams2 {
  double n_squeezed = 0.0;  ///< sinh^2 r of the two-mode squeezer
  double n_thermal1 = 0.0;
  double n_thermal2 = 0.0;
};

struct BlockCoefficients {
  double A = 1.0;
  double B = 1.0;
  double C = 0.0;
};

BlockCoefficients sts2_blocks(const EnergyParams2& p);
GaussianState2 sts2_from_energy(const EnergyParams2& p);
PhysicalParams2 physical_from_energy(const EnergyParams2& p);

/// N = 2 n_s + (n_T1 + n_T2)(1 + 2 n_s); beta = 2 n_s / N; gamma = n_T1 / (n_T1 + n_T2).
/// gamma defaults to 1/2 when there are no thermal photons, beta to 0 when N = 0.
EnergyParams2 energy_from_physical(const PhysicalParams2& p);

/// Local symplectic invariants: determinants of the diagonal blocks, of the
/// off-diagonal block and of the whole matrix.
struct SymplecticInvariants {
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
  double I4 = 0.0;
};

SymplecticInvariants symplectic_invariants(const GaussianState2& s);

struct SymplecticPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// Symplectic eigenvalues of the state itself (Delta = I1 + I2 + 2 I3).
SymplecticPair symplectic_eigenvalues(const GaussianState2& s);

/// Symplectic eigenvalues of the partially transposed state
/// (Delta~ = I1 + I2 - 2 I3).
SymplecticPair ppt_symplectic_eigenvalues(const GaussianState2& s);

/// PPT criterion: separable iff d~_- >= 1/2.
bool is_separable(const GaussianState2& s);

/// Whether the state is pure: both symplectic eigenvalues are 1/2 within
/// 1e-13 times the largest covariance entry.
bool is_pure(const GaussianState2& s);

/// Standard two-mode symplectic form (i sigma_y) (+) (i sigma_y).
Eigen::Matrix4d symplectic_form();

/// Intermediate quantities of the two-mode fidelity closed form.
struct Fidelity2Terms {
  double det_sum = 0.0;  ///< det(s1 + s2)
  double E1 = 0.0;
  double E2 = 0.0;
  double X = 0.0;
  double fidelity = 0.0;
};

/// F = (sqrt X + sqrt(X-1))^2 / sqrt(det(s1+s2)), X = 2 sqrt E1 + 2 sqrt E2 + 1/2,
/// E1 = det(O s1 O s2 - I/4) / det(s1+s2),
/// E2 = det(s1 + i O/2) det(s2 + i O/2) / det(s1+s2).
/// For a pure operand the value reduces to 1/sqrt(det(s1+s2)), which is used
/// directly.
Fidelity2Terms fidelity2_terms(const GaussianState2& a, const GaussianState2& b);
double fidelity2(const GaussianState2& a, const GaussianState2& b);

}  // namespace cvfid
