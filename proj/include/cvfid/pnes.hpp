#pragma once

// Photon-number entangled states |psi>> = sum_n psi_n |n, n>> with real
// coefficients: twin beams (TWB), photon-subtracted squeezed vacua (PSSV)
// and arbitrary user-supplied sequences.

#include <optional>
#include <string_view>
#include <vector>

namespace cvfid {

enum class PnesVariant { TWB, PSSV, Custom };

std::string_view to_string(PnesVariant v);
PnesVariant parse_pnes_variant(std::string_view name);

/// Coefficients psi_0..psi_nmax of a photon-number entangled state.
/// TWB and PSSV states carry their generating parameter y = tanh r.
class PnesState {
 public:
  /// Arbitrary coefficient sequence; requires sum psi_n^2 = 1 within 1e-10.
  static PnesState custom(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  PnesVariant variant() const { return variant_; }
  std::optional<double> y() const { return y_; }
  int n_max() const { return static_cast<int>(coeffs_.size()) - 1; }

  double norm_squared() const;

  friend bool operator==(const PnesState&, const PnesState&) = default;

 private:
  PnesState(std::vector<double> coeffs, PnesVariant variant, std::optional<double> y)
      : coeffs_(std::move(coeffs)), variant_(variant), y_(y) {}

  friend PnesState twb_coeffs(double, std::optional<int>);
  friend PnesState pssv_coeffs(double, std::optional<int>);

  std::vector<double> coeffs_;
  PnesVariant variant_ = PnesVariant::Custom;
  std::optional<double> y_;
};

/// Default tail mass left out by the automatic cutoff.
inline constexpr double kPnesTailTolerance = 1e-20;

/// Smallest n_max such that the probability mass beyond n_max is below
/// tail_tolerance (analytic tail of y^{2n} or (1+n)^2 y^{2n}).
int pnes_cutoff(PnesVariant variant, double y, double tail_tolerance = kPnesTailTolerance);

/// psi_n = sqrt(1-y^2) y^n.
PnesState twb_coeffs(double y, std::optional<int> n_max = std::nullopt);

/// psi_n = sqrt((1-y^2)^3 / (1+y^2)) (1+n) y^n.
PnesState pssv_coeffs(double y, std::optional<int> n_max = std::nullopt);

/// Closed-form photon numbers per mode.
double twb_energy(double y);   ///< y^2 / (1 - y^2)
double pssv_energy(double y);  ///< 2 y^2 (y^2 + 2) / (1 - y^4)

/// sum_n n psi_n^2.
double energy(const PnesState& p);

/// Generating parameter y of the TWB/PSSV with the given photon number per
/// mode.  Both inverses are closed form: y^2 = N/(1+N) for the TWB and the
/// positive root y^2 = N / (2 + sqrt(N^2 + 2N + 4)) of (N+2) q^2 + 4q - N = 0
/// for the PSSV.
double y_from_energy(double N, PnesVariant variant);

PnesState pnes_from_energy(double N, PnesVariant variant);

/// (sum_n a_n b_n)^2.  Both inputs must be normalized within 1e-10.
double fidelity_pnes(const PnesState& a, const PnesState& b);

/// Closed form of the TWB/PSSV overlap:
/// [sqrt(1-yT^2) sqrt((1-yS^2)^3/(1+yS^2)) / (1 - yT yS)^2]^2.
double fidelity_twb_pssv(double y_twb, double y_pssv);

/// Smaller symplectic eigenvalue of the covariance matrix of a PNES,
/// d_- = sqrt((N + 1/2)^2 - S^2) with S = sum (1+n) psi_n psi_{n+1}.
double pnes_symplectic_minus(const PnesState& p);

/// 2 [(d + 1/2) ln(d + 1/2) - (d - 1/2) ln(d - 1/2)] as a function of d >= 1/2.
double nongaussianity_from_symplectic(double d_minus);

/// Non-Gaussianity (natural log) of a normalized PNES.
double nongaussianity(const PnesState& p);

/// d_- of the PSSV with parameter y in closed form:
/// d_-^2 = (9 q^2 + 2 q + 1) / (4 (1 + q)^2), q = y^2.
double pssv_symplectic_minus(double y);

/// Limit of the PSSV non-Gaussianity for N -> infinity, estimated on the
/// energy ladder N_k = 2^k.  `last_step` certifies convergence.
struct AsymptoticNongaussianity {
  double value = 0.0;
  double last_step = 0.0;
  double final_energy = 0.0;
  int rungs = 0;
};

AsymptoticNongaussianity pssv_asymptotic_nongaussianity(double tolerance = 1e-8);

/// delta / delta_inf for PSSV states; throws DomainError for other variants.
double renormalized_nongaussianity(const PnesState& p);
double renormalized_nongaussianity(const PnesState& p, const AsymptoticNongaussianity& limit);

}  // namespace cvfid
