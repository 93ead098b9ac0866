#pragma once

// Brute-force reference backend: truncated Fock-space density matrices built
// from operator exponentials, and spectral evaluation of Uhlmann fidelity,
// trace distance and photon moments.  Nothing here uses the Gaussian closed
// forms, so it can serve as an independent check on them.

#include <Eigen/Core>

#include "cvfid/gaussian_single.hpp"
#include "cvfid/gaussian_two.hpp"
#include "cvfid/pnes.hpp"

namespace cvfid {

/// Hermitian density matrix on the truncated space {|0>,..,|n_max>}^{modes}.
/// Two-mode basis index is n_a * (n_max + 1) + n_b.
struct FockDensity {
  Eigen::MatrixXcd matrix;
  int n_max = 0;
  int modes = 1;
  /// 1 - trace of the truncated block before renormalization.
  double trace_deficit = 0.0;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Largest truncated-space probability loss that may be renormalized away.
inline constexpr double kMaxTraceDeficit = 1e-8;
/// Two-mode matrices are capped at 25 levels per mode, where thermal tails
/// at N = 1.5 alone exceed 1e-6; the two-mode gate is wider accordingly.
inline constexpr double kMaxTraceDeficitTwoMode = 1e-5;
inline constexpr int kMaxTwoModeCutoff = 24;

/// Builds D(x) S(r) nu_th(n_T) S^dag(r) D^dag(x) by exponentiating the
/// truncated generators on a padded working space, then truncating to
/// n_max.  Throws CutoffError if the lost trace reaches max_deficit.
FockDensity gaussian1_to_fock(const Dsts1Params& p, int n_max,
                              double max_deficit = kMaxTraceDeficit);

/// Starting cutoff 20 + 15 <n>, raised in steps of 10 until the trace deficit
/// is below `target_deficit`.
int oracle_cutoff1(const Dsts1Params& p, double target_deficit = 1e-10, int limit = 400);

/// S2(r) nu_th(n_T1) (x) nu_th(n_T2) S2^dag(r) with S2(r) = exp(r (a^dag b^dag - a b))
/// and sinh^2 r = n_squeezed.  n_max is capped at kMaxTwoModeCutoff.
FockDensity sts2_to_fock(const PhysicalParams2& p, int n_max = kMaxTwoModeCutoff,
                         double max_deficit = kMaxTraceDeficitTwoMode);

/// Pure projector onto sum_n psi_n |n, n>>.  Coefficients beyond n_max must
/// carry less than max_deficit probability.
FockDensity pnes_to_fock(const PnesState& p, int n_max, double max_deficit = kMaxTraceDeficit);

/// Reduced state of the first mode of a two-mode density.
FockDensity partial_trace_second(const FockDensity& r);

/// (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2.
double uhlmann(const FockDensity& r1, const FockDensity& r2);

struct PhotonMoments {
  double mean = 0.0;
  double second = 0.0;
  double variance() const { return second - mean * mean; }
};

/// sum n rho_nn and sum n^2 rho_nn (single mode only).
PhotonMoments photon_moments(const FockDensity& r);

/// 1/2 sum |eig(r1 - r2)|.
double trace_distance(const FockDensity& r1, const FockDensity& r2);

double purity(const FockDensity& r);

}  // namespace cvfid
