#include <cmath>

#include <gtest/gtest.h>

#include "cvfid/errors.hpp"
#include "cvfid/fock_oracle.hpp"
#include "oracles.hpp"

using namespace cvfid;

namespace {

FockDensity diagonal(std::vector<double> p) {
  FockDensity r;
  r.matrix = Eigen::MatrixXcd::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r.matrix(i, i) = p[i];
  r.n_max = static_cast<int>(p.size()) - 1;
  return r;
}

}  // namespace

TEST(FockOracle, CoherentBenchmark) {
  for (int n_max : {35, 40, 60}) {
    const auto a = gaussian1_to_fock({0.0, 0.0, 0.0}, n_max);
    const auto b = gaussian1_to_fock({1.0, 0.0, 0.0}, n_max);
    EXPECT_NEAR(uhlmann(a, b), std::exp(-1.0), 1e-8) << n_max;
  }
}

TEST(FockOracle, CoherentPoissonStatistics) {
  const auto r = gaussian1_to_fock({1.3, 0.0, 0.0}, 60);
  const auto m = photon_moments(r);
  EXPECT_NEAR(m.mean, 1.69, 1e-10);
  EXPECT_NEAR(m.variance(), 1.69, 1e-9);
}

TEST(FockOracle, ThermalGeometricStatistics) {
  for (double n : {0.2, 1.0, 2.5}) {
    // The second moment weighs the lost tail by n_max^2, so ask for a small deficit.
    const auto r = gaussian1_to_fock({0.0, 0.0, n}, oracle_cutoff1({0.0, 0.0, n}, 1e-15));
    const auto m = photon_moments(r);
    EXPECT_NEAR(m.mean, n, 1e-8);
    EXPECT_NEAR(m.variance(), oracle::thermal_variance(n), 1e-7);
    EXPECT_NEAR(m.variance() / m.mean, n + 1.0, 1e-8);
  }
}

TEST(FockOracle, SqueezedVacuumDistribution) {
  const double r = 0.6;
  const auto rho = gaussian1_to_fock({0.0, r, 0.0}, 60);
  const auto ref = oracle::squeezed_vacuum_distribution(r, 60);
  for (int n = 0; n <= 60; ++n) EXPECT_NEAR(rho.matrix(n, n).real(), ref[n], 1e-12) << n;
  // The sign of r fixes the phase of the pair amplitudes, not the statistics.
  const auto flipped = gaussian1_to_fock({0.0, -r, 0.0}, 60);
  EXPECT_NEAR(flipped.matrix(2, 2).real(), ref[2], 1e-12);
  EXPECT_NEAR(flipped.matrix(0, 2).real(), -rho.matrix(0, 2).real(), 1e-12);
}

TEST(FockOracle, DensityProperties) {
  const auto r = gaussian1_to_fock({0.4, -0.3, 0.7}, 60);
  EXPECT_NEAR(r.matrix.trace().real(), 1.0, 1e-14);
  EXPECT_LT((r.matrix - r.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(r.trace_deficit, kMaxTraceDeficit);
  EXPECT_NEAR(purity(gaussian1_to_fock({0.5, 0.4, 0.0}, 60)), 1.0, 1e-12);
  EXPECT_NEAR(purity(gaussian1_to_fock({0.0, 0.0, 1.0}, 80)), 1.0 / 3.0, 1e-9);
}

TEST(FockOracle, UhlmannSymmetryAndRange) {
  oracle::Gen g(41);
  for (int i = 0; i < 10; ++i) {
    const Dsts1Params a{g.uniform(0.0, 1.0), g.uniform(-0.5, 0.5), g.uniform(0.0, 1.0)};
    const Dsts1Params b{g.uniform(0.0, 1.0), g.uniform(-0.5, 0.5), g.uniform(0.0, 1.0)};
    const int n = std::max(oracle_cutoff1(a), oracle_cutoff1(b));
    const auto ra = gaussian1_to_fock(a, n);
    const auto rb = gaussian1_to_fock(b, n);
    const double f = uhlmann(ra, rb);
    EXPECT_NEAR(f, uhlmann(rb, ra), 1e-9);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-9);
    EXPECT_NEAR(uhlmann(ra, ra), 1.0, 1e-9);
  }
}

TEST(FockOracle, PureStatesGiveSquaredOverlap) {
  const auto a = gaussian1_to_fock({0.3, 0.4, 0.0}, 60);
  const auto b = gaussian1_to_fock({0.8, -0.2, 0.0}, 60);
  // For pure states rho_a rho_b has trace |<a|b>|^2.
  const double overlap_sq = (a.matrix * b.matrix).trace().real();
  EXPECT_NEAR(uhlmann(a, b), overlap_sq, 1e-9);
}

TEST(FockOracle, AgreesWithClosedFormSingleMode) {
  oracle::Gen g(42);
  for (int i = 0; i < 20; ++i) {
    const EnergyParams1 ea{g.uniform(0.0, 1.5), g.uniform(0.0, 1.0), g.uniform(0.0, 1.0)};
    const EnergyParams1 eb{g.uniform(0.0, 1.5), g.uniform(0.0, 1.0), g.uniform(0.0, 1.0)};
    const auto pa = dsts1_params(ea);
    const auto pb = dsts1_params(eb);
    const int n = std::max(oracle_cutoff1(pa), oracle_cutoff1(pb));
    const double oracle_f = uhlmann(gaussian1_to_fock(pa, n), gaussian1_to_fock(pb, n));
    EXPECT_NEAR(oracle_f, fidelity1(dsts1_from_energy(ea), dsts1_from_energy(eb)), 1e-6);
  }
}

TEST(FockOracle, CutoffConvergence) {
  const Dsts1Params a{0.7, -0.3, 0.4};
  const Dsts1Params b{0.2, 0.1, 0.9};
  const int n = std::max(oracle_cutoff1(a), oracle_cutoff1(b));
  const double f1 = uhlmann(gaussian1_to_fock(a, n), gaussian1_to_fock(b, n));
  const double f2 = uhlmann(gaussian1_to_fock(a, 2 * n), gaussian1_to_fock(b, 2 * n));
  EXPECT_LT(std::abs(f1 - f2), 1e-7);
}

TEST(FockOracle, TraceDistanceSandwich) {
  oracle::Gen g(43);
  for (int i = 0; i < 10; ++i) {
    const Dsts1Params a{g.uniform(0.0, 1.0), g.uniform(-0.5, 0.5), g.uniform(0.0, 1.0)};
    const Dsts1Params b{g.uniform(0.0, 1.0), g.uniform(-0.5, 0.5), g.uniform(0.0, 1.0)};
    const int n = std::max(oracle_cutoff1(a), oracle_cutoff1(b));
    const auto ra = gaussian1_to_fock(a, n);
    const auto rb = gaussian1_to_fock(b, n);
    const double f = std::min(1.0, uhlmann(ra, rb));
    const double t = trace_distance(ra, rb);
    EXPECT_LE(1.0 - std::sqrt(f), t + 1e-10);
    EXPECT_LE(t, std::sqrt(1.0 - f) + 1e-10);
  }
}

TEST(FockOracle, CutoffErrors) {
  EXPECT_THROW(gaussian1_to_fock({2.0, 0.0, 0.0}, 5), CutoffError);
  EXPECT_THROW(gaussian1_to_fock({0.0, 0.0, 0.0}, -1), DomainError);
  EXPECT_THROW(oracle_cutoff1({0.0, 0.0, 50.0}, 1e-10, 100), CutoffError);
  EXPECT_THROW(sts2_to_fock({0.1, 0.0, 0.0}, 25), DomainError);
  EXPECT_THROW(sts2_to_fock({3.0, 0.0, 0.0}, 10), CutoffError);
  EXPECT_THROW(pnes_to_fock(twb_coeffs(0.9), 5), CutoffError);
}

TEST(FockOracle, ValidationErrors) {
  const auto a = gaussian1_to_fock({0.0, 0.0, 0.0}, 10);
  const auto b = gaussian1_to_fock({0.0, 0.0, 0.0}, 12);
  EXPECT_THROW(uhlmann(a, b), DimensionError);
  EXPECT_THROW(trace_distance(a, b), DimensionError);

  auto bad = a;
  bad.matrix(0, 1) = 0.3;
  EXPECT_THROW(uhlmann(bad, a), DomainError);

  const auto negative = diagonal({1.1, -0.1});
  const auto fine = diagonal({0.5, 0.5});
  EXPECT_THROW(uhlmann(negative, fine), NumericalConsistencyError);
  // Round-off sized negative eigenvalues are clipped.
  EXPECT_NO_THROW(uhlmann(diagonal({1.0 + 1e-12, -1e-12}), fine));

  const auto two = sts2_to_fock({0.1, 0.0, 0.0}, 6, 1e-3);
  EXPECT_THROW(photon_moments(two), DimensionError);
  EXPECT_THROW(partial_trace_second(a), DimensionError);
}

TEST(FockOracle, TmsvReducesToThermal) {
  const double ns = 0.4;
  const auto reduced = partial_trace_second(sts2_to_fock({ns, 0.0, 0.0}));
  const auto m = photon_moments(reduced);
  EXPECT_NEAR(m.mean, ns, 1e-8);
  EXPECT_NEAR(m.variance(), oracle::thermal_variance(ns), 1e-6);
  EXPECT_NEAR(reduced.matrix(0, 1).real(), 0.0, 1e-14);
}

TEST(FockOracle, AgreesWithClosedFormTwoMode) {
  const EnergyParams2 ea{1.0, 0.4, 0.3};
  const EnergyParams2 eb{0.8, 0.7, 0.6};
  const double oracle_f = uhlmann(sts2_to_fock(physical_from_energy(ea)),
                                  sts2_to_fock(physical_from_energy(eb)));
  EXPECT_NEAR(oracle_f, fidelity2(sts2_from_energy(ea), sts2_from_energy(eb)), 1e-4);
  // Nearly pure operand: the uncertainty determinants are ~1e-15 here.
  const EnergyParams2 near{1.0, 1.0 - 1e-7, 0.5};
  const EnergyParams2 mixed{1.0, 0.4, 0.5};
  const double oracle_near = uhlmann(sts2_to_fock(physical_from_energy(near)),
                                     sts2_to_fock(physical_from_energy(mixed)));
  EXPECT_NEAR(oracle_near, fidelity2(sts2_from_energy(near), sts2_from_energy(mixed)), 1e-7);
  const EnergyParams2 pure{0.6, 1.0, 0.5};
  const double self = uhlmann(sts2_to_fock(physical_from_energy(pure)),
                              sts2_to_fock(physical_from_energy(pure)));
  EXPECT_NEAR(self, 1.0, 1e-9);
}

TEST(FockOracle, PnesProjectorsMatchSeries) {
  const auto twb = pnes_from_energy(0.4, PnesVariant::TWB);
  const auto pssv = pnes_from_energy(0.3, PnesVariant::PSSV);
  const int n = 20;
  const double f = uhlmann(pnes_to_fock(twb, n), pnes_to_fock(pssv, n));
  EXPECT_NEAR(f, fidelity_pnes(twb, pssv), 1e-8);
  EXPECT_NEAR(purity(pnes_to_fock(pssv, n)), 1.0, 1e-12);
}
