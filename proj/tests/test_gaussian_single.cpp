#include <cmath>

#include <gtest/gtest.h>

#include "cvfid/errors.hpp"
#include "cvfid/gaussian_single.hpp"
#include "oracles.hpp"

using namespace cvfid;

namespace {

GaussianState1 coherent(double x) {
  return GaussianState1(Eigen::Vector2d(std::sqrt(2.0) * x, 0.0), 0.5 * Eigen::Matrix2d::Identity());
}

GaussianState1 thermal(double n) {
  return GaussianState1(Eigen::Vector2d::Zero(), (n + 0.5) * Eigen::Matrix2d::Identity());
}

GaussianState1 random_dsts1(oracle::Gen& g, double max_n = 3.0) {
  return dsts1_from_energy({g.uniform(0.0, max_n), g.uniform(0.0, 1.0), g.uniform(0.0, 2.0)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

TEST(GaussianState1, VacuumIsValid) {
  const auto v = GaussianState1::vacuum();
  EXPECT_DOUBLE_EQ(v.cm()(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(v.cm()(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(v.mean().norm(), 0.0);
}

TEST(GaussianState1, RejectsInvalidCovariance) {
  Eigen::Matrix2d asym;
  asym << 1.0, 0.2, 0.1, 1.0;
  EXPECT_THROW(GaussianState1(Eigen::Vector2d::Zero(), asym), DomainError);
  EXPECT_THROW(GaussianState1(Eigen::Vector2d::Zero(), 0.1 * Eigen::Matrix2d::Identity()),
               DomainError);
  Eigen::Matrix2d indefinite;
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(GaussianState1(Eigen::Vector2d::Zero(), indefinite), DomainError);
  Eigen::Matrix2d nan = Eigen::Matrix2d::Identity();
  nan(0, 0) = std::nan("");
  EXPECT_THROW(GaussianState1(Eigen::Vector2d::Zero(), nan), DomainError);
}

TEST(GaussianState1, RejectsOutOfRangeEnergyParameters) {
  EXPECT_THROW(dsts1_from_energy({-0.1, 0.5, 0.0}), DomainError);
  EXPECT_THROW(dsts1_from_energy({1.0, 1.5, 0.0}), DomainError);
  EXPECT_THROW(dsts1_from_energy({1.0, -0.5, 0.0}), DomainError);
  EXPECT_THROW(dsts1_from_physical({0.0, 0.0, -1.0}), DomainError);
}

TEST(EnergyParametrization, RoundTrip) {
  oracle::Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const EnergyParams1 e{g.uniform(0.0, 5.0), g.uniform(0.0, 1.0), g.uniform(0.0, 2.0)};
    const auto phys = energy_to_physical(e);
    const auto back = physical_to_energy(phys.n_thermal, phys.n_squeezed, e.x);
    EXPECT_NEAR(back.N, e.N, 1e-12 * (1.0 + e.N));
    EXPECT_NEAR(back.beta, e.beta, 1e-12);
    EXPECT_NEAR(std::sinh(phys.r) * std::sinh(phys.r), phys.n_squeezed, 1e-12 * (1.0 + e.N));
    EXPECT_LE(phys.r, 0.0);
  }
}

TEST(EnergyParametrization, MeanPhotonIsKernelEnergyPlusDisplacement) {
  oracle::Gen g(12);
  for (int i = 0; i < 200; ++i) {
    const EnergyParams1 e{g.uniform(0.0, 5.0), g.uniform(0.0, 1.0), g.uniform(0.0, 2.0)};
    EXPECT_NEAR(mean_photon(dsts1_from_energy(e)), e.N + e.x * e.x, 1e-12 * (1.0 + e.N));
  }
}

TEST(EnergyParametrization, ZeroEnergyIsVacuum) {
  EXPECT_EQ(dsts1_from_energy({0.0, 0.3, 0.0}), GaussianState1::vacuum());
  EXPECT_DOUBLE_EQ(physical_to_energy(0.0, 0.0).beta, 0.0);
}

// ---------------------------------------------------------------------------
// Photon statistics
// ---------------------------------------------------------------------------

TEST(Fano, CoherentIsPoissonian) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(fano_factor(coherent(x)), 1.0, 1e-12) << x;
  }
}

TEST(Fano, ThermalMatchesGeometricStatistics) {
  for (double n : {0.01, 0.3, 1.0, 2.5, 10.0}) {
    const auto s = thermal(n);
    EXPECT_NEAR(mean_photon(s), n, 1e-12);
    EXPECT_NEAR(photon_variance(s), oracle::thermal_variance(n), 1e-11 * (1 + n * n));
    EXPECT_NEAR(fano_factor(s), n + 1.0, 1e-11 * (1 + n));
  }
}

TEST(Fano, SqueezedVacuumMatchesPhotonDistribution) {
  for (double r : {0.1, 0.4, 0.8}) {
    const auto s = dsts1_from_physical({0.0, r, 0.0});
    const auto m = oracle::moments(oracle::squeezed_vacuum_distribution(r, 400));
    EXPECT_NEAR(mean_photon(s), m.mean, 1e-12);
    EXPECT_NEAR(photon_variance(s), m.variance, 1e-11);
  }
}

TEST(Fano, UndefinedForVacuum) {
  EXPECT_THROW(fano_factor(GaussianState1::vacuum()), UndefinedQuantityError);
  EXPECT_THROW(is_sub_poissonian(GaussianState1::vacuum()), UndefinedQuantityError);
}

TEST(Fano, AmplitudeSqueezedDisplacedStateIsSubPoissonian) {
  const auto s = dsts1_from_energy({0.2, 1.0, 1.5});
  EXPECT_LT(fano_factor(s), 1.0);
  EXPECT_TRUE(is_sub_poissonian(s));
  EXPECT_FALSE(is_classical(s));
}

TEST(Classicality, ThresholdsAndExamples) {
  EXPECT_TRUE(is_classical(GaussianState1::vacuum()));
  EXPECT_TRUE(is_classical(thermal(0.3)));
  EXPECT_TRUE(is_classical(coherent(1.0)));
  EXPECT_FALSE(is_classical(dsts1_from_energy({1.0, 1.0, 0.0})));
  // On the boundary: (n_T + 1/2) e^{-2r} = 1/2.
  const double r = 0.3;
  const double nu = 0.5 * std::exp(2.0 * r);
  EXPECT_TRUE(is_classical(dsts1_from_physical({0.0, r, nu - 0.5})));
  EXPECT_FALSE(is_classical(dsts1_from_physical({0.0, r, nu - 0.5 - 1e-6})));
}

TEST(Classicality, ImpliesNoSubPoissonianStatistics) {
  oracle::Gen g(13);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_dsts1(g);
    if (mean_photon(s) < 1e-10 || !is_classical(s)) continue;
    EXPECT_GE(fano_factor(s), 1.0 - 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Fidelity
// ---------------------------------------------------------------------------

TEST(Fidelity1, CoherentStates) {
  EXPECT_NEAR(fidelity1(coherent(0.0), coherent(1.0)), std::exp(-1.0), 1e-12);
  for (double a : {0.0, 0.3, 1.2}) {
    for (double b : {0.0, 0.7, 2.0}) {
      EXPECT_NEAR(fidelity1(coherent(a), coherent(b)), oracle::coherent_overlap(a, b), 1e-12);
    }
  }
}

TEST(Fidelity1, ThermalStates) {
  for (double n1 : {0.0, 0.2, 1.0, 4.0}) {
    for (double n2 : {0.0, 0.5, 3.0}) {
      EXPECT_NEAR(fidelity1(thermal(n1), thermal(n2)), oracle::thermal_fidelity(n1, n2), 1e-12);
    }
  }
}

TEST(Fidelity1, MatchesQuadratureUnitFormula) {
  oracle::Gen g(14);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_dsts1(g, 5.0);
    const auto b = random_dsts1(g, 5.0);
    const double ref = oracle::quadrature_fidelity(a.mean(), a.cm(), b.mean(), b.cm());
    EXPECT_NEAR(fidelity1(a, b), ref, 1e-10);
  }
}

TEST(Fidelity1, SelfFidelityIsOne) {
  oracle::Gen g(15);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_dsts1(g, 10.0);
    EXPECT_NEAR(fidelity1(s, s), 1.0, 1e-9);
  }
}

TEST(Fidelity1, SymmetricAndBounded) {
  oracle::Gen g(16);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_dsts1(g);
    const auto b = random_dsts1(g);
    const double f = fidelity1(a, b);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_NEAR(f, fidelity1(b, a), 1e-12);
  }
}

TEST(Fidelity1, PureStateIsSquaredOverlapForm) {
  // For pure operands delta = 0 and F = exp(..) / sqrt(det(s1+s2)).
  const auto a = dsts1_from_energy({0.7, 1.0, 0.3});
  const auto b = coherent(0.8);
  const Eigen::Matrix2d sum = a.cm() + b.cm();
  const Eigen::Vector2d d = a.mean() - b.mean();
  const double ref = std::exp(-0.5 * d.dot(sum.inverse() * d)) / std::sqrt(sum.determinant());
  EXPECT_NEAR(fidelity1(a, b), ref, 1e-13);
}

TEST(Fidelity1, ClampAndBounds) {
  EXPECT_DOUBLE_EQ(detail::clamp_fidelity(1.0 + 1e-12), 1.0);
  EXPECT_THROW(detail::clamp_fidelity(1.0 + 1e-6), NumericalConsistencyError);
  EXPECT_THROW(detail::clamp_fidelity(std::nan("")), NumericalConsistencyError);
  EXPECT_DOUBLE_EQ(bures_distance(1.0), 0.0);
  EXPECT_NEAR(bures_distance(0.25), 1.0, 1e-15);
  const auto b = trace_distance_bounds(0.64);
  EXPECT_NEAR(b.lower, 0.2, 1e-15);
  EXPECT_NEAR(b.upper, 0.6, 1e-15);
  EXPECT_THROW(bures_distance(1.5), DomainError);
  EXPECT_THROW(trace_distance_bounds(-0.1), DomainError);
}
