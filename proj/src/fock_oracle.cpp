#include "cvfid/fock_oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "cvfid/errors.hpp"

namespace cvfid {

namespace {

constexpr double kNegativeEigenvalueTol = 1e-10;
constexpr double kHermitianTol = 1e-12;
constexpr int kMinPadding = 30;

int padding_for(int n_max) { return std::max(kMinPadding, n_max); }

Eigen::VectorXd thermal_weights(double n_thermal, int dim) {
  Eigen::VectorXd w(dim);
  if (n_thermal == 0.0) {
    w.setZero();
    w(0) = 1.0;
    return w;
  }
  const double ratio = n_thermal / (1.0 + n_thermal);
  w(0) = 1.0 / (1.0 + n_thermal);
  for (int n = 1; n < dim; ++n) w(n) = w(n - 1) * ratio;
  return w;
}

Eigen::MatrixXd annihilation(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Trace check, renormalization and packaging of a truncated real density.
FockDensity finish(Eigen::MatrixXd rho, int n_max, int modes, double max_deficit) {
  const double trace = rho.trace();
  const double deficit = 1.0 - trace;
  if (deficit >= max_deficit) {
    throw CutoffError(fmt::format(
        "cutoff n_max = {} loses {:.3g} of the trace (allowed {:.3g}); raise the cutoff", n_max,
        deficit, max_deficit));
  }
  if (deficit < -1e-12) {
    throw NumericalConsistencyError(
        fmt::format("truncated density has trace {:.15g} > 1", trace));
  }
  rho = 0.5 * (rho + rho.transpose().eval());
  rho /= trace;
  FockDensity out;
  out.matrix = rho.cast<std::complex<double>>();
  out.n_max = n_max;
  out.modes = modes;
  out.trace_deficit = std::max(deficit, 0.0);
  return out;
}

bool is_real(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

template <typename Matrix>
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw NumericalConsistencyError("Hermitian eigensolver failed");
  }
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -kNegativeEigenvalueTol) {
      throw NumericalConsistencyError(fmt::format(
          "density matrix has eigenvalue {:.3g}; cutoff or construction failure", ev(i)));
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Tr sqrt(sqrt(r1) r2 sqrt(r1)) equals the sum of the singular values of
// sqrt(r1) sqrt(r2); the SVD avoids taking square roots of round-off.
template <typename Matrix>
double root_fidelity(const Matrix& r1, const Matrix& r2) {
  const Matrix product = psd_sqrt(r1) * psd_sqrt(r2);
  Eigen::BDCSVD<Matrix> svd(product);
  return svd.singularValues().sum();
}

template <typename Matrix>
double half_trace_norm(const Matrix& diff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalConsistencyError("Hermitian eigensolver failed");
  }
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void check_compatible(const FockDensity& a, const FockDensity& b) {
  if (a.dim() != b.dim() || a.modes != b.modes) {
    throw DimensionError(fmt::format("density matrices differ in shape: {} modes/dim {} vs {}/{}",
                                     a.modes, a.dim(), b.modes, b.dim()));
  }
}

void check_hermitian(const FockDensity& r) {
  if (r.matrix.rows() != r.matrix.cols() || r.matrix.rows() == 0) {
    throw DimensionError("density matrix must be square and non-empty");
  }
  const double err = (r.matrix - r.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (err > kHermitianTol) {
    throw DomainError(fmt::format("density matrix is not Hermitian (residue {:.3g})", err));
  }
}

}  // namespace

FockDensity gaussian1_to_fock(const Dsts1Params& p, int n_max, double max_deficit) {
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  if (!(p.n_thermal >= 0.0)) throw DomainError("thermal photon number must be >= 0");
  const int work = n_max + 1 + padding_for(n_max);
  const Eigen::MatrixXd a = annihilation(work);
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd squeeze_gen = 0.5 * p.r * (ad * ad - a * a);
  const Eigen::MatrixXd displace_gen = p.x * (ad - a);
  const Eigen::MatrixXd unitary = displace_gen.exp() * squeeze_gen.exp();
  const Eigen::VectorXd w = thermal_weights(p.n_thermal, work);
  const Eigen::MatrixXd rho = unitary * w.asDiagonal() * unitary.transpose();
  return finish(rho.topLeftCorner(n_max + 1, n_max + 1), n_max, 1, max_deficit);
}

int oracle_cutoff1(const Dsts1Params& p, double target_deficit, int limit) {
  const double energy =
      p.x * p.x + (p.n_thermal + 0.5) * std::cosh(2.0 * p.r) - 0.5;
  int n_max = 20 + static_cast<int>(std::ceil(15.0 * energy));
  while (n_max <= limit) {
    const FockDensity r = gaussian1_to_fock(p, n_max, 1.0);
    if (r.trace_deficit < target_deficit) return n_max;
    n_max += 10;
  }
  throw CutoffError(fmt::format("no cutoff up to {} reaches trace deficit {:.3g}", limit,
                                target_deficit));
}

FockDensity sts2_to_fock(const PhysicalParams2& p, int n_max, double max_deficit) {
  if (n_max < 0 || n_max > kMaxTwoModeCutoff) {
    throw DomainError(
        fmt::format("two-mode cutoff must lie in [0, {}], got {}", kMaxTwoModeCutoff, n_max));
  }
  if (!(p.n_squeezed >= 0.0 && p.n_thermal1 >= 0.0 && p.n_thermal2 >= 0.0)) {
    throw DomainError("photon numbers must be >= 0");
  }
  const int work = n_max + 1 + padding_for(n_max);
  const int levels = n_max + 1;
  const double r = std::asinh(std::sqrt(p.n_squeezed));
  const Eigen::VectorXd w1 = thermal_weights(p.n_thermal1, work);
  const Eigen::VectorXd w2 = thermal_weights(p.n_thermal2, work);

  // The generator a^dag b^dag - a b conserves n_a - n_b, so the unitary is a
  // direct sum over the chains |m + k, m> (k >= 0) and |m, m - k> (k < 0).
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(levels * levels, levels * levels);
  for (int k = -(work - 1); k <= work - 1; ++k) {
    const int offset_a = std::max(k, 0);
    const int offset_b = std::max(-k, 0);
    const int length = work - std::max(offset_a, offset_b);
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(length, length);
    Eigen::VectorXd weights(length);
    for (int j = 0; j < length; ++j) {
      const int na = offset_a + j;
      const int nb = offset_b + j;
      weights(j) = w1(na) * w2(nb);
      if (j + 1 < length) {
        const double amp = r * std::sqrt(static_cast<double>(na + 1) * (nb + 1));
        gen(j + 1, j) = amp;
        gen(j, j + 1) = -amp;
      }
    }
    const Eigen::MatrixXd u = gen.exp();
    const Eigen::MatrixXd chain = u * weights.asDiagonal() * u.transpose();
    for (int i = 0; i < length; ++i) {
      const int ia = offset_a + i;
      const int ib = offset_b + i;
      if (ia > n_max || ib > n_max) break;
      for (int j = 0; j < length; ++j) {
        const int ja = offset_a + j;
        const int jb = offset_b + j;
        if (ja > n_max || jb > n_max) break;
        rho(ia * levels + ib, ja * levels + jb) = chain(i, j);
      }
    }
  }
  return finish(std::move(rho), n_max, 2, max_deficit);
}

FockDensity pnes_to_fock(const PnesState& p, int n_max, double max_deficit) {
  if (n_max < 0 || n_max > kMaxTwoModeCutoff) {
    throw DomainError(
        fmt::format("two-mode cutoff must lie in [0, {}], got {}", kMaxTwoModeCutoff, n_max));
  }
  const auto& c = p.coeffs();
  const int levels = n_max + 1;
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(levels * levels);
  for (int n = 0; n <= n_max && n < static_cast<int>(c.size()); ++n) {
    psi(n * levels + n) = c[n];
  }
  const Eigen::MatrixXd rho = psi * psi.transpose();
  // Mass of the dropped coefficients counts as deficit relative to the full norm.
  return finish(rho / p.norm_squared(), n_max, 2, max_deficit);
}

FockDensity partial_trace_second(const FockDensity& r) {
  if (r.modes != 2) throw DimensionError("partial trace needs a two-mode density");
  const int levels = r.n_max + 1;
  FockDensity out;
  out.matrix = Eigen::MatrixXcd::Zero(levels, levels);
  for (int i = 0; i < levels; ++i) {
    for (int j = 0; j < levels; ++j) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < levels; ++k) s += r.matrix(i * levels + k, j * levels + k);
      out.matrix(i, j) = s;
    }
  }
  out.n_max = r.n_max;
  out.modes = 1;
  out.trace_deficit = r.trace_deficit;
  return out;
}

double uhlmann(const FockDensity& r1, const FockDensity& r2) {
  check_compatible(r1, r2);
  check_hermitian(r1);
  check_hermitian(r2);
  double root = 0.0;
  if (is_real(r1.matrix) && is_real(r2.matrix)) {
    root = root_fidelity<Eigen::MatrixXd>(r1.matrix.real(), r2.matrix.real());
  } else {
    root = root_fidelity<Eigen::MatrixXcd>(r1.matrix, r2.matrix);
  }
  return root * root;
}

PhotonMoments photon_moments(const FockDensity& r) {
  if (r.modes != 1) throw DimensionError("photon moments need a single-mode density");
  PhotonMoments m;
  for (int n = 0; n < r.dim(); ++n) {
    const double p = r.matrix(n, n).real();
    m.mean += n * p;
    m.second += static_cast<double>(n) * n * p;
  }
  return m;
}

double trace_distance(const FockDensity& r1, const FockDensity& r2) {
  check_compatible(r1, r2);
  const Eigen::MatrixXcd diff = r1.matrix - r2.matrix;
  if (is_real(diff)) return half_trace_norm<Eigen::MatrixXd>(diff.real());
  return half_trace_norm<Eigen::MatrixXcd>(diff);
}

double purity(const FockDensity& r) { return r.matrix.cwiseAbs2().sum(); }

}  // namespace cvfid
