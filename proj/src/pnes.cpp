#include "cvfid/pnes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/core.h>

#include "cvfid/errors.hpp"

namespace cvfid {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kSymplecticTol = 1e-12;
constexpr double kRenormOvershootTol = 1e-8;
constexpr int kMaxLadderRungs = 200;

void check_y(double y) {
  if (!(y >= 0.0 && y < 1.0)) {
    throw DomainError(fmt::format("generating parameter y must lie in [0,1), got {}", y));
  }
}

void check_normalized(const PnesState& p) {
  const double norm = p.norm_squared();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw DomainError(fmt::format("PNES coefficients are not normalized: sum psi^2 = {:.15g}", norm));
  }
}

// Probability mass of the normalized distribution beyond n_max.
double tail_mass(PnesVariant variant, double q, int n_max) {
  const double k = n_max + 1.0;
  const double qk = std::pow(q, k);
  if (variant == PnesVariant::TWB) return qk;
  // sum_{n>=K} (1+n)^2 q^n, normalized by (1+q)/(1-q)^3.
  const double one_q = 1.0 - q;
  const double series = (k + 1.0) * (k + 1.0) / one_q + 2.0 * (k + 1.0) * q / (one_q * one_q) +
                        q * (1.0 + q) / (one_q * one_q * one_q);
  return qk * series * one_q * one_q * one_q / (1.0 + q);
}

}  // namespace

std::string_view to_string(PnesVariant v) {
  switch (v) {
    case PnesVariant::TWB: return "TWB";
    case PnesVariant::PSSV: return "PSSV";
    case PnesVariant::Custom: return "custom";
  }
  return "custom";
}

PnesVariant parse_pnes_variant(std::string_view name) {
  if (name == "TWB" || name == "twb") return PnesVariant::TWB;
  if (name == "PSSV" || name == "pssv") return PnesVariant::PSSV;
  if (name == "custom") return PnesVariant::Custom;
  throw DomainError(fmt::format("unknown PNES variant '{}'", name));
}

PnesState PnesState::custom(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("PNES coefficient list is empty");
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("PNES coefficient is not finite");
  }
  PnesState p(std::move(coeffs), PnesVariant::Custom, std::nullopt);
  check_normalized(p);
  return p;
}

double PnesState::norm_squared() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return s;
}

int pnes_cutoff(PnesVariant variant, double y, double tail_tolerance) {
  if (variant == PnesVariant::Custom) {
    throw DomainError("cutoff rule needs a TWB or PSSV generating parameter");
  }
  check_y(y);
  if (!(tail_tolerance > 0.0)) throw DomainError("tail tolerance must be positive");
  const double q = y * y;
  if (q == 0.0) return 0;
  // Geometric estimate first, then walk to the smallest admissible value.
  int n = std::max(0, static_cast<int>(std::log(tail_tolerance) / std::log(q)) - 1);
  while (n > 0 && tail_mass(variant, q, n - 1) < tail_tolerance) --n;
  while (tail_mass(variant, q, n) >= tail_tolerance) ++n;
  return n;
}

PnesState twb_coeffs(double y, std::optional<int> n_max) {
  check_y(y);
  const int m = n_max.value_or(pnes_cutoff(PnesVariant::TWB, y));
  if (m < 0) throw DomainError("n_max must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  const double pre = std::sqrt(1.0 - y * y);
  for (int n = 0; n <= m; ++n) c[n] = pre * std::pow(y, n);
  return PnesState(std::move(c), PnesVariant::TWB, y);
}

PnesState pssv_coeffs(double y, std::optional<int> n_max) {
  check_y(y);
  const int m = n_max.value_or(pnes_cutoff(PnesVariant::PSSV, y));
  if (m < 0) throw DomainError("n_max must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  const double q = y * y;
  const double pre = std::sqrt((1.0 - q) * (1.0 - q) * (1.0 - q) / (1.0 + q));
  for (int n = 0; n <= m; ++n) c[n] = pre * (1.0 + n) * std::pow(y, n);
  return PnesState(std::move(c), PnesVariant::PSSV, y);
}

double twb_energy(double y) {
  check_y(y);
  return y * y / (1.0 - y * y);
}

double pssv_energy(double y) {
  check_y(y);
  const double q = y * y;
  return 2.0 * q * (q + 2.0) / ((1.0 - q) * (1.0 + q));
}

double energy(const PnesState& p) {
  double s = 0.0;
  const auto& c = p.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) s += static_cast<double>(n) * c[n] * c[n];
  return s;
}

double y_from_energy(double N, PnesVariant variant) {
  if (!(N >= 0.0) || !std::isfinite(N)) {
    throw DomainError(fmt::format("energy must be finite and >= 0, got {}", N));
  }
  switch (variant) {
    case PnesVariant::TWB: return std::sqrt(N / (1.0 + N));
    case PnesVariant::PSSV: return std::sqrt(N / (2.0 + std::sqrt(N * N + 2.0 * N + 4.0)));
    case PnesVariant::Custom: break;
  }
  throw DomainError("energy inversion needs a TWB or PSSV variant");
}

PnesState pnes_from_energy(double N, PnesVariant variant) {
  const double y = y_from_energy(N, variant);
  return variant == PnesVariant::TWB ? twb_coeffs(y) : pssv_coeffs(y);
}

double fidelity_pnes(const PnesState& a, const PnesState& b) {
  check_normalized(a);
  check_normalized(b);
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  const std::size_t n = std::min(ca.size(), cb.size());
  double overlap = 0.0;
  for (std::size_t i = 0; i < n; ++i) overlap += ca[i] * cb[i];
  return std::min(1.0, overlap * overlap);
}

double fidelity_twb_pssv(double y_twb, double y_pssv) {
  check_y(y_twb);
  check_y(y_pssv);
  const double qs = y_pssv * y_pssv;
  const double denom = (1.0 - y_twb * y_pssv) * (1.0 - y_twb * y_pssv);
  const double amp =
      std::sqrt(1.0 - y_twb * y_twb) * std::sqrt((1.0 - qs) * (1.0 - qs) * (1.0 - qs) / (1.0 + qs)) /
      denom;
  return amp * amp;
}

double pnes_symplectic_minus(const PnesState& p) {
  check_normalized(p);
  const double scale = 1.0 / std::sqrt(p.norm_squared());
  const auto& raw = p.coeffs();
  // (N + 1/2)^2 - S^2 = (N + 1/2 - S)(N + 1/2 + S), and for a normalized
  // sequence N + 1/2 - S = 1/2 sum (n+1)(psi_n - psi_{n+1})^2 has no cancellation.
  double low = 0.0;
  double n_mean = 0.0;
  double s = 0.0;
  for (std::size_t n = 0; n < raw.size(); ++n) {
    const double cur = raw[n] * scale;
    const double next = n + 1 < raw.size() ? raw[n + 1] * scale : 0.0;
    const double diff = cur - next;
    low += (n + 1.0) * diff * diff;
    n_mean += static_cast<double>(n) * cur * cur;
    s += (n + 1.0) * cur * next;
  }
  low *= 0.5;
  const double high = n_mean + 0.5 + s;
  const double d_sq = low * high;
  if (d_sq < 0.25 - kSymplecticTol) {
    throw NumericalConsistencyError(
        fmt::format("PNES symplectic eigenvalue below 1/2: d^2 = {:.15g}", d_sq));
  }
  return std::sqrt(std::max(d_sq, 0.25));
}

double nongaussianity_from_symplectic(double d_minus) {
  if (d_minus < 0.5 - kSymplecticTol) {
    throw NumericalConsistencyError(
        fmt::format("symplectic eigenvalue {:.15g} is below 1/2", d_minus));
  }
  const double up = d_minus + 0.5;
  const double down = d_minus - 0.5;
  const double low_term = down > 0.0 ? down * std::log(down) : 0.0;
  return 2.0 * (up * std::log(up) - low_term);
}

double nongaussianity(const PnesState& p) {
  return nongaussianity_from_symplectic(pnes_symplectic_minus(p));
}

double pssv_symplectic_minus(double y) {
  check_y(y);
  const double q = y * y;
  return 0.5 * std::sqrt(9.0 * q * q + 2.0 * q + 1.0) / (1.0 + q);
}

AsymptoticNongaussianity pssv_asymptotic_nongaussianity(double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("ladder tolerance must be positive");
  auto delta_at = [](double N) {
    return nongaussianity_from_symplectic(
        pssv_symplectic_minus(y_from_energy(N, PnesVariant::PSSV)));
  };
  AsymptoticNongaussianity out;
  double energy_level = 1.0;
  double previous = delta_at(energy_level);
  for (int rung = 1; rung <= kMaxLadderRungs; ++rung) {
    energy_level *= 2.0;
    const double current = delta_at(energy_level);
    const double step = current - previous;
    if (std::abs(step) < tolerance) {
      // delta(N) = delta_inf - a/N + O(1/N^2) on a doubling ladder.
      out.value = current + step;
      out.last_step = step;
      out.final_energy = energy_level;
      out.rungs = rung;
      return out;
    }
    previous = current;
  }
  throw NumericalConsistencyError("non-Gaussianity ladder did not converge");
}

double renormalized_nongaussianity(const PnesState& p) {
  if (p.variant() != PnesVariant::PSSV) {
    throw DomainError("renormalized non-Gaussianity is defined for PSSV states only");
  }
  return renormalized_nongaussianity(p, pssv_asymptotic_nongaussianity());
}

double renormalized_nongaussianity(const PnesState& p, const AsymptoticNongaussianity& limit) {
  if (p.variant() != PnesVariant::PSSV) {
    throw DomainError("renormalized non-Gaussianity is defined for PSSV states only");
  }
  const double ratio = nongaussianity(p) / limit.value;
  if (ratio > 1.0 + kRenormOvershootTol) {
    throw NumericalConsistencyError(
        fmt::format("renormalized non-Gaussianity {:.12g} exceeds 1", ratio));
  }
  return std::clamp(ratio, 0.0, 1.0);
}

}  // namespace cvfid
