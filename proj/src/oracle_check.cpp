#include "cvfid/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/core.h>

#include "cvfid/errors.hpp"
#include "cvfid/fock_oracle.hpp"
#include "cvfid/parallel.hpp"

namespace cvfid {

using nlohmann::json;

namespace {

json real_matrix(const FockDensity& r) {
  json rows = json::array();
  for (int i = 0; i < r.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < r.dim(); ++j) row.push_back(r.matrix(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

void compare(OracleTrial& t, const FockDensity& ra, const FockDensity& rb, bool keep) {
  t.oracle = uhlmann(ra, rb);
  t.trace_distance = trace_distance(ra, rb);
  const double f = std::min(t.oracle, 1.0);
  const double lower = 1.0 - std::sqrt(f);
  const double upper = std::sqrt(1.0 - f);
  t.sandwich_violation = std::max({0.0, lower - t.trace_distance, t.trace_distance - upper});
  if (keep) t.matrices = {{"a", real_matrix(ra)}, {"b", real_matrix(rb)}};
}

ParamMap sample(OracleFamily family, double max_energy, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (family) {
    case OracleFamily::DSTS1:
      for (;;) {
        ParamMap p{{"N", max_energy * unit(rng)},
                   {"beta", unit(rng)},
                   {"x", std::sqrt(max_energy) * unit(rng)}};
        const auto s = dsts1_from_energy({p["N"], p["beta"], p["x"]});
        if (mean_photon(s) <= max_energy) return p;
      }
    case OracleFamily::STS2:
      return {{"N", max_energy * unit(rng)}, {"beta", unit(rng)}, {"gamma", unit(rng)}};
    case OracleFamily::PNES:
      return {{"N", max_energy * unit(rng)}};
  }
  return {};
}

void run_trial(const OracleCheckOptions& o, OracleTrial& t) {
  switch (o.family) {
    case OracleFamily::DSTS1: {
      const EnergyParams1 ea{t.a.at("N"), t.a.at("beta"), t.a.at("x")};
      const EnergyParams1 eb{t.b.at("N"), t.b.at("beta"), t.b.at("x")};
      t.closed_form = fidelity1(dsts1_from_energy(ea), dsts1_from_energy(eb));
      const Dsts1Params pa = dsts1_params(ea);
      const Dsts1Params pb = dsts1_params(eb);
      t.n_max = std::max(oracle_cutoff1(pa, o.target_deficit), oracle_cutoff1(pb, o.target_deficit));
      compare(t, gaussian1_to_fock(pa, t.n_max), gaussian1_to_fock(pb, t.n_max), o.keep_matrices);
      break;
    }
    case OracleFamily::STS2: {
      const EnergyParams2 ea{t.a.at("N"), t.a.at("beta"), t.a.at("gamma")};
      const EnergyParams2 eb{t.b.at("N"), t.b.at("beta"), t.b.at("gamma")};
      t.closed_form = fidelity2(sts2_from_energy(ea), sts2_from_energy(eb));
      t.n_max = o.two_mode_cutoff;
      compare(t, sts2_to_fock(physical_from_energy(ea), t.n_max),
              sts2_to_fock(physical_from_energy(eb), t.n_max), o.keep_matrices);
      break;
    }
    case OracleFamily::PNES: {
      const PnesState twb = pnes_from_energy(t.a.at("N"), PnesVariant::TWB);
      const PnesState pssv = pnes_from_energy(t.b.at("N"), PnesVariant::PSSV);
      t.closed_form = fidelity_twb_pssv(*twb.y(), *pssv.y());
      t.n_max = std::max(pnes_cutoff(PnesVariant::TWB, *twb.y(), 0.1 * kMaxTraceDeficit),
                         pnes_cutoff(PnesVariant::PSSV, *pssv.y(), 0.1 * kMaxTraceDeficit));
      if (t.n_max > kMaxTwoModeCutoff) {
        throw CutoffError(fmt::format(
            "PNES pair (N_T = {:.6g}, N_S = {:.6g}) needs cutoff {} > {}; lower --max-energy",
            t.a.at("N"), t.b.at("N"), t.n_max, kMaxTwoModeCutoff));
      }
      compare(t, pnes_to_fock(twb, t.n_max), pnes_to_fock(pssv, t.n_max), o.keep_matrices);
      break;
    }
  }
}

}  // namespace

std::string_view to_string(OracleFamily f) {
  switch (f) {
    case OracleFamily::DSTS1: return "dsts1";
    case OracleFamily::STS2: return "sts2";
    case OracleFamily::PNES: return "pnes";
  }
  return "?";
}

OracleFamily parse_oracle_family(std::string_view name) {
  for (OracleFamily f : {OracleFamily::DSTS1, OracleFamily::STS2, OracleFamily::PNES}) {
    if (name == to_string(f)) return f;
  }
  throw ConfigError(fmt::format("unknown oracle family '{}' (dsts1, sts2, pnes)", name));
}

OracleCheckOptions default_oracle_options(OracleFamily family) {
  OracleCheckOptions o;
  o.family = family;
  switch (family) {
    case OracleFamily::DSTS1:
      o.max_energy = 3.0;
      o.tolerance = 1e-6;
      break;
    case OracleFamily::STS2:
      o.max_energy = 1.5;
      o.tolerance = 1e-4;
      break;
    case OracleFamily::PNES:
      o.max_energy = 0.6;
      o.tolerance = 1e-8;
      break;
  }
  return o;
}

OracleReport oracle_check(const OracleCheckOptions& options) {
  if (options.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(options.max_energy > 0.0)) throw ConfigError("max energy must be > 0");
  if (!(options.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  if (options.two_mode_cutoff < 1 || options.two_mode_cutoff > kMaxTwoModeCutoff) {
    throw ConfigError(fmt::format("two-mode cutoff must lie in [1, {}]", kMaxTwoModeCutoff));
  }
  OracleReport report;
  report.options = options;
  report.trials.resize(static_cast<std::size_t>(options.trials));
  // Draw everything up front so results do not depend on the thread count.
  std::mt19937_64 rng(options.seed);
  for (auto& t : report.trials) {
    t.a = sample(options.family, options.max_energy, rng);
    t.b = sample(options.family, options.max_energy, rng);
  }
  parallel_for(report.trials.size(), options.threads,
               [&](std::size_t i) { run_trial(options, report.trials[i]); });
  for (const auto& t : report.trials) {
    report.max_difference = std::max(report.max_difference, std::abs(t.closed_form - t.oracle));
    report.max_sandwich_violation = std::max(report.max_sandwich_violation, t.sandwich_violation);
  }
  report.passed = report.max_difference <= options.tolerance &&
                  report.max_sandwich_violation <= kSandwichTolerance;
  return report;
}

json to_json(const OracleReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json j = {{"a", t.a},
              {"b", t.b},
              {"n_max", t.n_max},
              {"closed_form", t.closed_form},
              {"oracle", t.oracle},
              {"difference", std::abs(t.closed_form - t.oracle)},
              {"trace_distance", t.trace_distance},
              {"sandwich_violation", t.sandwich_violation}};
    if (!t.matrices.is_null()) j["matrices"] = t.matrices;
    trials.push_back(std::move(j));
  }
  return {{"family", std::string(to_string(r.options.family))},
          {"trials", r.options.trials},
          {"seed", r.options.seed},
          {"max_energy", r.options.max_energy},
          {"tolerance", r.options.tolerance},
          {"max_difference", r.max_difference},
          {"max_sandwich_violation", r.max_sandwich_violation},
          {"passed", r.passed},
          {"results", trials}};
}

}  // namespace cvfid
