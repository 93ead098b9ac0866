#pragma once

// Randomized comparison of the closed-form fidelities with the Fock-space
// oracle, plus the trace-distance sandwich 1 - sqrt(F) <= T <= sqrt(1 - F)
// evaluated on the oracle matrices.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvfid/region_scan.hpp"

namespace cvfid {

enum class OracleFamily { DSTS1, STS2, PNES };

std::string_view to_string(OracleFamily f);
OracleFamily parse_oracle_family(std::string_view name);  ///< dsts1, sts2, pnes

struct OracleCheckOptions {
  OracleFamily family = OracleFamily::DSTS1;
  int trials = 100;
  std::uint64_t seed = 7;
  /// Upper bound on <n> per state (dsts1), on N (sts2) or on N_T, N_S (pnes).
  double max_energy = 3.0;
  /// Pass bound on |closed form - oracle|.
  double tolerance = 1e-6;
  /// Single-mode cutoffs grow until the trace deficit is below this.
  double target_deficit = 1e-10;
  /// Fock cutoff per mode for sts2 (at most kMaxTwoModeCutoff).
  int two_mode_cutoff = 24;
  bool keep_matrices = false;
  int threads = 1;
};

/// Defaults per family: dsts1 <n> <= 3 at 1e-6, sts2 N <= 1.5 at 1e-4,
/// pnes N <= 0.6 at 1e-8.
OracleCheckOptions default_oracle_options(OracleFamily family);

struct OracleTrial {
  ParamMap a;
  ParamMap b;
  int n_max = 0;
  double closed_form = 0.0;
  double oracle = 0.0;
  double trace_distance = 0.0;
  double sandwich_violation = 0.0;  ///< amount by which T leaves the bounds, 0 if inside
  nlohmann::json matrices;          ///< filled when keep_matrices is set
};

struct OracleReport {
  OracleCheckOptions options;
  std::vector<OracleTrial> trials;
  double max_difference = 0.0;
  double max_sandwich_violation = 0.0;
  bool passed = false;  ///< max_difference <= tolerance and no sandwich violation above 1e-10
};

inline constexpr double kSandwichTolerance = 1e-10;

/// Deterministic for a given seed and options (independent of threads).
OracleReport oracle_check(const OracleCheckOptions& options);

nlohmann::json to_json(const OracleReport& report);

}  // namespace cvfid
