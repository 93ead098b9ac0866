#pragma once

// JSON form of states.
//
// single mode:  {"mean": [m1, m2], "cm": [[..],[..]]}  or  {"N", "beta", "x"}
// two mode:     {"cm": 4x4}, {"A", "B", "C"}  or  {"N", "beta", "gamma"}
// PNES:         {"variant": "TWB"|"PSSV", "y" | "N" [, "n_max"]}
//               {"variant": "custom", "coeffs": [...]}
//
// An optional "modes": 1|2 settles the energy form {"N", "beta"}, which is
// otherwise read as single mode with x = 0.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cvfid/region_scan.hpp"

namespace cvfid {

/// Throws StateFileError for malformed input or an invalid state.
AnyState state_from_json(const nlohmann::json& j);
AnyState load_state(const std::filesystem::path& path);

/// Canonical form: covariance matrix and mean for Gaussian states, variant
/// with y and n_max (or the coefficients) for PNES.  Doubles are written with
/// round-trip precision, so state_from_json(state_to_json(s)) == s.
nlohmann::json state_to_json(const AnyState& s);
void save_state(const std::filesystem::path& path, const AnyState& s);

std::string_view state_kind(const AnyState& s);  ///< "single", "two" or "pnes"

}  // namespace cvfid
