#pragma once

// Scan configurations (JSON), the shipped figure presets and the CSV / JSON
// writers for scan results.
//
// {"kind": "scan", "name": .., "family": "DSTS1", "property": "sub_poissonian",
//  "axes": [{"name": "N", "min": .., "max": .., "steps": .., "log": false}],
//  "fixed": {..}, "target": {"fixed": {..}, "shared": [..], "free": [..]},
//  "fidelity_threshold": .., "note": ".."}
//
// {"kind": "pnes", "name": .., "n_twb": {axis}, "n_pssv": {axis},
//  "thresholds": [..], "note": ".."}

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cvfid/region_scan.hpp"

namespace cvfid {

using AnyScanSpec = std::variant<ScanSpec, PnesScanSpec>;

/// Throws ConfigError for malformed or invalid configurations.
AnyScanSpec scan_spec_from_json(const nlohmann::json& j);
AnyScanSpec load_scan_config(const std::filesystem::path& path);
nlohmann::json scan_spec_to_json(const AnyScanSpec& spec);

std::vector<std::string> preset_names();
AnyScanSpec preset(std::string_view name);

/// Replaces the axis of the same name ("name:min:max:steps[:log]").
void override_axis(AnyScanSpec& spec, std::string_view text);
void override_threshold(AnyScanSpec& spec, double threshold);

/// Header: one column per axis, then fidelity, property, in_region.
void write_scan_csv(std::ostream& out, const ScanSpec& spec, const std::vector<ScanCell>& cells);
void write_scan_json(std::ostream& out, const ScanSpec& spec, const std::vector<ScanCell>& cells);

/// Grid: N_T, N_S, fidelity, property, in_region_<threshold>...
void write_pnes_csv(std::ostream& out, const PnesScanSpec& spec, const PnesScanResult& r);
void write_pnes_json(std::ostream& out, const PnesScanSpec& spec, const PnesScanResult& r);
/// Equal-energy curve: N, fidelity, property.
void write_pnes_curve_csv(std::ostream& out, const PnesScanResult& r);

nlohmann::json counterexample_to_json(const ScanSpec& spec, const Counterexample& c);

/// Numbers in output files: 12 significant digits.
std::string format_number(double v);

}  // namespace cvfid
