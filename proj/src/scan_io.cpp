#include "cvfid/scan_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include <fmt/core.h>

#include "cvfid/errors.hpp"

namespace cvfid {

using nlohmann::json;

namespace {

constexpr const char* kRangeNote =
    "axis ranges and densities are read off the plotted region, not printed values";

struct PresetText {
  const char* name;
  const char* text;
};

const PresetText kPresets[] = {
    {"fig1", R"({
  "kind": "scan", "name": "fig1", "family": "DSTS1", "property": "sub_poissonian",
  "axes": [
    {"name": "N", "min": 0.01, "max": 3.0, "steps": 60, "log": true},
    {"name": "beta", "min": 0.0, "max": 1.0, "steps": 26},
    {"name": "x", "min": 0.0, "max": 2.0, "steps": 41}
  ],
  "target": {"fixed": {"beta": 0.5, "x": 0.5}, "shared": ["N"]},
  "fidelity_threshold": 0.99
})"},
    {"fig2a", R"({
  "kind": "scan", "name": "fig2a", "family": "STS1", "property": "classical",
  "axes": [
    {"name": "N", "min": 0.01, "max": 3.0, "steps": 60},
    {"name": "beta", "min": 0.0, "max": 1.0, "steps": 51}
  ],
  "target": {"fixed": {"beta": 0.3}, "free": ["N"]},
  "fidelity_threshold": 0.95
})"},
    {"fig2b", R"({
  "kind": "scan", "name": "fig2b", "family": "STS1", "property": "classical",
  "axes": [
    {"name": "N", "min": 0.01, "max": 3.0, "steps": 60},
    {"name": "beta", "min": 0.0, "max": 1.0, "steps": 51}
  ],
  "target": {"fixed": {"N": 0.6}, "free": ["beta"]},
  "fidelity_threshold": 0.95
})"},
    {"fig3", R"({
  "kind": "scan", "name": "fig3", "family": "STS2", "property": "separable",
  "axes": [
    {"name": "N", "min": 0.05, "max": 3.0, "steps": 30},
    {"name": "beta", "min": 0.0, "max": 1.0, "steps": 41},
    {"name": "gamma", "min": 0.0, "max": 1.0, "steps": 21}
  ],
  "target": {"fixed": {"beta": 0.2, "gamma": 0.5}, "shared": ["N"]},
  "fidelity_threshold": 0.99
})"},
    {"fig4a", R"({
  "kind": "pnes", "name": "fig4a",
  "n_twb": {"name": "N_T", "min": 0.0, "max": 5.0, "steps": 51},
  "n_pssv": {"name": "N_S", "min": 0.0, "max": 5.0, "steps": 51},
  "thresholds": [0.94, 0.92, 0.9]
})"},
    {"fig4b", R"({
  "kind": "scan", "name": "fig4b", "family": "PNES", "property": "nongaussianity",
  "axes": [{"name": "N", "min": 0.01, "max": 100.0, "steps": 41, "log": true}],
  "target": {"shared": ["N"]},
  "fidelity_threshold": 0.9
})"},
};

double as_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(fmt::format("field \"{}\" must be a number", key));
  }
  return j[key].get<double>();
}

Axis axis_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("axis must be an object");
  Axis a;
  a.name = j.at("name").get<std::string>();
  a.min = as_number(j, "min");
  a.max = as_number(j, "max");
  a.steps = j.at("steps").get<int>();
  a.log_scale = j.value("log", false);
  return a;
}

json axis_to_json(const Axis& a) {
  return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps},
          {"log", a.log_scale}};
}

ParamMap params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("parameter binding must be an object");
  ParamMap m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ConfigError(fmt::format("parameter '{}' must be a number", k));
    m[k] = v.get<double>();
  }
  return m;
}

AnyScanSpec parse_spec(const json& j) {
  if (!j.is_object()) throw ConfigError("scan configuration must be a JSON object");
  const std::string kind = j.value("kind", "scan");
  if (kind == "pnes") {
    PnesScanSpec s;
    s.name = j.value("name", "");
    s.note = j.value("note", "");
    if (j.contains("n_twb")) s.n_twb = axis_from_json(j["n_twb"]);
    if (j.contains("n_pssv")) s.n_pssv = axis_from_json(j["n_pssv"]);
    if (j.contains("thresholds")) s.thresholds = j["thresholds"].get<std::vector<double>>();
    validate(s);
    return s;
  }
  if (kind != "scan") throw ConfigError(fmt::format("unknown configuration kind '{}'", kind));
  ScanSpec s;
  s.name = j.value("name", "");
  s.note = j.value("note", "");
  s.family = parse_family(j.at("family").get<std::string>());
  s.property = parse_property(j.at("property").get<std::string>());
  if (!j.contains("axes") || !j["axes"].is_array()) throw ConfigError("\"axes\" must be an array");
  for (const auto& a : j["axes"]) s.axes.push_back(axis_from_json(a));
  if (j.contains("fixed")) s.fixed = params_from_json(j["fixed"]);
  if (j.contains("target")) {
    const auto& t = j["target"];
    if (t.contains("fixed")) s.target.fixed = params_from_json(t["fixed"]);
    s.target.shared = t.value("shared", std::vector<std::string>{});
    s.target.free = t.value("free", std::vector<std::string>{});
  }
  s.fidelity_threshold = as_number(j, "fidelity_threshold");
  validate(s);
  return s;
}

double rounded(double v) {
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

json property_json(const PropertyValue& p) {
  if (std::holds_alternative<bool>(p)) return std::get<bool>(p);
  return rounded(std::get<double>(p));
}

std::string property_text(const PropertyValue& p) {
  if (std::holds_alternative<bool>(p)) return std::get<bool>(p) ? "1" : "0";
  return format_number(std::get<double>(p));
}

json params_json(const ParamMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::string_view role_name(Role r) { return r == Role::Grid ? "grid" : "target"; }

}  // namespace

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

AnyScanSpec scan_spec_from_json(const json& j) {
  try {
    return parse_spec(j);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed scan configuration: {}", e.what()));
  }
}

AnyScanSpec load_scan_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open configuration '{}'", path.string()));
  try {
    return scan_spec_from_json(json::parse(in, nullptr, true, /*ignore_comments=*/true));
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

json scan_spec_to_json(const AnyScanSpec& spec) {
  if (const auto* p = std::get_if<PnesScanSpec>(&spec)) {
    return {{"kind", "pnes"},           {"name", p->name},
            {"n_twb", axis_to_json(p->n_twb)}, {"n_pssv", axis_to_json(p->n_pssv)},
            {"thresholds", p->thresholds}, {"note", p->note}};
  }
  const auto& s = std::get<ScanSpec>(spec);
  json axes = json::array();
  for (const auto& a : s.axes) axes.push_back(axis_to_json(a));
  return {{"kind", "scan"},
          {"name", s.name},
          {"family", std::string(to_string(s.family))},
          {"property", std::string(to_string(s.property))},
          {"axes", axes},
          {"fixed", s.fixed},
          {"target", {{"fixed", s.target.fixed}, {"shared", s.target.shared}, {"free", s.target.free}}},
          {"fidelity_threshold", s.fidelity_threshold},
          {"note", s.note}};
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

AnyScanSpec preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name != p.name) continue;
    json j = json::parse(p.text);
    j["note"] = kRangeNote;
    return scan_spec_from_json(j);
  }
  throw ConfigError(fmt::format("unknown preset '{}'", name));
}

void override_axis(AnyScanSpec& spec, std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  if (parts.size() != 4 && !(parts.size() == 5 && parts[4] == "log")) {
    throw ConfigError(fmt::format("axis override '{}' must be name:min:max:steps[:log]", text));
  }
  Axis a;
  a.name = parts[0];
  try {
    std::size_t used = 0;
    a.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("min");
    a.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("max");
    a.steps = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("steps");
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("axis override '{}' has a malformed number", text));
  }
  a.log_scale = parts.size() == 5;

  if (auto* p = std::get_if<PnesScanSpec>(&spec)) {
    if (a.name == p->n_twb.name) {
      p->n_twb = a;
    } else if (a.name == p->n_pssv.name) {
      p->n_pssv = a;
    } else {
      throw ConfigError(fmt::format("no axis named '{}'", a.name));
    }
    validate(*p);
    return;
  }
  auto& s = std::get<ScanSpec>(spec);
  auto it = std::find_if(s.axes.begin(), s.axes.end(),
                         [&](const Axis& x) { return x.name == a.name; });
  if (it == s.axes.end()) throw ConfigError(fmt::format("no axis named '{}'", a.name));
  *it = a;
  validate(s);
}

void override_threshold(AnyScanSpec& spec, double threshold) {
  if (auto* p = std::get_if<PnesScanSpec>(&spec)) {
    p->thresholds = {threshold};
    validate(*p);
  } else {
    auto& s = std::get<ScanSpec>(spec);
    s.fidelity_threshold = threshold;
    validate(s);
  }
}

void write_scan_csv(std::ostream& out, const ScanSpec& spec, const std::vector<ScanCell>& cells) {
  for (const auto& a : spec.axes) out << a.name << ',';
  out << "fidelity,property,in_region\n";
  for (const auto& c : cells) {
    for (double v : c.coordinates) out << format_number(v) << ',';
    out << format_number(c.fidelity_to_target) << ',' << property_text(c.property) << ','
        << (c.in_high_fidelity_region ? 1 : 0) << '\n';
  }
}

void write_scan_json(std::ostream& out, const ScanSpec& spec, const std::vector<ScanCell>& cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    json row = json::object();
    for (std::size_t k = 0; k < spec.axes.size(); ++k) row[spec.axes[k].name] = rounded(c.coordinates[k]);
    row["fidelity"] = rounded(c.fidelity_to_target);
    row["property"] = property_json(c.property);
    row["in_region"] = c.in_high_fidelity_region;
    arr.push_back(std::move(row));
  }
  out << arr.dump(1) << '\n';
}

void write_pnes_csv(std::ostream& out, const PnesScanSpec& spec, const PnesScanResult& r) {
  out << spec.n_twb.name << ',' << spec.n_pssv.name << ",fidelity,property";
  for (double t : spec.thresholds) out << ",in_region_" << format_number(t);
  out << '\n';
  for (const auto& c : r.grid) {
    out << format_number(c.n_twb) << ',' << format_number(c.n_pssv) << ','
        << format_number(c.fidelity) << ',' << format_number(c.nongaussianity);
    for (bool f : c.in_region) out << ',' << (f ? 1 : 0);
    out << '\n';
  }
}

void write_pnes_json(std::ostream& out, const PnesScanSpec& spec, const PnesScanResult& r) {
  json grid = json::array();
  for (const auto& c : r.grid) {
    json flags = json::object();
    for (std::size_t k = 0; k < spec.thresholds.size(); ++k) {
      flags[format_number(spec.thresholds[k])] = static_cast<bool>(c.in_region[k]);
    }
    grid.push_back({{spec.n_twb.name, rounded(c.n_twb)},
                    {spec.n_pssv.name, rounded(c.n_pssv)},
                    {"fidelity", rounded(c.fidelity)},
                    {"property", rounded(c.nongaussianity)},
                    {"in_region", flags}});
  }
  json curve = json::array();
  for (const auto& p : r.curve) {
    curve.push_back({{"N", rounded(p.energy)},
                     {"fidelity", rounded(p.fidelity)},
                     {"property", rounded(p.nongaussianity)}});
  }
  out << json{{"grid", grid}, {"curve", curve}}.dump(1) << '\n';
}

void write_pnes_curve_csv(std::ostream& out, const PnesScanResult& r) {
  out << "N,fidelity,property\n";
  for (const auto& p : r.curve) {
    out << format_number(p.energy) << ',' << format_number(p.fidelity) << ','
        << format_number(p.nongaussianity) << '\n';
  }
}

json counterexample_to_json(const ScanSpec& spec, const Counterexample& c) {
  json j = {{"scan", spec.name},
            {"family", std::string(to_string(spec.family))},
            {"property", std::string(to_string(spec.property))},
            {"threshold", spec.fidelity_threshold},
            {"found", c.found}};
  if (!c.found) return j;
  j["kind"] = c.kind;
  j["state_a"] = {{"role", role_name(c.role_a)}, {"params", params_json(c.state_a)},
                  {"property", property_json(c.property_a)}};
  j["state_b"] = {{"role", role_name(c.role_b)}, {"params", params_json(c.state_b)},
                  {"property", property_json(c.property_b)}};
  j["fidelity"] = rounded(c.fidelity);
  j["refinement_steps"] = c.refinement_steps;
  return j;
}

}  // namespace cvfid
