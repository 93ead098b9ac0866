#include "cvfid/region_scan.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/core.h>

#include "cvfid/errors.hpp"
#include "cvfid/parallel.hpp"

namespace cvfid {

namespace {

// Bisection stops 2^-20 of a grid step short of the property boundary, so a
// witness keeps its flag by a margin far above round-off in the criteria.
constexpr int kBisectionIterations = 20;
constexpr int kRefinementRounds = 4;

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool property_supported(Family f, Property p) {
  switch (p) {
    case Property::SubPoissonian:
    case Property::Classical: return f == Family::DSTS1 || f == Family::STS1;
    case Property::Separable: return f == Family::STS2;
    case Property::Nongaussianity: return f == Family::PNES;
  }
  return false;
}

double require(const ParamMap& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) throw ConfigError(fmt::format("missing parameter '{}'", name));
  return it->second;
}

bool same_property(const PropertyValue& a, const PropertyValue& b) {
  return std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b) &&
         std::get<bool>(a) == std::get<bool>(b);
}

double property_gap(const PropertyValue& a, const PropertyValue& b) {
  return std::abs(std::get<double>(a) - std::get<double>(b));
}

// Everything needed to evaluate grid points of one spec.
struct Evaluator {
  const ScanSpec& spec;
  std::vector<std::vector<double>> grids;
  std::vector<ParamMap> free_choices;  // assignments of the free target parameters
  AsymptoticNongaussianity limit;

  explicit Evaluator(const ScanSpec& s) : spec(s) {
    validate(spec);
    for (const auto& axis : spec.axes) grids.push_back(axis.values());
    free_choices.emplace_back();
    for (const auto& name : spec.target.free) {
      const auto idx = static_cast<std::size_t>(
          std::find_if(spec.axes.begin(), spec.axes.end(),
                       [&](const Axis& a) { return a.name == name; }) -
          spec.axes.begin());
      std::vector<ParamMap> next;
      for (const auto& base : free_choices) {
        for (double v : grids[idx]) {
          ParamMap m = base;
          m[name] = v;
          next.push_back(std::move(m));
        }
      }
      free_choices = std::move(next);
    }
    if (spec.property == Property::Nongaussianity) limit = pssv_asymptotic_nongaussianity();
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (const auto& g : grids) n *= g.size();
    return n;
  }

  std::vector<double> coordinates(std::size_t index) const {
    std::vector<double> c(grids.size());
    for (std::size_t k = grids.size(); k-- > 0;) {
      c[k] = grids[k][index % grids[k].size()];
      index /= grids[k].size();
    }
    return c;
  }

  ParamMap grid_params(const std::vector<double>& coords) const {
    ParamMap p = spec.fixed;
    for (std::size_t k = 0; k < coords.size(); ++k) p[spec.axes[k].name] = coords[k];
    return p;
  }

  ParamMap target_params(const ParamMap& grid, const ParamMap& free_choice) const {
    ParamMap t = spec.target.fixed;
    for (const auto& name : spec.target.shared) t[name] = require(grid, name);
    for (const auto& [name, value] : free_choice) t[name] = value;
    return t;
  }

  PropertyValue property(const AnyState& s) const {
    if (spec.property == Property::Nongaussianity) {
      const auto& p = std::get<PnesState>(s);
      if (p.variant() == PnesVariant::PSSV) return renormalized_nongaussianity(p, limit);
      return nongaussianity(p) / limit.value;
    }
    return evaluate_property(spec.property, s);
  }

  struct Detail {
    ScanCell cell;
    ParamMap params;
    ParamMap target;
  };

  // Fidelity to the best target; the first maximizer wins ties.
  Detail evaluate(const std::vector<double>& coords) const {
    Detail d;
    d.params = grid_params(coords);
    const AnyState state = make_state(spec.family, d.params, Role::Grid);
    double best = -1.0;
    for (const auto& choice : free_choices) {
      ParamMap t = target_params(d.params, choice);
      const double f = state_fidelity(state, make_state(spec.family, t, Role::Target));
      if (f > best) {
        best = f;
        d.target = std::move(t);
      }
    }
    d.cell.coordinates = coords;
    d.cell.fidelity_to_target = best;
    d.cell.property = property(state);
    d.cell.in_high_fidelity_region = best >= spec.fidelity_threshold;
    return d;
  }

  double fidelity(const ParamMap& a, Role ra, const ParamMap& b, Role rb) const {
    return state_fidelity(make_state(spec.family, a, ra), make_state(spec.family, b, rb));
  }

  PropertyValue property(const ParamMap& p, Role r) const {
    return property(make_state(spec.family, p, r));
  }
};

// Moves a grid witness onto the property boundary, one coordinate at a time,
// accepting a move only if the fidelity to the target grows.
int refine_witness(const Evaluator& ev, ParamMap& params, ParamMap& target, double& fidelity) {
  const ScanSpec& spec = ev.spec;
  const PropertyValue target_prop = ev.property(target, Role::Target);
  auto target_for = [&](const ParamMap& p) {
    ParamMap t = target;
    for (const auto& name : spec.target.shared) t[name] = p.at(name);
    return t;
  };
  int accepted = 0;
  for (int round = 0; round < kRefinementRounds; ++round) {
    bool improved = false;
    for (std::size_t k = 0; k < spec.axes.size(); ++k) {
      const Axis& axis = spec.axes[k];
      // Free target parameters are pinned to the maximizing grid value.
      if (contains(spec.target.free, axis.name)) continue;
      const double current = params.at(axis.name);
      for (int dir : {-1, 1}) {
        double neighbour = 0.0;
        if (axis.log_scale) {
          const double ratio = std::pow(axis.max / axis.min, 1.0 / (axis.steps - 1));
          neighbour = dir > 0 ? current * ratio : current / ratio;
        } else {
          neighbour = current + dir * (axis.max - axis.min) / (axis.steps - 1);
        }
        neighbour = std::clamp(neighbour, axis.min, axis.max);
        if (neighbour == current) continue;
        ParamMap outside = params;
        outside[axis.name] = neighbour;
        if (!same_property(ev.property(outside, Role::Grid), target_prop)) continue;
        double in = current;
        double out = neighbour;
        for (int it = 0; it < kBisectionIterations; ++it) {
          ParamMap mid = params;
          mid[axis.name] = 0.5 * (in + out);
          if (same_property(ev.property(mid, Role::Grid), target_prop)) {
            out = mid[axis.name];
          } else {
            in = mid[axis.name];
          }
        }
        ParamMap candidate = params;
        candidate[axis.name] = in;
        const ParamMap candidate_target = target_for(candidate);
        const double f = ev.fidelity(candidate, Role::Grid, candidate_target, Role::Target);
        if (f > fidelity && f >= spec.fidelity_threshold &&
            !same_property(ev.property(candidate, Role::Grid),
                           ev.property(candidate_target, Role::Target))) {
          params = std::move(candidate);
          target = candidate_target;
          fidelity = f;
          improved = true;
          ++accepted;
        }
      }
    }
    if (!improved) break;
  }
  return accepted;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::DSTS1: return "DSTS1";
    case Family::STS1: return "STS1";
    case Family::STS2: return "STS2";
    case Family::PNES: return "PNES";
  }
  return "?";
}

std::string_view to_string(Property p) {
  switch (p) {
    case Property::SubPoissonian: return "sub_poissonian";
    case Property::Classical: return "classical";
    case Property::Separable: return "separable";
    case Property::Nongaussianity: return "nongaussianity";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::DSTS1, Family::STS1, Family::STS2, Family::PNES}) {
    if (name == to_string(f)) return f;
  }
  throw ConfigError(fmt::format("unknown family '{}'", name));
}

Property parse_property(std::string_view name) {
  for (Property p : {Property::SubPoissonian, Property::Classical, Property::Separable,
                     Property::Nongaussianity}) {
    if (name == to_string(p)) return p;
  }
  throw ConfigError(fmt::format("unknown property '{}'", name));
}

std::vector<std::string> family_parameters(Family f) {
  switch (f) {
    case Family::DSTS1: return {"N", "beta", "x"};
    case Family::STS1: return {"N", "beta"};
    case Family::STS2: return {"N", "beta", "gamma"};
    case Family::PNES: return {"N"};
  }
  return {};
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    v[i] = log_scale ? min * std::pow(max / min, t) : min + t * (max - min);
  }
  // Endpoints exactly as configured.
  v.front() = min;
  v.back() = max;
  return v;
}

void validate(const ScanSpec& spec) {
  const auto params = family_parameters(spec.family);
  if (!property_supported(spec.family, spec.property)) {
    throw ConfigError(fmt::format("property '{}' is not defined for family '{}'",
                                  to_string(spec.property), to_string(spec.family)));
  }
  if (spec.axes.empty()) throw ConfigError("scan needs at least one axis");
  if (!(spec.fidelity_threshold > 0.0 && spec.fidelity_threshold <= 1.0)) {
    throw ConfigError(
        fmt::format("fidelity threshold must lie in (0,1], got {}", spec.fidelity_threshold));
  }
  std::set<std::string> grid_names;
  for (const auto& axis : spec.axes) {
    if (!contains(params, axis.name)) {
      throw ConfigError(fmt::format("axis '{}' is not a parameter of family '{}'", axis.name,
                                    to_string(spec.family)));
    }
    if (!grid_names.insert(axis.name).second) {
      throw ConfigError(fmt::format("axis '{}' appears twice", axis.name));
    }
    if (axis.steps < 2) throw ConfigError(fmt::format("axis '{}' needs steps >= 2", axis.name));
    if (!(axis.min < axis.max)) {
      throw ConfigError(fmt::format("axis '{}' needs min < max", axis.name));
    }
    if (axis.log_scale && !(axis.min > 0.0)) {
      throw ConfigError(fmt::format("log axis '{}' needs min > 0", axis.name));
    }
  }
  for (const auto& [name, value] : spec.fixed) {
    if (!contains(params, name)) {
      throw ConfigError(fmt::format("fixed parameter '{}' is not a parameter of family '{}'", name,
                                    to_string(spec.family)));
    }
    if (!grid_names.insert(name).second) {
      throw ConfigError(fmt::format("parameter '{}' is both scanned and fixed", name));
    }
  }
  if (grid_names.size() != params.size()) {
    throw ConfigError("every family parameter must be either an axis or fixed");
  }
  std::set<std::string> target_names;
  auto claim = [&](const std::string& name) {
    if (!contains(params, name)) {
      throw ConfigError(fmt::format("target parameter '{}' is not a parameter of family '{}'", name,
                                    to_string(spec.family)));
    }
    if (!target_names.insert(name).second) {
      throw ConfigError(fmt::format("target parameter '{}' is bound twice", name));
    }
  };
  for (const auto& [name, value] : spec.target.fixed) claim(name);
  for (const auto& name : spec.target.shared) claim(name);
  for (const auto& name : spec.target.free) {
    claim(name);
    if (std::none_of(spec.axes.begin(), spec.axes.end(),
                     [&](const Axis& a) { return a.name == name; })) {
      throw ConfigError(fmt::format("free target parameter '{}' must be a scan axis", name));
    }
  }
  if (target_names.size() != params.size()) {
    throw ConfigError("every target parameter must be fixed, shared or free");
  }
}

AnyState make_state(Family family, const ParamMap& params, Role role) {
  switch (family) {
    case Family::DSTS1:
      return dsts1_from_energy(
          {require(params, "N"), require(params, "beta"), require(params, "x")});
    case Family::STS1:
      return dsts1_from_energy({require(params, "N"), require(params, "beta"), 0.0});
    case Family::STS2:
      return sts2_from_energy(
          {require(params, "N"), require(params, "beta"), require(params, "gamma")});
    case Family::PNES:
      return pnes_from_energy(require(params, "N"),
                              role == Role::Grid ? PnesVariant::PSSV : PnesVariant::TWB);
  }
  throw ConfigError("unknown family");
}

double state_fidelity(const AnyState& a, const AnyState& b) {
  return std::visit(
      [](const auto& x, const auto& y) -> double {
        using X = std::decay_t<decltype(x)>;
        using Y = std::decay_t<decltype(y)>;
        if constexpr (!std::is_same_v<X, Y>) {
          throw DimensionError("fidelity between states of different kinds");
        } else if constexpr (std::is_same_v<X, GaussianState1>) {
          return fidelity1(x, y);
        } else if constexpr (std::is_same_v<X, GaussianState2>) {
          return fidelity2(x, y);
        } else {
          return fidelity_pnes(x, y);
        }
      },
      a, b);
}

namespace {

template <class T>
const T& state_for(const AnyState& state, Property property) {
  if (const auto* s = std::get_if<T>(&state)) return *s;
  throw DomainError(fmt::format("property {} is not defined for this kind of state", to_string(property)));
}

}  // namespace

PropertyValue evaluate_property(Property property, const AnyState& state) {
  switch (property) {
    case Property::SubPoissonian: {
      const auto& s = state_for<GaussianState1>(state, property);
      if (mean_photon(s) <= 1e-14) return false;
      return is_sub_poissonian(s);
    }
    case Property::Classical: return is_classical(state_for<GaussianState1>(state, property));
    case Property::Separable: return is_separable(state_for<GaussianState2>(state, property));
    case Property::Nongaussianity: {
      const auto& p = state_for<PnesState>(state, property);
      const auto limit = pssv_asymptotic_nongaussianity();
      if (p.variant() == PnesVariant::PSSV) return renormalized_nongaussianity(p, limit);
      return nongaussianity(p) / limit.value;
    }
  }
  throw ConfigError("unknown property");
}

std::vector<ScanCell> scan(const ScanSpec& spec, const ScanOptions& options) {
  const Evaluator ev(spec);
  std::vector<ScanCell> cells(ev.cell_count());
  parallel_for(cells.size(), options.threads,
               [&](std::size_t i) { cells[i] = ev.evaluate(ev.coordinates(i)).cell; });
  return cells;
}

Counterexample find_counterexample(const ScanSpec& spec, const ScanOptions& options) {
  const Evaluator ev(spec);
  std::vector<Evaluator::Detail> details(ev.cell_count());
  std::vector<PropertyValue> target_props(details.size());
  parallel_for(details.size(), options.threads, [&](std::size_t i) {
    details[i] = ev.evaluate(ev.coordinates(i));
    if (details[i].cell.in_high_fidelity_region) {
      target_props[i] = ev.property(details[i].target, Role::Target);
    }
  });

  const bool real_valued = spec.property == Property::Nongaussianity;
  Counterexample out;

  // Grid state against its own target.
  std::size_t best = details.size();
  double best_score = -1.0;
  for (std::size_t i = 0; i < details.size(); ++i) {
    const auto& d = details[i];
    if (!d.cell.in_high_fidelity_region) continue;
    double score = -1.0;
    if (real_valued) {
      score = property_gap(d.cell.property, target_props[i]);
      if (!(score > 0.0)) continue;
    } else {
      if (same_property(d.cell.property, target_props[i])) continue;
      score = d.cell.fidelity_to_target;
    }
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }

  if (best < details.size()) {
    ParamMap params = details[best].params;
    ParamMap target = details[best].target;
    double fidelity = details[best].cell.fidelity_to_target;
    if (!real_valued) out.refinement_steps = refine_witness(ev, params, target, fidelity);
    out.found = true;
    out.kind = "target";
    out.state_a = std::move(params);
    out.role_a = Role::Grid;
    out.state_b = std::move(target);
    out.role_b = Role::Target;
  } else if (!real_valued) {
    // Two grid states inside the region of one common target.
    std::map<ParamMap, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < details.size(); ++i) {
      if (details[i].cell.in_high_fidelity_region) groups[details[i].target].push_back(i);
    }
    double best_mutual = -1.0;
    std::pair<std::size_t, std::size_t> pair{0, 0};
    for (const auto& [target, members] : groups) {
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          const auto& da = details[members[a]];
          const auto& db = details[members[b]];
          if (same_property(da.cell.property, db.cell.property)) continue;
          const double f = ev.fidelity(da.params, Role::Grid, db.params, Role::Grid);
          if (f >= spec.fidelity_threshold && f > best_mutual) {
            best_mutual = f;
            pair = {members[a], members[b]};
          }
        }
      }
    }
    if (best_mutual >= 0.0) {
      out.found = true;
      out.kind = "mutual";
      out.state_a = details[pair.first].params;
      out.role_a = Role::Grid;
      out.state_b = details[pair.second].params;
      out.role_b = Role::Grid;
    }
  }

  if (out.found) {
    // Report values recomputed from the parameters alone.
    out.fidelity = ev.fidelity(out.state_a, out.role_a, out.state_b, out.role_b);
    out.property_a = ev.property(out.state_a, out.role_a);
    out.property_b = ev.property(out.state_b, out.role_b);
  }
  return out;
}

void validate(const PnesScanSpec& spec) {
  for (const Axis* axis : {&spec.n_twb, &spec.n_pssv}) {
    if (axis->steps < 2) throw ConfigError(fmt::format("axis '{}' needs steps >= 2", axis->name));
    if (!(axis->min >= 0.0 && axis->min < axis->max)) {
      throw ConfigError(fmt::format("axis '{}' needs 0 <= min < max", axis->name));
    }
    if (axis->log_scale && !(axis->min > 0.0)) {
      throw ConfigError(fmt::format("log axis '{}' needs min > 0", axis->name));
    }
  }
  if (spec.thresholds.empty()) throw ConfigError("PNES scan needs at least one threshold");
  for (double t : spec.thresholds) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ConfigError(fmt::format("threshold must lie in (0,1), got {}", t));
    }
  }
}

PnesScanResult pnes_scan(const PnesScanSpec& spec, const ScanOptions& options) {
  validate(spec);
  const auto twb_grid = spec.n_twb.values();
  const auto pssv_grid = spec.n_pssv.values();
  const auto limit = pssv_asymptotic_nongaussianity();

  std::vector<PnesState> twb;
  std::vector<PnesState> pssv;
  std::vector<double> pssv_delta(pssv_grid.size());
  for (double n : twb_grid) twb.push_back(pnes_from_energy(n, PnesVariant::TWB));
  for (double n : pssv_grid) pssv.push_back(pnes_from_energy(n, PnesVariant::PSSV));
  for (std::size_t j = 0; j < pssv.size(); ++j) {
    pssv_delta[j] = renormalized_nongaussianity(pssv[j], limit);
  }

  PnesScanResult out;
  out.grid.resize(twb_grid.size() * pssv_grid.size());
  parallel_for(out.grid.size(), options.threads, [&](std::size_t idx) {
    const std::size_t i = idx / pssv_grid.size();
    const std::size_t j = idx % pssv_grid.size();
    PnesGridCell& c = out.grid[idx];
    c.n_twb = twb_grid[i];
    c.n_pssv = pssv_grid[j];
    c.fidelity = fidelity_pnes(twb[i], pssv[j]);
    c.nongaussianity = pssv_delta[j];
    for (double t : spec.thresholds) c.in_region.push_back(c.fidelity >= t);
  });

  out.curve.resize(pssv_grid.size());
  parallel_for(out.curve.size(), options.threads, [&](std::size_t j) {
    const double n = pssv_grid[j];
    out.curve[j] = {n, fidelity_pnes(pnes_from_energy(n, PnesVariant::TWB), pssv[j]),
                    pssv_delta[j]};
  });
  return out;
}

}  // namespace cvfid
