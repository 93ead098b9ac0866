#pragma once

// Grid scans over the energy parametrizations: fidelity of every grid state
// to a target state (or target family) next to a physical property flag,
// plus a search for high-fidelity pairs with opposite properties.

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cvfid/gaussian_single.hpp"
#include "cvfid/gaussian_two.hpp"
#include "cvfid/pnes.hpp"

namespace cvfid {

/// DSTS1: (N, beta, x).  STS1: (N, beta) with x = 0.  STS2: (N, beta, gamma).
/// PNES: (N); grid states are PSSV and targets are TWB of the given energy.
enum class Family { DSTS1, STS1, STS2, PNES };
enum class Property { SubPoissonian, Classical, Separable, Nongaussianity };

std::string_view to_string(Family f);
std::string_view to_string(Property p);
Family parse_family(std::string_view name);
Property parse_property(std::string_view name);

/// Parameter names of a family, in canonical order.
std::vector<std::string> family_parameters(Family f);

using ParamMap = std::map<std::string, double>;
using PropertyValue = std::variant<bool, double>;

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
  bool log_scale = false;

  /// Grid values, endpoints included.
  std::vector<double> values() const;
};

/// How each family parameter of the target is obtained: a fixed value, the
/// value of the grid state (shared), or maximized over the axis grid (free).
struct TargetBinding {
  ParamMap fixed;
  std::vector<std::string> shared;
  std::vector<std::string> free;
};

struct ScanSpec {
  std::string name;
  Family family = Family::DSTS1;
  std::vector<Axis> axes;
  ParamMap fixed;  ///< grid-state parameters that are not scanned
  TargetBinding target;
  double fidelity_threshold = 0.99;
  Property property = Property::SubPoissonian;
  std::string note;
};

/// Throws ConfigError describing the first problem found.
void validate(const ScanSpec& spec);

struct ScanCell {
  std::vector<double> coordinates;  ///< one value per axis, in axis order
  double fidelity_to_target = 0.0;
  PropertyValue property;
  bool in_high_fidelity_region = false;
};

struct ScanOptions {
  int threads = 0;  ///< 0 selects default_threads()
};

/// Evaluates every grid point, row-major over the axes as listed.
std::vector<ScanCell> scan(const ScanSpec& spec, const ScanOptions& options = {});

/// Which member of a family a parameter set denotes.  Only PNES
/// distinguishes them (grid states are PSSV, targets TWB).
enum class Role { Grid, Target };

using AnyState = std::variant<GaussianState1, GaussianState2, PnesState>;

AnyState make_state(Family family, const ParamMap& params, Role role);
double state_fidelity(const AnyState& a, const AnyState& b);

/// Property of a state.  sub_poissonian of the vacuum is false (it is the
/// coherent state of zero amplitude).  nongaussianity is delta / delta_inf.
PropertyValue evaluate_property(Property property, const AnyState& state);

struct Counterexample {
  bool found = false;
  std::string kind;  ///< "target" (grid state vs its target) or "mutual" (two grid states)
  ParamMap state_a;
  Role role_a = Role::Grid;
  ParamMap state_b;
  Role role_b = Role::Target;
  double fidelity = 0.0;
  PropertyValue property_a;
  PropertyValue property_b;
  int refinement_steps = 0;
};

/// Scans the grid for a pair with fidelity >= threshold and opposite property
/// flags, preferring a grid state against its own target and falling back to
/// two grid states sharing one target.  The best grid hit is then moved by
/// coordinate bisection onto the property boundary while fidelity increases.
/// For the real-valued nongaussianity property the pair with the largest
/// property gap is returned.
Counterexample find_counterexample(const ScanSpec& spec, const ScanOptions& options = {});

struct PnesScanSpec {
  std::string name;
  Axis n_twb{"N_T", 0.0, 5.0, 51, false};
  Axis n_pssv{"N_S", 0.0, 5.0, 51, false};
  std::vector<double> thresholds{0.94, 0.92, 0.9};
  std::string note;
};

void validate(const PnesScanSpec& spec);

struct PnesGridCell {
  double n_twb = 0.0;
  double n_pssv = 0.0;
  double fidelity = 0.0;
  double nongaussianity = 0.0;  ///< renormalized, of the PSSV
  std::vector<bool> in_region;  ///< one flag per threshold
};

struct PnesCurvePoint {
  double energy = 0.0;
  double fidelity = 0.0;
  double nongaussianity = 0.0;  ///< renormalized
};

struct PnesScanResult {
  std::vector<PnesGridCell> grid;   ///< row-major: N_T slow, N_S fast
  std::vector<PnesCurvePoint> curve;  ///< equal energies along the N_S axis
};

PnesScanResult pnes_scan(const PnesScanSpec& spec, const ScanOptions& options = {});

}  // namespace cvfid
