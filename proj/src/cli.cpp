#include "cvfid/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "cvfid/errors.hpp"
#include "cvfid/oracle_check.hpp"
#include "cvfid/pnes.hpp"
#include "cvfid/scan_io.hpp"
#include "cvfid/state_io.hpp"

namespace cvfid::cli {

namespace {

struct ScanArgs {
  std::string preset;
  std::string config;
  std::string out;
  std::string curve;
  std::string format = "csv";
  std::vector<std::string> axes;
  std::optional<double> threshold;
  int threads = 0;
};

void add_scan_source(CLI::App* cmd, ScanArgs& a) {
  auto* p = cmd->add_option("--preset", a.preset, "Named figure preset")
                ->check(CLI::IsMember(preset_names()));
  auto* c = cmd->add_option("--config", a.config, "Scan configuration file (JSON)");
  p->excludes(c);
  cmd->add_option("--axis", a.axes, "Override an axis: name:min:max:steps[:log]");
  cmd->add_option("--threshold", a.threshold, "Override the fidelity threshold");
  cmd->add_option("--threads", a.threads, "Worker threads (default: $CVFID_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

AnyScanSpec resolve_spec(const ScanArgs& a) {
  if (a.preset.empty() == a.config.empty()) {
    throw ConfigError("exactly one of --preset and --config is required");
  }
  AnyScanSpec spec = a.preset.empty() ? load_scan_config(a.config) : preset(a.preset);
  for (const auto& text : a.axes) override_axis(spec, text);
  if (a.threshold) override_threshold(spec, *a.threshold);
  return spec;
}

// Writes to `path`, or to `out` when the path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError(fmt::format("cannot write '{}'", path));
  fn(file);
  if (!file) throw Error(fmt::format("write to '{}' failed", path));
}

int cmd_fidelity(const std::string& a_path, const std::string& b_path, std::ostream& out) {
  const AnyState a = load_state(a_path);
  const AnyState b = load_state(b_path);
  if (a.index() != b.index()) {
    throw StateFileError(fmt::format("states are of different kinds ({} vs {})", state_kind(a),
                                     state_kind(b)));
  }
  const double f = state_fidelity(a, b);
  const auto bounds = trace_distance_bounds(f);
  fmt::print(out, "fidelity {:.12f}\n", f);
  fmt::print(out, "bures_distance {:.12g}\n", bures_distance(f));
  fmt::print(out, "trace_distance_lower {:.12g}\n", bounds.lower);
  fmt::print(out, "trace_distance_upper {:.12g}\n", bounds.upper);
  return kExitOk;
}

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  const AnyScanSpec spec = resolve_spec(a);
  const ScanOptions opts{a.threads};
  if (const auto* s = std::get_if<ScanSpec>(&spec)) {
    const auto cells = scan(*s, opts);
    emit(a.out, out, [&](std::ostream& o) {
      if (a.format == "json") {
        write_scan_json(o, *s, cells);
      } else {
        write_scan_csv(o, *s, cells);
      }
    });
    return kExitOk;
  }
  const auto& p = std::get<PnesScanSpec>(spec);
  const auto result = pnes_scan(p, opts);
  emit(a.out, out, [&](std::ostream& o) {
    if (a.format == "json") {
      write_pnes_json(o, p, result);
    } else {
      write_pnes_csv(o, p, result);
    }
  });
  std::string curve = a.curve;
  if (curve.empty() && !a.out.empty() && a.format == "csv") curve = a.out + ".curve.csv";
  if (!curve.empty()) emit(curve, out, [&](std::ostream& o) { write_pnes_curve_csv(o, result); });
  return kExitOk;
}

int cmd_counterexample(const ScanArgs& a, std::ostream& out) {
  const AnyScanSpec spec = resolve_spec(a);
  const auto* s = std::get_if<ScanSpec>(&spec);
  if (!s) throw ConfigError("counterexample needs a family scan, not a PNES grid");
  const Counterexample c = find_counterexample(*s, ScanOptions{a.threads});
  emit(a.out, out, [&](std::ostream& o) { o << counterexample_to_json(*s, c).dump(2) << '\n'; });
  return kExitOk;
}

struct PnesArgs {
  std::optional<double> n_twb, n_pssv, y_twb, y_pssv;
  double tail = kPnesTailTolerance;
  double ladder_tolerance = 1e-8;
};

PnesState pnes_state(PnesVariant v, const std::optional<double>& n, const std::optional<double>& y,
                     double tail) {
  if (n.has_value() == y.has_value()) {
    throw ConfigError(fmt::format("give exactly one of the energy and y for the {} state",
                                  to_string(v)));
  }
  const double yy = y ? *y : y_from_energy(*n, v);
  const int cutoff = pnes_cutoff(v, yy, tail);
  return v == PnesVariant::TWB ? twb_coeffs(yy, cutoff) : pssv_coeffs(yy, cutoff);
}

int cmd_pnes(const PnesArgs& a, std::ostream& out) {
  const PnesState twb = pnes_state(PnesVariant::TWB, a.n_twb, a.y_twb, a.tail);
  const PnesState pssv = pnes_state(PnesVariant::PSSV, a.n_pssv, a.y_pssv, a.tail);
  const auto limit = pssv_asymptotic_nongaussianity(a.ladder_tolerance);
  fmt::print(out, "y_twb {:.12g}\n", *twb.y());
  fmt::print(out, "y_pssv {:.12g}\n", *pssv.y());
  fmt::print(out, "energy_twb {:.12g}\n", energy(twb));
  fmt::print(out, "energy_pssv {:.12g}\n", energy(pssv));
  fmt::print(out, "fidelity {:.12f}\n", fidelity_pnes(twb, pssv));
  fmt::print(out, "fidelity_closed_form {:.12f}\n", fidelity_twb_pssv(*twb.y(), *pssv.y()));
  fmt::print(out, "nongaussianity_twb {:.12g}\n", nongaussianity(twb));
  fmt::print(out, "nongaussianity_pssv {:.12g}\n", nongaussianity(pssv));
  fmt::print(out, "nongaussianity_limit {:.12g}\n", limit.value);
  fmt::print(out, "renormalized_nongaussianity_pssv {:.12g}\n",
             renormalized_nongaussianity(pssv, limit));
  return kExitOk;
}

struct OracleArgs {
  std::string family = "dsts1";
  std::optional<int> trials;
  std::uint64_t seed = 7;
  std::optional<double> max_energy;
  std::optional<double> tolerance;
  std::optional<double> target_deficit;
  std::optional<int> cutoff;
  std::string dump;
  bool dump_matrices = false;
  int threads = 0;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  OracleCheckOptions o = default_oracle_options(parse_oracle_family(a.family));
  if (a.trials) o.trials = *a.trials;
  o.seed = a.seed;
  if (a.max_energy) o.max_energy = *a.max_energy;
  if (a.tolerance) o.tolerance = *a.tolerance;
  if (a.target_deficit) o.target_deficit = *a.target_deficit;
  if (a.cutoff) o.two_mode_cutoff = *a.cutoff;
  o.keep_matrices = a.dump_matrices;
  o.threads = a.threads;
  const OracleReport r = oracle_check(o);
  fmt::print(out, "family {}\n", to_string(o.family));
  fmt::print(out, "trials {}\n", o.trials);
  fmt::print(out, "seed {}\n", o.seed);
  fmt::print(out, "max_energy {:.12g}\n", o.max_energy);
  fmt::print(out, "max_abs_difference {:.12g}\n", r.max_difference);
  fmt::print(out, "tolerance {:.12g}\n", o.tolerance);
  fmt::print(out, "max_sandwich_violation {:.12g}\n", r.max_sandwich_violation);
  fmt::print(out, "result {}\n", r.passed ? "PASS" : "FAIL");
  if (!a.dump.empty()) {
    emit(a.dump, out, [&](std::ostream& f) { f << to_json(r).dump(1) << '\n'; });
  }
  return r.passed ? kExitOk : kExitNumerical;
}

int cmd_state(const std::string& in, const std::string& out_path, std::ostream& out) {
  const AnyState s = load_state(in);
  if (out_path.empty()) {
    out << state_to_json(s).dump(2) << '\n';
  } else {
    save_state(out_path, s);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fidelity and physical properties of continuous-variable states", "cvfid"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);

  std::string a_path, b_path;
  auto* fid = app.add_subcommand("fidelity", "Fidelity of two states read from JSON files");
  fid->add_option("--a", a_path, "First state")->required();
  fid->add_option("--b", b_path, "Second state")->required();

  ScanArgs scan_args;
  auto* sc = app.add_subcommand("scan", "Grid scan of fidelity and property");
  add_scan_source(sc, scan_args);
  sc->add_option("--out", scan_args.out, "Output file (default: stdout)");
  sc->add_option("--curve", scan_args.curve,
                 "Equal-energy curve of a PNES grid (default: <out>.curve.csv)");
  sc->add_option("--format", scan_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  ScanArgs ce_args;
  auto* ce = app.add_subcommand("counterexample",
                                "High-fidelity pair with opposite properties (JSON)");
  add_scan_source(ce, ce_args);
  ce->add_option("--out", ce_args.out, "Output file (default: stdout)");

  PnesArgs pnes_args;
  auto* pn = app.add_subcommand("pnes", "TWB / PSSV fidelity and non-Gaussianity");
  pn->add_option("--n-twb", pnes_args.n_twb, "Energy of the TWB state");
  pn->add_option("--n-pssv", pnes_args.n_pssv, "Energy of the PSSV state");
  pn->add_option("--y-twb", pnes_args.y_twb, "y = tanh r of the TWB state");
  pn->add_option("--y-pssv", pnes_args.y_pssv, "y = tanh r of the PSSV state");
  pn->add_option("--tail-tolerance", pnes_args.tail, "Probability left beyond the cutoff")
      ->capture_default_str();
  pn->add_option("--ladder-tolerance", pnes_args.ladder_tolerance,
                 "Stopping step of the asymptotic non-Gaussianity ladder")
      ->capture_default_str();

  OracleArgs oracle_args;
  auto* oc = app.add_subcommand("oracle-check", "Closed forms against the Fock-space oracle");
  oc->add_option("--family", oracle_args.family, "dsts1, sts2 or pnes")->capture_default_str();
  oc->add_option("--trials", oracle_args.trials, "Random pairs (default 100)");
  oc->add_option("--seed", oracle_args.seed, "Random seed")->capture_default_str();
  oc->add_option("--max-energy", oracle_args.max_energy,
                 "Energy bound (defaults: dsts1 3, sts2 1.5, pnes 0.6)");
  oc->add_option("--tolerance", oracle_args.tolerance,
                 "Pass bound (defaults: dsts1 1e-6, sts2 1e-4, pnes 1e-8)");
  oc->add_option("--target-deficit", oracle_args.target_deficit,
                 "Single-mode trace deficit driving the cutoff (default 1e-10)");
  oc->add_option("--cutoff", oracle_args.cutoff, "Two-mode Fock cutoff (default 24)");
  oc->add_option("--dump", oracle_args.dump, "Write per-trial results as JSON");
  oc->add_flag("--dump-matrices", oracle_args.dump_matrices,
               "Include the density matrices in the dump");
  oc->add_option("--threads", oracle_args.threads, "Worker threads")
      ->check(CLI::NonNegativeNumber);

  std::string state_in, state_out;
  auto* st = app.add_subcommand("state", "Read a state file and write its canonical form");
  st->add_option("--in", state_in, "Input state")->required();
  st->add_option("--out", state_out, "Output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (fid->parsed()) return cmd_fidelity(a_path, b_path, out);
    if (sc->parsed()) return cmd_scan(scan_args, out);
    if (ce->parsed()) return cmd_counterexample(ce_args, out);
    if (pn->parsed()) return cmd_pnes(pnes_args, out);
    if (oc->parsed()) return cmd_oracle(oracle_args, out);
    if (st->parsed()) return cmd_state(state_in, state_out, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StateFileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const UndefinedQuantityError& e) {
    err << "undefined quantity: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const NumericalConsistencyError& e) {
    err << "numerical consistency error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const CutoffError& e) {
    err << "cutoff error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cvfid::cli
