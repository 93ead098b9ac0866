#include "cvfid/state_io.hpp"

#include <fstream>

#include <fmt/core.h>

#include "cvfid/errors.hpp"

namespace cvfid {

using nlohmann::json;

namespace {

template <int N>
Eigen::Matrix<double, N, N> read_matrix(const json& j) {
  if (!j.is_array() || j.size() != N) {
    throw StateFileError(fmt::format("\"cm\" must be a {0}x{0} array", N));
  }
  Eigen::Matrix<double, N, N> m;
  for (int r = 0; r < N; ++r) {
    if (!j[r].is_array() || j[r].size() != N) {
      throw StateFileError(fmt::format("\"cm\" must be a {0}x{0} array", N));
    }
    for (int c = 0; c < N; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

template <typename Matrix>
json write_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw StateFileError(fmt::format("missing field \"{}\"", key));
  if (!j[key].is_number()) throw StateFileError(fmt::format("field \"{}\" must be a number", key));
  return j[key].get<double>();
}

AnyState parse_pnes(const json& j) {
  const std::string name = j["variant"].get<std::string>();
  if (name == "custom" || name == "Custom") {
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) {
      throw StateFileError("custom PNES needs a \"coeffs\" array");
    }
    return PnesState::custom(j["coeffs"].get<std::vector<double>>());
  }
  const PnesVariant v = parse_pnes_variant(name);
  std::optional<int> n_max;
  if (j.contains("n_max")) n_max = j["n_max"].get<int>();
  double y = 0.0;
  if (j.contains("y")) {
    y = number(j, "y");
  } else {
    y = y_from_energy(number(j, "N"), v);
  }
  return v == PnesVariant::TWB ? twb_coeffs(y, n_max) : pssv_coeffs(y, n_max);
}

AnyState parse(const json& j) {
  if (!j.is_object()) throw StateFileError("state must be a JSON object");
  if (j.contains("variant")) return parse_pnes(j);
  int modes = 0;
  if (j.contains("modes")) {
    modes = j["modes"].get<int>();
    if (modes != 1 && modes != 2) throw StateFileError("\"modes\" must be 1 or 2");
  }
  if (j.contains("cm")) {
    const std::size_t n = j["cm"].is_array() ? j["cm"].size() : 0;
    if (n == 4 || modes == 2) return GaussianState2(read_matrix<4>(j["cm"]));
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    if (j.contains("mean")) {
      const auto& m = j["mean"];
      if (!m.is_array() || m.size() != 2) throw StateFileError("\"mean\" must have 2 entries");
      mean << m[0].get<double>(), m[1].get<double>();
    }
    return GaussianState1(mean, read_matrix<2>(j["cm"]));
  }
  if (j.contains("A")) {
    return GaussianState2::from_blocks(number(j, "A"), number(j, "B"), number(j, "C"));
  }
  if (j.contains("N")) {
    if (j.contains("gamma") || modes == 2) {
      const double gamma = j.contains("gamma") ? number(j, "gamma") : 0.5;
      return sts2_from_energy({number(j, "N"), number(j, "beta"), gamma});
    }
    const double x = j.contains("x") ? number(j, "x") : 0.0;
    return dsts1_from_energy({number(j, "N"), number(j, "beta"), x});
  }
  throw StateFileError("unrecognized state description");
}

}  // namespace

AnyState state_from_json(const json& j) {
  try {
    return parse(j);
  } catch (const StateFileError&) {
    throw;
  } catch (const json::exception& e) {
    throw StateFileError(fmt::format("malformed state: {}", e.what()));
  } catch (const Error& e) {
    throw StateFileError(fmt::format("invalid state: {}", e.what()));
  }
}

AnyState load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateFileError(fmt::format("cannot open state file '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw StateFileError(fmt::format("'{}': {}", path.string(), e.what()));
  }
  return state_from_json(j);
}

std::string_view state_kind(const AnyState& s) {
  switch (s.index()) {
    case 0: return "single";
    case 1: return "two";
    default: return "pnes";
  }
}

json state_to_json(const AnyState& s) {
  json j;
  if (const auto* g = std::get_if<GaussianState1>(&s)) {
    j["mean"] = {g->mean()(0), g->mean()(1)};
    j["cm"] = write_matrix(g->cm());
  } else if (const auto* g2 = std::get_if<GaussianState2>(&s)) {
    j["modes"] = 2;
    j["cm"] = write_matrix(g2->cm());
  } else {
    const auto& p = std::get<PnesState>(s);
    if (p.variant() == PnesVariant::Custom) {
      j["variant"] = "custom";
      j["coeffs"] = p.coeffs();
    } else {
      j["variant"] = std::string(to_string(p.variant()));
      j["y"] = *p.y();
      j["n_max"] = p.n_max();
    }
  }
  return j;
}

void save_state(const std::filesystem::path& path, const AnyState& s) {
  std::ofstream out(path);
  if (!out) throw StateFileError(fmt::format("cannot write '{}'", path.string()));
  out << state_to_json(s).dump(2) << '\n';
}

}  // namespace cvfid
