#include "vefluid/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "vefluid/errors.hpp"

namespace vefluid {

namespace {

using Json = nlohmann::json;

void check_keys(const Json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + "/" + key + ": unknown field");
    }
  }
}

double number(const Json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "/" + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "/" + key + ": must be finite");
  return x;
}

std::uint64_t count(const Json& obj, const std::string& where, const char* key,
                    std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(where + "/" + key + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const Json& obj, const std::string& where, const char* key,
                 const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "/" + key + ": expected a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Creep: return "creep";
    case ExperimentKind::Relax: return "relax";
    case ExperimentKind::General: return "general";
    case ExperimentKind::Steady: return "steady";
    case ExperimentKind::Verify: return "verify";
    case ExperimentKind::OneD: return "oned";
  }
  return "creep";
}

ExperimentKind parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Creep, ExperimentKind::Relax, ExperimentKind::General,
                 ExperimentKind::Steady, ExperimentKind::Verify, ExperimentKind::OneD}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

Scenario default_scenario(ExperimentKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ExperimentKind::Relax:
      s.t_end = 100.0;
      break;
    case ExperimentKind::OneD:
      s.tbar11 = 0.01;
      s.t_end = 10.0;
      break;
    default:
      break;
  }
  return s;
}

ModelParams Scenario::params() const {
  return dimensional ? *dimensional : ModelParams::scaled(eta_bar);
}

double Scenario::effective_eta_bar() const {
  return dimensional ? dimensional->eta_G / dimensional->eta_p : eta_bar;
}

void Scenario::validate() const {
  require(std::isfinite(eta_bar) && eta_bar > 0.0, "params/eta_bar: must be positive");
  if (dimensional) {
    try {
      dimensional->validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("params: ") + e.what());
    }
    const bool uniaxial = kind == ExperimentKind::Creep || kind == ExperimentKind::Relax ||
                          kind == ExperimentKind::OneD || kind == ExperimentKind::Verify;
    require(!uniaxial || dimensional->eta_p > 0.0,
            "params/eta_p: the nondimensional uniaxial equations need eta_p > 0");
  }
  require(std::isfinite(tbar11), "schedule/tbar11: must be finite");
  require(t_end > 0.0, "schedule/t_end: must be positive");
  const bool creepLike = kind == ExperimentKind::Creep || kind == ExperimentKind::Verify ||
                         (kind == ExperimentKind::General && shear_rate == 0.0);
  if (creepLike) {
    require(t_unload >= 0.0 && t_unload <= t_end,
            "schedule/t_unload: must lie in [0, t_end]");
  }
  if (kind == ExperimentKind::Steady) require(tbar11 >= 0.0, "schedule/tbar11: must be >= 0");
  require(b0 > 0.0, "schedule/b0: must be positive");
  require(!strain_rate.empty() && strain_rate.front().t_start == 0.0,
          "schedule/strain_rate: first piece must start at 0");
  for (std::size_t i = 1; i < strain_rate.size(); ++i) {
    require(strain_rate[i].t_start > strain_rate[i - 1].t_start,
            "schedule/strain_rate: start times must increase");
  }
  if (kind == ExperimentKind::Relax) {
    require(strain_rate.back().t_start < t_end, "schedule/strain_rate: extends past t_end");
  }
  require(std::isfinite(shear_rate), "schedule/shear_rate: must be finite");
  const double axis = std::hypot(rotate[0], rotate[1], rotate[2]);
  require(axis > 0.0 && std::isfinite(rotate[3]), "schedule/rotate: needs a nonzero axis");
  require(samples >= 1, "integrator/samples: must be >= 1");
  require(oracle_states >= 1, "verify/states: must be >= 1");
  try {
    integrator.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
}

Scenario parse_scenario(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"schema", "kind", "variant", "params", "schedule", "integrator", "verify",
                        "output"});
  require(root.contains("schema"), "/schema: required");
  require(root["schema"].is_number_integer() && root["schema"].get<long>() == 1,
          "/schema: only schema 1 is supported");
  require(root.contains("kind") && root["kind"].is_string(), "/kind: required string");

  Scenario s = default_scenario(parse_kind(root["kind"].get<std::string>()));
  s.variant = parse_variant(text(root, "", "variant", "stretch"));

  if (root.contains("params")) {
    const Json& p = root["params"];
    check_keys(p, "/params", {"eta_bar", "mu", "eta_p", "eta_G", "rho"});
    const bool anyDim = p.contains("mu") || p.contains("eta_p") || p.contains("eta_G") ||
                        p.contains("rho");
    if (anyDim) {
      require(!p.contains("eta_bar"), "/params: give either eta_bar or the dimensional set");
      for (const char* k : {"mu", "eta_p", "eta_G", "rho"}) {
        require(p.contains(k), std::string("/params/") + k + ": dimensional mode needs mu, eta_p, eta_G and rho");
      }
      s.dimensional = ModelParams{number(p, "/params", "mu", 0.0), number(p, "/params", "eta_p", 0.0),
                                  number(p, "/params", "eta_G", 0.0), number(p, "/params", "rho", 0.0)};
    } else {
      s.eta_bar = number(p, "/params", "eta_bar", s.eta_bar);
    }
  }

  if (root.contains("schedule")) {
    const Json& sc = root["schedule"];
    const std::string w = "/schedule";
    check_keys(sc, w, {"tbar11", "t_unload", "t_end", "b0", "strain_rate", "shear_rate", "rotate"});
    s.tbar11 = number(sc, w, "tbar11", s.tbar11);
    s.t_unload = number(sc, w, "t_unload", s.t_unload);
    s.t_end = number(sc, w, "t_end", s.t_end);
    s.b0 = number(sc, w, "b0", s.b0);
    s.shear_rate = number(sc, w, "shear_rate", s.shear_rate);
    if (sc.contains("strain_rate")) {
      const Json& arr = sc["strain_rate"];
      if (arr.is_number()) {
        s.strain_rate = {RatePiece{0.0, arr.get<double>()}};
      } else {
        require(arr.is_array() && !arr.empty(),
                w + "/strain_rate: expected a number or a list of [t, rate] pairs");
        s.strain_rate.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
          const Json& piece = arr[i];
          const std::string at = w + "/strain_rate/" + std::to_string(i);
          require(piece.is_array() && piece.size() == 2 && piece[0].is_number() &&
                      piece[1].is_number(),
                  at + ": expected [t, rate]");
          s.strain_rate.push_back({piece[0].get<double>(), piece[1].get<double>()});
        }
      }
    }
    if (sc.contains("rotate")) {
      const Json& r = sc["rotate"];
      require(r.is_array() && r.size() == 4 &&
                  std::all_of(r.begin(), r.end(), [](const Json& v) { return v.is_number(); }),
              w + "/rotate: expected [ax, ay, az, angle]");
      for (std::size_t i = 0; i < 4; ++i) s.rotate[i] = r[i].get<double>();
    }
  }

  if (root.contains("integrator")) {
    const Json& in = root["integrator"];
    const std::string w = "/integrator";
    check_keys(in, w, {"rtol", "atol", "h0", "h_min", "h_max", "max_steps", "samples"});
    s.integrator.rtol = number(in, w, "rtol", s.integrator.rtol);
    s.integrator.atol = number(in, w, "atol", s.integrator.atol);
    s.integrator.h0 = number(in, w, "h0", s.integrator.h0);
    s.integrator.h_min = number(in, w, "h_min", s.integrator.h_min);
    if (in.contains("h_max")) s.integrator.h_max = number(in, w, "h_max", 0.0);
    s.integrator.max_steps = count(in, w, "max_steps", s.integrator.max_steps);
    s.samples = count(in, w, "samples", s.samples);
  }

  if (root.contains("verify")) {
    const Json& v = root["verify"];
    check_keys(v, "/verify", {"samples", "states", "seed"});
    s.oracle_samples = count(v, "/verify", "samples", s.oracle_samples);
    s.oracle_states = count(v, "/verify", "states", s.oracle_states);
    s.seed = count(v, "/verify", "seed", s.seed);
  }

  if (root.contains("output")) {
    const Json& o = root["output"];
    check_keys(o, "/output", {"csv", "report", "plot"});
    s.csv = text(o, "/output", "csv", "");
    s.report = text(o, "/output", "report", "");
    s.plot = text(o, "/output", "plot", "");
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open scenario '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Tensor3 axis_angle_rotation(const std::array<double, 4>& aa) {
  const double n = std::hypot(aa[0], aa[1], aa[2]);
  if (!(n > 0.0)) throw ConfigError("rotation axis must be nonzero");
  const double x = aa[0] / n, y = aa[1] / n, z = aa[2] / n;
  const double c = std::cos(aa[3]), s = std::sin(aa[3]), C = 1.0 - c;
  return Tensor3({c + x * x * C, x * y * C - z * s, x * z * C + y * s,
                  y * x * C + z * s, c + y * y * C, y * z * C - x * s,
                  z * x * C - y * s, z * y * C + x * s, c + z * z * C});
}

}  // namespace vefluid
