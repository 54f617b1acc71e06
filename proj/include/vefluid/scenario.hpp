#pragma once

// Experiment scenarios, read from versioned JSON or assembled from CLI flags.
//
// {
//   "schema": 1,
//   "kind": "creep" | "relax" | "general" | "steady" | "verify" | "oned",
//   "variant": "stretch" | "plain",
//   "params": {"eta_bar": 10}  or  {"mu": .., "eta_p": .., "eta_G": .., "rho": ..},
//   "schedule": {"tbar11", "t_unload", "t_end", "b0", "strain_rate": [[t, rate], ...],
//                "shear_rate", "rotate": [ax, ay, az, angle]},
//   "integrator": {"rtol", "atol", "h0", "h_min", "h_max", "max_steps", "samples"},
//   "verify": {"samples", "states", "seed"},
//   "output": {"csv", "report", "plot"}
// }
//
// Every block except schema and kind is optional; unknown keys are rejected.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vefluid/experiments.hpp"
#include "vefluid/integrate.hpp"
#include "vefluid/model.hpp"

namespace vefluid {

enum class ExperimentKind { Creep, Relax, General, Steady, Verify, OneD };

std::string_view to_string(ExperimentKind k);
/// Throws ConfigError for an unknown name.
ExperimentKind parse_kind(std::string_view name);

struct Scenario {
  ExperimentKind kind = ExperimentKind::Creep;
  DissipationVariant variant = DissipationVariant::StretchWeighted;
  double eta_bar = 10.0;
  /// Dimensional parameters; when set, eta_bar is eta_G / eta_p.
  std::optional<ModelParams> dimensional;

  double tbar11 = 1.0;
  double t_unload = 10.0;
  double t_end = 30.0;
  double b0 = 2.0;
  std::vector<RatePiece> strain_rate{RatePiece{}};
  double shear_rate = 0.0;                      // general: simple shear when nonzero
  std::array<double, 4> rotate{0.0, 0.0, 1.0, 0.0};  // axis and angle (rad) of the creep axis

  std::size_t samples = 1000;  // output samples per segment
  std::size_t oracle_samples = 1000;
  std::size_t oracle_states = 20;
  std::uint64_t seed = 1;
  ode::IntegratorConfig integrator;

  std::string csv;
  std::string report;
  std::string plot;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Effective model parameters: the dimensional block, or the scaled set for eta_bar.
  ModelParams params() const;
  /// eta_G / eta_p for dimensional parameters, eta_bar otherwise.
  double effective_eta_bar() const;
};

/// Kind-specific defaults (relaxation runs to t_bar = 100, the 1D reduction
/// uses T_bar_11 = 0.01 up to t_bar = 10).
Scenario default_scenario(ExperimentKind kind);

/// Throws ConfigError with a JSON pointer to the offending field, or the
/// parser's line and column for malformed text.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Rotation about a unit axis (normalised here) by an angle in radians.
Tensor3 axis_angle_rotation(const std::array<double, 4>& axis_angle);

}  // namespace vefluid
