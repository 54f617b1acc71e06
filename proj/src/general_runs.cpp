#include "vefluid/general_runs.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <string>
#include <tuple>

#include "context.hpp"
#include "vefluid/errors.hpp"

namespace vefluid {

namespace {

SymTensor3 state_B(std::span<const double> y) {
  return from_sym_coords({y[0], y[1], y[2], y[3], y[4], y[5]});
}

double normal_component(const Tensor3& s, const std::array<double, 3>& n) {
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) v += n[static_cast<std::size_t>(i)] * s(i, j) * n[static_cast<std::size_t>(j)];
  }
  return v;
}

std::array<double, 3> column(const Tensor3& q, int j) { return {q(0, j), q(1, j), q(2, j)}; }

// Axial extension rate and the resulting fields for a prescribed axial load.
struct CreepInstant {
  double r = 0.0;
  Tensor3 L;
  EvolutionRate ev;
  Tensor3 stress;
};

CreepInstant creep_instant(const SymTensor3& b, double load, const GeneralCreepSpec& spec,
                           const Tensor3& axial) {
  const auto n = column(spec.rotation, 0);
  const auto m = column(spec.rotation, 1);
  auto eval = [&](double r) {
    const Tensor3 l = r * axial;
    EvolutionRate ev = evolution_rhs_general(b, l, spec.params, spec.variant);
    const Tensor3 s = stress_general_full(b, ev.bdot, l, spec.params, spec.variant);
    return std::make_tuple(l, ev, s, normal_component(s, n) - normal_component(s, m));
  };
  // Bdot and the stress are affine in r, so two evaluations fix the rate.
  const auto [l0, ev0, s0, f0] = eval(0.0);
  const auto [l1, ev1, s1, f1] = eval(1.0);
  if (!(std::abs(f1 - f0) > 0.0)) {
    throw DegeneracyError("axial stress does not respond to the extension rate");
  }
  CreepInstant c;
  c.r = (load - f0) / (f1 - f0);
  c.L = c.r * axial;
  c.ev = evolution_rhs_general(b, c.L, spec.params, spec.variant);
  const Tensor3 s = stress_general_full(b, c.ev.bdot, c.L, spec.params, spec.variant);
  c.stress = s - normal_component(s, m) * Tensor3::identity();
  return c;
}

}  // namespace

void GeneralCreepSpec::validate() const {
  params.validate();
  if (!std::isfinite(load)) throw ConfigError("creep load must be finite");
  if (!(t_unload >= 0.0 && t_unload <= t_end && t_end > 0.0)) {
    throw ConfigError("creep schedule needs 0 <= t_unload <= t_end and t_end > 0");
  }
  const Tensor3 qtq = transpose(rotation) * rotation;
  if (norm(qtq - Tensor3::identity()) > 1e-10 || det(rotation) < 0.0) {
    throw ConfigError("creep axis rotation must be a proper orthogonal tensor");
  }
  if (samples_per_segment < 1) throw ConfigError("samples per segment must be >= 1");
}

GeneralTrajectory run_general_creep(const GeneralCreepSpec& spec,
                                    const ode::IntegratorConfig& cfg) {
  spec.validate();
  const Tensor3 axial = conjugate(spec.rotation, Tensor3::diag(1.0, -0.5, -0.5));

  auto rhs_for = [&spec, axial](double load) -> ode::Rhs {
    return [&spec, axial, load](double, std::span<const double> y, std::span<double> dy) {
      const CreepInstant c = creep_instant(state_B(y), load, spec, axial);
      const auto bd = sym_coords(c.ev.bdot);
      std::copy(bd.begin(), bd.end(), dy.begin());
      dy[6] = c.r;
    };
  };
  std::vector<ode::Segment> segs;
  if (spec.t_unload > 0.0) {
    segs.push_back({0.0, spec.t_unload, rhs_for(spec.load),
                    ode::uniform_grid(0.0, spec.t_unload, spec.samples_per_segment)});
  }
  if (spec.t_end > spec.t_unload) {
    segs.push_back({spec.t_unload, spec.t_end, rhs_for(0.0),
                    ode::uniform_grid(spec.t_unload, spec.t_end, spec.samples_per_segment)});
  }

  const auto b0 = sym_coords(SymTensor3::identity());
  ode::State y0(b0.begin(), b0.end());
  y0.push_back(0.0);
  const ode::Trajectory tr = detail::with_context(
      "general creep run", [&] { return ode::solve_piecewise(segs, y0, cfg); });

  GeneralTrajectory out{spec.params, spec.variant, {}};
  out.rows.reserve(tr.t.size());
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const double t = tr.t[i];
    const double load = (spec.t_unload > 0.0 && t <= spec.t_unload) ? spec.load : 0.0;
    const SymTensor3 b = state_B(tr.y[i]);
    const CreepInstant c = creep_instant(b, load, spec, axial);
    out.rows.push_back({t, b, c.ev.bdot, c.L, c.stress, tr.y[i][6], c.ev.condition,
                        c.ev.asymmetry});
  }
  return out;
}

void GeneralFlowSpec::validate() const {
  params.validate();
  (void)spd_roots(B0);
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (schedule.empty() || schedule.front().t_start != 0.0) {
    throw ConfigError("velocity-gradient schedule must start at t = 0");
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && !(schedule[i].t_start > schedule[i - 1].t_start)) {
      throw ConfigError("velocity-gradient schedule times must increase");
    }
    if (std::abs(trace(schedule[i].L)) > 1e-10) {
      throw ConfigError("velocity gradient must be traceless");
    }
  }
  if (schedule.back().t_start >= t_end) throw ConfigError("schedule extends past t_end");
  if (samples_per_segment < 1) throw ConfigError("samples per segment must be >= 1");
}

GeneralTrajectory run_general_flow(const GeneralFlowSpec& spec, const ode::IntegratorConfig& cfg) {
  spec.validate();
  std::vector<ode::Segment> segs;
  for (std::size_t k = 0; k < spec.schedule.size(); ++k) {
    const double t0 = spec.schedule[k].t_start;
    const double t1 = k + 1 < spec.schedule.size() ? spec.schedule[k + 1].t_start : spec.t_end;
    const Tensor3 l = spec.schedule[k].L;
    ode::Rhs rhs = [&spec, l](double, std::span<const double> y, std::span<double> dy) {
      const auto bd = sym_coords(evolution_rhs_general(state_B(y), l, spec.params, spec.variant).bdot);
      std::copy(bd.begin(), bd.end(), dy.begin());
    };
    segs.push_back({t0, t1, std::move(rhs), ode::uniform_grid(t0, t1, spec.samples_per_segment)});
  }
  const auto b0 = sym_coords(spec.B0);
  const ode::Trajectory tr = detail::with_context("general flow run", [&] {
    return ode::solve_piecewise(segs, ode::State(b0.begin(), b0.end()), cfg);
  });

  GeneralTrajectory out{spec.params, spec.variant, {}};
  std::size_t piece = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const double t = tr.t[i];
    while (piece + 1 < spec.schedule.size() && t > spec.schedule[piece + 1].t_start) ++piece;
    const Tensor3 l = spec.schedule[piece].L;
    const SymTensor3 b = state_B(tr.y[i]);
    const EvolutionRate ev = evolution_rhs_general(b, l, spec.params, spec.variant);
    const Tensor3 s = stress_general_full(b, ev.bdot, l, spec.params, spec.variant);
    out.rows.push_back({t, b, ev.bdot, l, s, 0.0, ev.condition, ev.asymmetry});
  }
  return out;
}

GeneralFlowSpec simple_shear(const ModelParams& params, DissipationVariant variant, double rate,
                             double t_end) {
  Tensor3 l;
  l(0, 1) = rate;
  GeneralFlowSpec spec;
  spec.params = params;
  spec.variant = variant;
  spec.schedule = {FlowPiece{0.0, l}};
  spec.t_end = t_end;
  return spec;
}

}  // namespace vefluid
