#include <algorithm>
#include <cmath>

#include "vefluid/errors.hpp"
#include "vefluid/verify.hpp"

namespace vefluid {

namespace {

struct Sample {
  SymTensor3 B;
  SymTensor3 Bdot;
  Tensor3 L;
  Tensor3 T;
};

void accumulate(AuditReport& rep, const Sample& s, const ModelParams& params,
                DissipationVariant variant) {
  const RecoveredRates r = recover_rates(s.B, s.Bdot, s.L);
  const double scale = std::max({1.0, norm(r.dp), norm(r.dg), norm(s.L)});
  const double incompressibility =
      std::max({std::abs(trace(s.L)), std::abs(trace(r.dp)), std::abs(trace(r.dg))}) / scale;

  double xi = 0.0;
  try {
    xi = dissipation_rate(s.B, r.dp, r.dg, params, variant);
  } catch (const ConstraintError&) {
    // Already counted as an incompressibility failure; keep auditing the deviatoric rates.
    xi = dissipation_rate(s.B, deviator(r.dp), deviator(r.dg), params, variant);
  }
  const double power = inner(s.T, sym(s.L));
  const double storage = stored_energy_rate(s.Bdot, params);
  const double energy = std::abs(power - storage - xi) / std::max(xi, params.mu);

  rep.max_dissipation_negativity = std::max(rep.max_dissipation_negativity, -xi);
  rep.max_energy_residual = std::max(rep.max_energy_residual, energy);
  rep.max_det_residual = std::max(rep.max_det_residual, std::abs(det(s.B) - 1.0));
  rep.max_incompressibility = std::max(rep.max_incompressibility, incompressibility);
  ++rep.samples;
}

void finish(AuditReport& rep, const AuditThresholds& th) {
  rep.dissipation_ok = rep.max_dissipation_negativity <= th.dissipation;
  rep.energy_ok = rep.max_energy_residual < th.energy;
  rep.det_ok = rep.max_det_residual < th.det;
  rep.incompressibility_ok = rep.max_incompressibility < th.incompressibility;
}

}  // namespace

AuditReport audit_trajectory(const TimeSeries& series, DissipationVariant variant,
                             const AuditThresholds& th) {
  const ModelParams params = ModelParams::scaled(series.eta_bar);
  AuditReport rep;
  for (const SeriesRow& row : series.rows) {
    const UniaxialTensors u = uniaxial_tensors(row);
    accumulate(rep, {u.B, u.Bdot, u.L, u.T}, params, variant);
  }
  finish(rep, th);
  return rep;
}

AuditReport audit_trajectory(const GeneralTrajectory& traj, const AuditThresholds& th) {
  AuditReport rep;
  for (const GeneralRow& row : traj.rows) {
    accumulate(rep, {row.B, row.Bdot, row.L, row.stress}, traj.params, traj.variant);
  }
  finish(rep, th);
  return rep;
}

}  // namespace vefluid
