#pragma once

// Thermodynamic audits of trajectories and a sampling oracle for the
// constrained maximization of the rate of dissipation.

#include <cstddef>
#include <cstdint>

#include "vefluid/experiments.hpp"
#include "vefluid/general_runs.hpp"
#include "vefluid/model.hpp"
#include "vefluid/tensor3.hpp"

namespace vefluid {

struct AuditThresholds {
  double dissipation = 1e-12;  // xi >= -dissipation
  double energy = 1e-6;
  double det = 1e-6;
  double incompressibility = 1e-9;
};

struct AuditReport {
  std::size_t samples = 0;
  double max_dissipation_negativity = 0.0;  // max(0, -xi)
  double max_energy_residual = 0.0;
  double max_det_residual = 0.0;
  double max_incompressibility = 0.0;  // max of |tr L|, |tr Dp|, |tr DG|
  bool dissipation_ok = true;
  bool energy_ok = true;
  bool det_ok = true;
  bool incompressibility_ok = true;

  bool passed() const { return dissipation_ok && energy_ok && det_ok && incompressibility_ok; }
};

/// Audits a uniaxial series with the scaled parameters of its eta_bar. The
/// stress at each sample is the applied diag(T_bar_11, 0, 0).
AuditReport audit_trajectory(const TimeSeries& series, DissipationVariant variant,
                             const AuditThresholds& th = {});

/// Audits a general run with its own parameters, variant and stress.
AuditReport audit_trajectory(const GeneralTrajectory& traj, const AuditThresholds& th = {});

struct Candidate {
  SymTensor3 dp;
  Tensor3 lg;  // symmetric part D_G, skew part zero
};

/// Rates maximizing the dissipation at a stress T and stretch B. Requires
/// eta_p > 0 and T coaxial with B (otherwise the constraint depends on the
/// spin of the natural configuration); throws DomainError if not.
Candidate closed_form_candidate(const SymTensor3& t, const SymTensor3& b, const ModelParams& params,
                                DissipationVariant variant);

/// Combined residual of both stationarity conditions with the multiplier
/// eliminated, relative to max(|T|, mu).
double stationarity_residual(const SymTensor3& t, const SymTensor3& b, const SymTensor3& dp,
                             const Tensor3& lg, const ModelParams& params,
                             DissipationVariant variant);

/// Constraint residual: xi - [(V T V^{-1}) . L_G + (T - mu B) . Dp].
double constraint_residual(const SymTensor3& t, const SymTensor3& b, const SymTensor3& dp,
                           const Tensor3& lg, const ModelParams& params,
                           DissipationVariant variant);

struct MaximizationProbe {
  SymTensor3 T;
  SymTensor3 B;
  Candidate candidate;
  double xi_candidate = 0.0;
  double constraint = 0.0;     // |constraint residual| of the candidate, relative
  double trace = 0.0;          // max |tr Dp|, |tr L_G|
  double stationarity = 0.0;
  double skew_sensitivity = 0.0;  // constraint change under random spins of L_G
  std::size_t samples_requested = 0;
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;
  double max_excess = 0.0;  // largest xi(sample) - xi(candidate), relative to xi(candidate)
  bool degenerate = false;  // feasible set is the origin
  bool passed = false;
};

/// Draws feasible perturbations of the closed-form candidate (sample i uses a
/// generator seeded from (seed, i) only) and reports how far any exceeds it.
/// Throws OracleInconclusiveError when more than 10% of samples fail to project.
MaximizationProbe maximization_oracle(const SymTensor3& t, const SymTensor3& b,
                                      const ModelParams& params, DissipationVariant variant,
                                      std::size_t n_samples, std::uint64_t seed = 1);

/// A random admissible state: B = Q diag(a, b, 1/(ab)) Q^T and T = Q diag(t) Q^T
/// with a random rotation Q, a, b in [0.5, 2] and t in [-2, 2]. Depends on (seed, index) only.
struct AdmissibleState {
  SymTensor3 T;
  SymTensor3 B;
};
AdmissibleState random_admissible_state(std::uint64_t seed, std::size_t index);

/// splitmix64 finalizer, used to derive per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace vefluid
