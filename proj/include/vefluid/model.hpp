#pragma once

// Constitutive core of the viscoelastic fluid: neo-Hookean storage on the
// natural-to-current stretch B, quadratic dissipation split between the
// natural configuration's own motion (D_G) and the motion from it (D_p).

#include <span>
#include <string_view>
#include <utility>

#include "vefluid/tensor3.hpp"

namespace vefluid {

enum class DissipationVariant {
  StretchWeighted,  // xi = eta_p Dp.(B Dp) + eta_G DG.(B DG)
  PlainQuadratic,   // xi = eta_p Dp.Dp + eta_G DG.DG
};

std::string_view to_string(DissipationVariant v);
/// Accepts "stretch" or "plain"; throws ConfigError otherwise.
DissipationVariant parse_variant(std::string_view name);

struct ModelParams {
  double mu = 1.0;     // elastic modulus
  double eta_p = 1.0;  // viscosity of the natural-to-current motion
  double eta_G = 1.0;  // viscosity of the reference-to-natural motion
  double rho = 1.0;

  /// Throws DomainError unless mu > 0, eta_G > 0, eta_p >= 0, rho > 0.
  void validate() const;

  /// Nondimensional parameters behind the uniaxial ODEs: mu = eta_p = rho = 1
  /// and eta_G = eta_bar, so time is measured in units of eta_p / mu.
  static ModelParams scaled(double eta_bar);
};

/// psi = mu / (2 rho) (tr B - 3). Throws DomainError for non-SPD B.
double stored_energy(const SymTensor3& b, const ModelParams& params);

/// rho dpsi/dt = (mu / 2) tr(Bdot).
double stored_energy_rate(const SymTensor3& bdot, const ModelParams& params);

/// Rate of dissipation. Throws ConstraintError when tr(Dp) or tr(DG) exceeds
/// 1e-10 (relative to the rate norms once those exceed 1).
double dissipation_rate(const SymTensor3& b, const SymTensor3& dp, const SymTensor3& dg,
                        const ModelParams& params, DissipationVariant variant);

/// Elastic part mu B of the stress; the spherical part is left out.
SymTensor3 stress_T_p(const SymTensor3& b, const ModelParams& params);

struct EvolutionRate {
  SymTensor3 bdot;
  double p_minus_lambda = 0.0;
  /// 1-norm condition number of the bordered linear system.
  double condition = 0.0;
  /// |skew part of the evolution equation residual| / |mu B^2|; zero when
  /// the upper convected rate is coaxial with B.
  double asymmetry = 0.0;
  /// |p - lambda| from the solve minus the value from the trace relation.
  double multiplier_residual = 0.0;
};

/// Solves the evolution equation for dB/dt given the velocity gradient.
/// The symmetric part of the equation together with tr(B^{-1} Bdot) = 0
/// determines Bdot and the multiplier difference p - lambda.
/// Throws DomainError for non-SPD B, ConstraintError when |tr L| > 1e-10,
/// DegeneracyError when the linear system is singular.
EvolutionRate evolution_rhs_general(const SymTensor3& b, const Tensor3& l,
                                    const ModelParams& params, DissipationVariant variant);

/// Stress up to its indeterminate spherical part, as a full tensor. It is
/// symmetric whenever the upper convected rate commutes with B.
Tensor3 stress_general_full(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l,
                            const ModelParams& params, DissipationVariant variant);

/// As stress_general_full, but throws DomainError if the relative skew part exceeds 1e-8.
SymTensor3 stress_general(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l,
                          const ModelParams& params, DissipationVariant variant);

/// Kelvin-Voigt limit: mu B_R + (eta_p / 2)(B_R D + D B_R), spherical part omitted.
SymTensor3 kelvin_voigt_stress(const SymTensor3& b_r, const SymTensor3& d,
                               const ModelParams& params);

struct RecoveredRates {
  SymTensor3 dp;  // 1/2 V^{-1} Bdot V^{-1}
  SymTensor3 dg;  // -1/2 V^{-1} ucd(B) V^{-1}
};
RecoveredRates recover_rates(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l);

struct EnergyBalance {
  double stress_power = 0.0;  // T . D
  double storage_rate = 0.0;  // rho dpsi/dt
  double dissipation = 0.0;   // xi
  /// |T.D - rho dpsi/dt - xi| / max(xi, mu)
  double relative_residual = 0.0;
};
EnergyBalance energy_balance(const Tensor3& t, const SymTensor3& b, const SymTensor3& bdot,
                             const Tensor3& l, const ModelParams& params,
                             DissipationVariant variant);

/// Largest |B DG - DG B| / (|B| |DG|) over (B, DG) samples; samples with DG = 0 count as 0.
double maxwell_limit_check(std::span<const std::pair<SymTensor3, SymTensor3>> samples);

}  // namespace vefluid
