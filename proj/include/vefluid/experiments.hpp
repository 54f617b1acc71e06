#pragma once

// Homogeneous uniaxial experiments in nondimensional variables: creep with
// load removal, constant strain rate and stress relaxation, the small-strain
// one-dimensional reduction, and a cross-check of the uniaxial equations
// against the general tensor model.
//
// Time is t_bar = t mu / eta_p and stress is T_bar = T / mu. The viscosity
// ratio eta_bar enters the equations as eta_G / eta_p (see ModelParams::scaled).

#include <cstddef>
#include <string>
#include <vector>

#include "vefluid/integrate.hpp"
#include "vefluid/model.hpp"
#include "vefluid/tensor3.hpp"

namespace vefluid {

struct UniaxialState {
  double B = 1.0;       // axial component of B; lateral components are B^{-1/2}
  double lambda = 1.0;  // total axial stretch
};

struct UniaxialRate {
  double dB = 0.0;       // dB/dt_bar
  double dlambda = 0.0;  // dlambda/dt_bar
};

/// Creep equations under a fixed axial stress. Throws DomainError for B <= 0 or lambda <= 0.
UniaxialRate creep_rhs(const UniaxialState& s, double T_bar_11, double eta_bar);

/// (1/lambda) dlambda/dt_bar of the creep equations.
double creep_log_stretch_rate(double B, double T_bar_11, double eta_bar);

/// Root B* >= 1 of B - B^{-1/2} = T_bar_11 by bisection. Throws DomainError for T_bar_11 < 0.
double steady_state_B(double T_bar_11);

/// dB/dt_bar at a prescribed strain rate d(ln lambda)/dt_bar.
double relax_rhs(double B, double strain_rate, double eta_bar);
/// Axial stress at a prescribed strain rate.
double stress_at(double B, double strain_rate, double eta_bar);

struct SeriesRow {
  double t_bar = 0.0;
  double B = 1.0;
  double lambda = 1.0;
  double T_bar_11 = 0.0;
  double strain_rate = 0.0;  // d(ln lambda)/dt_bar
  double dB = 0.0;           // dB/dt_bar
  double energy_residual = 0.0;
  double det_residual = 0.0;
};

struct TimeSeries {
  std::string kind;  // "creep" or "relax"
  double eta_bar = 1.0;
  std::vector<SeriesRow> rows;

  /// Throws ConfigError unless t_bar is strictly increasing.
  void validate() const;
};

struct CreepSpec {
  double T_bar_load = 1.0;
  double eta_bar = 10.0;
  double t_bar_unload = 10.0;
  double t_bar_end = 30.0;
  UniaxialState initial;
  std::size_t samples_per_segment = 1000;

  void validate() const;
};

/// Loading on [0, t_unload], then zero stress to t_end, restarting at the
/// breakpoint. The breakpoint sample belongs to the loading segment.
TimeSeries run_creep(const CreepSpec& spec, const ode::IntegratorConfig& cfg);

struct RatePiece {
  double t_start = 0.0;
  double strain_rate = 0.0;
};

struct RelaxSpec {
  std::vector<RatePiece> schedule{RatePiece{}};  // first piece starts at 0
  double B0 = 2.0;
  double eta_bar = 1.0;
  double t_bar_end = 100.0;
  double lambda0 = 1.0;
  std::size_t samples_per_segment = 1000;

  void validate() const;
};

TimeSeries run_relaxation(const RelaxSpec& spec, const ode::IntegratorConfig& cfg);

/// Uniaxial fields as tensors in the scaled parameters: B, dB/dt, L and the
/// applied stress diag(T, 0, 0).
struct UniaxialTensors {
  SymTensor3 B;
  SymTensor3 Bdot;
  Tensor3 L;
  Tensor3 T;
};
UniaxialTensors uniaxial_tensors(const SeriesRow& row);

struct StressPiece {
  double t_start = 0.0;
  double sigma = 0.0;
};

struct OneDRow {
  double t = 0.0;
  double eps_G = 0.0;
  double eps_p = 0.0;
  double eps_total = 0.0;
};

/// Dashpot (eta_G) in series with a Kelvin-Voigt element (spring 2 mu, dashpot eta_p):
/// sigma = eta_G deps_G/dt, 2 mu eps_p = sigma - eta_p deps_p/dt.
/// Throws ScopeError once any strain reaches 0.05, DomainError when eta_p = 0.
std::vector<OneDRow> run_1d_smallstrain(const std::vector<StressPiece>& schedule, double t_end,
                                        const ModelParams& params, const ode::IntegratorConfig& cfg,
                                        std::size_t samples_per_segment = 1000);

/// Piecewise cubic Hermite track of ln(lambda) over a creep series with the
/// stored strain rates as slopes. Across a load change the slope at the
/// left node is recomputed with the new load.
class StrainRateTrack {
 public:
  explicit StrainRateTrack(const TimeSeries& series);

  /// d(ln lambda)/dt_bar from the interpolant. Intervals outside [first, last]
  /// are clamped to that range. Throws RangeError outside the series span.
  double rate(double t, std::size_t first, std::size_t last) const;
  double rate(double t) const;

  /// Interval indices k with a load change between rows k and k + 1.
  const std::vector<std::size_t>& breaks() const { return breaks_; }
  std::size_t intervals() const { return t_.size() - 1; }
  const std::vector<double>& times() const { return t_; }

 private:
  std::vector<double> t_, p_, m0_, m1_;
  std::vector<std::size_t> breaks_;
};

struct CrossCheckReport {
  double max_dB = 0.0;         // |B_11 general - B specialized|
  double max_lateral = 0.0;    // |T_22| / mu with the axial stress matched
  double max_offaxis = 0.0;    // largest off-diagonal or lateral mismatch in B
  double max_asymmetry = 0.0;  // from the evolution solve
  std::size_t samples = 0;
};

/// Drives the general model with the series' velocity gradient and compares
/// it with the series at every node.
CrossCheckReport cross_check_general(const TimeSeries& series, const ModelParams& params,
                                     DissipationVariant variant, const ode::IntegratorConfig& cfg);

}  // namespace vefluid
