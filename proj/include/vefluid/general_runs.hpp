#pragma once

// Homogeneous runs of the full tensor model in dimensional variables.

#include <cstddef>
#include <vector>

#include "vefluid/integrate.hpp"
#include "vefluid/model.hpp"
#include "vefluid/tensor3.hpp"

namespace vefluid {

struct GeneralRow {
  double t = 0.0;
  SymTensor3 B;
  SymTensor3 Bdot;
  Tensor3 L;
  Tensor3 stress;  // spherical part fixed as described by the run
  double ln_lambda = 0.0;
  double condition = 0.0;
  double asymmetry = 0.0;
};

struct GeneralTrajectory {
  ModelParams params;
  DissipationVariant variant = DissipationVariant::StretchWeighted;
  std::vector<GeneralRow> rows;
};

/// Uniaxial creep along the axis Q e1: L = r Q diag(1, -1/2, -1/2) Q^T with r
/// chosen at every instant so that the stress difference between the axis and
/// Q e2 equals the applied load. The stress is shifted so that the lateral
/// normal traction vanishes.
struct GeneralCreepSpec {
  ModelParams params;
  DissipationVariant variant = DissipationVariant::StretchWeighted;
  double load = 1.0;
  double t_unload = 10.0;
  double t_end = 30.0;
  Tensor3 rotation = Tensor3::identity();
  std::size_t samples_per_segment = 1000;

  void validate() const;
};

GeneralTrajectory run_general_creep(const GeneralCreepSpec& spec, const ode::IntegratorConfig& cfg);

struct FlowPiece {
  double t_start = 0.0;
  Tensor3 L;
};

/// Prescribed piecewise-constant velocity gradient from B0. The stress is
/// reported without a spherical part; ln_lambda stays 0.
struct GeneralFlowSpec {
  ModelParams params;
  DissipationVariant variant = DissipationVariant::StretchWeighted;
  SymTensor3 B0 = SymTensor3::identity();
  std::vector<FlowPiece> schedule;
  double t_end = 1.0;
  std::size_t samples_per_segment = 1000;

  void validate() const;
};

GeneralTrajectory run_general_flow(const GeneralFlowSpec& spec, const ode::IntegratorConfig& cfg);

/// Simple shear L = rate e1 (x) e2 on [0, t_end].
GeneralFlowSpec simple_shear(const ModelParams& params, DissipationVariant variant, double rate,
                             double t_end);

}  // namespace vefluid
