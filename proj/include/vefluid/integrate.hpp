#pragma once

// Adaptive Dormand-Prince 5(4) integration over flat state vectors.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace vefluid::ode {

using State = std::vector<double>;

/// dy/dt = f(t, y); writes into dydt (same length as y).
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegratorConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h0 = 1e-4;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;

  /// Throws ConfigError on rtol <= 0, atol <= 0, h ordering, or max_steps == 0.
  void validate() const;
};

struct OdeProblem {
  Rhs rhs;
  double t0 = 0.0;
  double t1 = 1.0;
  State y0;
  /// Output times inside [t0, t1], nondecreasing. Empty means {t0, t1}.
  std::vector<double> grid;
};

struct SolveStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> y;
  SolveStats stats;

  const State& back() const { return y.back(); }
};

/// n + 1 uniformly spaced times from t0 to t1 inclusive.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

Trajectory solve(const OdeProblem& problem, const IntegratorConfig& cfg);

struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  Rhs rhs;
  std::vector<double> grid;
};

/// Integrates segment after segment, restarting at every breakpoint from the
/// terminal state of the previous segment. The sample at a shared breakpoint
/// appears once, taken from the segment that ends there.
Trajectory solve_piecewise(std::span<const Segment> segments, const State& y0,
                           const IntegratorConfig& cfg);

/// One Dormand-Prince step of size h from (t, y): the fifth-order solution and
/// the embedded error estimate. Exposed for order studies.
struct StepResult {
  State y;
  State error;
};
StepResult dopri5_step(const Rhs& rhs, double t, const State& y, double h);

}  // namespace vefluid::ode
