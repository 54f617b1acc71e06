#include <cmath>
#include <random>

#include "doctest.h"
#include "vefluid/errors.hpp"
#include "vefluid/experiments.hpp"
#include "vefluid/general_runs.hpp"
#include "vefluid/verify.hpp"

using namespace vefluid;

namespace {

constexpr DissipationVariant kStretch = DissipationVariant::StretchWeighted;
constexpr DissipationVariant kPlain = DissipationVariant::PlainQuadratic;

TimeSeries small_creep(double load = 1.0, double eta_bar = 10.0) {
  CreepSpec c;
  c.T_bar_load = load;
  c.eta_bar = eta_bar;
  c.samples_per_segment = 200;
  return run_creep(c, {});
}

}  // namespace

TEST_CASE("splitmix64 reference output") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("audit passes on uniaxial runs") {
  for (double load : {1.0, 5.0}) {
    const AuditReport a = audit_trajectory(small_creep(load), kStretch);
    CHECK(a.passed());
    CHECK(a.samples == 401);
    CHECK(a.max_energy_residual < 1e-10);
    CHECK(a.max_det_residual < 1e-12);
  }
  RelaxSpec r;
  r.samples_per_segment = 200;
  CHECK(audit_trajectory(run_relaxation(r, {}), kStretch).passed());
}

TEST_CASE("audit flags a tampered stress") {
  TimeSeries s = small_creep();
  for (auto& row : s.rows) row.T_bar_11 *= 1.5;
  const AuditReport a = audit_trajectory(s, kStretch);
  CHECK_FALSE(a.energy_ok);
  CHECK_FALSE(a.passed());
  CHECK(a.max_energy_residual > 1e-3);
}

TEST_CASE("audit of general runs") {
  GeneralCreepSpec g;
  g.params = ModelParams::scaled(10.0);
  g.samples_per_segment = 50;
  for (auto v : {kStretch, kPlain}) {
    g.variant = v;
    const AuditReport a = audit_trajectory(run_general_creep(g, {}));
    CHECK(a.passed());
  }
}

TEST_CASE("candidate rejects inadmissible states") {
  const SymTensor3 b = SymTensor3::diag(2.0, 0.5, 1.0);
  SymTensor3 t;
  t.xy = 1.0;
  CHECK_THROWS_AS(closed_form_candidate(t, b, ModelParams::scaled(2.0), kStretch), DomainError);
  CHECK_THROWS_AS(closed_form_candidate(SymTensor3::diag(1, 0, 0), b, {1.0, 0.0, 1.0, 1.0}, kPlain),
                  DomainError);
}

TEST_CASE("maximization oracle at random admissible states") {
  const ModelParams p{1.5, 0.7, 4.0, 1.0};
  for (auto v : {kStretch, kPlain}) {
    for (std::size_t i = 0; i < 20; ++i) {
      const AdmissibleState st = random_admissible_state(17, i);
      CHECK(norm(product(st.T, st.B) - product(st.B, st.T)) < 1e-12);
      CHECK(det(st.B) == doctest::Approx(1.0).epsilon(1e-12));
      const MaximizationProbe probe = maximization_oracle(st.T, st.B, p, v, 300, i);
      CHECK(probe.passed);
      CHECK(probe.samples_used + probe.samples_skipped == 300);
      CHECK(probe.samples_skipped <= 30);
      CHECK(probe.max_excess <= 1e-8);
      CHECK(probe.stationarity < 1e-9);

      // Scaled candidates are off the feasible set and off stationarity.
      const Candidate& c = probe.candidate;
      CHECK(stationarity_residual(st.T, st.B, 1.1 * c.dp, 1.1 * c.lg, p, v) > 1e-9);
      CHECK(std::abs(constraint_residual(st.T, st.B, 1.1 * c.dp, 1.1 * c.lg, p, v)) >
            1e-6 * probe.xi_candidate);
    }
  }
}

TEST_CASE("oracle is deterministic in its seed") {
  const AdmissibleState st = random_admissible_state(3, 0);
  const ModelParams p = ModelParams::scaled(5.0);
  const auto a = maximization_oracle(st.T, st.B, p, kStretch, 100, 42);
  const auto b = maximization_oracle(st.T, st.B, p, kStretch, 100, 42);
  const auto c = maximization_oracle(st.T, st.B, p, kStretch, 100, 43);
  CHECK(a.max_excess == b.max_excess);
  CHECK(a.max_excess != c.max_excess);
}

TEST_CASE("degenerate state: stress equal to the elastic stress") {
  const SymTensor3 b = SymTensor3::diag(2.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const ModelParams p = ModelParams::scaled(3.0);
  const MaximizationProbe probe = maximization_oracle(p.mu * b, b, p, kPlain, 100);
  // The dp part vanishes but D_G is driven by the deviatoric part of V T V^-1.
  CHECK(probe.passed);
  const MaximizationProbe rest = maximization_oracle(SymTensor3::zero(), SymTensor3::identity(),
                                                     p, kStretch, 100);
  CHECK(rest.degenerate);
  CHECK(rest.passed);
}

TEST_CASE("maximal dissipation is quadratic in the stress at B = I") {
  const SymTensor3 t = SymTensor3::diag(1.0, -0.3, 0.1);
  const ModelParams p = ModelParams::scaled(2.0);
  for (auto v : {kStretch, kPlain}) {
    const double x1 = maximization_oracle(t, SymTensor3::identity(), p, v, 10).xi_candidate;
    const double x2 = maximization_oracle(2.0 * t, SymTensor3::identity(), p, v, 10).xi_candidate;
    CHECK(x1 > 0.0);
    CHECK(x2 == doctest::Approx(4.0 * x1).epsilon(1e-12));
  }
}
