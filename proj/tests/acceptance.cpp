// Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Oracles (bisection, fixed-step RK4, the
// closed-form relaxation stress) are written out here, not taken from the
// library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vefluid/errors.hpp"
#include "vefluid/experiments.hpp"
#include "vefluid/general_runs.hpp"
#include "vefluid/verify.hpp"

using namespace vefluid;

namespace {

// Pinned tolerances.
constexpr double kInvarianceTol = 1e-8;
constexpr double kPlateauTol = 1e-3;
constexpr double kPlateauOracle = 1.75488;
constexpr double kRecoveryTol = 1e-4;
constexpr double kResidualStretchMin = 1.05;
constexpr double kResidualStretchGolden = 1.6128573;  // lambda(30), T11 = 1, eta_bar = 10
constexpr double kGoldenTol = 1e-6;
constexpr double kKelvinVoigtTol = 1e-3;
constexpr double kRelaxedStressTol = 1e-4;
constexpr double kRelaxedBTol = 1e-4;
constexpr double kInitialStressHand = 0.64645;
constexpr double kInitialStressTol = 1e-4;
constexpr double kDissipationFloor = 1e-12;
constexpr double kEnergyTol = 1e-6;
constexpr double kDetTol = 1e-6;
constexpr double kCrossDBTol = 1e-5;
constexpr double kLateralTol = 1e-6;
constexpr double kStationarityTol = 1e-9;
constexpr double kExcessTol = 1e-8;
constexpr double kCommutatorTol = 1e-8;
constexpr double kOneDRelTol = 0.02;
constexpr double kRk4Tol = 1e-7;

constexpr DissipationVariant kStretch = DissipationVariant::StretchWeighted;
constexpr DissipationVariant kPlain = DissipationVariant::PlainQuadratic;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs one criterion; an exception is a failure, not a crash.
void criterion(int id, const char* name, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [ok, detail] = body();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, ", %.2f s", secs);
    report(id, name, ok, detail + buf);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("threw: ") + e.what());
  }
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

TimeSeries creep(double load, double eta_bar) {
  CreepSpec c;
  c.T_bar_load = load;
  c.eta_bar = eta_bar;
  return run_creep(c, {});
}

TimeSeries relax(double eta_bar) {
  RelaxSpec r;
  r.eta_bar = eta_bar;
  r.B0 = 2.0;
  r.t_bar_end = 100.0;
  return run_relaxation(r, {});
}

double max_of(const TimeSeries& s, double SeriesRow::*field) {
  double m = -1e300;
  for (const auto& r : s.rows) m = std::max(m, r.*field);
  return m;
}

const SeriesRow& at(const TimeSeries& s, double t) {
  for (const auto& r : s.rows) {
    if (r.t_bar == t) return r;
  }
  throw RangeError("no sample at t_bar = " + std::to_string(t));
}

// Bisection on B - B^{-1/2} = load.
double plateau_oracle(double load) {
  double lo = 1.0, hi = 2.0 + load;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - 1.0 / std::sqrt(mid) < load ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// dB/dt_bar under creep load written from the closed form.
double creep_b_rate(double b, double load) {
  const double s = std::pow(b, 1.5);
  return 2.0 * load / (1.0 + 1.0 / (2.0 * s)) - 4.0 * (std::pow(b, 2.5) - b) / (1.0 + 2.0 * s);
}

double rk4_creep_b(double t1, double dt, double load) {
  double b = 1.0;
  const auto n = static_cast<long>(std::llround(t1 / dt));
  for (long i = 0; i < n; ++i) {
    const double k1 = creep_b_rate(b, load);
    const double k2 = creep_b_rate(b + 0.5 * dt * k1, load);
    const double k3 = creep_b_rate(b + 0.5 * dt * k2, load);
    const double k4 = creep_b_rate(b + dt * k3, load);
    b += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return b;
}

// Relaxation stress at zero strain rate from the closed form.
double relax_stress_oracle(double b, double eta_bar) {
  const double s = std::pow(b, 1.5);
  return (1.0 + 1.0 / (2.0 * s)) * 2.0 / (1.0 + eta_bar) * (std::pow(b, 2.5) - b) / (1.0 + 2.0 * s);
}

struct AuditTally {
  double worst_xi = 0.0, worst_energy = 0.0, worst_det = 0.0;
  int runs = 0;
  void add(const AuditReport& a) {
    worst_xi = std::max(worst_xi, a.max_dissipation_negativity);
    worst_energy = std::max(worst_energy, a.max_energy_residual);
    worst_det = std::max(worst_det, a.max_det_residual);
    ++runs;
  }
  bool ok() const { return worst_xi <= kDissipationFloor && worst_energy < kEnergyTol && worst_det < kDetTol; }
};

}  // namespace

int main() {
  std::vector<TimeSeries> audited;  // trajectories of criteria 1-6 for criterion 7

  criterion(1, "creep B independent of eta_bar, lambda_max decreasing", [&] {
    const TimeSeries a = creep(1.0, 5.0), b = creep(1.0, 10.0), c = creep(1.0, 20.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      dev = std::max({dev, std::abs(a.rows[i].B - b.rows[i].B), std::abs(a.rows[i].B - c.rows[i].B)});
    }
    const double la = max_of(a, &SeriesRow::lambda), lb = max_of(b, &SeriesRow::lambda),
                 lc = max_of(c, &SeriesRow::lambda);
    audited.insert(audited.end(), {a, b, c});
    return std::pair{dev <= kInvarianceTol && la > lb && lb > lc,
                     fmt("max |dB| %.3g", dev) + fmt(", lambda_max %.6f > %.6f", la, lb) +
                         fmt(" > %.6f", lc)};
  });

  criterion(2, "steady creep plateau", [&] {
    const TimeSeries s = creep(1.0, 10.0);
    const double bstar = plateau_oracle(1.0);
    const double err = std::abs(at(s, 10.0).B - bstar);
    const bool oracleOk = std::abs(bstar - kPlateauOracle) < 1e-5;
    return std::pair{err < kPlateauTol && oracleOk, fmt("B* = %.6f, |B(10) - B*| = %.3g", bstar, err)};
  });

  criterion(3, "fluid signature after unloading", [&] {
    const TimeSeries s = creep(1.0, 10.0);
    const SeriesRow& end = at(s, 30.0);
    const double golden = std::abs(end.lambda - kResidualStretchGolden);
    return std::pair{end.B - 1.0 < kRecoveryTol && end.lambda > kResidualStretchMin && golden < kGoldenTol,
                     fmt("B(30) - 1 = %.3g, lambda(30) = %.10f", end.B - 1.0, end.lambda)};
  });

  criterion(4, "load monotonicity at eta_bar = 10", [&] {
    const TimeSeries one = creep(1.0, 10.0), five = creep(5.0, 10.0);
    audited.push_back(five);
    const double b1 = max_of(one, &SeriesRow::B), b5 = max_of(five, &SeriesRow::B);
    const double l1 = max_of(one, &SeriesRow::lambda), l5 = max_of(five, &SeriesRow::lambda);
    const double r1 = one.rows.back().lambda, r5 = five.rows.back().lambda;
    return std::pair{b5 > b1 && l5 > l1 && r5 > r1,
                     fmt("B_max %.4f > %.4f", b5, b1) + fmt(", lambda_max %.4f > %.4f", l5, l1) +
                         fmt(", residual %.4f > %.4f", r5, r1)};
  });

  criterion(5, "Kelvin-Voigt limit at eta_bar = 1e5", [&] {
    const TimeSeries s = creep(1.0, 1e5);
    audited.push_back(s);
    double worst = 0.0;
    for (const auto& r : s.rows) {
      if (r.t_bar > 10.0) break;
      worst = std::max(worst, std::abs(r.lambda - std::sqrt(r.B)) / r.lambda);
    }
    return std::pair{worst < kKelvinVoigtTol, fmt("sup |lambda - sqrt(B)| / lambda = %.3g", worst)};
  });

  criterion(6, "stress relaxation", [&] {
    bool ok = true;
    std::vector<double> t0, tcross;
    double worstEnd = 0.0, worstB = 0.0;
    for (double eta : {1.0, 5.0, 10.0}) {
      const TimeSeries s = relax(eta);
      audited.push_back(s);
      for (std::size_t i = 1; i < s.rows.size(); ++i) ok = ok && s.rows[i].T_bar_11 < s.rows[i - 1].T_bar_11;
      worstEnd = std::max(worstEnd, s.rows.back().T_bar_11);
      worstB = std::max(worstB, std::abs(s.rows.back().B - 1.0));
      t0.push_back(s.rows.front().T_bar_11);
      const auto it = std::find_if(s.rows.begin(), s.rows.end(),
                                   [](const SeriesRow& r) { return r.T_bar_11 < 0.01; });
      tcross.push_back(it == s.rows.end() ? 1e300 : it->t_bar);
    }
    const double hand = std::abs(t0[0] - kInitialStressHand);
    const double oracle = std::abs(t0[0] - relax_stress_oracle(2.0, 1.0));
    ok = ok && worstEnd < kRelaxedStressTol && worstB < kRelaxedBTol;
    ok = ok && t0[0] > t0[1] && t0[1] > t0[2] && tcross[0] < tcross[1] && tcross[1] < tcross[2];
    ok = ok && hand < kInitialStressTol && oracle < 1e-12;
    return std::pair{ok, fmt("T(0) = %.5f, %.5f", t0[0], t0[1]) + fmt(", %.5f; T < 0.01 at t = %.1f", t0[2], tcross[0]) +
                             fmt(", %.1f", tcross[1]) + fmt(", %.1f", tcross[2]) + fmt("; max T(100) %.3g", worstEnd)};
  });

  criterion(7, "thermodynamic audit of every trajectory, both variants", [&] {
    AuditTally tally;
    for (const auto& s : audited) tally.add(audit_trajectory(s, kStretch));
    // The scalar equations encode the stretch-weighted dissipation; both
    // variants run the same experiments through the tensor model.
    for (auto v : {kStretch, kPlain}) {
      for (auto [load, eta] : {std::pair{1.0, 5.0}, {1.0, 10.0}, {1.0, 20.0}, {5.0, 10.0}, {1.0, 1e5}}) {
        GeneralCreepSpec g;
        g.params = ModelParams::scaled(eta);
        g.variant = v;
        g.load = load;
        g.samples_per_segment = 200;
        tally.add(audit_trajectory(run_general_creep(g, {})));
      }
      for (double eta : {1.0, 5.0, 10.0}) {
        GeneralFlowSpec f;
        f.params = ModelParams::scaled(eta);
        f.variant = v;
        f.B0 = SymTensor3::diag(2.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
        f.schedule = {FlowPiece{0.0, Tensor3::zero()}};
        f.t_end = 100.0;
        f.samples_per_segment = 500;
        tally.add(audit_trajectory(run_general_flow(f, {})));
      }
    }
    return std::pair{tally.ok(), std::to_string(tally.runs) + fmt(" runs, max(-xi) %.3g", tally.worst_xi) +
                                     fmt(", energy %.3g, |det B - 1| %.3g", tally.worst_energy, tally.worst_det)};
  });

  criterion(8, "general model matches the uniaxial creep equations", [&] {
    const CrossCheckReport r = cross_check_general(creep(1.0, 10.0), ModelParams::scaled(10.0), kStretch, {});
    return std::pair{r.max_dB < kCrossDBTol && r.max_lateral < kLateralTol,
                     fmt("max |dB| %.3g, |T22| / mu %.3g", r.max_dB, r.max_lateral)};
  });

  criterion(9, "dissipation maximization oracle", [&] {
    const ModelParams p{1.0, 1.0, 10.0, 1.0};
    int passed = 0, controls = 0, total = 0;
    double worstStat = 0.0, worstExcess = -1e300;
    for (auto v : {kStretch, kPlain}) {
      for (std::size_t i = 0; i < 20; ++i) {
        const AdmissibleState st = random_admissible_state(2024, i);
        const MaximizationProbe probe = maximization_oracle(st.T, st.B, p, v, 1000, i + 1);
        ++total;
        worstStat = std::max(worstStat, probe.stationarity);
        worstExcess = std::max(worstExcess, probe.max_excess);
        if (probe.stationarity < kStationarityTol && probe.max_excess <= kExcessTol && probe.passed) ++passed;
        const double control = stationarity_residual(st.T, st.B, 1.1 * probe.candidate.dp,
                                                     1.1 * probe.candidate.lg, p, v);
        if (control >= kStationarityTol) ++controls;
      }
    }
    return std::pair{passed == total && controls == total,
                     std::to_string(passed) + "/" + std::to_string(total) + " states, " +
                         std::to_string(controls) + "/" + std::to_string(total) + " controls rejected" +
                         fmt(", max stationarity %.3g, max excess %.3g", worstStat, worstExcess)};
  });

  criterion(10, "Maxwell limit: B and D_G commute", [&] {
    GeneralFlowSpec f = simple_shear({1e4, 0.0, 1e5, 1.0}, kStretch, 0.5, 20.0);
    f.samples_per_segment = 2000;
    const GeneralTrajectory tr = run_general_flow(f, {});
    std::vector<std::pair<SymTensor3, SymTensor3>> samples;
    for (const auto& r : tr.rows) samples.emplace_back(r.B, recover_rates(r.B, r.Bdot, r.L).dg);
    const double c = maxwell_limit_check(samples);
    return std::pair{c < kCommutatorTol, fmt("max normalized commutator %.3g", c)};
  });

  criterion(11, "one-dimensional reduction at T11 = 0.01", [&] {
    CreepSpec c;
    c.T_bar_load = 0.01;
    c.eta_bar = 10.0;
    c.t_bar_unload = 10.0;
    c.t_bar_end = 10.0;
    const TimeSeries full = run_creep(c, {});
    const auto oned = run_1d_smallstrain({{0.0, (2.0 / 3.0) * 0.01}}, 10.0, ModelParams::scaled(10.0), {});
    double worst = 0.0;
    for (std::size_t i = 1; i < full.rows.size(); ++i) {
      const double ln = std::log(full.rows[i].lambda);
      worst = std::max(worst, std::abs(ln - oned[i].eps_total) / std::abs(oned[i].eps_total));
    }
    return std::pair{worst < kOneDRelTol && full.rows.size() == oned.size(),
                     fmt("max relative |ln lambda - eps| = %.3g", worst)};
  });

  criterion(12, "adaptive integration matches fixed-step RK4", [&] {
    CreepSpec c;
    c.T_bar_load = 1.0;
    c.t_bar_unload = 1.0;
    c.t_bar_end = 1.0;
    c.samples_per_segment = 10;
    const TimeSeries s = run_creep(c, {});
    const double ref = rk4_creep_b(1.0, 1e-5, 1.0);
    const double err = std::abs(at(s, 1.0).B - ref);
    return std::pair{err < kRk4Tol, fmt("B(1) = %.10f, |diff| = %.3g", at(s, 1.0).B, err)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
