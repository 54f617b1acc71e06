#include "vefluid/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "vefluid/errors.hpp"

namespace vefluid::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kGrowMax = 5.0;
constexpr double kShrinkMin = 0.2;
constexpr double kRejectShrinkMax = 0.5;
constexpr double kAlpha = 0.17;  // 1/5 - 0.75 * beta
constexpr double kBeta = 0.04;

std::string format_state(double t, std::span<const double> y) {
  std::ostringstream os;
  os.precision(17);
  os << "t = " << t << ", y = [";
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
  os << "]";
  return os.str();
}

class Stepper {
 public:
  Stepper(const Rhs& rhs, std::size_t n) : rhs_(rhs), n_(n) {
    for (auto& k : k_) k.assign(n, 0.0);
    tmp_.assign(n, 0.0);
    ynew_.assign(n, 0.0);
    err_.assign(n, 0.0);
  }

  void eval(double t, std::span<const double> y, State& out) {
    rhs_(t, y, out);
    ++evals_;
    for (double v : out) {
      if (!std::isfinite(v)) {
        throw NonFiniteError("non-finite right-hand side at " + format_state(t, y), t,
                             State(y.begin(), y.end()));
      }
    }
  }

  // k_[0] must hold f(t, y) on entry; on exit k_[6] holds f(t + h, ynew).
  void step(double t, const State& y, double h) {
    auto stage = [&](double cx, auto&& combine, State& out) {
      for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * combine(i);
      eval(t + cx * h, tmp_, out);
    };
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    stage(c2, [&](std::size_t i) { return a21 * k1[i]; }, k2);
    stage(c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }, k3);
    stage(c4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; }, k4);
    stage(c5, [&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; },
          k5);
    stage(1.0,
          [&](std::size_t i) {
            return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
          },
          k6);
    for (std::size_t i = 0; i < n_; ++i) {
      ynew_[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    eval(t + h, ynew_, k7);
    for (std::size_t i = 0; i < n_; ++i) {
      err_[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
  }

  // Dense output on the last step [t, t + h] at t + theta * h.
  State interpolate(const State& y, double h, double theta) const {
    const double theta1 = 1.0 - theta;
    State out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double ydiff = ynew_[i] - y[i];
      const double bspl = h * k_[0][i] - ydiff;
      const double r4 = ydiff - h * k_[6][i] - bspl;
      const double r5 = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                             d6 * k_[5][i] + d7 * k_[6][i]);
      out[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
    return out;
  }

  State& k1() { return k_[0]; }
  const State& k7() const { return k_[6]; }
  const State& ynew() const { return ynew_; }
  const State& error() const { return err_; }
  std::size_t evals() const { return evals_; }

 private:
  const Rhs& rhs_;
  std::size_t n_;
  std::array<State, 7> k_;
  State tmp_, ynew_, err_;
  std::size_t evals_ = 0;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0)) throw ConfigError("integrator rtol must be > 0");
  if (!(atol > 0.0)) throw ConfigError("integrator atol must be > 0");
  if (!(h_min > 0.0)) throw ConfigError("integrator h_min must be > 0");
  if (!(h_min <= h0 && h0 <= h_max)) throw ConfigError("integrator requires h_min <= h0 <= h_max");
  if (max_steps < 1) throw ConfigError("integrator max_steps must be >= 1");
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    g[i] = (i == n) ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
  }
  return g;
}

StepResult dopri5_step(const Rhs& rhs, double t, const State& y, double h) {
  Stepper s(rhs, y.size());
  s.eval(t, y, s.k1());
  s.step(t, y, h);
  return {s.ynew(), s.error()};
}

Trajectory solve(const OdeProblem& problem, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(problem.t1 > problem.t0)) throw ConfigError("ode span requires t1 > t0");
  if (!problem.rhs) throw ConfigError("ode problem has no right-hand side");
  for (double v : problem.y0) {
    if (!std::isfinite(v)) throw ConfigError("ode initial state is not finite");
  }

  std::vector<double> grid = problem.grid;
  if (grid.empty()) grid = {problem.t0, problem.t1};
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < problem.t0 ||
      grid.back() > problem.t1) {
    throw ConfigError("ode sample grid must be sorted and inside [t0, t1]");
  }

  const std::size_t n = problem.y0.size();
  Trajectory out;
  out.t.reserve(grid.size());
  out.y.reserve(grid.size());

  Stepper stepper(problem.rhs, n);
  double t = problem.t0;
  State y = problem.y0;
  std::size_t gi = 0;
  while (gi < grid.size() && grid[gi] <= t) {
    out.t.push_back(grid[gi++]);
    out.y.push_back(y);
  }

  stepper.eval(t, y, stepper.k1());
  double h = std::min(cfg.h0, problem.t1 - problem.t0);
  double errOld = 1e-4;
  bool lastRejected = false;
  const double span = problem.t1 - problem.t0;

  while (t < problem.t1) {
    if (out.stats.accepted + out.stats.rejected >= cfg.max_steps) {
      throw StepBudgetError("step budget of " + std::to_string(cfg.max_steps) +
                            " exhausted at " + format_state(t, y));
    }
    h = std::min(h, cfg.h_max);
    bool last = false;
    if (t + h >= problem.t1 - 1e-13 * span) {
      h = problem.t1 - t;
      last = true;
    }

    stepper.step(t, y, h);

    double err = 0.0;
    const auto& ynew = stepper.ynew();
    const auto& e = stepper.error();
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e[i]) / sc);
    }

    if (err <= 1.0) {
      const double tNew = last ? problem.t1 : t + h;
      while (gi < grid.size() && grid[gi] <= tNew) {
        const double g = grid[gi++];
        out.t.push_back(g);
        out.y.push_back(g == tNew ? ynew : stepper.interpolate(y, h, (g - t) / h));
      }
      ++out.stats.accepted;
      t = tNew;
      y = ynew;
      stepper.k1() = stepper.k7();

      double fac = err > 0.0 ? kSafety * std::pow(err, -kAlpha) * std::pow(errOld, kBeta) : kGrowMax;
      fac = std::clamp(fac, kShrinkMin, kGrowMax);
      if (lastRejected) fac = std::min(fac, 1.0);
      errOld = std::max(err, 1e-4);
      lastRejected = false;
      h *= fac;
    } else {
      ++out.stats.rejected;
      lastRejected = true;
      const double fac =
          std::clamp(kSafety * std::pow(err, -0.2), kShrinkMin, kRejectShrinkMax);
      h *= fac;
      if (h < cfg.h_min) {
        throw StepUnderflowError("step size underflow (h < " + std::to_string(cfg.h_min) +
                                 ") at " + format_state(t, y));
      }
    }
  }
  out.stats.rhs_evals = stepper.evals();
  return out;
}

Trajectory solve_piecewise(std::span<const Segment> segments, const State& y0,
                           const IntegratorConfig& cfg) {
  if (segments.empty()) throw ConfigError("piecewise solve needs at least one segment");
  for (std::size_t k = 1; k < segments.size(); ++k) {
    if (segments[k].t0 != segments[k - 1].t1) {
      throw ConfigError("piecewise segments must be contiguous");
    }
  }

  Trajectory out;
  State y = y0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Segment& seg = segments[k];
    OdeProblem p{seg.rhs, seg.t0, seg.t1, y, seg.grid};
    if (p.grid.empty()) p.grid = {seg.t0, seg.t1};
    Trajectory part = solve(p, cfg);
    // The terminal state must come from the integrator even if the grid stops short.
    y = part.t.back() == seg.t1 ? part.y.back() : solve(OdeProblem{seg.rhs, seg.t0, seg.t1, y, {}}, cfg).y.back();
    for (std::size_t i = 0; i < part.t.size(); ++i) {
      if (!out.t.empty() && part.t[i] <= out.t.back()) continue;
      out.t.push_back(part.t[i]);
      out.y.push_back(std::move(part.y[i]));
    }
    out.stats.accepted += part.stats.accepted;
    out.stats.rejected += part.stats.rejected;
    out.stats.rhs_evals += part.stats.rhs_evals;
  }
  return out;
}

}  // namespace vefluid::ode
