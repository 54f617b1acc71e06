#include "vefluid/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "context.hpp"
#include "vefluid/errors.hpp"

namespace vefluid {

namespace {

constexpr double kSmallStrainLimit = 0.05;

void require_positive_B(double B) {
  if (!(std::isfinite(B) && B > 0.0)) {
    throw DomainError("B must be positive, got " + std::to_string(B));
  }
}

// (B^{3/2} - 1) / u for B = 1 + u, free of cancellation near B = 1.
double growth_over_dev(double u) {
  return u == 0.0 ? 1.5 : std::expm1(1.5 * std::log1p(u)) / u;
}

// (B^{5/2} - B) / (1 + 2 B^{3/2}) divided by u = B - 1.
double drive_over_dev(double u) {
  const double B = 1.0 + u;
  return B * growth_over_dev(u) / (1.0 + 2.0 * B * std::sqrt(B));
}

// (B^{5/2} - B) / (1 + 2 B^{3/2}), the relaxation drive shared by all uniaxial equations.
double drive(double B) { return (B - 1.0) * drive_over_dev(B - 1.0); }

double lateral_factor(double B) { return 1.0 + 1.0 / (2.0 * B * std::sqrt(B)); }

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void fill_diagnostics(SeriesRow& row, const ModelParams& params) {
  const UniaxialTensors u = uniaxial_tensors(row);
  row.energy_residual =
      energy_balance(u.T, u.B, u.Bdot, u.L, params, DissipationVariant::StretchWeighted)
          .relative_residual;
  row.det_residual = std::abs(det(u.B) - 1.0);
}

}  // namespace

UniaxialRate creep_rhs(const UniaxialState& s, double T_bar_11, double eta_bar) {
  require_positive_B(s.B);
  if (!(s.lambda > 0.0)) throw DomainError("lambda must be positive");
  UniaxialRate r;
  r.dB = 2.0 * T_bar_11 / lateral_factor(s.B) - 4.0 * drive(s.B);
  r.dlambda = s.lambda * creep_log_stretch_rate(s.B, T_bar_11, eta_bar);
  return r;
}

double creep_log_stretch_rate(double B, double T_bar_11, double eta_bar) {
  require_positive_B(B);
  if (!(eta_bar > 0.0)) throw DomainError("eta_bar must be positive");
  const double b32 = B * std::sqrt(B);
  return 2.0 * (1.0 / eta_bar + 1.0) * T_bar_11 * std::sqrt(B) / (1.0 + 2.0 * b32) -
         2.0 * (b32 - 1.0) / (1.0 + 2.0 * b32);
}

double steady_state_B(double T_bar_11) {
  if (!(T_bar_11 >= 0.0) || !std::isfinite(T_bar_11)) {
    throw DomainError("steady state needs a nonnegative load");
  }
  // f(B) = B - B^{-1/2} - T is increasing, f(1) = -T <= 0 and f(1 + T) >= 0.
  double lo = 1.0, hi = 1.0 + T_bar_11;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid - 1.0 / std::sqrt(mid) - T_bar_11 < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double relax_rhs(double B, double strain_rate, double eta_bar) {
  require_positive_B(B);
  if (!(eta_bar > 0.0)) throw DomainError("eta_bar must be positive");
  return 2.0 * eta_bar * B / (eta_bar + 1.0) * strain_rate - 4.0 / (eta_bar + 1.0) * drive(B);
}

double stress_at(double B, double strain_rate, double eta_bar) {
  require_positive_B(B);
  if (!(eta_bar > 0.0)) throw DomainError("eta_bar must be positive");
  return lateral_factor(B) *
         (B * eta_bar / (1.0 + eta_bar) * strain_rate + 2.0 / (1.0 + eta_bar) * drive(B));
}

void TimeSeries::validate() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].t_bar > rows[i - 1].t_bar)) {
      throw ConfigError("time series is not strictly increasing at row " + std::to_string(i));
    }
  }
}

void CreepSpec::validate() const {
  if (!std::isfinite(T_bar_load)) throw ConfigError("creep load must be finite");
  if (!(eta_bar > 0.0)) throw ConfigError("eta_bar must be positive");
  if (!(t_bar_unload >= 0.0 && t_bar_unload <= t_bar_end && t_bar_end > 0.0)) {
    throw ConfigError("creep schedule needs 0 <= t_unload <= t_end and t_end > 0");
  }
  if (!(initial.B > 0.0 && initial.lambda > 0.0)) {
    throw ConfigError("initial B and lambda must be positive");
  }
  if (samples_per_segment < 1) throw ConfigError("samples per segment must be >= 1");
}

TimeSeries run_creep(const CreepSpec& spec, const ode::IntegratorConfig& cfg) {
  spec.validate();
  const double eta = spec.eta_bar;
  const std::string context =
      "creep run (T_bar_11 = " + fmt(spec.T_bar_load) + ", eta_bar = " + fmt(eta) + ")";

  struct Piece {
    double t0, t1, load;
  };
  std::vector<Piece> pieces;
  if (spec.t_bar_unload > 0.0) pieces.push_back({0.0, spec.t_bar_unload, spec.T_bar_load});
  if (spec.t_bar_end > spec.t_bar_unload) pieces.push_back({spec.t_bar_unload, spec.t_bar_end, 0.0});

  TimeSeries out;
  out.kind = "creep";
  out.eta_bar = eta;
  const ModelParams params = ModelParams::scaled(eta);

  double b = spec.initial.B;
  double lnl = std::log(spec.initial.lambda);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Piece& pc = pieces[k];
    const double load = pc.load;
    // Unloaded, B = 1 is an equilibrium; see run_relaxation.
    const bool logDeviation = load == 0.0 && b != 1.0;
    const double sign = b > 1.0 ? 1.0 : -1.0;
    auto to_u = [&](double y) { return logDeviation ? sign * std::exp(y) : y - 1.0; };

    // ln(lambda) = ln(lambda_0) + (1/eta_bar + 1) G - H with G and H free of
    // eta_bar, so the step sequence and hence B do not depend on eta_bar.
    ode::OdeProblem prob;
    prob.rhs = [&, load](double, std::span<const double> y, std::span<double> dy) {
      const double u = to_u(y[0]);
      const double B = 1.0 + u;
      const double den = 1.0 + 2.0 * B * std::sqrt(B);
      if (logDeviation) {
        dy[0] = -4.0 * drive_over_dev(u);
      } else {
        require_positive_B(B);
        dy[0] = 2.0 * load / lateral_factor(B) - 4.0 * u * drive_over_dev(u);
      }
      dy[1] = 2.0 * load * std::sqrt(B) / den;
      dy[2] = 2.0 * u * growth_over_dev(u) / den;
    };
    prob.t0 = pc.t0;
    prob.t1 = pc.t1;
    prob.y0 = {logDeviation ? std::log(std::abs(b - 1.0)) : b, 0.0, 0.0};
    prob.grid = ode::uniform_grid(pc.t0, pc.t1, spec.samples_per_segment);
    const ode::Trajectory tr = detail::with_context(context, [&] { return ode::solve(prob, cfg); });
    auto ln_lambda = [&](const ode::State& y) { return lnl + (1.0 / eta + 1.0) * y[1] - y[2]; };

    // The breakpoint sample belongs to the loading segment.
    for (std::size_t i = k == 0 ? 0 : 1; i < tr.t.size(); ++i) {
      SeriesRow row;
      row.t_bar = tr.t[i];
      const double u = to_u(tr.y[i][0]);
      row.B = 1.0 + u;
      row.lambda = std::exp(ln_lambda(tr.y[i]));
      row.T_bar_11 = load;
      const double den = 1.0 + 2.0 * row.B * std::sqrt(row.B);
      row.dB = 2.0 * load / lateral_factor(row.B) - 4.0 * u * drive_over_dev(u);
      row.strain_rate = (1.0 / eta + 1.0) * 2.0 * load * std::sqrt(row.B) / den -
                        2.0 * u * growth_over_dev(u) / den;
      fill_diagnostics(row, params);
      out.rows.push_back(row);
    }
    b = 1.0 + to_u(tr.back()[0]);
    lnl = ln_lambda(tr.back());
  }
  return out;
}

void RelaxSpec::validate() const {
  if (!(B0 > 0.0) || !std::isfinite(B0)) throw ConfigError("B0 must be positive");
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
  if (!(eta_bar > 0.0)) throw ConfigError("eta_bar must be positive");
  if (!(t_bar_end > 0.0)) throw ConfigError("t_end must be positive");
  if (schedule.empty() || schedule.front().t_start != 0.0) {
    throw ConfigError("strain-rate schedule must start at t = 0");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i].t_start > schedule[i - 1].t_start)) {
      throw ConfigError("strain-rate schedule times must increase");
    }
  }
  if (schedule.back().t_start >= t_bar_end) {
    throw ConfigError("strain-rate schedule extends past t_end");
  }
  for (const auto& p : schedule) {
    if (!std::isfinite(p.strain_rate)) throw ConfigError("strain rate must be finite");
  }
  if (samples_per_segment < 1) throw ConfigError("samples per segment must be >= 1");
}

TimeSeries run_relaxation(const RelaxSpec& spec, const ode::IntegratorConfig& cfg) {
  spec.validate();
  const double eta = spec.eta_bar;
  const std::string context =
      "relaxation run (B0 = " + fmt(spec.B0) + ", eta_bar = " + fmt(eta) + ")";

  TimeSeries out;
  out.kind = "relax";
  out.eta_bar = eta;
  const ModelParams params = ModelParams::scaled(eta);

  double b = spec.B0;
  double lnl = std::log(spec.lambda0);
  for (std::size_t k = 0; k < spec.schedule.size(); ++k) {
    const double t0 = spec.schedule[k].t_start;
    const double t1 = k + 1 < spec.schedule.size() ? spec.schedule[k + 1].t_start : spec.t_bar_end;
    const double rate = spec.schedule[k].strain_rate;
    // At zero rate B = 1 is an equilibrium, so B - 1 keeps its sign and
    // ln|B - 1| gives the error control a scale that follows the decay.
    const bool logDeviation = rate == 0.0 && b != 1.0;
    const double sign = b > 1.0 ? 1.0 : -1.0;
    auto to_u = [&](double y) { return logDeviation ? sign * std::exp(y) : y - 1.0; };
    auto to_b = [&](double y) { return logDeviation ? 1.0 + sign * std::exp(y) : y; };

    ode::OdeProblem prob;
    prob.rhs = [&, rate](double, std::span<const double> y, std::span<double> dy) {
      if (logDeviation) {
        dy[0] = -4.0 / (eta + 1.0) * drive_over_dev(to_u(y[0]));
      } else {
        dy[0] = relax_rhs(y[0], rate, eta);
      }
      dy[1] = rate;
    };
    prob.t0 = t0;
    prob.t1 = t1;
    prob.y0 = {logDeviation ? std::log(std::abs(b - 1.0)) : b, lnl};
    prob.grid = ode::uniform_grid(t0, t1, spec.samples_per_segment);
    const ode::Trajectory tr = detail::with_context(context, [&] { return ode::solve(prob, cfg); });

    // A sample on a schedule breakpoint belongs to the piece that ends there.
    for (std::size_t i = k == 0 ? 0 : 1; i < tr.t.size(); ++i) {
      SeriesRow row;
      row.t_bar = tr.t[i];
      row.B = to_b(tr.y[i][0]);
      row.lambda = std::exp(tr.y[i][1]);
      row.strain_rate = rate;
      const double u = to_u(tr.y[i][0]);
      const double drv = u * drive_over_dev(u);
      row.dB = 2.0 * eta * row.B / (eta + 1.0) * rate - 4.0 / (eta + 1.0) * drv;
      row.T_bar_11 = lateral_factor(row.B) * (row.B * eta / (1.0 + eta) * rate + 2.0 / (1.0 + eta) * drv);
      fill_diagnostics(row, params);
      out.rows.push_back(row);
    }
    b = to_b(tr.back()[0]);
    lnl = tr.back()[1];
  }
  return out;
}

UniaxialTensors uniaxial_tensors(const SeriesRow& row) {
  require_positive_B(row.B);
  const double lat = 1.0 / std::sqrt(row.B);
  const double dlat = -row.dB / (2.0 * row.B * std::sqrt(row.B));
  const double r = row.strain_rate;
  return {SymTensor3::diag(row.B, lat, lat), SymTensor3::diag(row.dB, dlat, dlat),
          Tensor3::diag(r, -0.5 * r, -0.5 * r), Tensor3::diag(row.T_bar_11, 0.0, 0.0)};
}

std::vector<OneDRow> run_1d_smallstrain(const std::vector<StressPiece>& schedule, double t_end,
                                        const ModelParams& params, const ode::IntegratorConfig& cfg,
                                        std::size_t samples_per_segment) {
  params.validate();
  if (!(params.eta_p > 0.0)) throw DomainError("the one-dimensional reduction needs eta_p > 0");
  if (schedule.empty() || schedule.front().t_start != 0.0) {
    throw ConfigError("stress schedule must start at t = 0");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i].t_start > schedule[i - 1].t_start)) {
      throw ConfigError("stress schedule times must increase");
    }
  }
  if (!(t_end > schedule.back().t_start)) throw ConfigError("t_end must follow the schedule");

  std::vector<ode::Segment> segs;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const double t0 = schedule[k].t_start;
    const double t1 = k + 1 < schedule.size() ? schedule[k + 1].t_start : t_end;
    const double sigma = schedule[k].sigma;
    ode::Rhs rhs = [sigma, params](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = sigma / params.eta_G;
      dy[1] = (sigma - 2.0 * params.mu * y[1]) / params.eta_p;
    };
    segs.push_back({t0, t1, std::move(rhs), ode::uniform_grid(t0, t1, samples_per_segment)});
  }
  const ode::Trajectory tr = detail::with_context(
      "one-dimensional run", [&] { return ode::solve_piecewise(segs, {0.0, 0.0}, cfg); });

  std::vector<OneDRow> rows;
  rows.reserve(tr.t.size());
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    OneDRow r{tr.t[i], tr.y[i][0], tr.y[i][1], tr.y[i][0] + tr.y[i][1]};
    if (std::max({std::abs(r.eps_G), std::abs(r.eps_p), std::abs(r.eps_total)}) >=
        kSmallStrainLimit) {
      throw ScopeError("small-strain reduction left its range at t = " + fmt(r.t) +
                       " (strain " + fmt(r.eps_total) + ")");
    }
    rows.push_back(r);
  }
  return rows;
}

StrainRateTrack::StrainRateTrack(const TimeSeries& series) {
  series.validate();
  if (series.rows.size() < 2) throw ConfigError("strain-rate track needs at least two rows");
  const auto& rows = series.rows;
  for (const auto& r : rows) {
    t_.push_back(r.t_bar);
    p_.push_back(std::log(r.lambda));
  }
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    double left = rows[k].strain_rate;
    if (rows[k + 1].T_bar_11 != rows[k].T_bar_11) {
      breaks_.push_back(k);
      left = creep_log_stretch_rate(rows[k].B, rows[k + 1].T_bar_11, series.eta_bar);
    }
    m0_.push_back(left);
    m1_.push_back(rows[k + 1].strain_rate);
  }
}

double StrainRateTrack::rate(double t, std::size_t first, std::size_t last) const {
  if (!(t >= t_.front() && t <= t_.back())) {
    throw RangeError("strain rate requested at t = " + fmt(t) + " outside [" + fmt(t_.front()) +
                     ", " + fmt(t_.back()) + "]");
  }
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  k = std::clamp(k, first, last);
  const double h = t_[k + 1] - t_[k];
  const double s = (t - t_[k]) / h;
  const double dh00 = 6.0 * s * s - 6.0 * s;
  const double dh10 = 3.0 * s * s - 4.0 * s + 1.0;
  const double dh11 = 3.0 * s * s - 2.0 * s;
  return dh00 * (p_[k] - p_[k + 1]) / h + dh10 * m0_[k] + dh11 * m1_[k];
}

double StrainRateTrack::rate(double t) const { return rate(t, 0, intervals() - 1); }

CrossCheckReport cross_check_general(const TimeSeries& series, const ModelParams& params,
                                     DissipationVariant variant, const ode::IntegratorConfig& cfg) {
  params.validate();
  if (series.kind != "creep") throw ConfigError("cross check expects a creep series");
  if (params.mu != params.eta_p ||
      std::abs(params.eta_G / params.eta_p - series.eta_bar) > 1e-12 * series.eta_bar) {
    throw ConfigError("cross check needs the scaled parameters of the series");
  }
  const StrainRateTrack track(series);
  const auto& times = track.times();

  // Segments between load changes; each uses only its own Hermite intervals.
  std::vector<std::size_t> starts{0};
  for (std::size_t k : track.breaks()) starts.push_back(k);
  starts.push_back(track.intervals());
  std::vector<ode::Segment> segs;
  for (std::size_t s = 0; s + 1 < starts.size(); ++s) {
    const std::size_t first = starts[s], endNode = starts[s + 1];
    if (endNode <= first) continue;
    ode::Rhs rhs = [&track, params, variant, first, endNode](double t, std::span<const double> y,
                                                             std::span<double> dy) {
      const double r = track.rate(t, first, endNode - 1);
      const SymTensor3 b = from_sym_coords({y[0], y[1], y[2], y[3], y[4], y[5]});
      const auto c = sym_coords(
          evolution_rhs_general(b, Tensor3::diag(r, -0.5 * r, -0.5 * r), params, variant).bdot);
      std::copy(c.begin(), c.end(), dy.begin());
    };
    std::vector<double> grid(times.begin() + static_cast<std::ptrdiff_t>(first),
                             times.begin() + static_cast<std::ptrdiff_t>(endNode) + 1);
    segs.push_back({times[first], times[endNode], std::move(rhs), std::move(grid)});
  }

  const auto y0 = sym_coords(SymTensor3::identity());
  const ode::Trajectory tr = detail::with_context("general cross check", [&] {
    return ode::solve_piecewise(segs, ode::State(y0.begin(), y0.end()), cfg);
  });
  if (tr.t.size() != series.rows.size()) {
    throw ConfigError("cross check sampling does not match the series");
  }

  CrossCheckReport rep;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const SeriesRow& row = series.rows[i];
    const auto& y = tr.y[i];
    const SymTensor3 b = from_sym_coords({y[0], y[1], y[2], y[3], y[4], y[5]});
    rep.max_dB = std::max(rep.max_dB, std::abs(b.xx - row.B));
    const double lat = 1.0 / std::sqrt(row.B);
    rep.max_offaxis = std::max({rep.max_offaxis, std::abs(b.yy - lat), std::abs(b.zz - lat),
                                std::abs(b.xy), std::abs(b.xz), std::abs(b.yz)});

    const double r = row.strain_rate;
    const Tensor3 l = Tensor3::diag(r, -0.5 * r, -0.5 * r);
    const EvolutionRate ev = evolution_rhs_general(b, l, params, variant);
    rep.max_asymmetry = std::max(rep.max_asymmetry, ev.asymmetry);
    const Tensor3 s = stress_general_full(b, ev.bdot, l, params, variant);
    // Spherical multiplier fixed by the applied axial stress; what is left laterally must vanish.
    const double multiplier = row.T_bar_11 - s(0, 0);
    const double t22 = multiplier + s(1, 1);
    const double t33 = multiplier + s(2, 2);
    rep.max_lateral =
        std::max({rep.max_lateral, std::abs(t22) / params.mu, std::abs(t33) / params.mu});
    ++rep.samples;
  }
  return rep;
}

}  // namespace vefluid
