#include "vefluid/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "vefluid/errors.hpp"
#include "vefluid/experiments.hpp"
#include "vefluid/general_runs.hpp"
#include "vefluid/io.hpp"
#include "vefluid/plot.hpp"
#include "vefluid/verify.hpp"

namespace vefluid {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kControlScale = 1.1;
constexpr double kStationarityTol = 1e-9;

double time_scale(const ModelParams& p) { return (p.eta_p > 0.0 ? p.eta_p : p.eta_G) / p.mu; }

Json report_header(const Scenario& s) {
  Json j;
  j["schema"] = 1;
  j["kind"] = std::string(to_string(s.kind));
  j["variant"] = std::string(to_string(s.variant));
  const ModelParams p = s.params();
  j["params"] = {{"mu", p.mu}, {"eta_p", p.eta_p}, {"eta_G", p.eta_G}, {"rho", p.rho}};
  j["eta_bar"] = s.effective_eta_bar();
  return j;
}

void summarize(std::ostream& err, const AuditReport& a) {
  err << "audit: " << (a.passed() ? "PASS" : "FAIL") << " (" << a.samples
      << " samples, dissipation negativity " << io::format_number(a.max_dissipation_negativity)
      << ", energy residual " << io::format_number(a.max_energy_residual) << ", det residual "
      << io::format_number(a.max_det_residual) << ", trace " << io::format_number(a.max_incompressibility)
      << ")\n";
}

SymTensor3 uniaxial_b(double b11) {
  const double lat = 1.0 / std::sqrt(b11);
  return SymTensor3::diag(b11, lat, lat);
}

Tensor3 extension(double rate) { return Tensor3::diag(rate, -0.5 * rate, -0.5 * rate); }

// Uniaxial experiments through the tensor model, used for the plain variant
// (the scalar equations encode the stretch-weighted dissipation only).
GeneralTrajectory general_uniaxial(const Scenario& s) {
  const ModelParams p = s.params();
  const double tau = time_scale(p);
  if (s.kind == ExperimentKind::Relax) {
    GeneralFlowSpec f;
    f.params = p;
    f.variant = s.variant;
    f.B0 = uniaxial_b(s.b0);
    for (const RatePiece& r : s.strain_rate) f.schedule.push_back({r.t_start * tau, extension(r.strain_rate / tau)});
    f.t_end = s.t_end * tau;
    f.samples_per_segment = s.samples;
    GeneralTrajectory tr = run_general_flow(f, s.integrator);
    // Zero lateral traction fixes the spherical part.
    for (GeneralRow& row : tr.rows) {
      const double lateral = row.stress(1, 1);
      for (int i = 0; i < 3; ++i) row.stress(i, i) -= lateral;
    }
    for (GeneralRow& row : tr.rows) {
      double lnl = 0.0;
      for (std::size_t k = 0; k < s.strain_rate.size(); ++k) {
        const double a = s.strain_rate[k].t_start;
        const double b = k + 1 < s.strain_rate.size() ? s.strain_rate[k + 1].t_start : s.t_end;
        lnl += s.strain_rate[k].strain_rate * std::max(0.0, std::min(row.t / tau, b) - a);
      }
      row.ln_lambda = lnl;
    }
    return tr;
  }
  GeneralCreepSpec c;
  c.params = p;
  c.variant = s.variant;
  c.load = s.tbar11 * p.mu;
  c.t_unload = s.t_unload * tau;
  c.t_end = s.t_end * tau;
  c.rotation = axis_angle_rotation(s.rotate);
  c.samples_per_segment = s.samples;
  return run_general_creep(c, s.integrator);
}

std::array<double, 3> creep_axis(const Scenario& s) {
  const Tensor3 q = axis_angle_rotation(s.rotate);
  return {q(0, 0), q(1, 0), q(2, 0)};
}

double maxwell_commutator(const GeneralTrajectory& tr) {
  std::vector<std::pair<SymTensor3, SymTensor3>> samples;
  samples.reserve(tr.rows.size());
  for (const GeneralRow& r : tr.rows) samples.emplace_back(r.B, recover_rates(r.B, r.Bdot, r.L).dg);
  return maxwell_limit_check(samples);
}

template <typename Writer>
void emit_csv(const Scenario& s, std::ostream& out, Writer&& write) {
  if (s.csv.empty()) {
    write(out);
  } else {
    std::ofstream f(s.csv, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + s.csv + "' for writing");
    write(f);
  }
}

void emit_report(const Scenario& s, const Json& report) {
  if (!s.report.empty()) io::write_text(s.report, report.dump(2));
}

void emit_plot(const Scenario& s, FigureKind fig) {
  if (s.plot.empty()) return;
  if (s.csv.empty()) throw ConfigError("a plot script needs the CSV written to a file (--out)");
  io::write_text(s.plot, gnuplot_script(fig, {s.csv}));
}

int audited(const AuditReport& a, bool strict, std::ostream& err) {
  summarize(err, a);
  return (strict && !a.passed()) ? kExitAudit : kExitOk;
}

int run_uniaxial(const Scenario& s, bool strict, std::ostream& out, std::ostream& err) {
  Json report = report_header(s);
  AuditReport a;
  const FigureKind fig = s.kind == ExperimentKind::Relax ? FigureKind::Fig5 : FigureKind::Fig2;
  if (s.variant == DissipationVariant::StretchWeighted) {
    TimeSeries series;
    if (s.kind == ExperimentKind::Creep) {
      CreepSpec c;
      c.T_bar_load = s.tbar11;
      c.eta_bar = s.effective_eta_bar();
      c.t_bar_unload = s.t_unload;
      c.t_bar_end = s.t_end;
      c.samples_per_segment = s.samples;
      series = run_creep(c, s.integrator);
    } else {
      RelaxSpec r;
      r.schedule = s.strain_rate;
      r.B0 = s.b0;
      r.eta_bar = s.effective_eta_bar();
      r.t_bar_end = s.t_end;
      r.samples_per_segment = s.samples;
      series = run_relaxation(r, s.integrator);
    }
    emit_csv(s, out, [&](std::ostream& os) { io::write_series_csv(os, series); });
    a = audit_trajectory(series, s.variant);
  } else {
    const GeneralTrajectory tr = general_uniaxial(s);
    emit_csv(s, out, [&](std::ostream& os) { io::write_general_csv(os, tr, creep_axis(s)); });
    a = audit_trajectory(tr);
  }
  report["audit"] = Json::parse(io::audit_json(a));
  emit_report(s, report);
  emit_plot(s, fig);
  return audited(a, strict, err);
}

int run_general(const Scenario& s, bool strict, std::ostream& out, std::ostream& err) {
  Json report = report_header(s);
  GeneralTrajectory tr;
  std::array<double, 3> axis{1.0, 0.0, 0.0};
  if (s.shear_rate != 0.0) {
    const double tau = time_scale(s.params());
    GeneralFlowSpec shear =
        simple_shear(s.params(), s.variant, s.shear_rate / tau, s.t_end * tau);
    shear.samples_per_segment = s.samples;
    tr = run_general_flow(shear, s.integrator);
    report["flow"] = "simple_shear";
  } else {
    tr = general_uniaxial(s);
    axis = creep_axis(s);
    report["flow"] = "uniaxial_creep";
  }
  emit_csv(s, out, [&](std::ostream& os) { io::write_general_csv(os, tr, axis); });
  const AuditReport a = audit_trajectory(tr);
  report["audit"] = Json::parse(io::audit_json(a));
  double worstAsym = 0.0, worstCond = 0.0;
  for (const GeneralRow& r : tr.rows) {
    worstAsym = std::max(worstAsym, r.asymmetry);
    worstCond = std::max(worstCond, r.condition);
  }
  report["max_asymmetry"] = worstAsym;
  report["max_condition"] = worstCond;
  report["max_commutator_B_DG"] = maxwell_commutator(tr);
  emit_report(s, report);
  emit_plot(s, FigureKind::Fig2);
  return audited(a, strict, err);
}

int run_oned(const Scenario& s, std::ostream& out) {
  const ModelParams p = s.params();
  const double tau = time_scale(p);
  std::vector<StressPiece> schedule{{0.0, (2.0 / 3.0) * s.tbar11 * p.mu}};
  if (s.t_unload < s.t_end) schedule.push_back({s.t_unload * tau, 0.0});
  std::vector<OneDRow> rows = run_1d_smallstrain(schedule, s.t_end * tau, p, s.integrator, s.samples);
  for (OneDRow& r : rows) r.t /= tau;
  emit_csv(s, out, [&](std::ostream& os) { io::write_oned_csv(os, rows); });
  Json report = report_header(s);
  report["samples"] = rows.size();
  emit_report(s, report);
  if (!s.plot.empty()) throw ConfigError("plot scripts are available for creep, relax and general runs");
  return kExitOk;
}

int run_verify(const Scenario& s, bool strict, std::ostream& out, std::ostream& err) {
  Scenario creep = s;
  creep.kind = ExperimentKind::Creep;
  creep.csv.clear();
  creep.report.clear();
  creep.plot.clear();
  std::ostringstream sink, note;
  const int auditCode = run_uniaxial(creep, true, sink, note);
  err << note.str();

  const ModelParams p = s.params();
  Json probes = Json::array();
  std::size_t passed = 0, controlsFailed = 0;
  for (std::size_t i = 0; i < s.oracle_states; ++i) {
    const AdmissibleState st = random_admissible_state(s.seed, i);
    const MaximizationProbe probe =
        maximization_oracle(st.T, st.B, p, s.variant, s.oracle_samples, s.seed + i);
    const double control =
        stationarity_residual(st.T, st.B, kControlScale * probe.candidate.dp,
                              kControlScale * probe.candidate.lg, p, s.variant);
    const bool controlFails = control >= kStationarityTol;
    passed += probe.passed ? 1 : 0;
    controlsFailed += controlFails ? 1 : 0;
    Json j = Json::parse(io::probe_json(probe));
    j["control_stationarity"] = control;
    j["control_rejected"] = controlFails;
    probes.push_back(std::move(j));
    out << "state " << i << ": " << (probe.passed ? "PASS" : "FAIL") << " max_excess "
        << io::format_number(probe.max_excess) << " stationarity "
        << io::format_number(probe.stationarity) << " control "
        << (controlFails ? "rejected" : "ACCEPTED") << '\n';
  }
  const bool oracleOk = passed == s.oracle_states && controlsFailed == s.oracle_states;
  out << "oracle: " << passed << "/" << s.oracle_states << " states pass, " << controlsFailed << "/"
      << s.oracle_states << " negative controls rejected\n";

  Json report = report_header(s);
  report["creep_audit_passed"] = auditCode == kExitOk;
  report["oracle"] = probes;
  report["oracle_passed"] = oracleOk;
  emit_report(s, report);
  return (strict && (!oracleOk || auditCode != kExitOk)) ? kExitAudit : kExitOk;
}

}  // namespace

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIntegration;
  }
}

int run_scenario(const Scenario& s, bool strict, std::ostream& out, std::ostream& err) {
  s.validate();
  switch (s.kind) {
    case ExperimentKind::Creep:
    case ExperimentKind::Relax:
      return run_uniaxial(s, strict, out, err);
    case ExperimentKind::General:
      return run_general(s, strict, out, err);
    case ExperimentKind::Steady:
      out << "B* = " << io::format_number(steady_state_B(s.tbar11)) << '\n';
      return kExitOk;
    case ExperimentKind::OneD:
      return run_oned(s, out);
    case ExperimentKind::Verify:
      return run_verify(s, strict, out, err);
  }
  return kExitOk;
}

int run_sweep(const Scenario& base, const std::vector<double>& tbar11,
              const std::vector<double>& eta_bar, const std::string& out_dir, std::size_t jobs,
              bool strict, std::ostream& err) {
  if (tbar11.empty() || eta_bar.empty()) throw ConfigError("sweep needs tbar11 and eta_bar values");
  if (out_dir.empty()) throw ConfigError("sweep needs an output directory (--out)");
  std::filesystem::create_directories(out_dir);

  std::vector<Scenario> grid;
  for (double t : tbar11) {
    for (double e : eta_bar) {
      Scenario s = base;
      s.kind = ExperimentKind::Creep;
      s.tbar11 = t;
      s.eta_bar = e;
      s.dimensional.reset();
      const std::string stem = (std::filesystem::path(out_dir) / ("creep_T" + io::format_number(t) + "_eta" + io::format_number(e))).string();
      s.csv = stem + ".csv";
      s.report = stem + ".json";
      s.plot.clear();
      s.validate();
      grid.push_back(std::move(s));
    }
  }

  std::vector<int> codes(grid.size(), kExitOk);
  std::vector<std::string> logs(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      std::ostringstream out, log;
      codes[i] = guarded([&] { return run_scenario(grid[i], strict, out, log); }, log);
      logs[i] = grid[i].csv + ": " + log.str();
    }
  };
  const std::size_t n = std::clamp<std::size_t>(jobs, 1, grid.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& l : logs) err << l;
  return *std::max_element(codes.begin(), codes.end());
}

}  // namespace vefluid
