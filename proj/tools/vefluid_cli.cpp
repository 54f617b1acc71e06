// Command-line front end: one subcommand per experiment, a JSON scenario
// runner, a concurrent parameter sweep and plot-script generation.

#include <cstddef>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "vefluid/errors.hpp"
#include "vefluid/io.hpp"
#include "vefluid/plot.hpp"
#include "vefluid/runner.hpp"
#include "vefluid/scenario.hpp"

using namespace vefluid;

namespace {

struct Flags {
  std::optional<double> tbar11, eta_bar, t_unload, t_end, b0, shear_rate;
  std::optional<double> mu, eta_p, eta_g, rho;
  std::optional<double> rtol, atol;
  std::vector<std::string> strain_rate;
  std::vector<double> rotate;
  std::optional<std::string> variant;
  std::optional<std::size_t> samples, oracle_samples, states;
  std::optional<std::uint64_t> seed;
  std::string out, plot, report;
  bool strict = false;
};

void add_model_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--eta-bar", f.eta_bar, "viscosity ratio eta_G / eta_p");
  cmd->add_option("--variant", f.variant, "dissipation variant")
      ->check(CLI::IsMember({"stretch", "plain"}));
  cmd->add_option("--mu", f.mu, "dimensional shear modulus");
  cmd->add_option("--eta-p", f.eta_p, "dimensional viscosity eta_p");
  cmd->add_option("--eta-g", f.eta_g, "dimensional viscosity eta_G");
  cmd->add_option("--rho", f.rho, "density");
  cmd->add_option("--rtol", f.rtol, "relative tolerance");
  cmd->add_option("--atol", f.atol, "absolute tolerance");
  cmd->add_option("--samples", f.samples, "output samples per schedule segment");
  cmd->add_option("--out", f.out, "CSV output path (stdout when omitted)");
  cmd->add_option("--report", f.report, "JSON report path");
  cmd->add_flag("--strict", f.strict, "exit 4 when the audit fails");
}

void add_schedule_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tbar11", f.tbar11, "axial stress T11 / mu");
  cmd->add_option("--t-unload", f.t_unload, "unloading time (t_bar)");
  cmd->add_option("--t-end", f.t_end, "final time (t_bar)");
  cmd->add_option("--plot", f.plot, "gnuplot script path");
}

// "rate" or "t:rate"
RatePiece parse_piece(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {0.0, io::parse_number(text, "--strain-rate")};
  return {io::parse_number(text.substr(0, colon), "--strain-rate time"),
          io::parse_number(text.substr(colon + 1), "--strain-rate value")};
}

Scenario build(ExperimentKind kind, const Flags& f) {
  Scenario s = default_scenario(kind);
  if (f.variant) s.variant = parse_variant(*f.variant);
  if (f.eta_bar) s.eta_bar = *f.eta_bar;
  const int dims = int(f.mu.has_value()) + int(f.eta_p.has_value()) + int(f.eta_g.has_value()) +
                   int(f.rho.has_value());
  if (dims > 0) {
    if (dims < 4) throw ConfigError("dimensional mode needs all of --mu, --eta-p, --eta-g, --rho");
    if (f.eta_bar) throw ConfigError("--eta-bar cannot be combined with dimensional parameters");
    s.dimensional = ModelParams{*f.mu, *f.eta_p, *f.eta_g, *f.rho};
  }
  if (f.tbar11) s.tbar11 = *f.tbar11;
  if (f.t_unload) s.t_unload = *f.t_unload;
  if (f.t_end) s.t_end = *f.t_end;
  if (f.b0) s.b0 = *f.b0;
  if (f.shear_rate) s.shear_rate = *f.shear_rate;
  if (!f.strain_rate.empty()) {
    s.strain_rate.clear();
    for (const auto& p : f.strain_rate) s.strain_rate.push_back(parse_piece(p));
  }
  if (!f.rotate.empty()) {
    if (f.rotate.size() != 4) throw ConfigError("--rotate takes ax ay az angle");
    for (std::size_t i = 0; i < 4; ++i) s.rotate[i] = f.rotate[i];
  }
  if (f.rtol) s.integrator.rtol = *f.rtol;
  if (f.atol) s.integrator.atol = *f.atol;
  if (f.samples) s.samples = *f.samples;
  if (f.oracle_samples) s.oracle_samples = *f.oracle_samples;
  if (f.states) s.oracle_states = *f.states;
  if (f.seed) s.seed = *f.seed;
  s.csv = f.out;
  s.plot = f.plot;
  s.report = f.report;
  s.validate();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscoelastic fluid without instantaneous elasticity: experiments and verification"};
  app.require_subcommand(1);

  Flags f;
  auto* creep = app.add_subcommand("creep", "creep under T11 with load removal");
  add_model_flags(creep, f);
  add_schedule_flags(creep, f);

  auto* relax = app.add_subcommand("relax", "prescribed strain rate from B0 (relaxation at rate 0)");
  add_model_flags(relax, f);
  relax->add_option("--t-end", f.t_end, "final time (t_bar)");
  relax->add_option("--b0", f.b0, "initial axial B");
  relax->add_option("--strain-rate", f.strain_rate, "rate, or t:rate pieces in time order");
  relax->add_option("--plot", f.plot, "gnuplot script path");

  auto* general = app.add_subcommand("general", "full tensor model: uniaxial creep or simple shear");
  add_model_flags(general, f);
  add_schedule_flags(general, f);
  general->add_option("--shear-rate", f.shear_rate, "simple shear rate (per t_bar); 0 runs creep");
  general->add_option("--rotate", f.rotate, "creep axis rotation: ax ay az angle")->expected(4);

  auto* steady = app.add_subcommand("steady", "steady creep stretch B*");
  steady->add_option("--tbar11", f.tbar11, "axial stress T11 / mu");

  auto* oned = app.add_subcommand("oned", "small-strain series dashpot and Kelvin-Voigt model");
  add_model_flags(oned, f);
  oned->add_option("--tbar11", f.tbar11, "axial stress T11 / mu");
  oned->add_option("--t-unload", f.t_unload, "unloading time (t_bar)");
  oned->add_option("--t-end", f.t_end, "final time (t_bar)");

  auto* verify = app.add_subcommand("verify", "creep audit and dissipation maximization oracle");
  add_model_flags(verify, f);
  verify->add_option("--tbar11", f.tbar11, "axial stress of the audited creep run");
  verify->add_option("--seed", f.seed, "oracle seed");
  verify->add_option("--oracle-samples", f.oracle_samples, "feasible samples per state");
  verify->add_option("--states", f.states, "random admissible states");

  std::vector<double> sweepT{1.0}, sweepEta{5.0, 10.0, 20.0};
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "creep runs over a tbar11 x eta_bar grid");
  sweep->add_option("--tbar11", sweepT, "axial stresses");
  sweep->add_option("--eta-bar", sweepEta, "viscosity ratios");
  sweep->add_option("--t-unload", f.t_unload, "unloading time (t_bar)");
  sweep->add_option("--t-end", f.t_end, "final time (t_bar)");
  sweep->add_option("--rtol", f.rtol, "relative tolerance");
  sweep->add_option("--atol", f.atol, "absolute tolerance");
  sweep->add_option("--samples", f.samples, "output samples per schedule segment");
  sweep->add_option("--out", f.out, "output directory")->required();
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_flag("--strict", f.strict, "exit 4 when an audit fails");

  std::string scenarioPath;
  auto* run = app.add_subcommand("run", "run a JSON scenario");
  run->add_option("scenario", scenarioPath, "scenario file")->required();
  run->add_flag("--strict", f.strict, "exit 4 when the audit fails");

  std::string figure = "fig2";
  std::vector<std::string> csvs;
  auto* plot = app.add_subcommand("plot", "gnuplot script for CSV trajectories");
  plot->add_option("--figure", figure, "fig2, fig3, fig4 or fig5");
  plot->add_option("--out", f.out, "script path (stdout when omitted)");
  plot->add_option("csv", csvs, "trajectory CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  return guarded(
      [&]() -> int {
        const std::pair<CLI::App*, ExperimentKind> kinds[] = {
            {creep, ExperimentKind::Creep},   {relax, ExperimentKind::Relax},
            {general, ExperimentKind::General}, {steady, ExperimentKind::Steady},
            {oned, ExperimentKind::OneD},     {verify, ExperimentKind::Verify}};
        for (const auto& [cmd, kind] : kinds) {
          if (cmd->parsed()) return run_scenario(build(kind, f), f.strict, std::cout, std::cerr);
        }
        if (run->parsed()) {
          return run_scenario(load_scenario(scenarioPath), f.strict, std::cout, std::cerr);
        }
        if (sweep->parsed()) {
          const Scenario base = build(ExperimentKind::Creep, f);
          return run_sweep(base, sweepT, sweepEta, f.out, jobs, f.strict, std::cerr);
        }
        const std::string script = gnuplot_script(parse_figure(figure), csvs);
        if (f.out.empty()) std::cout << script;
        else io::write_text(f.out, script);
        return kExitOk;
      },
      std::cerr);
}
