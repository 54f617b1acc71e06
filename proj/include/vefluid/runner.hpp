#pragma once

// Executes a scenario: runs the experiment, writes its artifacts and maps
// failures onto process exit codes.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vefluid/scenario.hpp"

namespace vefluid {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitIntegration = 3, kExitAudit = 4 };

/// Runs `body` and converts a thrown error into its exit code after printing
/// the message to `err`: ConfigError and DomainError give 2, any other
/// library error 3.
int guarded(const std::function<int()>& body, std::ostream& err);

/// CSV goes to s.csv (or `out` when empty), an audit summary to `err`, the
/// JSON report to s.report and a plot script to s.plot when requested.
/// Returns kExitAudit for a failed audit when `strict`, kExitOk otherwise.
/// Throws library errors; wrap in guarded() for exit codes.
int run_scenario(const Scenario& s, bool strict, std::ostream& out, std::ostream& err);

/// Creep runs over every (tbar11, eta_bar) pair on `jobs` threads. Each run
/// writes creep_T<tbar11>_eta<eta_bar>.csv and its report into out_dir.
/// Returns the largest exit code among the runs.
int run_sweep(const Scenario& base, const std::vector<double>& tbar11,
              const std::vector<double>& eta_bar, const std::string& out_dir, std::size_t jobs,
              bool strict, std::ostream& err);

}  // namespace vefluid
