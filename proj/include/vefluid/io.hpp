#pragma once

// CSV trajectories and JSON reports.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "vefluid/experiments.hpp"
#include "vefluid/general_runs.hpp"
#include "vefluid/verify.hpp"

namespace vefluid::io {

/// Shortest decimal string that reads back to exactly x.
std::string format_number(double x);

/// Parses a whole field as a double; throws ConfigError naming `what` otherwise.
double parse_number(const std::string& field, const std::string& what);

/// Leading columns of every trajectory CSV.
inline constexpr const char* kSeriesHeader = "t_bar,B,lambda,T11_bar";

/// Header kSeriesHeader followed by strain_rate,dB_dt,energy_residual,det_residual.
void write_series_csv(std::ostream& os, const TimeSeries& series);
void write_series_csv(const std::string& path, const TimeSeries& series);

/// Reads a series written by write_series_csv. The kind and eta_bar are not
/// stored in the file and must be supplied. Throws ConfigError with the line number on bad input.
TimeSeries read_series_csv(std::istream& is, const std::string& kind, double eta_bar);
TimeSeries read_series_csv(const std::string& path, const std::string& kind, double eta_bar);

/// General runs: t_bar = t / tau with tau = eta_p / mu (eta_G / mu when eta_p = 0),
/// B and T11_bar are normal components along `axis` (T scaled by mu), followed by the
/// remaining components of B and solver diagnostics.
void write_general_csv(std::ostream& os, const GeneralTrajectory& traj,
                       const std::array<double, 3>& axis = {1.0, 0.0, 0.0});
void write_general_csv(const std::string& path, const GeneralTrajectory& traj,
                       const std::array<double, 3>& axis = {1.0, 0.0, 0.0});

void write_oned_csv(std::ostream& os, const std::vector<OneDRow>& rows);
void write_oned_csv(const std::string& path, const std::vector<OneDRow>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws ConfigError if absent.
  std::size_t column(const std::string& name) const;
};
CsvTable read_csv(std::istream& is, const std::string& source = "csv");
CsvTable read_csv(const std::string& path);

/// JSON text of an audit report (stable key order, shortest round-trip numbers).
std::string audit_json(const AuditReport& rep);
std::string probe_json(const MaximizationProbe& probe);

void write_text(const std::string& path, const std::string& text);

}  // namespace vefluid::io
