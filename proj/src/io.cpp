#include "vefluid/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vefluid/errors.hpp"

namespace vefluid::io {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  return f;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_number(v);
    first = false;
  }
  os << '\n';
}

double normal(const Tensor3& t, const std::array<double, 3>& n) {
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      v += n[static_cast<std::size_t>(i)] * t(i, j) * n[static_cast<std::size_t>(j)];
    }
  }
  return v;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& field, const std::string& what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw ConfigError(what + ": '" + field + "' is not a number");
  }
  return v;
}

void write_series_csv(std::ostream& os, const TimeSeries& series) {
  os << kSeriesHeader << ",strain_rate,dB_dt,energy_residual,det_residual\n";
  for (const SeriesRow& r : series.rows) {
    write_row(os, {r.t_bar, r.B, r.lambda, r.T_bar_11, r.strain_rate, r.dB, r.energy_residual,
                   r.det_residual});
  }
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
  auto f = open_out(path);
  write_series_csv(f, series);
}

CsvTable read_csv(std::istream& is, const std::string& source) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError(source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  std::size_t lineNo = 1;
  while (std::getline(is, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != t.header.size()) {
      throw ConfigError(source + ":" + std::to_string(lineNo) + ": expected " +
                        std::to_string(t.header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      row.push_back(parse_number(fields[i], source + ":" + std::to_string(lineNo) + " column " +
                                                t.header[i]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  auto f = open_in(path);
  return read_csv(f, path);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("missing column '" + name + "'");
}

TimeSeries read_series_csv(std::istream& is, const std::string& kind, double eta_bar) {
  const CsvTable t = read_csv(is, "series");
  const std::vector<std::string> lead = split(kSeriesHeader);
  if (t.header.size() < lead.size() ||
      !std::equal(lead.begin(), lead.end(), t.header.begin())) {
    throw ConfigError("series header must start with " + std::string(kSeriesHeader));
  }
  auto optional = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == name) return static_cast<long>(i);
    }
    return -1;
  };
  const long rate = optional("strain_rate");
  const long db = optional("dB_dt");
  const long er = optional("energy_residual");
  const long dr = optional("det_residual");
  TimeSeries s;
  s.kind = kind;
  s.eta_bar = eta_bar;
  for (const auto& row : t.rows) {
    SeriesRow r;
    r.t_bar = row[0];
    r.B = row[1];
    r.lambda = row[2];
    r.T_bar_11 = row[3];
    if (rate >= 0) r.strain_rate = row[static_cast<std::size_t>(rate)];
    if (db >= 0) r.dB = row[static_cast<std::size_t>(db)];
    if (er >= 0) r.energy_residual = row[static_cast<std::size_t>(er)];
    if (dr >= 0) r.det_residual = row[static_cast<std::size_t>(dr)];
    s.rows.push_back(r);
  }
  s.validate();
  return s;
}

TimeSeries read_series_csv(const std::string& path, const std::string& kind, double eta_bar) {
  auto f = open_in(path);
  return read_series_csv(f, kind, eta_bar);
}

void write_general_csv(std::ostream& os, const GeneralTrajectory& traj,
                       const std::array<double, 3>& axis) {
  const ModelParams& p = traj.params;
  const double tau = (p.eta_p > 0.0 ? p.eta_p : p.eta_G) / p.mu;
  os << kSeriesHeader << ",B11,B22,B33,B12,B13,B23,condition,asymmetry\n";
  for (const GeneralRow& r : traj.rows) {
    write_row(os, {r.t / tau, normal(r.B.full(), axis), std::exp(r.ln_lambda),
                   normal(r.stress, axis) / p.mu, r.B.xx, r.B.yy, r.B.zz, r.B.xy, r.B.xz, r.B.yz,
                   r.condition, r.asymmetry});
  }
}

void write_general_csv(const std::string& path, const GeneralTrajectory& traj,
                       const std::array<double, 3>& axis) {
  auto f = open_out(path);
  write_general_csv(f, traj, axis);
}

void write_oned_csv(std::ostream& os, const std::vector<OneDRow>& rows) {
  os << "t_bar,eps_G,eps_p,eps_total\n";
  for (const OneDRow& r : rows) write_row(os, {r.t, r.eps_G, r.eps_p, r.eps_total});
}

void write_oned_csv(const std::string& path, const std::vector<OneDRow>& rows) {
  auto f = open_out(path);
  write_oned_csv(f, rows);
}

std::string audit_json(const AuditReport& rep) {
  Json j;
  j["samples"] = rep.samples;
  j["max_dissipation_negativity"] = rep.max_dissipation_negativity;
  j["max_energy_residual"] = rep.max_energy_residual;
  j["max_det_residual"] = rep.max_det_residual;
  j["max_incompressibility"] = rep.max_incompressibility;
  j["dissipation_ok"] = rep.dissipation_ok;
  j["energy_ok"] = rep.energy_ok;
  j["det_ok"] = rep.det_ok;
  j["incompressibility_ok"] = rep.incompressibility_ok;
  j["passed"] = rep.passed();
  return j.dump(2);
}

std::string probe_json(const MaximizationProbe& p) {
  Json j;
  j["xi_candidate"] = p.xi_candidate;
  j["constraint"] = p.constraint;
  j["trace"] = p.trace;
  j["stationarity"] = p.stationarity;
  j["skew_sensitivity"] = p.skew_sensitivity;
  j["samples_requested"] = p.samples_requested;
  j["samples_used"] = p.samples_used;
  j["samples_skipped"] = p.samples_skipped;
  j["max_excess"] = p.max_excess;
  j["degenerate"] = p.degenerate;
  j["passed"] = p.passed;
  return j.dump(2);
}

void write_text(const std::string& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

}  // namespace vefluid::io
