#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "vefluid/errors.hpp"
#include "vefluid/io.hpp"
#include "vefluid/plot.hpp"

using namespace vefluid;

namespace {

TimeSeries creep_series() {
  CreepSpec c;
  c.samples_per_segment = 50;
  return run_creep(c, {});
}

}  // namespace

TEST_CASE("numbers round-trip exactly") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::ldexp(u(gen), static_cast<int>(k % 80) - 40);
    CHECK(io::parse_number(io::format_number(x), "x") == x);
  }
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::parse_number("+2.5", "x") == 2.5);
  CHECK(io::parse_number("1e-3", "x") == 0.001);
  CHECK_THROWS_AS(io::parse_number("", "x"), ConfigError);
  CHECK_THROWS_AS(io::parse_number("1.0abc", "x"), ConfigError);
  CHECK_THROWS_AS(io::parse_number("abc", "x"), ConfigError);
}

TEST_CASE("series CSV round trip preserves the audit") {
  const TimeSeries s = creep_series();
  std::stringstream ss;
  io::write_series_csv(ss, s);
  std::string header;
  std::getline(std::istringstream(ss.str()), header);
  CHECK(header.rfind(io::kSeriesHeader, 0) == 0);

  const TimeSeries back = io::read_series_csv(ss, "creep", s.eta_bar);
  REQUIRE(back.rows.size() == s.rows.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(back.rows[i].t_bar == s.rows[i].t_bar);
    CHECK(back.rows[i].B == s.rows[i].B);
    CHECK(back.rows[i].lambda == s.rows[i].lambda);
    CHECK(back.rows[i].dB == s.rows[i].dB);
  }
  const auto a = audit_trajectory(s, DissipationVariant::StretchWeighted);
  const auto b = audit_trajectory(back, DissipationVariant::StretchWeighted);
  CHECK(io::audit_json(a) == io::audit_json(b));
}

TEST_CASE("CSV reader diagnostics") {
  std::istringstream badField("t_bar,B,lambda,T11_bar\n0,1,1,1\n1,x,1,1\n");
  try {
    io::read_series_csv(badField, "creep", 10.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  std::istringstream short_("t_bar,B,lambda,T11_bar\n0,1,1\n");
  CHECK_THROWS_AS(io::read_series_csv(short_, "creep", 10.0), ConfigError);
  std::istringstream header("time,B,lambda,T11_bar\n0,1,1,1\n");
  CHECK_THROWS_AS(io::read_series_csv(header, "creep", 10.0), ConfigError);
  std::istringstream order("t_bar,B,lambda,T11_bar\n1,1,1,1\n0,1,1,1\n");
  CHECK_THROWS_AS(io::read_series_csv(order, "creep", 10.0), ConfigError);
  std::istringstream empty("");
  CHECK_THROWS_AS(io::read_csv(empty), ConfigError);
  CHECK_THROWS_AS(io::read_csv("/nonexistent/file.csv"), ConfigError);
}

TEST_CASE("general and one-dimensional CSV headers") {
  GeneralFlowSpec f = simple_shear(ModelParams::scaled(2.0), DissipationVariant::PlainQuadratic, 0.5, 1.0);
  f.samples_per_segment = 4;
  std::ostringstream g;
  io::write_general_csv(g, run_general_flow(f, {}));
  CHECK(g.str().rfind("t_bar,B,lambda,T11_bar,B11,B22,B33,B12,B13,B23,condition,asymmetry\n", 0) == 0);

  std::ostringstream o;
  io::write_oned_csv(o, {{0.0, 0.0, 0.0, 0.0}, {1.0, 0.5, 0.25, 0.75}});
  CHECK(o.str() == "t_bar,eps_G,eps_p,eps_total\n0,0,0,0\n1,0.5,0.25,0.75\n");
}

TEST_CASE("report JSON") {
  const auto a = audit_trajectory(creep_series(), DissipationVariant::StretchWeighted);
  const auto j = nlohmann::json::parse(io::audit_json(a));
  CHECK(j.at("passed").get<bool>());
  CHECK(j.at("samples").get<std::size_t>() == a.samples);
  CHECK(j.at("max_energy_residual").get<double>() == a.max_energy_residual);
}

TEST_CASE("plot scripts") {
  CHECK(parse_figure("fig5") == FigureKind::Fig5);
  CHECK_THROWS_AS(parse_figure("fig6"), ConfigError);
  CHECK_THROWS_AS(gnuplot_script(FigureKind::Fig2, {}), ConfigError);

  const std::string dir = std::string(VEFLUID_TEST_DIR);
  const std::string a = dir + "/plot_a.csv", b = dir + "/plot_b.csv";
  io::write_series_csv(a, creep_series());
  io::write_text(b, "t_bar,B,lambda\n0,1,1\n");

  const std::string s2 = gnuplot_script(FigureKind::Fig2, {a, a});
  CHECK(s2.find("multiplot layout 1,2") != std::string::npos);
  CHECK(s2.find("using 1:3") != std::string::npos);
  CHECK(s2.find("using 1:2") != std::string::npos);
  const std::string s4 = gnuplot_script(FigureKind::Fig4, {a});
  CHECK(s4.find("sqrt($2)") != std::string::npos);
  const std::string s5 = gnuplot_script(FigureKind::Fig5, {a});
  CHECK(s5.find("using 1:4") != std::string::npos);
  CHECK_THROWS_AS(gnuplot_script(FigureKind::Fig5, {b}), ConfigError);
}
