#include "vefluid/plot.hpp"

#include <array>
#include <sstream>

#include "vefluid/errors.hpp"
#include "vefluid/io.hpp"

namespace vefluid {

namespace {

struct Panel {
  const char* column;
  const char* label;
  bool sqrt = false;
};

std::array<Panel, 2> panels(FigureKind f) {
  switch (f) {
    case FigureKind::Fig4: return {{{"lambda", "lambda"}, {"B", "sqrt(B)", true}}};
    case FigureKind::Fig5: return {{{"B", "B"}, {"T11_bar", "T11 / mu"}}};
    default: return {{{"lambda", "lambda"}, {"B", "B"}}};
  }
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

FigureKind parse_figure(std::string_view name) {
  for (auto f : {FigureKind::Fig2, FigureKind::Fig3, FigureKind::Fig4, FigureKind::Fig5}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown figure '" + std::string(name) + "' (expected fig2..fig5)");
}

std::string_view to_string(FigureKind f) {
  switch (f) {
    case FigureKind::Fig2: return "fig2";
    case FigureKind::Fig3: return "fig3";
    case FigureKind::Fig4: return "fig4";
    case FigureKind::Fig5: return "fig5";
  }
  return "fig2";
}

std::string gnuplot_script(FigureKind figure, const std::vector<std::string>& csv_paths,
                           const std::string& output) {
  if (csv_paths.empty()) throw ConfigError("plot needs at least one CSV file");
  const auto ps = panels(figure);
  std::vector<std::array<std::size_t, 3>> cols;  // t_bar, panel 1, panel 2 (1-based)
  for (const auto& path : csv_paths) {
    const io::CsvTable t = io::read_csv(path);
    try {
      cols.push_back({t.column("t_bar") + 1, t.column(ps[0].column) + 1,
                      t.column(ps[1].column) + 1});
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }

  std::ostringstream s;
  if (!output.empty()) {
    s << "set terminal pngcairo size 1200,500\n";
    s << "set output " << quote(output) << "\n";
  }
  s << "set datafile separator ','\n";
  s << "set key autotitle columnhead\n";
  s << "set multiplot layout 1,2 title " << quote(std::string(to_string(figure))) << "\n";
  s << "set xlabel 't_bar'\n";
  for (std::size_t p = 0; p < 2; ++p) {
    s << "set ylabel " << quote(ps[p].label) << "\n";
    s << "plot ";
    for (std::size_t i = 0; i < csv_paths.size(); ++i) {
      if (i > 0) s << ", \\\n     ";
      const std::size_t c = cols[i][p + 1];
      s << quote(csv_paths[i]) << " using " << cols[i][0] << ":";
      if (ps[p].sqrt) s << "(sqrt($" << c << "))";
      else s << c;
      s << " with lines title " << quote(csv_paths[i]);
    }
    s << "\n";
  }
  s << "unset multiplot\n";
  return s.str();
}

}  // namespace vefluid
