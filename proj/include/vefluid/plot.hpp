#pragma once

// gnuplot scripts for the figure layouts of the uniaxial experiments.

#include <string>
#include <string_view>
#include <vector>

namespace vefluid {

enum class FigureKind {
  Fig2,  // creep: lambda and B against t_bar
  Fig3,  // creep at several loads or eta_bar: lambda and B
  Fig4,  // creep: lambda and sqrt(B)
  Fig5,  // relaxation: B and T11_bar
};

/// Accepts "fig2" .. "fig5"; throws ConfigError otherwise.
FigureKind parse_figure(std::string_view name);
std::string_view to_string(FigureKind f);

/// Two-panel gnuplot script over one or more CSV files. Columns are looked up
/// by header name in every file; throws ConfigError if one is missing or the
/// list is empty.
std::string gnuplot_script(FigureKind figure, const std::vector<std::string>& csv_paths,
                           const std::string& output = "");

}  // namespace vefluid
