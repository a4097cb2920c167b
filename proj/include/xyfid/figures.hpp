#pragma once

#include <string>
#include <vector>

namespace xyfid {

enum class Figure { fig1a, fig1b, fig1c, fig2, fig3, fig4, fig5, fig6 };

Figure parse_figure(const std::string& s);
const char* figure_name(Figure f);

// Emits <name>.csv (wide data table) plus a <name>.gp gnuplot sidecar into
// out_dir; returns the paths written. Parameter choices: N=50 for
// fig1*/2/3/4, N in {50,100} for fig5, N in {6,8,10} for fig6.
std::vector<std::string> reproduce_figure(Figure fig, const std::string& out_dir,
                                          int workers = 0);

}  // namespace xyfid
