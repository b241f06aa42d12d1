#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cheeselab/cheese.hpp"

namespace cheeselab::io {

// Static rendering of a plan: outer disc, holes colored by provenance,
// shaded placement shells, and the target (the point 1 or the surviving
// boundary arcs).
std::string render_plan_svg(const cheese::CheesePlan& plan);

// Log-scale residual-versus-truncation plot.
std::string convergence_plot_svg(const std::vector<std::pair<int, double>>& points,
                                 const std::string& y_label);

}  // namespace cheeselab::io
