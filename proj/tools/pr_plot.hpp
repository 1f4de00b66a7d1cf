#pragma once

#include <string>

#include "contact/evaluation.hpp"

namespace contact::cli {

// Standalone SVG with one precision/recall polyline per contact state.
std::string pr_plot_svg(const eval::EvaluationSummary& summary);

}  // namespace contact::cli
