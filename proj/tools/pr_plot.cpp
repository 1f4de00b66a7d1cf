#include "pr_plot.hpp"

#include <cstdio>
#include <sstream>

namespace contact::cli {

namespace {

constexpr double kSize = 400.0;
constexpr double kMargin = 50.0;
constexpr const char* kColors[kNumStates] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double px(double recall) { return kMargin + recall * kSize; }
double py(double precision) { return kMargin + (1.0 - precision) * kSize; }

}  // namespace

std::string pr_plot_svg(const eval::EvaluationSummary& summary) {
  const double total = kSize + 2 * kMargin;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total + 200 << "\" height=\"" << total << "\">\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kMargin + kSize / 2 << "\" y=\"" << total - 15 << "\" text-anchor=\"middle\">recall</text>\n";
  svg << "<text x=\"15\" y=\"" << kMargin + kSize / 2 << "\" transform=\"rotate(-90 15 " << kMargin + kSize / 2
      << ")\" text-anchor=\"middle\">precision</text>\n";
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto& curve = summary.curves[s];
    if (!curve.points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << kColors[s] << "\" points=\"";
      for (const auto& p : curve.points) svg << fmt(px(p.recall)) << ',' << fmt(py(p.precision)) << ' ';
      svg << "\"/>\n";
    }
    const std::string ap = curve.ap ? fmt(100.0 * *curve.ap) + "%" : "n/a";
    svg << "<text x=\"" << total + 5 << "\" y=\"" << kMargin + 20 * (s + 1) << "\" fill=\"" << kColors[s] << "\">"
        << kStateNames[s] << " AP " << ap << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace contact::cli
