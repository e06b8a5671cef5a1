#pragma once

// Plot data for variables, rule firing and aggregated outputs, plus
// deterministic SVG and plain-text renderers. Same input, same bytes.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzkit/engine.hpp"
#include "fuzzkit/system.hpp"

namespace fuzzkit::viz {

inline constexpr int kDefaultSamples = 201;

/// Series colors, cycled by term index.
inline constexpr std::array<std::string_view, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;      // membership; the upper bound for interval terms
  std::vector<double> lower;   // interval terms only
  std::vector<double> spikes;  // x positions of singleton impulses of height 1
};

struct Chart {
  std::string title;
  double x_min = 0.0;
  double x_max = 1.0;
  std::vector<Series> series;
  std::vector<std::string> notes;  // free text, e.g. Sugeno consequents
  std::vector<double> markers;     // dashed vertical lines, e.g. a crisp output
};

struct BarChart {
  std::string title;
  std::vector<std::string> labels;
  std::vector<double> values;  // in [0, 1]
};

/// One panel per variable (inputs first) and a panel listing the rules.
struct Figure {
  std::string title;
  std::vector<Chart> panels;
  std::vector<std::string> rules;
};

/// One series per term with exactly `samples` points spanning the domain.
/// Throws std::invalid_argument if samples < 2.
Chart plot_variable(const Variable& variable, int samples = kDefaultSamples);

Figure plot_system(const FuzzySystem& sys, int samples = kDefaultSamples);

/// Rule activations of one inference, labelled R1..Rn.
BarChart plot_firing(const InferenceResult& result);

/// Aggregated output curves with the crisp value marked; empty for Sugeno.
std::vector<Chart> plot_aggregated(const InferenceResult& result);

std::string render_svg(const Chart& chart);
std::string render_svg(const BarChart& chart);
std::string render_svg(const Figure& figure);

/// Exactly `height` lines of exactly `width` characters, each ending in '\n'.
/// Throws std::invalid_argument unless width >= 20 and height >= 5.
std::string render_ascii(const Chart& chart, int width, int height);
std::string render_ascii(const BarChart& chart, int width, int height);

}  // namespace fuzzkit::viz
