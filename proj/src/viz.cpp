#include "fuzzkit/viz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fuzzkit/dsl.hpp"
#include "util.hpp"

namespace fuzzkit::viz {

namespace {

using util::Overloaded;

constexpr double kPanelW = 360.0;
constexpr double kPanelH = 240.0;
constexpr double kLeft = 40.0;
constexpr double kRight = 110.0;  // legend column
constexpr double kTop = 28.0;
constexpr double kBottom = 30.0;
constexpr double kLine = 16.0;
constexpr std::string_view kSymbols = "*+o#x%@&";

std::string fixed(double v) {
  char buf[64];
  if (v == 0.0) v = 0.0;  // no "-0.00"
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick(double v) {
  char buf[64];
  if (std::abs(v) < 1e-12) v = 0.0;
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default:
        // Control characters are not allowed in XML 1.0.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t') {
          out += '?';
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string_view color(std::size_t index) { return kPalette[index % kPalette.size()]; }

void svg_open(std::ostringstream& os, double w, double h) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(w) << "\" height=\""
     << fixed(h) << "\" viewBox=\"0 0 " << fixed(w) << ' ' << fixed(h)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << fixed(w) << "\" height=\"" << fixed(h) << "\" fill=\"white\"/>\n";
}

// Draws a chart into the box [x0, x0 + kPanelW] x [y0, y0 + kPanelH].
void svg_chart(std::ostringstream& os, const Chart& c, double x0, double y0) {
  const double pw = kPanelW - kLeft - kRight;
  const double ph = kPanelH - kTop - kBottom;
  const double span = c.x_max > c.x_min ? c.x_max - c.x_min : 1.0;
  const auto px = [&](double x) { return x0 + kLeft + (x - c.x_min) / span * pw; };
  const auto py = [&](double y) { return y0 + kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * ph; };

  os << "<g>\n";
  os << "<text x=\"" << fixed(x0 + kLeft + pw / 2) << "\" y=\"" << fixed(y0 + 16)
     << "\" text-anchor=\"middle\" font-weight=\"bold\">" << escape(c.title) << "</text>\n";
  os << "<rect x=\"" << fixed(px(c.x_min)) << "\" y=\"" << fixed(py(1.0)) << "\" width=\"" << fixed(pw)
     << "\" height=\"" << fixed(ph) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = c.x_min + span * k / 4.0;
    os << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(py(0.0)) << "\" x2=\"" << fixed(px(x))
       << "\" y2=\"" << fixed(py(0.0) + 4) << "\" stroke=\"#444444\"/>\n";
    os << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(py(0.0) + 16) << "\" text-anchor=\"middle\">"
       << tick(x) << "</text>\n";
  }
  for (const double y : {0.0, 0.5, 1.0}) {
    os << "<text x=\"" << fixed(px(c.x_min) - 4) << "\" y=\"" << fixed(py(y) + 4) << "\" text-anchor=\"end\">"
       << tick(y) << "</text>\n";
  }
  for (std::size_t s = 0; s < c.series.size(); ++s) {
    const auto& se = c.series[s];
    if (!se.lower.empty()) {
      os << "<polygon fill=\"" << color(s) << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < se.xs.size(); ++i) os << fixed(px(se.xs[i])) << ',' << fixed(py(se.ys[i])) << ' ';
      for (std::size_t i = se.xs.size(); i-- > 0;) {
        os << fixed(px(se.xs[i])) << ',' << fixed(py(se.lower[i])) << (i ? " " : "");
      }
      os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color(s) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < se.xs.size(); ++i) {
      os << (i ? " " : "") << fixed(px(se.xs[i])) << ',' << fixed(py(se.ys[i]));
    }
    os << "\"/>\n";
    for (const double x : se.spikes) {
      os << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(py(0.0)) << "\" x2=\"" << fixed(px(x))
         << "\" y2=\"" << fixed(py(1.0)) << "\" stroke=\"" << color(s) << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = y0 + kTop + 6 + kLine * static_cast<double>(s);
    const double lx = x0 + kPanelW - kRight + 8;
    os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 16) << "\" y2=\""
       << fixed(ly) << "\" stroke=\"" << color(s) << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed(lx + 20) << "\" y=\"" << fixed(ly + 4) << "\">" << escape(se.label) << "</text>\n";
  }
  for (const double m : c.markers) {
    os << "<line x1=\"" << fixed(px(m)) << "\" y1=\"" << fixed(py(0.0)) << "\" x2=\"" << fixed(px(m))
       << "\" y2=\"" << fixed(py(1.0)) << "\" stroke=\"black\" stroke-dasharray=\"4,3\"/>\n";
  }
  for (std::size_t n = 0; n < c.notes.size(); ++n) {
    os << "<text x=\"" << fixed(px(c.x_min) + 6) << "\" y=\"" << fixed(py(1.0) + 14 + kLine * static_cast<double>(n))
       << "\">" << escape(c.notes[n]) << "</text>\n";
  }
  os << "</g>\n";
}

void check_ascii(int width, int height) {
  if (width < 20 || height < 5) throw std::invalid_argument("ascii rendering needs width >= 20 and height >= 5");
}

std::string fit(std::string s, std::size_t width) {
  s.resize(width, ' ');
  return s;
}

double sample_at(const Series& s, double x) {
  if (s.xs.empty()) return 0.0;
  if (!(x > s.xs.front())) return s.ys.front();
  if (!(x < s.xs.back())) return s.ys.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(s.xs.begin(), s.xs.end(), x) - s.xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - s.xs[lo]) / (s.xs[hi] - s.xs[lo]);
  return s.ys[lo] + (s.ys[hi] - s.ys[lo]) * t;
}

std::string consequent_text(const SugenoConsequent& c) {
  return std::visit(Overloaded{
                        [](const SugenoConstant& k) { return util::format_number(k.value); },
                        [](const SugenoLinear& l) {
                          std::string out;
                          for (const auto& [name, coeff] : l.coefficients) {
                            if (!out.empty()) out += coeff < 0 ? " - " : " + ";
                            else if (coeff < 0) out += "-";
                            out += util::format_number(std::abs(coeff)) + "*" + name;
                          }
                          if (out.empty()) return util::format_number(l.offset);
                          if (l.offset != 0.0) {
                            out += (l.offset < 0 ? " - " : " + ") + util::format_number(std::abs(l.offset));
                          }
                          return out;
                        },
                    },
                    c);
}

}  // namespace

Chart plot_variable(const Variable& variable, int samples) {
  if (samples < 2) throw std::invalid_argument("plot_variable needs at least 2 samples");
  Chart chart;
  chart.title = variable.name;
  chart.x_min = variable.domain.lo;
  chart.x_max = variable.domain.hi;
  const auto xs = sample_grid(variable.domain, samples);
  for (const auto& term : variable.terms) {
    std::visit(Overloaded{
                   [&](const MembershipFunction& mf) {
                     Series s{term.name, xs, {}, {}, {}};
                     for (const double x : xs) s.ys.push_back(eval_mf(mf, x));
                     if (const auto* sg = std::get_if<Singleton>(&mf)) s.spikes.push_back(sg->c);
                     chart.series.push_back(std::move(s));
                   },
                   [&](const IntervalMF& imf) {
                     Series s{term.name, xs, {}, {}, {}};
                     for (const double x : xs) {
                       s.ys.push_back(eval_mf(imf.upper, x));
                       s.lower.push_back(eval_mf(imf.lower, x));
                     }
                     chart.series.push_back(std::move(s));
                   },
                   [&](const SugenoConsequent& c) { chart.notes.push_back(term.name + " = " + consequent_text(c)); },
               },
               term.shape);
  }
  return chart;
}

Figure plot_system(const FuzzySystem& sys, int samples) {
  Figure fig;
  fig.title = sys.name() + " (" + std::string(to_string(sys.kind())) + ")";
  for (const auto& v : sys.inputs()) fig.panels.push_back(plot_variable(v, samples));
  for (const auto& v : sys.outputs()) fig.panels.push_back(plot_variable(v, samples));
  for (std::size_t r = 0; r < sys.rules().size(); ++r) {
    fig.rules.push_back(std::to_string(r + 1) + ". " + print_rule(sys.rules()[r]));
  }
  return fig;
}

BarChart plot_firing(const InferenceResult& result) {
  BarChart chart;
  chart.title = "rule activations";
  const auto& act = result.firing.activations;
  for (std::size_t r = 0; r < act.size(); ++r) {
    chart.labels.push_back("R" + std::to_string(r + 1));
    chart.values.push_back(act[r]);
  }
  return chart;
}

std::vector<Chart> plot_aggregated(const InferenceResult& result) {
  std::vector<Chart> out;
  if (!result.aggregated) return out;
  for (std::size_t o = 0; o < result.aggregated->size(); ++o) {
    const auto& curve = (*result.aggregated)[o];
    Chart c;
    c.title = curve.name + " (aggregated)";
    c.x_min = curve.xs.front();
    c.x_max = curve.xs.back();
    c.series.push_back({curve.name, curve.xs, curve.mus, curve.lower, {}});
    c.markers.push_back(result.crisp[o].second);
    c.notes.push_back(curve.name + " = " + tick(result.crisp[o].second));
    out.push_back(std::move(c));
  }
  return out;
}

std::string render_svg(const Chart& chart) {
  std::ostringstream os;
  svg_open(os, kPanelW, kPanelH);
  svg_chart(os, chart, 0.0, 0.0);
  os << "</svg>\n";
  return os.str();
}

std::string render_svg(const BarChart& chart) {
  const double row = 18.0;
  const double label_w = 60.0;
  const double bar_w = 240.0;
  const double w = label_w + bar_w + 70.0;
  const double h = kTop + row * static_cast<double>(chart.values.size()) + 12.0;
  std::ostringstream os;
  svg_open(os, w, h);
  os << "<text x=\"" << fixed(w / 2) << "\" y=\"16.00\" text-anchor=\"middle\" font-weight=\"bold\">"
     << escape(chart.title) << "</text>\n";
  for (std::size_t i = 0; i < chart.values.size(); ++i) {
    const double y = kTop + row * static_cast<double>(i);
    const double v = std::clamp(chart.values[i], 0.0, 1.0);
    os << "<text x=\"" << fixed(label_w - 6) << "\" y=\"" << fixed(y + 12) << "\" text-anchor=\"end\">"
       << escape(chart.labels[i]) << "</text>\n";
    os << "<rect x=\"" << fixed(label_w) << "\" y=\"" << fixed(y + 2) << "\" width=\"" << fixed(bar_w * v)
       << "\" height=\"" << fixed(row - 4) << "\" fill=\"" << color(i) << "\"/>\n";
    os << "<text x=\"" << fixed(label_w + bar_w + 6) << "\" y=\"" << fixed(y + 12) << "\">" << fixed(v) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_svg(const Figure& figure) {
  const std::size_t n = figure.panels.size();
  const std::size_t cols = std::max<std::size_t>(1, std::min<std::size_t>(3, n));
  const std::size_t rows = (n + cols - 1) / cols;
  const double header = 30.0;
  const double rules_h = figure.rules.empty() ? 0.0 : 28.0 + kLine * static_cast<double>(figure.rules.size());
  const double w = kPanelW * static_cast<double>(cols);
  const double h = header + kPanelH * static_cast<double>(rows) + rules_h;
  std::ostringstream os;
  svg_open(os, w, h);
  os << "<text x=\"" << fixed(w / 2) << "\" y=\"20.00\" text-anchor=\"middle\" font-size=\"14\" font-weight=\"bold\">"
     << escape(figure.title) << "</text>\n";
  for (std::size_t i = 0; i < n; ++i) {
    svg_chart(os, figure.panels[i], kPanelW * static_cast<double>(i % cols),
              header + kPanelH * static_cast<double>(i / cols));
  }
  if (!figure.rules.empty()) {
    const double y0 = header + kPanelH * static_cast<double>(rows);
    os << "<g>\n<text x=\"10.00\" y=\"" << fixed(y0 + 16) << "\" font-weight=\"bold\">rules</text>\n";
    for (std::size_t r = 0; r < figure.rules.size(); ++r) {
      os << "<text x=\"10.00\" y=\"" << fixed(y0 + 34 + kLine * static_cast<double>(r))
         << "\" font-family=\"monospace\">" << escape(figure.rules[r]) << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_ascii(const Chart& chart, int width, int height) {
  check_ascii(width, height);
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  const std::size_t gutter = 5;  // "1.0 |"
  const std::size_t cols = w - gutter;
  const std::size_t rows = h - 3;
  std::vector<std::string> grid(rows, std::string(cols, ' '));
  const double span = chart.x_max > chart.x_min ? chart.x_max - chart.x_min : 1.0;
  const auto column_of = [&](double x) {
    const double t = std::clamp((x - chart.x_min) / span, 0.0, 1.0);
    return static_cast<std::size_t>(std::lround(t * static_cast<double>(cols - 1)));
  };
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const char sym = kSymbols[s % kSymbols.size()];
    const auto& se = chart.series[s];
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = chart.x_min + span * static_cast<double>(c) / static_cast<double>(cols - 1);
      const double y = std::clamp(sample_at(se, x), 0.0, 1.0);
      const auto r = static_cast<std::size_t>(std::lround((1.0 - y) * static_cast<double>(rows - 1)));
      grid[r][c] = sym;
    }
    for (const double x : se.spikes) {
      for (auto& line : grid) line[column_of(x)] = sym;
    }
  }
  for (const double m : chart.markers) {
    for (auto& line : grid) {
      if (line[column_of(m)] == ' ') line[column_of(m)] = ':';
    }
  }

  std::string title = chart.title;
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    title += std::string(s ? " " : "  ") + kSymbols[s % kSymbols.size()] + chart.series[s].label;
  }
  for (const auto& note : chart.notes) title += "  " + note;

  std::string out = fit(title, w) + "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    std::string label = "    ";
    if (r == 0) label = "1.0 ";
    if (r == rows - 1) label = "0.0 ";
    if (rows > 2 && r == (rows - 1) / 2 && (rows - 1) % 2 == 0) label = "0.5 ";
    out += label + "|" + grid[r] + "\n";
  }
  out += "    +" + std::string(cols, '-') + "\n";
  const std::string lo = tick(chart.x_min);
  const std::string hi = tick(chart.x_max);
  std::string axis(w, ' ');
  axis.replace(gutter, std::min(lo.size(), w - gutter), lo.substr(0, w - gutter));
  if (hi.size() + lo.size() + 1 < cols) axis.replace(w - hi.size(), hi.size(), hi);
  out += axis + "\n";
  return out;
}

std::string render_ascii(const BarChart& chart, int width, int height) {
  check_ascii(width, height);
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  std::size_t label_w = 1;
  for (const auto& l : chart.labels) label_w = std::max(label_w, l.size());
  label_w = std::min(label_w, w / 3);
  const std::size_t bar_w = w - label_w - 8;  // " |" + bar + " 0.00"... fits in 8 with bar_w >= 5
  std::vector<std::string> lines{fit(chart.title, w)};
  for (std::size_t i = 0; i < chart.values.size() && lines.size() < h; ++i) {
    const double v = std::clamp(chart.values[i], 0.0, 1.0);
    const auto filled = static_cast<std::size_t>(std::lround(v * static_cast<double>(bar_w - 5)));
    std::string line = fit(chart.labels[i], label_w) + " |" + std::string(filled, '#');
    line = fit(line, label_w + 2 + bar_w - 5) + " " + fixed(v);
    lines.push_back(fit(line, w));
  }
  if (chart.values.size() + 1 > h) lines.back() = fit("... " + std::to_string(chart.values.size() + 2 - h) + " more", w);
  while (lines.size() < h) lines.push_back(std::string(w, ' '));
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace fuzzkit::viz
