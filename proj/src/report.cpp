/*
Copyright 2026 The gradcodec Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "gradcodec/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gradcodec {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double transform(double v) const { return log ? std::log10(v) : v; }
  double unit(double v) const { return (transform(v) - lo) / (hi - lo); }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

Axis fit_axis(const std::vector<Series>& series, bool log, bool use_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    const auto& values = use_x ? s.x : s.y;
    const auto& other = use_x ? s.y : s.x;
    for (std::size_t i = 0; i < std::min(values.size(), other.size()); ++i) {
      if (!usable(values[i], log)) continue;
      const double t = log ? std::log10(values[i]) : values[i];
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0, log};
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi, log};
}

std::vector<double> ticks(const Axis& axis) {
  std::vector<double> out;
  if (axis.log) {
    const int span = static_cast<int>(axis.hi - axis.lo);
    const int stride = std::max(1, span / 8);
    for (int e = static_cast<int>(axis.lo); e <= static_cast<int>(axis.hi); e += stride) {
      out.push_back(std::pow(10.0, e));
    }
    return out;
  }
  const double raw = (axis.hi - axis.lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-9 * step; v += step) out.push_back(v);
  return out;
}

std::string tick_label(double v, bool log) {
  std::ostringstream s;
  if (log) {
    s << "1e" << static_cast<int>(std::lround(std::log10(v)));
  } else {
    s.precision(4);
    s << (std::fabs(v) < 1e-12 ? 0.0 : v);
  }
  return s.str();
}

}  // namespace

std::string render_svg(const ChartSpec& chart, const std::vector<Series>& series) {
  const double left = 80;
  const double right = 200;
  const double top = 40;
  const double bottom = 60;
  const double w = chart.width - left - right;
  const double h = chart.height - top - bottom;
  const Axis ax = fit_axis(series, chart.log_x, true);
  const Axis ay = fit_axis(series, chart.log_y, false);
  const auto px = [&](double v) { return left + ax.unit(v) * w; };
  const auto py = [&](double v) { return top + (1.0 - ay.unit(v)) * h; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\"" << chart.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape_xml(chart.title) << "</text>\n";

  for (double t : ticks(ax)) {
    const double x = px(t);
    svg << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + h
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << top + h + 16 << "\" text-anchor=\"middle\">"
        << tick_label(t, ax.log) << "</text>\n";
  }
  for (double t : ticks(ay)) {
    const double y = py(t);
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + w << "\" y2=\"" << y
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << tick_label(t, ay.log)
        << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << left + w / 2 << "\" y=\"" << chart.height - 16 << "\" text-anchor=\"middle\">"
      << escape_xml(chart.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << top + h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape_xml(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::ostringstream points;
    points.precision(6);
    std::size_t count = 0;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], ax.log) || !usable(s.y[i], ay.log)) continue;
      if (s.markers) {
        svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3.5\" fill=\"" << color
            << "\"/>\n";
      } else {
        points << (count ? " " : "") << px(s.x[i]) << ',' << py(s.y[i]);
      }
      ++count;
    }
    if (!s.markers && count > 0) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << points.str() << "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    const double lx = left + w + 12;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
        << "/>\n";
    svg << "<text x=\"" << lx + 28 << "\" y=\"" << ly << "\">" << escape_xml(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string joined(const std::vector<std::string>& cells, char sep, bool quote) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += sep;
    out += quote ? csv_field(cells[i]) : cells[i];
  }
  return out + "\n";
}

}  // namespace

std::string Table::to_csv() const {
  std::string out = joined(header, ',', true);
  for (const auto& r : rows) out += joined(r, ',', true);
  return out;
}

std::string Table::to_tsv() const {
  std::string out = joined(header, '\t', false);
  for (const auto& r : rows) out += joined(r, '\t', false);
  return out;
}

std::string Table::to_text() const {
  std::vector<std::size_t> widths(header.size(), 0);
  const auto widen = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size() && i < widths.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  };
  widen(header);
  for (const auto& r : rows) widen(r);
  const auto line = [&](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      out += r[i];
      if (i + 1 < r.size()) out += std::string(widths[i] - r[i].size() + 2, ' ');
    }
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string format_number(double v, int precision) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace gradcodec
