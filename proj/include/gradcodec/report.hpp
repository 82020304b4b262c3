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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gradcodec {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;   // theory overlays
  bool markers = false;  // draw points instead of a polyline
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

/// Standalone SVG document. Non-finite points, and non-positive ones on a log
/// axis, are dropped.
std::string render_svg(const ChartSpec& chart, const std::vector<Series>& series);

/// Plain table rendered as CSV, TSV or whitespace-aligned text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_tsv() const;
  std::string to_text() const;
};

std::string format_number(double v, int precision = 6);

/// Writes `content`, creating parent directories. Throws std::runtime_error
/// with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace gradcodec
