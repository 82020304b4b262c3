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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace gradcodec {

/// n x d feature matrix with n labels. Stored dense; sparse rows are expanded
/// on input.
struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
  std::string name;
  std::string source;  // file path or synthetic descriptor

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

/// Parses LIBSVM text: `label idx:val idx:val ...`, 1-based strictly
/// increasing indices. Blank lines and lines starting with '#' are skipped.
/// d is the largest index seen. Throws ParseError with the line number.
Dataset parse_libsvm(std::string_view text, std::string name = "libsvm",
                     std::string source = "<memory>");
Dataset load_libsvm(const std::filesystem::path& path);

/// Writes nonzero features only, full double precision.
std::string serialize_libsvm(const Dataset& dataset);

/// Maps a two-class label set onto {-1, +1}: {0,1} -> 0 is -1, {1,2} -> 2 is
/// -1, {-1,+1} unchanged. Other label sets throw InvalidArgument.
Eigen::VectorXd to_binary_labels(const Eigen::VectorXd& labels);

/// Rescales each column to [-1, 1] by its max absolute value (all-zero
/// columns untouched).
Dataset scale_columns(Dataset dataset);

/// Gaussian features, planted Gaussian parameter, labels A x_bar + noise * N(0,1).
Dataset synth_regression(std::size_t d, std::size_t n, double noise, std::uint64_t seed);

/// Gaussian features and a planted unit direction w; labels sign(a_i . w), and
/// each row is shifted along y_i w so that y_i a_i . w >= margin.
Dataset synth_classification(std::size_t d, std::size_t n, double margin, std::uint64_t seed);

/// Planted parameter used by the synthetic generators for a given (d, seed).
Eigen::VectorXd synth_planted(std::size_t d, std::uint64_t seed, bool unit);

/// Reads a manifest of `name path` lines; relative paths resolve against the
/// manifest's directory.
std::map<std::string, std::filesystem::path> load_manifest(const std::filesystem::path& path);

/// Resolves `synth:ridge:d=50,n=200,noise=0.1,seed=7`,
/// `synth:logistic:d=50,n=200,margin=0.1,seed=7`, a manifest name or a file path.
Dataset resolve_dataset(std::string_view spec,
                        const std::map<std::string, std::filesystem::path>& manifest = {});

}  // namespace gradcodec
