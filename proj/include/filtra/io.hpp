// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "filtra/features.hpp"

namespace filtra::io {

/// Filter CSV: a `S=<odd int>` line followed by S rows of S comma-separated
/// values, top row first.  Throws std::runtime_error with the offending path
/// or line on malformed input.
FilterGrid read_filter_csv(std::istream& in);
FilterGrid read_filter_csv(const std::filesystem::path& path);
void write_filter_csv(std::ostream& out, const FilterGrid& f);

/// 8-bit P2 PGM, min–max normalised per image (constant images map to 128).
void write_pgm(std::ostream& out, const FilterGrid& f);

/// Header `C=<c>,H=<h>,W=<w>,group=<g>,rep=<rep>,mult=<m>` then C·H rows of W
/// values, channel-major.
FeatureMap read_feature_csv(std::istream& in);
void write_feature_csv(std::ostream& out, const FeatureMap& f);

/// One row per line, comma-separated, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// `%.17g`; round-trips every double.
std::string format_double(double v);

}  // namespace filtra::io
