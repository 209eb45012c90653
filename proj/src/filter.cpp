// SPDX-License-Identifier: Apache-2.0
#include "filtra/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace filtra {

namespace {

constexpr double kLattice = 68719476736.0;  // 2^36

double snap(double v) { return std::round(v * kLattice) / kLattice; }

// Half-pixel ties round toward the centre so the rule commutes with mirroring.
long nearest_index(double t, double centre) {
  const double lo = std::floor(t);
  const double frac = t - lo;
  if (frac < 0.5) return static_cast<long>(lo);
  if (frac > 0.5) return static_cast<long>(lo) + 1;
  return static_cast<long>(t > centre ? lo : lo + 1);
}

}  // namespace

InterpolationMode parse_mode(std::string_view text) {
  if (text == "bilinear") return InterpolationMode::Bilinear;
  if (text == "nearest") return InterpolationMode::Nearest;
  throw std::invalid_argument("unknown interpolation mode '" + std::string(text) + "'");
}

std::string_view mode_name(InterpolationMode mode) {
  return mode == InterpolationMode::Bilinear ? "bilinear" : "nearest";
}

FilterGrid::FilterGrid(int size)
    : FilterGrid(size, std::vector<double>(static_cast<std::size_t>(std::max(size, 0)) *
                                           static_cast<std::size_t>(std::max(size, 0)))) {}

FilterGrid::FilterGrid(int size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("filter size must be odd and >= 1, got " + std::to_string(size));
  }
  if (values_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw std::invalid_argument("filter of size " + std::to_string(size) + " needs " +
                                std::to_string(size * size) + " values, got " +
                                std::to_string(values_.size()));
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("filter values must be finite");
  }
}

FilterGrid& FilterGrid::operator+=(const FilterGrid& other) {
  add_scaled(other, 1.0);
  return *this;
}

FilterGrid& FilterGrid::operator-=(const FilterGrid& other) {
  add_scaled(other, -1.0);
  return *this;
}

FilterGrid& FilterGrid::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

void FilterGrid::add_scaled(const FilterGrid& other, double scale) {
  if (other.size_ != size_) {
    throw std::invalid_argument("filter size mismatch: " + std::to_string(size_) + " vs " +
                                std::to_string(other.size_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
}

double FilterGrid::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const FilterGrid& a, const FilterGrid& b) {
  if (a.size() != b.size()) throw std::invalid_argument("filter size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

PointMap PointMap::rotation(double cos_a, double sin_a) { return {cos_a, -sin_a, sin_a, cos_a}; }

std::vector<double> resample_plane(std::span<const double> plane, int height, int width,
                                   const PointMap& map, InterpolationMode mode) {
  if (plane.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw std::invalid_argument("plane size does not match its dimensions");
  }
  const double xx = snap(map.xx), xy = snap(map.xy), yx = snap(map.yx), yy = snap(map.yy);
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  auto at = [&](long row, long col) -> double {
    if (row < 0 || row >= height || col < 0 || col >= width) return 0.0;
    return plane[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(col)];
  };

  std::vector<double> out(plane.size(), 0.0);
  for (int row = 0; row < height; ++row) {
    const double y = cy - row;
    for (int col = 0; col < width; ++col) {
      const double x = col - cx;
      const double u = xx * x + xy * y + cx;   // source column
      const double v = cy - (yx * x + yy * y);  // source row
      double value = 0.0;
      if (mode == InterpolationMode::Nearest) {
        value = at(nearest_index(v, cy), nearest_index(u, cx));
      } else {
        const double c0 = std::floor(u);
        const double r0 = std::floor(v);
        const double fu = u - c0;
        const double fv = v - r0;
        const long ci = static_cast<long>(c0);
        const long ri = static_cast<long>(r0);
        value = (1.0 - fv) * (1.0 - fu) * at(ri, ci);
        if (fu != 0.0) value += (1.0 - fv) * fu * at(ri, ci + 1);
        if (fv != 0.0) {
          value += fv * (1.0 - fu) * at(ri + 1, ci);
          if (fu != 0.0) value += fv * fu * at(ri + 1, ci + 1);
        }
      }
      out[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
          static_cast<std::size_t>(col)] = value;
    }
  }
  return out;
}

FilterGrid resample_rotate(const FilterGrid& f, double theta, InterpolationMode mode) {
  const PointMap inverse_rotation = PointMap::rotation(std::cos(theta), -std::sin(theta));
  return FilterGrid(f.size(),
                    resample_plane(f.values(), f.size(), f.size(), inverse_rotation, mode));
}

FilterGrid resample_reflect(const FilterGrid& f) {
  FilterGrid out(f.size());
  const int s = f.size();
  for (int row = 0; row < s; ++row) {
    for (int col = 0; col < s; ++col) out(row, col) = f(s - 1 - row, col);
  }
  return out;
}

PointMap element_map(const GroupElement& g) {
  const auto [c, s] = turn_cos_sin(g.i1(), g.spec().rotation_order());
  const double flip = g.i0() == 0 ? 1.0 : -1.0;
  return {c, -s * flip, s, c * flip};
}

FilterGrid transform_filter(const FilterGrid& f, const GroupElement& g, InterpolationMode mode) {
  if (g.is_identity()) return f;
  if (g.i0() == 1 && g.i1() == 0) return resample_reflect(f);
  return FilterGrid(f.size(), resample_plane(f.values(), f.size(), f.size(), element_map(g), mode));
}

namespace {

FilterStack build_stack(const FilterGrid& base, int n, InterpolationMode mode, bool conjugate) {
  if (n < 1) throw std::invalid_argument("rotation order must be >= 1, got " + std::to_string(n));
  const FilterGrid source = conjugate ? resample_reflect(base) : base;
  FilterStack stack{n, conjugate, {}};
  stack.entries.reserve(static_cast<std::size_t>(n));
  stack.entries.push_back(source);
  for (int i = 1; i < n; ++i) {
    stack.entries.push_back(resample_rotate(source, 2.0 * std::numbers::pi * i / n, mode));
  }
  return stack;
}

}  // namespace

FilterStack build_stack_K(const FilterGrid& base, int n, InterpolationMode mode) {
  return build_stack(base, n, mode, false);
}

FilterStack build_stack_Kbar(const FilterGrid& base, int n, InterpolationMode mode) {
  return build_stack(base, n, mode, true);
}

}  // namespace filtra
