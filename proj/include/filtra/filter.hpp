// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "filtra/group.hpp"

namespace filtra {

enum class InterpolationMode { Bilinear, Nearest };

InterpolationMode parse_mode(std::string_view text);
std::string_view mode_name(InterpolationMode mode);

/// Centred S×S real filter patch, S odd.
///
/// Storage is row-major with row 0 at the top.  Pixel (row, col) sits at
/// planar coordinate x = col − S/2 (rightward), y = S/2 − row (upward), so
/// the centre pixel is the origin and positive angles turn counter-clockwise.
class FilterGrid {
 public:
  explicit FilterGrid(int size);
  FilterGrid(int size, std::vector<double> values);

  int size() const { return size_; }
  int half() const { return size_ / 2; }

  double operator()(int row, int col) const { return values_[index(row, col)]; }
  double& operator()(int row, int col) { return values_[index(row, col)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  FilterGrid& operator+=(const FilterGrid& other);
  FilterGrid& operator-=(const FilterGrid& other);
  FilterGrid& operator*=(double scale);

  /// this += scale·other
  void add_scaled(const FilterGrid& other, double scale);

  double max_abs() const;

  friend FilterGrid operator+(FilterGrid a, const FilterGrid& b) { return a += b; }
  friend FilterGrid operator-(FilterGrid a, const FilterGrid& b) { return a -= b; }
  friend FilterGrid operator*(double s, FilterGrid a) { return a *= s; }
  friend bool operator==(const FilterGrid&, const FilterGrid&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(col);
  }

  int size_;
  std::vector<double> values_;
};

double max_abs_diff(const FilterGrid& a, const FilterGrid& b);

/// Maps an output point (x, y) to the source point it reads from:
/// (xx·x + xy·y, yx·x + yy·y).
struct PointMap {
  double xx, xy, yx, yy;

  static PointMap rotation(double cos_a, double sin_a);
};

/// Resamples an H×W row-major plane: output(p) = input(map·p), with points
/// measured from the plane centre ((W−1)/2, (H−1)/2) and y pointing up.
/// Samples outside the plane read 0.  Map coefficients are snapped to a
/// 2^-36 lattice, so sample coordinates are exact dyadic values: grid-aligned
/// maps hit pixel centres exactly and equal angles give identical output.
/// Nearest mode breaks half-pixel ties toward the centre on each axis.
std::vector<double> resample_plane(std::span<const double> plane, int height, int width,
                                   const PointMap& map, InterpolationMode mode);

/// output(x) = f(R(−θ)·x): turns the content counter-clockwise by θ.
FilterGrid resample_rotate(const FilterGrid& f, double theta, InterpolationMode mode);

/// output(x, y) = f(x, −y): exact row reversal.
FilterGrid resample_reflect(const FilterGrid& f);

/// Spatial part of the action of g on the plane: R(θ_{i1})·diag(1, (−1)^{i0}).
PointMap element_map(const GroupElement& g);

/// output(x) = f(g·x).
FilterGrid transform_filter(const FilterGrid& f, const GroupElement& g, InterpolationMode mode);

/// Rotated copies of one base filter.  K holds κ^n(φ) = κ(φ − θ_n); the
/// conjugate stack K̄ holds κ̄^n(φ) = κ(θ_n − φ).
struct FilterStack {
  int rotation_order;
  bool conjugate;
  std::vector<FilterGrid> entries;
};

FilterStack build_stack_K(const FilterGrid& base, int n, InterpolationMode mode);
FilterStack build_stack_Kbar(const FilterGrid& base, int n, InterpolationMode mode);

}  // namespace filtra
