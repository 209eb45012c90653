// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "filtra/kernels.hpp"

namespace filtra {

/// C×H×W vector-field feature map.  Channels form `multiplicity` consecutive
/// blocks of dim(rep) channels, each block transforming under rep.
class FeatureMap {
 public:
  FeatureMap(RepSpec rep, int multiplicity, int height, int width);
  FeatureMap(RepSpec rep, int multiplicity, int height, int width, std::vector<double> data);

  const RepSpec& rep() const { return rep_; }
  const GroupSpec& group() const { return rep_.group(); }
  int multiplicity() const { return multiplicity_; }
  int channels() const { return multiplicity_ * rep_.dim(); }
  int height() const { return height_; }
  int width() const { return width_; }

  double operator()(int channel, int row, int col) const { return data_[offset(channel, row, col)]; }
  double& operator()(int channel, int row, int col) { return data_[offset(channel, row, col)]; }

  std::span<const double> channel(int c) const;
  std::span<double> channel(int c);
  std::span<const double> data() const { return data_; }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t offset(int channel, int row, int col) const {
    return (static_cast<std::size_t>(channel) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(row)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  RepSpec rep_;
  int multiplicity_;
  int height_;
  int width_;
  std::vector<double> data_;
};

/// Zero-padded stride-1 cross-correlation with the same spatial size:
///   out[o](p) = Σ_i Σ_q kernel(o, i)(q) · f[i](p + q)
/// applied independently to each multiplicity block.
FeatureMap conv2d(const SteerableKernel& kernel, const FeatureMap& f);

/// π(g)f = ρ(g)·f(g^{-1}x): resamples every channel with the filter sampler
/// and mixes each multiplicity block by ρ(g).
FeatureMap act_on_feature(const GroupElement& g, const FeatureMap& f, InterpolationMode mode);

/// Spatial part of act_on_feature only; channels are not mixed.
FeatureMap transform_spatial(const GroupElement& g, const FeatureMap& f, InterpolationMode mode);

/// max(0, v).  Rejects irrep features, whose steerability a pointwise
/// nonlinearity would break.
FeatureMap relu_channelwise(const FeatureMap& f);

/// Per block and pixel, the max over the regular channels.  Output rep is
/// trivial with the same multiplicity.
FeatureMap group_pool(const FeatureMap& f);

/// Channel-wise k×k max pooling.  Windows are centred on input pixels
/// 0, stride, 2·stride, … (leading padding (k−1)/2); positions outside the map
/// contribute zeros.
FeatureMap pool_spatial(const FeatureMap& f, int k, int stride);

/// Copy restricted to the rows/cols at least `margin` away from the border.
FeatureMap crop(const FeatureMap& f, int margin);

}  // namespace filtra
