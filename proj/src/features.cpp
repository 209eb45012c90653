// SPDX-License-Identifier: Apache-2.0
#include "filtra/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace filtra {

FeatureMap::FeatureMap(RepSpec rep, int multiplicity, int height, int width)
    : FeatureMap(rep, multiplicity, height, width,
                 std::vector<double>(static_cast<std::size_t>(std::max(multiplicity, 0)) *
                                     static_cast<std::size_t>(rep.dim()) *
                                     static_cast<std::size_t>(std::max(height, 0)) *
                                     static_cast<std::size_t>(std::max(width, 0)))) {}

FeatureMap::FeatureMap(RepSpec rep, int multiplicity, int height, int width,
                       std::vector<double> data)
    : rep_(rep), multiplicity_(multiplicity), height_(height), width_(width), data_(std::move(data)) {
  if (multiplicity < 1) throw std::invalid_argument("feature multiplicity must be >= 1");
  if (height < 1 || width < 1) throw std::invalid_argument("feature map must be at least 1x1");
  const std::size_t expected = static_cast<std::size_t>(channels()) *
                               static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (data_.size() != expected) {
    throw std::invalid_argument("feature map needs " + std::to_string(expected) + " values, got " +
                                std::to_string(data_.size()));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("feature values must be finite");
  }
}

std::span<const double> FeatureMap::channel(int c) const {
  const auto plane = static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * plane, plane);
}

std::span<double> FeatureMap::channel(int c) {
  const auto plane = static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * plane, plane);
}

FeatureMap conv2d(const SteerableKernel& kernel, const FeatureMap& f) {
  if (f.rep() != kernel.rep_in()) {
    throw std::invalid_argument("feature rep " + f.rep().name() + " over " + f.group().name() +
                                " does not match kernel input " + kernel.rep_in().name() +
                                " over " + kernel.group().name());
  }
  const int s = kernel.filter_size();
  if (f.height() < s || f.width() < s) {
    throw std::invalid_argument("feature map " + std::to_string(f.height()) + "x" +
                                std::to_string(f.width()) + " is smaller than the " +
                                std::to_string(s) + "x" + std::to_string(s) + " kernel");
  }
  const int h = f.height(), w = f.width(), half = s / 2;
  const int din = kernel.cols(), dout = kernel.rows();
  FeatureMap out(kernel.rep_out(), f.multiplicity(), h, w);
  for (int block = 0; block < f.multiplicity(); ++block) {
    for (int o = 0; o < dout; ++o) {
      auto dst = out.channel(block * dout + o);
      for (int i = 0; i < din; ++i) {
        const FilterGrid& grid = kernel.at(o, i);
        const auto src = f.channel(block * din + i);
        for (int row = 0; row < h; ++row) {
          for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int r = 0; r < s; ++r) {
              const int y = row + r - half;
              if (y < 0 || y >= h) continue;
              for (int c = 0; c < s; ++c) {
                const int x = col + c - half;
                if (x < 0 || x >= w) continue;
                acc += grid(r, c) * src[static_cast<std::size_t>(y * w + x)];
              }
            }
            dst[static_cast<std::size_t>(row * w + col)] += acc;
          }
        }
      }
    }
  }
  return out;
}

FeatureMap transform_spatial(const GroupElement& g, const FeatureMap& f, InterpolationMode mode) {
  if (g.spec() != f.group()) {
    throw std::invalid_argument("element of " + g.spec().name() + " acting on a " +
                                f.group().name() + " feature map");
  }
  FeatureMap out(f.rep(), f.multiplicity(), f.height(), f.width());
  const PointMap map = element_map(inverse(g));
  for (int c = 0; c < f.channels(); ++c) {
    const auto plane = resample_plane(f.channel(c), f.height(), f.width(), map, mode);
    std::copy(plane.begin(), plane.end(), out.channel(c).begin());
  }
  return out;
}

FeatureMap act_on_feature(const GroupElement& g, const FeatureMap& f, InterpolationMode mode) {
  const FeatureMap moved = transform_spatial(g, f, mode);
  if (f.rep().kind() == RepKind::Trivial) return moved;
  const Matrix rho = rep_matrix(f.rep(), g);
  const int d = f.rep().dim();
  FeatureMap out(f.rep(), f.multiplicity(), f.height(), f.width());
  for (int block = 0; block < f.multiplicity(); ++block) {
    for (int r = 0; r < d; ++r) {
      auto dst = out.channel(block * d + r);
      for (int c = 0; c < d; ++c) {
        const double w = rho(r, c);
        if (w == 0.0) continue;
        const auto src = moved.channel(block * d + c);
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += w * src[p];
      }
    }
  }
  return out;
}

FeatureMap relu_channelwise(const FeatureMap& f) {
  if (f.rep().kind() == RepKind::Irrep) {
    throw std::invalid_argument("channel-wise nonlinearity breaks steerability of irrep features (" +
                                f.rep().name() + ")");
  }
  std::vector<double> data(f.data().begin(), f.data().end());
  for (double& v : data) v = std::max(0.0, v);
  return FeatureMap(f.rep(), f.multiplicity(), f.height(), f.width(), std::move(data));
}

FeatureMap group_pool(const FeatureMap& f) {
  if (f.rep().kind() != RepKind::Regular) {
    throw std::invalid_argument("group pooling needs regular features, got " + f.rep().name());
  }
  const int d = f.rep().dim();
  FeatureMap out(RepSpec::trivial(f.group()), f.multiplicity(), f.height(), f.width());
  for (int block = 0; block < f.multiplicity(); ++block) {
    auto dst = out.channel(block);
    const auto first = f.channel(block * d);
    std::copy(first.begin(), first.end(), dst.begin());
    for (int c = 1; c < d; ++c) {
      const auto src = f.channel(block * d + c);
      for (std::size_t p = 0; p < dst.size(); ++p) dst[p] = std::max(dst[p], src[p]);
    }
  }
  return out;
}

FeatureMap pool_spatial(const FeatureMap& f, int k, int stride) {
  if (k < 1 || stride < 1) throw std::invalid_argument("pool size and stride must be >= 1");
  const int pad = (k - 1) / 2;
  auto out_size = [&](int n) {
    const int span = n + 2 * pad - k;
    return span <= 0 ? 1 : (span + stride - 1) / stride + 1;
  };
  const int oh = out_size(f.height()), ow = out_size(f.width());
  FeatureMap out(f.rep(), f.multiplicity(), oh, ow);
  for (int c = 0; c < f.channels(); ++c) {
    const auto src = f.channel(c);
    auto dst = out.channel(c);
    for (int orow = 0; orow < oh; ++orow) {
      for (int ocol = 0; ocol < ow; ++ocol) {
        double best = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < k; ++r) {
          for (int q = 0; q < k; ++q) {
            const int y = orow * stride - pad + r;
            const int x = ocol * stride - pad + q;
            const bool inside = y >= 0 && y < f.height() && x >= 0 && x < f.width();
            best = std::max(best, inside ? src[static_cast<std::size_t>(y * f.width() + x)] : 0.0);
          }
        }
        dst[static_cast<std::size_t>(orow * ow + ocol)] = best;
      }
    }
  }
  return out;
}

FeatureMap crop(const FeatureMap& f, int margin) {
  const int h = f.height() - 2 * margin, w = f.width() - 2 * margin;
  if (margin < 0 || h < 1 || w < 1) {
    throw std::invalid_argument("crop margin " + std::to_string(margin) + " too large");
  }
  FeatureMap out(f.rep(), f.multiplicity(), h, w);
  for (int c = 0; c < f.channels(); ++c) {
    for (int row = 0; row < h; ++row) {
      for (int col = 0; col < w; ++col) out(c, row, col) = f(c, row + margin, col + margin);
    }
  }
  return out;
}

}  // namespace filtra
