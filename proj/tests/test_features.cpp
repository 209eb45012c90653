#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "filtra/features.hpp"
#include "filtra/harness.hpp"

namespace filtra {
namespace {

constexpr auto kBilinear = InterpolationMode::Bilinear;

double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
  EXPECT_EQ(a.data().size(), b.data().size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

FeatureMap trivial_map(const GroupSpec& g, int h, int w, std::vector<double> values) {
  return FeatureMap(RepSpec::trivial(g), 1, h, w, std::move(values));
}

SteerableKernel scalar_kernel(const GroupSpec& g, FilterGrid grid) {
  return SteerableKernel(RepSpec::trivial(g), RepSpec::trivial(g), kBilinear, {std::move(grid)});
}

// Content turned a quarter counter-clockwise, from index bookkeeping alone.
double quarter_turned(const FeatureMap& f, int c, int row, int col) {
  return f(c, col, f.width() - 1 - row);
}

TEST(FeatureMap, Validation) {
  const auto c4 = GroupSpec::cyclic(4);
  EXPECT_THROW(FeatureMap(RepSpec::regular(c4), 0, 3, 3), std::invalid_argument);
  EXPECT_THROW(FeatureMap(RepSpec::regular(c4), 1, 0, 3), std::invalid_argument);
  EXPECT_THROW(FeatureMap(RepSpec::regular(c4), 1, 2, 2, std::vector<double>(15)), std::invalid_argument);
  EXPECT_THROW(FeatureMap(RepSpec::trivial(c4), 1, 1, 1, {std::nan("")}), std::invalid_argument);
  const FeatureMap f(RepSpec::irrep(c4, 0, 1), 3, 4, 5);
  EXPECT_EQ(f.channels(), 6);
  EXPECT_EQ(f.data().size(), 120u);
}

TEST(Conv2d, DeltaIsIdentity) {
  std::mt19937_64 rng(1);
  const auto c1 = GroupSpec::cyclic(1);
  const FeatureMap f = random_feature(RepSpec::trivial(c1), 1, 6, 7, rng);
  EXPECT_EQ(conv2d(scalar_kernel(c1, FilterGrid(1, {1.0})), f), f);
}

TEST(Conv2d, ConstantInputGivesGridSumInInterior) {
  std::mt19937_64 rng(2);
  const auto c4 = GroupSpec::cyclic(4);
  const auto kernel = kernel_triv_to_reg_cn(random_filter(3, rng), 4, kBilinear);
  const FeatureMap f = trivial_map(c4, 7, 7, std::vector<double>(49, 2.0));
  const FeatureMap out = conv2d(kernel, f);
  ASSERT_EQ(out.channels(), 4);
  for (int c = 0; c < 4; ++c) {
    double sum = 0.0;
    for (double v : kernel.at(c, 0).values()) sum += v;
    for (int r = 1; r < 6; ++r) {
      for (int q = 1; q < 6; ++q) EXPECT_NEAR(out(c, r, q), 2.0 * sum, 1e-14);
    }
  }
}

TEST(Conv2d, AveragingImpulseGivesPlateau) {
  const auto c1 = GroupSpec::cyclic(1);
  std::vector<double> impulse(25, 0.0);
  impulse[12] = 1.0;
  const FeatureMap out = conv2d(scalar_kernel(c1, FilterGrid(3, std::vector<double>(9, 1.0 / 9))),
                                trivial_map(c1, 5, 5, impulse));
  for (int r = 0; r < 5; ++r) {
    for (int q = 0; q < 5; ++q) {
      const bool inside = r >= 1 && r <= 3 && q >= 1 && q <= 3;
      EXPECT_EQ(out(0, r, q), inside ? 1.0 / 9 : 0.0);
    }
  }
}

TEST(Conv2d, IsCrossCorrelation) {
  // A kernel with a single 1 at the right-hand column reads the right neighbour.
  const auto c1 = GroupSpec::cyclic(1);
  FilterGrid right(3);
  right(1, 2) = 1.0;
  const FeatureMap out = conv2d(scalar_kernel(c1, right), trivial_map(c1, 3, 3, {0, 0, 0, 1, 2, 3, 0, 0, 0}));
  EXPECT_EQ(out(0, 1, 0), 2.0);
  EXPECT_EQ(out(0, 1, 1), 3.0);
  EXPECT_EQ(out(0, 1, 2), 0.0);
}

TEST(Conv2d, LinearInInput) {
  std::mt19937_64 rng(3);
  const auto d4 = GroupSpec::dihedral(4);
  const auto kernel = kernel_triv_to_reg_dn(random_filter(5, rng), 4, kBilinear);
  const FeatureMap f = random_feature(RepSpec::trivial(d4), 2, 9, 9, rng);
  const FeatureMap h = random_feature(RepSpec::trivial(d4), 2, 9, 9, rng);
  const double a = 0.3, b = -2.1;
  std::vector<double> mix(f.data().size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * f.data()[i] + b * h.data()[i];
  const FeatureMap lhs = conv2d(kernel, FeatureMap(f.rep(), 2, 9, 9, mix));
  const FeatureMap cf = conv2d(kernel, f), ch = conv2d(kernel, h);
  std::vector<double> rhs(cf.data().size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = a * cf.data()[i] + b * ch.data()[i];
  EXPECT_LE(max_abs_diff(lhs, FeatureMap(lhs.rep(), 2, 9, 9, rhs)), 1e-12);
}

TEST(Conv2d, RejectsMismatches) {
  std::mt19937_64 rng(4);
  const auto kernel = kernel_triv_to_reg_cn(random_filter(5, rng), 4, kBilinear);
  EXPECT_THROW(conv2d(kernel, FeatureMap(RepSpec::regular(GroupSpec::cyclic(4)), 1, 9, 9)), std::invalid_argument);
  EXPECT_THROW(conv2d(kernel, FeatureMap(RepSpec::trivial(GroupSpec::cyclic(8)), 1, 9, 9)), std::invalid_argument);
  EXPECT_THROW(conv2d(kernel, FeatureMap(RepSpec::trivial(GroupSpec::cyclic(4)), 1, 4, 9)), std::invalid_argument);
}

TEST(ActOnFeature, IdentityLeavesMapUnchanged) {
  std::mt19937_64 rng(5);
  const auto d4 = GroupSpec::dihedral(4);
  const FeatureMap f = random_feature(RepSpec::regular(d4), 2, 7, 7, rng);
  EXPECT_EQ(act_on_feature(GroupElement::identity(d4), f, kBilinear), f);
}

TEST(ActOnFeature, TrivialChannelsOnlyMoveSpatially) {
  std::mt19937_64 rng(6);
  const auto c4 = GroupSpec::cyclic(4);
  const FeatureMap f = random_feature(RepSpec::trivial(c4), 3, 7, 7, rng);
  const FeatureMap out = act_on_feature(GroupElement(c4, 0, 1), f, kBilinear);
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 7; ++r) {
      for (int q = 0; q < 7; ++q) EXPECT_EQ(out(c, r, q), quarter_turned(f, c, r, q));
    }
  }
}

TEST(ActOnFeature, VectorChannelsTurnWithTheImage) {
  std::mt19937_64 rng(7);
  const auto c4 = GroupSpec::cyclic(4);
  const FeatureMap f = random_feature(RepSpec::irrep(c4, 0, 1), 1, 5, 5, rng);
  const FeatureMap out = act_on_feature(GroupElement(c4, 0, 1), f, InterpolationMode::Nearest);
  for (int r = 0; r < 5; ++r) {
    for (int q = 0; q < 5; ++q) {
      EXPECT_EQ(out(0, r, q), -quarter_turned(f, 1, r, q));
      EXPECT_EQ(out(1, r, q), quarter_turned(f, 0, r, q));
    }
  }
}

TEST(ActOnFeature, IsAGroupAction) {
  std::mt19937_64 rng(8);
  const auto d4 = GroupSpec::dihedral(4);
  const FeatureMap f = random_feature(RepSpec::regular(d4), 1, 7, 7, rng);
  for (const auto& g : enumerate(d4)) {
    for (const auto& h : enumerate(d4)) {
      EXPECT_LE(max_abs_diff(act_on_feature(g, act_on_feature(h, f, kBilinear), kBilinear),
                             act_on_feature(compose(g, h), f, kBilinear)),
                1e-15);
    }
  }
}

TEST(TransformSpatial, RejectsForeignElement) {
  const FeatureMap f(RepSpec::trivial(GroupSpec::cyclic(4)), 1, 3, 3);
  EXPECT_THROW(transform_spatial(GroupElement::identity(GroupSpec::cyclic(2)), f, kBilinear), std::invalid_argument);
}

TEST(Relu, Examples) {
  const auto c2 = GroupSpec::cyclic(2);
  const FeatureMap neg = trivial_map(c2, 1, 3, {-1, -2, -0.5});
  const FeatureMap cleared = relu_channelwise(neg);
  for (double v : cleared.data()) EXPECT_EQ(v, 0.0);
  const FeatureMap mixed = trivial_map(c2, 1, 2, {-1, 2});
  EXPECT_EQ(relu_channelwise(mixed), trivial_map(c2, 1, 2, {0, 2}));
  EXPECT_THROW(relu_channelwise(FeatureMap(RepSpec::irrep(GroupSpec::cyclic(4), 0, 1), 1, 2, 2)),
               std::invalid_argument);
}

TEST(Relu, CommutesWithRegularAction) {
  std::mt19937_64 rng(9);
  const auto d4 = GroupSpec::dihedral(4);
  const FeatureMap f = random_feature(RepSpec::regular(d4), 2, 5, 5, rng);
  for (const auto& g : enumerate(d4)) {
    EXPECT_EQ(relu_channelwise(act_on_feature(g, f, kBilinear)), act_on_feature(g, relu_channelwise(f), kBilinear));
  }
}

TEST(GroupPool, Examples) {
  const auto c4 = GroupSpec::cyclic(4);
  const FeatureMap f(RepSpec::regular(c4), 1, 1, 1, {3, 1, 4, 1});
  EXPECT_EQ(group_pool(f)(0, 0, 0), 4.0);
  EXPECT_EQ(group_pool(f).rep().kind(), RepKind::Trivial);
  const FeatureMap two(RepSpec::regular(c4), 2, 1, 1, {3, 1, 4, 1, -5, -9, -2, -6});
  const FeatureMap pooled = group_pool(two);
  ASSERT_EQ(pooled.channels(), 2);
  EXPECT_EQ(pooled(0, 0, 0), 4.0);
  EXPECT_EQ(pooled(1, 0, 0), -2.0);
  EXPECT_THROW(group_pool(FeatureMap(RepSpec::trivial(c4), 1, 1, 1)), std::invalid_argument);
}

TEST(GroupPool, InvariantUnderChannelPermutation) {
  std::mt19937_64 rng(10);
  const auto d4 = GroupSpec::dihedral(4);
  const FeatureMap f = random_feature(RepSpec::regular(d4), 2, 7, 7, rng);
  for (const auto& g : enumerate(d4)) {
    EXPECT_LE(max_abs_diff(group_pool(act_on_feature(g, f, kBilinear)),
                           transform_spatial(g, group_pool(f), kBilinear)),
              1e-12);
  }
}

TEST(PoolSpatial, Examples) {
  std::mt19937_64 rng(11);
  const auto c4 = GroupSpec::cyclic(4);
  const FeatureMap f = random_feature(RepSpec::regular(c4), 1, 6, 5, rng);
  EXPECT_EQ(pool_spatial(f, 1, 1), f);
  const FeatureMap small = trivial_map(c4, 2, 2, {1, 2, 3, 4});
  const FeatureMap pooled = pool_spatial(small, 2, 2);
  ASSERT_EQ(pooled.height(), 1);
  ASSERT_EQ(pooled.width(), 1);
  EXPECT_EQ(pooled(0, 0, 0), 4.0);
  EXPECT_THROW(pool_spatial(f, 0, 1), std::invalid_argument);
}

TEST(PoolSpatial, PaddedThreeByTwo) {
  const auto c1 = GroupSpec::cyclic(1);
  std::vector<double> v(25);
  for (int i = 0; i < 25; ++i) v[static_cast<std::size_t>(i)] = -i;
  const FeatureMap out = pool_spatial(trivial_map(c1, 5, 5, v), 3, 2);
  ASSERT_EQ(out.height(), 3);
  ASSERT_EQ(out.width(), 3);
  // Windows hanging over the border see the zero padding.
  EXPECT_EQ(out(0, 0, 0), 0.0);
  EXPECT_EQ(out(0, 1, 1), -6.0);
  EXPECT_EQ(out(0, 2, 2), 0.0);
}

TEST(PoolSpatial, CommutesWithRegularAction) {
  std::mt19937_64 rng(12);
  const auto c4 = GroupSpec::cyclic(4);
  const FeatureMap f = random_feature(RepSpec::regular(c4), 1, 9, 9, rng);
  for (const auto& g : enumerate(c4)) {
    EXPECT_EQ(pool_spatial(act_on_feature(g, f, kBilinear), 3, 2),
              act_on_feature(g, pool_spatial(f, 3, 2), kBilinear));
  }
}

TEST(Crop, RemovesMargin) {
  const auto c1 = GroupSpec::cyclic(1);
  std::vector<double> v(25);
  for (int i = 0; i < 25; ++i) v[static_cast<std::size_t>(i)] = i;
  const FeatureMap out = crop(trivial_map(c1, 5, 5, v), 1);
  EXPECT_EQ(out, trivial_map(c1, 3, 3, {6, 7, 8, 11, 12, 13, 16, 17, 18}));
  EXPECT_THROW(crop(out, 2), std::invalid_argument);
  EXPECT_THROW(crop(out, -1), std::invalid_argument);
}

TEST(Features, ConvolutionCommutesWithExactActions) {
  std::mt19937_64 rng(13);
  for (const auto& group : {GroupSpec::cyclic(4), GroupSpec::dihedral(4)}) {
    for (int s : {3, 5}) {
      for (const auto& named : kernel_families(group, s, kBilinear, rng)) {
        const FeatureMap f = random_feature(named.kernel.rep_in(), 1, 15, 15, rng);
        const int m = s / 2;
        for (const auto& g : enumerate(group)) {
          const FeatureMap lhs = conv2d(named.kernel, act_on_feature(g, f, kBilinear));
          const FeatureMap rhs = act_on_feature(g, conv2d(named.kernel, f), kBilinear);
          EXPECT_LE(max_abs_diff(crop(lhs, m), crop(rhs, m)), 1e-10) << named.kind;
        }
      }
    }
  }
}

}  // namespace
}  // namespace filtra
