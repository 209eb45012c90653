// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "filtra/features.hpp"
#include "filtra/kernels.hpp"

namespace filtra {

inline constexpr double kKernelTolerance = 1e-12;
inline constexpr double kFeatureTolerance = 1e-10;
inline constexpr double kIdentityTolerance = 1e-12;

struct Residual {
  double abs = 0.0;
  double rel = 0.0;
};

/// abs / scale, with 0/0 → 0.
double relative(double abs, double scale);

/// Kernel constraint: compares κ(gx) against ρ_out(g)·κ(x)·ρ_in(g)^{-1}.
Residual check_kernel_equivariance(const SteerableKernel& kernel, const GroupElement& g);

/// Compares conv2d(κ, π_in(g)f) with π_out(g)·conv2d(κ, f) away from a
/// border of ⌊S/2⌋ pixels.
Residual check_feature_equivariance(const SteerableKernel& kernel, const FeatureMap& f,
                                    const GroupElement& g);

/// True when the action of g maps the pixel grid of an S×S filter (and of any
/// image) onto itself, so every resampling involved is a permutation: S = 1,
/// rotations by multiples of 90° (with or without reflection), and multiples
/// of 45° on a 3×3 grid with nearest sampling.
bool is_grid_exact(const GroupElement& g, int filter_size, InterpolationMode mode);

struct IdentityResult {
  std::string name;
  int n;
  double residual;
  bool passed;
};

/// Evaluates the equality chains behind the irrep→regular (C_N and D_N) and
/// regular→regular kernels as plain matrix identities.  Every rotated copy
/// κ^n, κ̄^n is an independent random 1×1 scalar, and the action on the
/// stacks is the permutation K(φ+θ_i) = P(i)K, K(−φ+θ_i) = B(i)K̄,
/// K̄(−φ+θ_i) = B(i)K.
std::vector<IdentityResult> verify_identity_chains(int n, std::uint64_t seed = 7);

/// Seeded uniform(−1, 1) filter.
FilterGrid random_filter(int size, std::mt19937_64& rng);
FeatureMap random_feature(const RepSpec& rep, int multiplicity, int height, int width,
                          std::mt19937_64& rng);

struct NamedKernel {
  std::string kind;
  SteerableKernel kernel;
};

/// One kernel per family for the group: triv→reg, irrep→reg for every
/// admissible (j, k) (plus the K̄ variant for C_N), reg→reg, ORN (C_N only)
/// and the reversal of each.
std::vector<NamedKernel> kernel_families(const GroupSpec& group, int filter_size,
                                         InterpolationMode mode, std::mt19937_64& rng);

struct ElementResidual {
  GroupElement element;
  Residual kernel;
  bool exact;
};

struct EquivarianceReport {
  std::string kernel_kind;
  GroupSpec group;
  int filter_size;
  InterpolationMode mode;
  std::vector<ElementResidual> per_element;
  double exact_subgroup_max = 0.0;
  double full_group_max = 0.0;
  /// Largest feature-level residual over exact elements (NaN when no feature
  /// check ran).
  double feature_exact_max = 0.0;

  bool passed() const;
};

struct SuiteConfig {
  std::vector<GroupSpec> groups;
  std::vector<int> sizes;
  std::vector<InterpolationMode> modes;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  int feature_size = 15;
  bool feature_checks = true;
};

/// Builds every kernel family for each (group, S, mode), checks the kernel constraint on all
/// elements and feature equivariance on one random input for the exact
/// elements.  Output order and values depend only on the config (not on the
/// thread count).
std::vector<EquivarianceReport> run_suite(const SuiteConfig& config);

/// Columns: kind,group,S,mode,i0,i1,abs_residual,rel_residual.
void write_report_csv(std::ostream& out, const std::vector<EquivarianceReport>& reports);

}  // namespace filtra
