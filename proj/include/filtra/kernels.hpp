// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "filtra/filter.hpp"
#include "filtra/representations.hpp"

namespace filtra {

/// Filter-valued matrix κ: dim(rep_out) rows × dim(rep_in) columns of
/// FilterGrids sharing one size.  Satisfies κ(gx) = ρ_out(g)·κ(x)·ρ_in(g)^{-1}
/// when built by one of the constructors below.
class SteerableKernel {
 public:
  SteerableKernel(RepSpec rep_in, RepSpec rep_out, InterpolationMode mode,
                  std::vector<FilterGrid> grids);

  const GroupSpec& group() const { return rep_in_.group(); }
  const RepSpec& rep_in() const { return rep_in_; }
  const RepSpec& rep_out() const { return rep_out_; }
  InterpolationMode mode() const { return mode_; }

  int rows() const { return rep_out_.dim(); }
  int cols() const { return rep_in_.dim(); }
  int filter_size() const { return grids_.front().size(); }

  const FilterGrid& at(int row, int col) const {
    return grids_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols()) +
                  static_cast<std::size_t>(col)];
  }
  const std::vector<FilterGrid>& grids() const { return grids_; }

  friend bool operator==(const SteerableKernel&, const SteerableKernel&) = default;

 private:
  RepSpec rep_in_;
  RepSpec rep_out_;
  InterpolationMode mode_;
  std::vector<FilterGrid> grids_;
};

/// left · grids · right, with grids a rows×cols filter-valued matrix stored
/// row-major.  Entries are combined as vectors; zero coefficients are skipped.
std::vector<FilterGrid> mix_grids(const Matrix& left, std::span<const FilterGrid> grids, int rows,
                                  int cols, const Matrix& right);

/// K^{C_N}_{0→reg} = K.
SteerableKernel kernel_triv_to_reg_cn(const FilterGrid& base, int n, InterpolationMode mode);

/// K^{D_N}_{0→reg} = [K; K̄].
SteerableKernel kernel_triv_to_reg_dn(const FilterGrid& base, int n, InterpolationMode mode);

/// diag(K)·β_k, or diag(K̄)·β_k when `conjugate` is set.
SteerableKernel kernel_irrep_to_reg_cn(const FilterGrid& base, int n, int k,
                                       InterpolationMode mode, bool conjugate = false);

/// [diag(K)·β_k; (−1)^j·diag(K̄)·β_k].
SteerableKernel kernel_irrep_to_reg_dn(const FilterGrid& base, int n, int j, int k,
                                       InterpolationMode mode);

/// [K_{0→reg} … K_{⌊N/2⌋→reg}]·V^{-1}; one base filter per frequency k.
SteerableKernel kernel_reg_to_reg_cn(std::span<const FilterGrid> bases, int n,
                                     InterpolationMode mode);

/// [K_{0,0→reg} … K_{0,⌊N/2⌋→reg} K_{1,0→reg} … K_{1,⌊N/2⌋→reg}]·W^{-1};
/// bases ordered like the column blocks of W.
SteerableKernel kernel_reg_to_reg_dn(std::span<const FilterGrid> bases, int n,
                                     InterpolationMode mode);

/// Transposes the filter matrix and swaps rep_in / rep_out.
SteerableKernel kernel_reverse(const SteerableKernel& kernel);

/// Rotating-filter (ORN style) regular→regular kernel from one base filter.
///
/// Output orientation i applies the circulant row of K turned by θ_i, so
/// entry (i, j) is κ^{(i−j)} rotated by θ_i = κ^{(2i−j) mod N}.  The plain
/// circulant(K) commutes with every P(g) and therefore cannot track the
/// rotation of its entries.
SteerableKernel kernel_orn(const FilterGrid& base, int n, InterpolationMode mode);

enum class CapacityKind { FiltraRegReg, OrnRegReg };

struct CapacityReport {
  CapacityKind kind;
  long long independent_weights;
  long long stored_filter_scalars;
  /// Column/block bookkeeping used when comparing the two designs: N·⌊N/2⌋
  /// for the FILTRA kernel, N for ORN.
  long long column_block_count;
};

std::string capacity_kind_name(CapacityKind kind);

/// Counts for a C_N regular→regular kernel with S×S filters.
CapacityReport capacity_report(int n, int s, CapacityKind kind);

}  // namespace filtra
