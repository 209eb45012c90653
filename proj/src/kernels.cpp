// SPDX-License-Identifier: Apache-2.0
#include "filtra/kernels.hpp"

#include <stdexcept>

namespace filtra {

SteerableKernel::SteerableKernel(RepSpec rep_in, RepSpec rep_out, InterpolationMode mode,
                                 std::vector<FilterGrid> grids)
    : rep_in_(rep_in), rep_out_(rep_out), mode_(mode), grids_(std::move(grids)) {
  if (rep_in_.group() != rep_out_.group()) {
    throw std::invalid_argument("kernel representations belong to different groups: " +
                                rep_in_.group().name() + " vs " + rep_out_.group().name());
  }
  if (grids_.size() != static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols())) {
    throw std::invalid_argument("kernel needs " + std::to_string(rows() * cols()) +
                                " grids, got " + std::to_string(grids_.size()));
  }
  for (const auto& grid : grids_) {
    if (grid.size() != grids_.front().size()) {
      throw std::invalid_argument("all kernel grids must share one size");
    }
  }
}

std::vector<FilterGrid> mix_grids(const Matrix& left, std::span<const FilterGrid> grids, int rows,
                                  int cols, const Matrix& right) {
  if (left.cols() != rows || right.rows() != cols ||
      grids.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw std::invalid_argument("filter matrix product has inconsistent shapes");
  }
  const int size = grids.front().size();
  const auto out_cols = static_cast<int>(right.cols());
  const auto out_rows = static_cast<int>(left.rows());
  auto cell = [](auto& v, int r, int c, int width) -> auto& {
    return v[static_cast<std::size_t>(r) * static_cast<std::size_t>(width) +
             static_cast<std::size_t>(c)];
  };

  std::vector<FilterGrid> tmp(static_cast<std::size_t>(rows) * static_cast<std::size_t>(out_cols),
                              FilterGrid(size));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < out_cols; ++c) {
      for (int b = 0; b < cols; ++b) {
        const double w = right(b, c);
        if (w != 0.0) cell(tmp, r, c, out_cols).add_scaled(grids[static_cast<std::size_t>(r * cols + b)], w);
      }
    }
  }
  std::vector<FilterGrid> out(
      static_cast<std::size_t>(out_rows) * static_cast<std::size_t>(out_cols), FilterGrid(size));
  for (int r = 0; r < out_rows; ++r) {
    for (int a = 0; a < rows; ++a) {
      const double w = left(r, a);
      if (w == 0.0) continue;
      for (int c = 0; c < out_cols; ++c) cell(out, r, c, out_cols).add_scaled(cell(tmp, a, c, out_cols), w);
    }
  }
  return out;
}

SteerableKernel kernel_triv_to_reg_cn(const FilterGrid& base, int n, InterpolationMode mode) {
  const GroupSpec group = GroupSpec::cyclic(n);
  return SteerableKernel(RepSpec::trivial(group), RepSpec::regular(group), mode,
                         build_stack_K(base, n, mode).entries);
}

SteerableKernel kernel_triv_to_reg_dn(const FilterGrid& base, int n, InterpolationMode mode) {
  const GroupSpec group = GroupSpec::dihedral(n);
  std::vector<FilterGrid> grids = build_stack_K(base, n, mode).entries;
  for (auto& entry : build_stack_Kbar(base, n, mode).entries) grids.push_back(std::move(entry));
  return SteerableKernel(RepSpec::trivial(group), RepSpec::regular(group), mode, std::move(grids));
}

namespace {

// diag(stack)·β_k as an N×d(k) filter matrix.
std::vector<FilterGrid> weight_by_beta(const FilterStack& stack, int n, int k, double sign) {
  const Matrix b = beta(n, k);
  std::vector<FilterGrid> grids;
  grids.reserve(static_cast<std::size_t>(b.size()));
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < b.cols(); ++col) {
      grids.push_back((sign * b(row, col)) * stack.entries[static_cast<std::size_t>(row)]);
    }
  }
  return grids;
}

void require_base_count(std::span<const FilterGrid> bases, std::size_t expected) {
  if (bases.size() != expected) {
    throw std::invalid_argument("regular kernel needs " + std::to_string(expected) +
                                " base filters, got " + std::to_string(bases.size()));
  }
}

// Horizontally concatenates filter matrices with a shared row count.
std::vector<FilterGrid> hconcat(const std::vector<SteerableKernel>& parts, int rows) {
  int total = 0;
  for (const auto& part : parts) total += part.cols();
  std::vector<FilterGrid> out;
  out.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(total));
  for (int r = 0; r < rows; ++r) {
    for (const auto& part : parts) {
      for (int c = 0; c < part.cols(); ++c) out.push_back(part.at(r, c));
    }
  }
  return out;
}

}  // namespace

SteerableKernel kernel_irrep_to_reg_cn(const FilterGrid& base, int n, int k,
                                       InterpolationMode mode, bool conjugate) {
  const GroupSpec group = GroupSpec::cyclic(n);
  const RepSpec rep_in = RepSpec::irrep(group, 0, k);
  const FilterStack stack =
      conjugate ? build_stack_Kbar(base, n, mode) : build_stack_K(base, n, mode);
  return SteerableKernel(rep_in, RepSpec::regular(group), mode, weight_by_beta(stack, n, k, 1.0));
}

SteerableKernel kernel_irrep_to_reg_dn(const FilterGrid& base, int n, int j, int k,
                                       InterpolationMode mode) {
  const GroupSpec group = GroupSpec::dihedral(n);
  const RepSpec rep_in = RepSpec::irrep(group, j, k);
  std::vector<FilterGrid> grids = weight_by_beta(build_stack_K(base, n, mode), n, k, 1.0);
  for (auto& grid : weight_by_beta(build_stack_Kbar(base, n, mode), n, k, j == 0 ? 1.0 : -1.0)) {
    grids.push_back(std::move(grid));
  }
  return SteerableKernel(rep_in, RepSpec::regular(group), mode, std::move(grids));
}

SteerableKernel kernel_reg_to_reg_cn(std::span<const FilterGrid> bases, int n,
                                     InterpolationMode mode) {
  if (n < 1) throw std::invalid_argument("rotation order must be >= 1");
  require_base_count(bases, static_cast<std::size_t>(n / 2 + 1));
  std::vector<SteerableKernel> parts;
  for (int k = 0; k <= n / 2; ++k) {
    parts.push_back(kernel_irrep_to_reg_cn(bases[static_cast<std::size_t>(k)], n, k, mode));
  }
  const DctBasis v = dct_basis_V(n);
  const GroupSpec group = GroupSpec::cyclic(n);
  return SteerableKernel(RepSpec::regular(group), RepSpec::regular(group), mode,
                         mix_grids(Matrix::Identity(n, n), hconcat(parts, n), n, n, v.inverse()));
}

SteerableKernel kernel_reg_to_reg_dn(std::span<const FilterGrid> bases, int n,
                                     InterpolationMode mode) {
  if (n < 1) throw std::invalid_argument("rotation order must be >= 1");
  require_base_count(bases, static_cast<std::size_t>(2 * (n / 2 + 1)));
  const DctBasis w = basis_W(n);
  std::vector<SteerableKernel> parts;
  for (std::size_t b = 0; b < w.blocks.size(); ++b) {
    parts.push_back(kernel_irrep_to_reg_dn(bases[b], n, w.blocks[b].j, w.blocks[b].k, mode));
  }
  const GroupSpec group = GroupSpec::dihedral(n);
  return SteerableKernel(
      RepSpec::regular(group), RepSpec::regular(group), mode,
      mix_grids(Matrix::Identity(2 * n, 2 * n), hconcat(parts, 2 * n), 2 * n, 2 * n, w.inverse()));
}

SteerableKernel kernel_reverse(const SteerableKernel& kernel) {
  std::vector<FilterGrid> grids;
  grids.reserve(kernel.grids().size());
  for (int c = 0; c < kernel.cols(); ++c) {
    for (int r = 0; r < kernel.rows(); ++r) grids.push_back(kernel.at(r, c));
  }
  return SteerableKernel(kernel.rep_out(), kernel.rep_in(), kernel.mode(), std::move(grids));
}

SteerableKernel kernel_orn(const FilterGrid& base, int n, InterpolationMode mode) {
  const GroupSpec group = GroupSpec::cyclic(n);
  const FilterStack stack = build_stack_K(base, n, mode);
  std::vector<FilterGrid> grids;
  grids.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grids.push_back(stack.entries[static_cast<std::size_t>(wrap(2 * i - j, n))]);
  }
  return SteerableKernel(RepSpec::regular(group), RepSpec::regular(group), mode, std::move(grids));
}

std::string capacity_kind_name(CapacityKind kind) {
  return kind == CapacityKind::FiltraRegReg ? "filtra_reg2reg" : "orn_reg2reg";
}

CapacityReport capacity_report(int n, int s, CapacityKind kind) {
  if (n < 1 || s < 1) throw std::invalid_argument("capacity needs N >= 1 and S >= 1");
  const long long area = static_cast<long long>(s) * s;
  const long long stored = static_cast<long long>(n) * n * area;
  if (kind == CapacityKind::FiltraRegReg) {
    return {kind, (n / 2 + 1) * area, stored, static_cast<long long>(n) * (n / 2)};
  }
  return {kind, area, stored, n};
}

}  // namespace filtra
