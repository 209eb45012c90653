// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "filtra/group.hpp"

namespace filtra {

using Matrix = Eigen::MatrixXd;

enum class RepKind { Trivial, Irrep, Regular };

/// Identifies a representation of a GroupSpec: trivial, irrep ψ_{j,k}, or
/// regular.  j and k are only meaningful for RepKind::Irrep.
class RepSpec {
 public:
  static RepSpec trivial(GroupSpec group) { return RepSpec(group, RepKind::Trivial, 0, 0); }
  static RepSpec regular(GroupSpec group) { return RepSpec(group, RepKind::Regular, 0, 0); }
  static RepSpec irrep(GroupSpec group, int j, int k) { return RepSpec(group, RepKind::Irrep, j, k); }

  /// Parses `trivial`, `regular` or `irrep:J:K`.
  static RepSpec parse(GroupSpec group, const std::string& text);

  RepKind kind() const { return kind_; }
  int j() const { return j_; }
  int k() const { return k_; }
  const GroupSpec& group() const { return group_; }
  int dim() const;
  std::string name() const;

  friend bool operator==(const RepSpec&, const RepSpec&) = default;

 private:
  RepSpec(GroupSpec group, RepKind kind, int j, int k);

  GroupSpec group_;
  RepKind kind_;
  int j_;
  int k_;
};

/// Dimension of ψ_{j,k}: 1 when k = 0 or k = N/2 (N even), otherwise 2.
int irrep_dim(int n, int k);

/// roll(I_N, i1, 0): maps basis vector e_c to e_{c+i1}.
Matrix perm_P(int n, int i1);

/// flipud(P(−i1−1)): maps basis vector e_c to e_{i1−c}.
Matrix flip_B(int n, int i1);

Matrix rho_trivial(const GroupElement& g);
Matrix rho_regular(const GroupElement& g);

/// ψ_{j,k}(g) = Ψ_k(i1)·F(i0).  The one-dimensional k = N/2 case uses
/// Ψ_{N/2}(i1) = (−1)^{i1}.
Matrix irrep(const GroupSpec& spec, int j, int k, const GroupElement& g);

/// Dispatches on rep.kind().
Matrix rep_matrix(const RepSpec& rep, const GroupElement& g);

/// N×1 for k = 0 and k = N/2, otherwise N×2 with rows [cos kθ_n, sin kθ_n].
Matrix beta(int n, int k);

/// Column block of a DCT basis carrying irrep (j, k).
struct BasisBlock {
  int j;
  int k;
  int first_column;
  int columns;
};

struct DctBasis {
  Matrix matrix;
  std::vector<BasisBlock> blocks;

  /// Σ^{-1}·matrixᵀ with Σ = matrixᵀ·matrix (diagonal: the columns are
  /// orthogonal but not normalised).
  Matrix inverse() const;
};

/// V = [β_0 β_1 … β_{⌊N/2⌋}].
DctBasis dct_basis_V(int n);

/// W = [[V, V], [V, −V]]; the j = 0 blocks come first.
DctBasis basis_W(int n);

/// V for C_N, W for D_N.
DctBasis regular_basis(const GroupSpec& spec);

struct RegularDecomposition {
  DctBasis basis;
  Matrix block_diagonal;
};

/// ρ_reg(g) = basis · D(g) · basis^{-1} with D(g) the direct sum of the
/// irreps in basis block order.
RegularDecomposition decompose_regular(const GroupElement& g);

/// Direct sum of irreps of g following the block layout of `basis`.
Matrix irrep_direct_sum(const DctBasis& basis, const GroupElement& g);

/// Max-abs residual of the β-rotation identities
///   ψ_{0,k}(0,i1)·β_kᵀ = β_kᵀ·P(i1)
///   ψ_{0,k}(1,i1)·β_kᵀ = β_kᵀ·B(i1),   ψ_{1,k}(1,i1)·β_kᵀ = −β_kᵀ·B(i1)
/// (both reflected forms are folded into one maximum).
double beta_rotation_check(int n, int k, const GroupElement& g);

/// V·D(t)·V^{-1} with every irrep evaluated at the continuous angle 2πt/N.
/// Agrees with ρ_reg((0, t mod N)) at integer t.
Matrix regular_rep_continuous(int n, double t);

}  // namespace filtra
