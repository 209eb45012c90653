// SPDX-License-Identifier: Apache-2.0
#include "filtra/representations.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace filtra {

namespace {

void require_order(int n) {
  if (n < 1) throw std::invalid_argument("rotation order must be >= 1, got " + std::to_string(n));
}

void require_frequency(int n, int k) {
  if (k < 0 || k > n / 2) {
    throw std::invalid_argument("rotation frequency k=" + std::to_string(k) +
                                " outside [0, " + std::to_string(n / 2) + "]");
  }
}

Matrix rotation2(double c, double s) {
  Matrix r(2, 2);
  r << c, -s, s, c;
  return r;
}

}  // namespace

RepSpec::RepSpec(GroupSpec group, RepKind kind, int j, int k)
    : group_(group), kind_(kind), j_(j), k_(k) {
  if (kind != RepKind::Irrep) return;
  if (j != 0 && j != 1) throw std::invalid_argument("reflection frequency j must be 0 or 1");
  if (j == 1 && !group.is_dihedral()) {
    throw std::invalid_argument("irrep j=1 requires a dihedral group, got " + group.name());
  }
  require_frequency(group.rotation_order(), k);
}

RepSpec RepSpec::parse(GroupSpec group, const std::string& text) {
  if (text == "trivial") return trivial(group);
  if (text == "regular") return regular(group);
  if (text.rfind("irrep:", 0) == 0) {
    const auto sep = text.find(':', 6);
    if (sep == std::string::npos) throw std::invalid_argument("expected irrep:J:K, got " + text);
    return irrep(group, std::stoi(text.substr(6, sep - 6)), std::stoi(text.substr(sep + 1)));
  }
  throw std::invalid_argument("unknown representation '" + text + "'");
}

int RepSpec::dim() const {
  switch (kind_) {
    case RepKind::Trivial: return 1;
    case RepKind::Irrep: return irrep_dim(group_.rotation_order(), k_);
    case RepKind::Regular: return group_.order();
  }
  return 0;
}

std::string RepSpec::name() const {
  switch (kind_) {
    case RepKind::Trivial: return "trivial";
    case RepKind::Regular: return "regular";
    case RepKind::Irrep: return "irrep:" + std::to_string(j_) + ":" + std::to_string(k_);
  }
  return {};
}

int irrep_dim(int n, int k) {
  return (k == 0 || (n % 2 == 0 && 2 * k == n)) ? 1 : 2;
}

Matrix perm_P(int n, int i1) {
  require_order(n);
  Matrix p = Matrix::Zero(n, n);
  for (int c = 0; c < n; ++c) p(wrap(c + static_cast<long long>(i1), n), c) = 1.0;
  return p;
}

Matrix flip_B(int n, int i1) {
  require_order(n);
  Matrix b = Matrix::Zero(n, n);
  for (int c = 0; c < n; ++c) b(wrap(static_cast<long long>(i1) - c, n), c) = 1.0;
  return b;
}

Matrix rho_trivial(const GroupElement&) { return Matrix::Ones(1, 1); }

Matrix rho_regular(const GroupElement& g) {
  const int n = g.spec().rotation_order();
  if (!g.spec().is_dihedral()) return perm_P(n, g.i1());
  Matrix r = Matrix::Zero(2 * n, 2 * n);
  if (g.i0() == 0) {
    const Matrix p = perm_P(n, g.i1());
    r.topLeftCorner(n, n) = p;
    r.bottomRightCorner(n, n) = p;
  } else {
    const Matrix b = flip_B(n, g.i1());
    r.topRightCorner(n, n) = b;
    r.bottomLeftCorner(n, n) = b;
  }
  return r;
}

Matrix irrep(const GroupSpec& spec, int j, int k, const GroupElement& g) {
  if (g.spec() != spec) {
    throw std::invalid_argument("element of " + g.spec().name() + " used with irrep of " +
                                spec.name());
  }
  // Validates j and k.
  const RepSpec rep = RepSpec::irrep(spec, j, k);
  const int n = spec.rotation_order();
  const double reflect_sign = (j == 1 && g.i0() == 1) ? -1.0 : 1.0;
  if (rep.dim() == 1) {
    const double rotation_sign = (k != 0 && g.i1() % 2 == 1) ? -1.0 : 1.0;
    return Matrix::Constant(1, 1, rotation_sign * reflect_sign);
  }
  const auto [c, s] = turn_cos_sin(static_cast<long long>(k) * g.i1(), n);
  Matrix flip = Matrix::Identity(2, 2);
  if (g.i0() == 1) flip(1, 1) = -1.0;
  return rotation2(c, s) * flip * reflect_sign;
}

Matrix rep_matrix(const RepSpec& rep, const GroupElement& g) {
  switch (rep.kind()) {
    case RepKind::Trivial: return rho_trivial(g);
    case RepKind::Regular: return rho_regular(g);
    case RepKind::Irrep: return irrep(rep.group(), rep.j(), rep.k(), g);
  }
  return {};
}

Matrix beta(int n, int k) {
  require_order(n);
  require_frequency(n, k);
  const int d = irrep_dim(n, k);
  Matrix b(n, d);
  for (int row = 0; row < n; ++row) {
    const auto [c, s] = turn_cos_sin(static_cast<long long>(k) * row, n);
    b(row, 0) = c;
    if (d == 2) b(row, 1) = s;
  }
  return b;
}

Matrix DctBasis::inverse() const {
  const Eigen::VectorXd gram = matrix.colwise().squaredNorm().transpose();
  return gram.cwiseInverse().asDiagonal() * matrix.transpose();
}

DctBasis dct_basis_V(int n) {
  require_order(n);
  DctBasis v{Matrix(n, n), {}};
  int column = 0;
  for (int k = 0; k <= n / 2; ++k) {
    const Matrix b = beta(n, k);
    v.matrix.middleCols(column, b.cols()) = b;
    v.blocks.push_back({0, k, column, static_cast<int>(b.cols())});
    column += static_cast<int>(b.cols());
  }
  return v;
}

DctBasis basis_W(int n) {
  const DctBasis v = dct_basis_V(n);
  DctBasis w{Matrix(2 * n, 2 * n), {}};
  w.matrix << v.matrix, v.matrix, v.matrix, -v.matrix;
  for (const auto& block : v.blocks) w.blocks.push_back(block);
  for (const auto& block : v.blocks) {
    w.blocks.push_back({1, block.k, block.first_column + n, block.columns});
  }
  return w;
}

DctBasis regular_basis(const GroupSpec& spec) {
  return spec.is_dihedral() ? basis_W(spec.rotation_order()) : dct_basis_V(spec.rotation_order());
}

Matrix irrep_direct_sum(const DctBasis& basis, const GroupElement& g) {
  const auto size = basis.matrix.cols();
  Matrix d = Matrix::Zero(size, size);
  for (const auto& block : basis.blocks) {
    d.block(block.first_column, block.first_column, block.columns, block.columns) =
        irrep(g.spec(), block.j, block.k, g);
  }
  return d;
}

RegularDecomposition decompose_regular(const GroupElement& g) {
  DctBasis basis = regular_basis(g.spec());
  Matrix d = irrep_direct_sum(basis, g);
  return {std::move(basis), std::move(d)};
}

double beta_rotation_check(int n, int k, const GroupElement& g) {
  if (g.spec().rotation_order() != n) {
    throw std::invalid_argument("element of " + g.spec().name() + " used with N=" +
                                std::to_string(n));
  }
  // ψ_{1,k} is defined on D_N; restricted to rotations it coincides with ψ_{0,k}.
  const GroupSpec dn = GroupSpec::dihedral(n);
  const GroupElement h(dn, g.i0(), g.i1());
  const Matrix bt = beta(n, k).transpose();
  if (g.i0() == 0) {
    const Matrix p = perm_P(n, g.i1());
    return std::max((irrep(dn, 0, k, h) * bt - bt * p).cwiseAbs().maxCoeff(),
                    (irrep(dn, 1, k, h) * bt - bt * p).cwiseAbs().maxCoeff());
  }
  const Matrix b = flip_B(n, g.i1());
  return std::max((irrep(dn, 0, k, h) * bt - bt * b).cwiseAbs().maxCoeff(),
                  (irrep(dn, 1, k, h) * bt + bt * b).cwiseAbs().maxCoeff());
}

Matrix regular_rep_continuous(int n, double t) {
  const DctBasis v = dct_basis_V(n);
  const double alpha = 2.0 * std::numbers::pi * t / n;
  Matrix d = Matrix::Zero(n, n);
  for (const auto& block : v.blocks) {
    const double a = block.k * alpha;
    if (block.columns == 1) {
      d(block.first_column, block.first_column) = std::cos(a);
    } else {
      d.block(block.first_column, block.first_column, 2, 2) = rotation2(std::cos(a), std::sin(a));
    }
  }
  return v.matrix * d * v.inverse();
}

}  // namespace filtra
