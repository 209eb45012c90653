// SPDX-License-Identifier: Apache-2.0
#include "filtra/harness.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace filtra {

double relative(double abs, double scale) {
  if (abs == 0.0) return 0.0;
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  return abs / scale;
}

Residual check_kernel_equivariance(const SteerableKernel& kernel, const GroupElement& g) {
  if (g.spec() != kernel.group()) {
    throw std::invalid_argument("element of " + g.spec().name() + " checked against a " +
                                kernel.group().name() + " kernel");
  }
  const Matrix out = rep_matrix(kernel.rep_out(), g);
  const Matrix in_inverse = rep_matrix(kernel.rep_in(), g).transpose();
  const auto rhs = mix_grids(out, kernel.grids(), kernel.rows(), kernel.cols(), in_inverse);
  double abs = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const FilterGrid lhs = transform_filter(kernel.grids()[i], g, kernel.mode());
    abs = std::max(abs, max_abs_diff(lhs, rhs[i]));
    scale = std::max(scale, rhs[i].max_abs());
  }
  return {abs, relative(abs, scale)};
}

Residual check_feature_equivariance(const SteerableKernel& kernel, const FeatureMap& f,
                                    const GroupElement& g) {
  const InterpolationMode mode = kernel.mode();
  const FeatureMap lhs = conv2d(kernel, act_on_feature(g, f, mode));
  const FeatureMap rhs = act_on_feature(g, conv2d(kernel, f), mode);
  const int margin = kernel.filter_size() / 2;
  const FeatureMap a = crop(lhs, margin);
  const FeatureMap b = crop(rhs, margin);
  double abs = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    abs = std::max(abs, std::abs(a.data()[i] - b.data()[i]));
    scale = std::max(scale, std::abs(b.data()[i]));
  }
  return {abs, relative(abs, scale)};
}

namespace {

bool is_quarter_turn(const GroupElement& g) {
  return (4 * g.i1()) % g.spec().rotation_order() == 0;
}

}  // namespace

bool is_grid_exact(const GroupElement& g, int filter_size, InterpolationMode mode) {
  if (filter_size == 1 || is_quarter_turn(g)) return true;
  return mode == InterpolationMode::Nearest && filter_size == 3 &&
         (8 * g.i1()) % g.spec().rotation_order() == 0;
}

FilterGrid random_filter(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  for (double& v : values) v = uniform(rng);
  return FilterGrid(size, std::move(values));
}

FeatureMap random_feature(const RepSpec& rep, int multiplicity, int height, int width,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(multiplicity) *
                             static_cast<std::size_t>(rep.dim()) *
                             static_cast<std::size_t>(height) * static_cast<std::size_t>(width));
  for (double& v : values) v = uniform(rng);
  return FeatureMap(rep, multiplicity, height, width, std::move(values));
}

// ---------------------------------------------------------------------------
// Identity chains on scalar placeholders.

namespace {

using Vector = Eigen::VectorXd;

struct ActedStacks {
  Vector k;      // K evaluated at g·φ
  Vector k_bar;  // K̄ evaluated at g·φ
};

// Rewrites κ^n(g·φ) and κ̄^n(g·φ) as entries of K or K̄ by tracking how the
// angular argument moves, without using P or B.
ActedStacks act_on_stacks(const GroupElement& g, const Vector& k, const Vector& k_bar) {
  const int n = g.spec().rotation_order();
  const double step = 2.0 * std::numbers::pi / n;
  auto to_index = [&](double angle) { return wrap(std::llround(angle / step), n); };
  const double phi0 = 0.3, phi1 = 0.7;
  ActedStacks out{Vector(n), Vector(n)};
  for (int idx = 0; idx < n; ++idx) {
    const double theta = step * idx;
    // κ^idx(gφ) = κ(gφ − θ_idx) and κ̄^idx(gφ) = κ(θ_idx − gφ).
    const double a0 = angle_action(g, phi0), a1 = angle_action(g, phi1);
    const double slope = ((a1 - theta) - (a0 - theta)) / (phi1 - phi0);
    if (slope > 0) {
      // κ(φ + c) with c = gφ0 − θ − φ0 = −θ_m  →  κ^m, and κ(−φ − c) → κ̄^m.
      const int m = to_index(-(a0 - theta - phi0));
      out.k(idx) = k(m);
      out.k_bar(idx) = k_bar(m);
    } else {
      // κ(−φ + c) with c = θ_m  →  κ̄^m, and κ(φ − c) → κ^m.
      const int m = to_index(a0 - theta + phi0);
      out.k(idx) = k_bar(m);
      out.k_bar(idx) = k(m);
    }
  }
  return out;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Vector random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng);
  return v;
}

class ResidualTable {
 public:
  void record(const std::string& name, double value) {
    for (auto& [key, best] : entries_) {
      if (key == name) {
        best = std::max(best, value);
        return;
      }
    }
    entries_.emplace_back(name, value);
  }
  std::vector<IdentityResult> results(int n) const {
    std::vector<IdentityResult> out;
    for (const auto& [name, value] : entries_) {
      out.push_back({name, n, value, value <= kIdentityTolerance});
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

// [diag(K_0)β_0 … diag(K_⌊N/2⌋)β_⌊N/2⌋] for per-frequency stacks.
Matrix concat_irrep_columns(const std::vector<Vector>& stacks, int n) {
  Matrix out(n, n);
  int col = 0;
  for (int k = 0; k <= n / 2; ++k) {
    const Matrix block = stacks[static_cast<std::size_t>(k)].asDiagonal() * beta(n, k);
    out.middleCols(col, block.cols()) = block;
    col += static_cast<int>(block.cols());
  }
  return out;
}

}  // namespace

std::vector<IdentityResult> verify_identity_chains(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("rotation order must be >= 1");
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)));
  const GroupSpec cn = GroupSpec::cyclic(n);
  const GroupSpec dn = GroupSpec::dihedral(n);
  ResidualTable table;

  const Vector k_vec = random_vector(n, rng);
  const Vector k_bar = random_vector(n, rng);

  // The filter-transform action on K, K̄ is a permutation by P or B.
  for (const auto& g : enumerate(dn)) {
    const ActedStacks acted = act_on_stacks(g, k_vec, k_bar);
    if (g.i0() == 0) {
      const Matrix p = perm_P(n, g.i1());
      table.record("trivial_rotation", std::max(max_abs(acted.k - p * k_vec),
                                                max_abs(acted.k_bar - p * k_bar)));
    } else {
      const Matrix b = flip_B(n, g.i1());
      table.record("trivial_exchange", std::max(max_abs(acted.k - b * k_bar),
                                                max_abs(acted.k_bar - b * k_vec)));
    }
  }

  for (int k = 0; k <= n / 2; ++k) {
    const Matrix bk = beta(n, k);

    // diag(P K)β_k = P diag(K) P^{-1} β_k = ρ_reg(g)·diag(K)β_k·ψ_{0,k}(g)^{-1}, for K and K̄.
    for (const auto& g : enumerate(cn)) {
      const GroupElement gd(dn, 0, g.i1());
      const Matrix p = perm_P(n, g.i1());
      const Matrix psi_inv = irrep(cn, 0, k, g).transpose();
      for (const auto* stack : {&k_vec, &k_bar}) {
        const ActedStacks acted = act_on_stacks(gd, k_vec, k_bar);
        const Vector& moved = stack == &k_vec ? acted.k : acted.k_bar;
        const Matrix lhs = moved.asDiagonal() * bk;
        const Matrix mid = p * stack->asDiagonal() * p.transpose() * bk;
        const Matrix rhs = rho_regular(g) * (stack->asDiagonal() * bk) * psi_inv;
        table.record(stack == &k_vec ? "cn_irrep_rotation" : "cn_irrep_conj_rotation",
                     std::max(max_abs(lhs - mid), max_abs(mid - rhs)));
      }
    }

    // Reflected exchange: K(−φ+θ_i)-side built from K̄ and vice versa, each in its
    // ψ_{0,k} and ψ_{1,k} forms.
    for (int i1 = 0; i1 < n; ++i1) {
      const GroupElement g(dn, 1, i1);
      const Matrix b = flip_B(n, i1);
      const Matrix psi0_inv = irrep(dn, 0, k, g).transpose();
      const Matrix psi1_inv = irrep(dn, 1, k, g).transpose();
      const ActedStacks acted = act_on_stacks(g, k_vec, k_bar);
      const std::pair<const Vector*, const Vector*> chains[] = {{&acted.k, &k_bar},
                                                                {&acted.k_bar, &k_vec}};
      for (const auto& [moved, source] : chains) {
        const Matrix lhs = moved->asDiagonal() * bk;
        const Matrix step1 = b * source->asDiagonal() * b.transpose() * bk;
        const Matrix step2 = b * source->asDiagonal() * bk * psi0_inv;
        const Matrix step3 = -b * source->asDiagonal() * bk * psi1_inv;
        const double r = std::max({max_abs(lhs - step1), max_abs(step1 - step2),
                                   max_abs(step2 - step3)});
        table.record(moved == &acted.k ? "irrep_exchange" : "irrep_exchange_conj", r);
      }
    }

    // D_N irrep→regular kernel: acted kernel = ρ_reg(g)·K^{D_N}_{j,k}·ψ_{j,k}(g)^{-1}.
    for (int j = 0; j <= 1; ++j) {
      const double sign = j == 0 ? 1.0 : -1.0;
      Matrix kernel(2 * n, bk.cols());
      kernel << k_vec.asDiagonal() * bk, sign * (k_bar.asDiagonal() * bk);
      for (const auto& g : enumerate(dn)) {
        const ActedStacks acted = act_on_stacks(g, k_vec, k_bar);
        Matrix lhs(2 * n, bk.cols());
        lhs << acted.k.asDiagonal() * bk, sign * (acted.k_bar.asDiagonal() * bk);
        const Matrix rhs = rho_regular(g) * kernel * irrep(dn, j, k, g).transpose();
        table.record("dn_irrep_constraint", max_abs(lhs - rhs));
      }
    }
  }

  // C_N regular→regular chain with one independent stack per frequency.
  {
    std::vector<Vector> stacks, stacks_bar;
    for (int k = 0; k <= n / 2; ++k) {
      stacks.push_back(random_vector(n, rng));
      stacks_bar.push_back(random_vector(n, rng));
    }
    const DctBasis v = dct_basis_V(n);
    const Matrix v_inv = v.inverse();
    const Matrix concat = concat_irrep_columns(stacks, n);
    const Matrix kernel = concat * v_inv;
    for (const auto& g : enumerate(cn)) {
      const GroupElement gd(dn, 0, g.i1());
      std::vector<Vector> moved;
      for (int k = 0; k <= n / 2; ++k) {
        moved.push_back(act_on_stacks(gd, stacks[static_cast<std::size_t>(k)],
                                      stacks_bar[static_cast<std::size_t>(k)])
                            .k);
      }
      const Matrix rho = rho_regular(g);
      const Matrix d_inv = irrep_direct_sum(v, g).transpose();
      const Matrix step0 = concat_irrep_columns(moved, n) * v_inv;
      const Matrix step1 = rho * concat * d_inv * v_inv;
      const Matrix step2 = rho * concat * v_inv * v.matrix * d_inv * v_inv;
      const Matrix step3 = rho * kernel * rho.transpose();
      table.record("cn_reg_constraint", std::max({max_abs(step0 - step1), max_abs(step1 - step2),
                                              max_abs(step2 - step3)}));
    }

    // D_N: [K^{D_N}_{0,0} … K^{D_N}_{1,⌊N/2⌋}]·W^{-1}.
    const DctBasis w = basis_W(n);
    const Matrix w_inv = w.inverse();
    auto dn_concat = [&](const std::vector<Vector>& ks, const std::vector<Vector>& kbs) {
      Matrix out(2 * n, 2 * n);
      for (const auto& block : w.blocks) {
        const Matrix bk = beta(n, block.k);
        const double sign = block.j == 0 ? 1.0 : -1.0;
        out.block(0, block.first_column, n, block.columns) =
            ks[static_cast<std::size_t>(block.k)].asDiagonal() * bk;
        out.block(n, block.first_column, n, block.columns) =
            sign * (kbs[static_cast<std::size_t>(block.k)].asDiagonal() * bk);
      }
      return out;
    };
    const Matrix dconcat = dn_concat(stacks, stacks_bar);
    const Matrix dkernel = dconcat * w_inv;
    for (const auto& g : enumerate(dn)) {
      std::vector<Vector> moved, moved_bar;
      for (int k = 0; k <= n / 2; ++k) {
        const ActedStacks acted = act_on_stacks(g, stacks[static_cast<std::size_t>(k)],
                                                stacks_bar[static_cast<std::size_t>(k)]);
        moved.push_back(acted.k);
        moved_bar.push_back(acted.k_bar);
      }
      const Matrix rho = rho_regular(g);
      const Matrix d_inv = irrep_direct_sum(w, g).transpose();
      const Matrix step0 = dn_concat(moved, moved_bar) * w_inv;
      const Matrix step1 = rho * dconcat * d_inv * w_inv;
      const Matrix step2 = rho * dkernel * rho.transpose();
      table.record("dn_reg_constraint", std::max(max_abs(step0 - step1), max_abs(step1 - step2)));
    }
  }

  return table.results(n);
}

// ---------------------------------------------------------------------------
// Suite.

std::vector<NamedKernel> kernel_families(const GroupSpec& group, int filter_size,
                                         InterpolationMode mode, std::mt19937_64& rng) {
  const int n = group.rotation_order();
  auto base = [&] { return random_filter(filter_size, rng); };
  std::vector<NamedKernel> forward;
  if (!group.is_dihedral()) {
    forward.push_back({"triv2reg", kernel_triv_to_reg_cn(base(), n, mode)});
    for (int k = 0; k <= n / 2; ++k) {
      forward.push_back({"irrep2reg_j0_k" + std::to_string(k),
                         kernel_irrep_to_reg_cn(base(), n, k, mode, false)});
      forward.push_back({"irrep2reg_k" + std::to_string(k) + "_conj",
                         kernel_irrep_to_reg_cn(base(), n, k, mode, true)});
    }
    std::vector<FilterGrid> bases;
    for (int k = 0; k <= n / 2; ++k) bases.push_back(base());
    forward.push_back({"reg2reg", kernel_reg_to_reg_cn(bases, n, mode)});
    forward.push_back({"orn", kernel_orn(base(), n, mode)});
  } else {
    forward.push_back({"triv2reg", kernel_triv_to_reg_dn(base(), n, mode)});
    for (int j = 0; j <= 1; ++j) {
      for (int k = 0; k <= n / 2; ++k) {
        forward.push_back({"irrep2reg_j" + std::to_string(j) + "_k" + std::to_string(k),
                           kernel_irrep_to_reg_dn(base(), n, j, k, mode)});
      }
    }
    std::vector<FilterGrid> bases;
    for (int b = 0; b < 2 * (n / 2 + 1); ++b) bases.push_back(base());
    forward.push_back({"reg2reg", kernel_reg_to_reg_dn(bases, n, mode)});
  }
  std::vector<NamedKernel> all = forward;
  for (const auto& named : forward) all.push_back({"rev_" + named.kind, kernel_reverse(named.kernel)});
  return all;
}

bool EquivarianceReport::passed() const {
  for (const auto& e : per_element) {
    if (e.exact && !(e.kernel.abs <= kKernelTolerance)) return false;
  }
  return std::isnan(feature_exact_max) || feature_exact_max <= kFeatureTolerance;
}

namespace {

struct SuiteTask {
  NamedKernel named;
  int filter_size;
  std::uint64_t feature_seed;
};

EquivarianceReport evaluate(const SuiteTask& task, const SuiteConfig& config) {
  const SteerableKernel& kernel = task.named.kernel;
  EquivarianceReport report{task.named.kind, kernel.group(), task.filter_size, kernel.mode(),
                            {}, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN()};
  for (const auto& g : enumerate(kernel.group())) {
    const Residual r = check_kernel_equivariance(kernel, g);
    const bool exact = is_grid_exact(g, task.filter_size, kernel.mode());
    report.per_element.push_back({g, r, exact});
    report.full_group_max = std::max(report.full_group_max, r.abs);
    if (exact) report.exact_subgroup_max = std::max(report.exact_subgroup_max, r.abs);
  }
  if (config.feature_checks && config.feature_size >= task.filter_size) {
    std::mt19937_64 rng(task.feature_seed);
    const FeatureMap f =
        random_feature(kernel.rep_in(), 1, config.feature_size, config.feature_size, rng);
    report.feature_exact_max = 0.0;
    for (const auto& g : enumerate(kernel.group())) {
      if (!is_quarter_turn(g)) continue;
      report.feature_exact_max =
          std::max(report.feature_exact_max, check_feature_equivariance(kernel, f, g).abs);
    }
  }
  return report;
}

}  // namespace

std::vector<EquivarianceReport> run_suite(const SuiteConfig& config) {
  std::vector<SuiteTask> tasks;
  for (const auto& group : config.groups) {
    for (int size : config.sizes) {
      for (auto mode : config.modes) {
        std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                          static_cast<std::uint32_t>(config.seed >> 32),
                          static_cast<std::uint32_t>(group.reflection_order()),
                          static_cast<std::uint32_t>(group.rotation_order()),
                          static_cast<std::uint32_t>(size), static_cast<std::uint32_t>(mode)};
        std::mt19937_64 rng(seq);
        for (auto& named : kernel_families(group, size, mode, rng)) {
          tasks.push_back({std::move(named), size, rng()});
        }
      }
    }
  }

  std::vector<std::optional<EquivarianceReport>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) slots[i] = evaluate(tasks[i], config);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads,
                                                           static_cast<unsigned>(tasks.size())));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  std::vector<EquivarianceReport> reports;
  reports.reserve(slots.size());
  for (auto& slot : slots) reports.push_back(std::move(*slot));
  return reports;
}

void write_report_csv(std::ostream& out, const std::vector<EquivarianceReport>& reports) {
  out << "kind,group,S,mode,i0,i1,abs_residual,rel_residual\n";
  const auto precision = out.precision(17);
  for (const auto& report : reports) {
    for (const auto& e : report.per_element) {
      out << report.kernel_kind << ',' << report.group.name() << ',' << report.filter_size << ','
          << mode_name(report.mode) << ',' << e.element.i0() << ',' << e.element.i1() << ','
          << e.kernel.abs << ',' << e.kernel.rel << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace filtra
