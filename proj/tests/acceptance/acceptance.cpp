// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: filtra_acceptance [output-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "filtra/harness.hpp"

namespace {

using namespace filtra;
namespace fs = std::filesystem;

struct Outcome {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // <= 0: no runtime bound
  std::function<Outcome()> body;
};

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<RepSpec> all_reps(const GroupSpec& spec) {
  std::vector<RepSpec> reps{RepSpec::trivial(spec), RepSpec::regular(spec)};
  for (int j = 0; j < spec.reflection_order(); ++j) {
    for (int k = 0; k <= spec.rotation_order() / 2; ++k) reps.push_back(RepSpec::irrep(spec, j, k));
  }
  return reps;
}

double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// Worst kernel-constraint residual over every element for every kernel family.
double worst_family_residual(const GroupSpec& group, int s, InterpolationMode mode, std::mt19937_64& rng,
                             std::size_t& kernels) {
  double worst = 0.0;
  for (const auto& named : kernel_families(group, s, mode, rng)) {
    ++kernels;
    for (const auto& g : enumerate(group)) {
      const double r = check_kernel_equivariance(named.kernel, g).abs;
      worst = std::isnan(r) ? INFINITY : std::max(worst, r);
    }
  }
  return worst;
}

Outcome representation_algebra() {
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    for (const auto& spec : {GroupSpec::cyclic(n), GroupSpec::dihedral(n)}) {
      const auto elements = enumerate(spec);
      for (const auto& rep : all_reps(spec)) {
        for (const auto& g : elements) {
          const Matrix m = rep_matrix(rep, g);
          worst = std::max(worst, max_abs(m * m.transpose() - Matrix::Identity(m.rows(), m.cols())));
          for (const auto& h : elements) {
            worst = std::max(worst, max_abs(rep_matrix(rep, compose(g, h)) - m * rep_matrix(rep, h)));
          }
        }
      }
      for (const auto& g : elements) {
        const auto dec = decompose_regular(g);
        worst = std::max(worst, max_abs(dec.basis.matrix * dec.block_diagonal * dec.basis.inverse() -
                                        rho_regular(g)));
      }
    }
  }
  return {worst <= 1e-10, "max residual " + sci(worst) + " (limit 1e-10)"};
}

Outcome beta_rotation() {
  double worst = 0.0;
  std::size_t cases = 0;
  for (int n = 1; n <= 12; ++n) {
    for (int k = 0; k <= n / 2; ++k) {
      for (const auto& g : enumerate(GroupSpec::dihedral(n))) {
        worst = std::max(worst, beta_rotation_check(n, k, g));
        ++cases;
      }
    }
  }
  return {worst <= 1e-12, std::to_string(cases) + " cases, max residual " + sci(worst) + " (limit 1e-12)"};
}

Outcome identity_chains() {
  double worst = 0.0;
  std::size_t chains = 0;
  bool ok = true;
  for (int n = 1; n <= 12; ++n) {
    for (const auto& r : verify_identity_chains(n)) {
      ok = ok && r.passed && r.residual <= 1e-12;
      worst = std::max(worst, r.residual);
      ++chains;
    }
  }
  ok = ok && chains == 12 * 9;
  return {ok, std::to_string(chains) + " chains, max residual " + sci(worst) + " (limit 1e-12)"};
}

Outcome exact_subgroup_kernels() {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  std::size_t kernels = 0;
  for (const auto& group : {GroupSpec::cyclic(4), GroupSpec::dihedral(4)}) {
    for (int s : {3, 5, 9}) worst = std::max(worst, worst_family_residual(group, s, InterpolationMode::Bilinear, rng, kernels));
  }
  for (const auto& group : {GroupSpec::cyclic(1), GroupSpec::cyclic(2), GroupSpec::dihedral(1), GroupSpec::dihedral(2)}) {
    for (int s : {1, 3, 5, 9}) {
      for (auto mode : {InterpolationMode::Bilinear, InterpolationMode::Nearest}) {
        worst = std::max(worst, worst_family_residual(group, s, mode, rng, kernels));
      }
    }
  }
  return {worst <= 1e-12, std::to_string(kernels) + " kernels, max residual " + sci(worst) + " (limit 1e-12)"};
}

Outcome eighth_turn_nearest() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  std::size_t kernels = 0;
  for (const auto& group : {GroupSpec::cyclic(8), GroupSpec::dihedral(8)}) {
    worst = std::max(worst, worst_family_residual(group, 3, InterpolationMode::Nearest, rng, kernels));
  }
  return {worst <= 1e-12, std::to_string(kernels) + " kernels, max residual " + sci(worst) + " (limit 1e-12)"};
}

// conv(triv→reg) → relu → conv(reg→reg) → pool(3, 2) → group_pool.
FeatureMap stack_forward(const SteerableKernel& first, const SteerableKernel& second, const FeatureMap& f) {
  return group_pool(pool_spatial(conv2d(second, relu_channelwise(conv2d(first, f))), 3, 2));
}

Outcome feature_equivariance() {
  constexpr auto mode = InterpolationMode::Bilinear;
  constexpr int size = 15;
  std::mt19937_64 rng(6);
  double single = 0.0, stacked = 0.0;
  for (const auto& group : {GroupSpec::cyclic(4), GroupSpec::dihedral(4)}) {
    for (int s : {3, 5}) {
      for (const auto& named : kernel_families(group, s, mode, rng)) {
        const FeatureMap f = random_feature(named.kernel.rep_in(), 1, size, size, rng);
        for (const auto& g : enumerate(group)) {
          if (!is_grid_exact(g, s, mode)) continue;
          single = std::max(single, check_feature_equivariance(named.kernel, f, g).abs);
        }
      }

      const int n = group.rotation_order();
      const auto first = group.is_dihedral() ? kernel_triv_to_reg_dn(random_filter(s, rng), n, mode)
                                             : kernel_triv_to_reg_cn(random_filter(s, rng), n, mode);
      std::vector<FilterGrid> bases;
      const int count = (group.is_dihedral() ? 2 : 1) * (n / 2 + 1);
      for (int b = 0; b < count; ++b) bases.push_back(random_filter(s, rng));
      const auto second = group.is_dihedral() ? kernel_reg_to_reg_dn(bases, n, mode)
                                              : kernel_reg_to_reg_cn(bases, n, mode);
      const FeatureMap f = random_feature(RepSpec::trivial(group), 1, size, size, rng);
      const FeatureMap base_out = stack_forward(first, second, f);
      // Two convolutions spoil 2·⌊S/2⌋ input pixels per side; a stride-2 window
      // centred on input 2o is clean once 2o − 1 clears that border.
      const int spoiled = 2 * (s / 2);
      const int margin = (spoiled + 2) / 2;
      for (const auto& g : enumerate(group)) {
        if (!is_grid_exact(g, s, mode)) continue;
        const FeatureMap lhs = stack_forward(first, second, act_on_feature(g, f, mode));
        const FeatureMap rhs = transform_spatial(g, base_out, mode);
        stacked = std::max(stacked, max_abs_diff(crop(lhs, margin), crop(rhs, margin)));
      }
    }
  }
  const double worst = std::max(single, stacked);
  return {worst <= 1e-10, "single layer " + sci(single) + ", 3-layer stack " + sci(stacked) + " (limit 1e-10)"};
}

Outcome scalar_filters() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  std::size_t kernels = 0;
  for (int n = 1; n <= 12; ++n) {
    for (const auto& group : {GroupSpec::cyclic(n), GroupSpec::dihedral(n)}) {
      worst = std::max(worst, worst_family_residual(group, 1, InterpolationMode::Bilinear, rng, kernels));
    }
  }
  return {worst <= 1e-12, std::to_string(kernels) + " kernels, max residual " + sci(worst) + " (limit 1e-12)"};
}

Outcome capacity() {
  const auto filtra = capacity_report(8, 5, CapacityKind::FiltraRegReg);
  const auto orn = capacity_report(8, 5, CapacityKind::OrnRegReg);
  const bool ok = filtra.independent_weights == 125 && orn.independent_weights == 25 &&
                  filtra.stored_filter_scalars == orn.stored_filter_scalars;
  return {ok, "N=8 S=5: " + std::to_string(filtra.independent_weights) + " vs " +
                  std::to_string(orn.independent_weights) + " independent weights, " +
                  std::to_string(filtra.stored_filter_scalars) + " stored each"};
}

Outcome interpolated_report(const fs::path& dir) {
  SuiteConfig config;
  config.groups = {GroupSpec::cyclic(8)};
  config.sizes = {9};
  config.modes = {InterpolationMode::Bilinear};
  config.feature_checks = false;
  const auto reports = run_suite(config);
  fs::create_directories(dir);
  const fs::path path = dir / "c8_s9_bilinear.csv";
  {
    std::ofstream out(path);
    write_report_csv(out, reports);
    if (!out) return {false, "could not write " + path.string()};
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  bool finite = line == "kind,group,S,mode,i0,i1,abs_residual,rel_residual";
  double worst = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    const auto last = line.rfind(',');
    const auto prev = line.rfind(',', last - 1);
    const double abs = std::stod(line.substr(prev + 1, last - prev - 1));
    const double rel = std::stod(line.substr(last + 1));
    finite = finite && std::isfinite(abs) && std::isfinite(rel);
    worst = std::max(worst, abs);
  }
  const bool ok = finite && rows == reports.size() * 8 && !reports.empty();
  return {ok, std::to_string(reports.size()) + " families, " + std::to_string(rows) +
                  " rows, largest interpolated residual " + sci(worst) + " -> " + path.string()};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  const std::vector<Criterion> criteria = {
      {1, "representation algebra, N=1..12", 5.0, representation_algebra},
      {2, "beta rotation identities, N<=12", 2.0, beta_rotation},
      {3, "identity chains on scalar filters, N=1..12", 5.0, identity_chains},
      {4, "kernel equivariance on exact subgroups", 30.0, exact_subgroup_kernels},
      {5, "C8/D8 3x3 nearest exact on all elements", 10.0, eighth_turn_nearest},
      {6, "feature equivariance incl. 3-layer stack", 30.0, feature_equivariance},
      {7, "1x1 filters, all families, N=1..12", 10.0, scalar_filters},
      {8, "capacity accounting", 0.0, capacity},
      {9, "interpolated residual report C8/S=9/bilinear", 0.0, [&] { return interpolated_report(out_dir); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s <= 0.0 || seconds < c.time_limit_s;
    const bool ok = outcome.ok && in_time;
    failures += ok ? 0 : 1;
    std::string timing = sci(seconds) + " s";
    if (c.time_limit_s > 0.0) timing += " (limit " + sci(c.time_limit_s) + " s)";
    std::printf("%s criterion %d: %s | %s | %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                outcome.detail.c_str(), timing.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
