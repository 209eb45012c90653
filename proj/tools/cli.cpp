// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "filtra/harness.hpp"
#include "filtra/io.hpp"

namespace filtra::cli {

namespace fs = std::filesystem;

namespace {

// Invalid flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GroupSpec parse_group(const std::string& text) {
  try {
    return GroupSpec::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

InterpolationMode parse_mode_flag(const std::string& text) {
  try {
    return parse_mode(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_kernel(const fs::path& dir, const std::string& prefix, const SteerableKernel& kernel,
                  bool csv, bool pgm) {
  for (int r = 0; r < kernel.rows(); ++r) {
    for (int c = 0; c < kernel.cols(); ++c) {
      const std::string stem = prefix + "r" + std::to_string(r) + "_c" + std::to_string(c);
      if (csv) {
        auto out = open_out(dir / (stem + ".csv"));
        io::write_filter_csv(out, kernel.at(r, c));
      }
      if (pgm) {
        auto out = open_out(dir / (stem + ".pgm"));
        io::write_pgm(out, kernel.at(r, c));
      }
    }
  }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> groups;
  std::vector<int> sizes{3};
  std::vector<std::string> modes{"bilinear"};
  std::uint64_t seed = 42;
  std::string report;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  SuiteConfig config;
  for (const auto& g : args.groups) config.groups.push_back(parse_group(g));
  for (int s : args.sizes) {
    if (s < 1 || s % 2 == 0) throw UsageError("--size values must be odd and >= 1");
  }
  config.sizes = args.sizes;
  for (const auto& m : args.modes) config.modes.push_back(parse_mode_flag(m));
  config.seed = args.seed;
  config.threads = args.threads;

  const auto reports = run_suite(config);
  bool ok = true;
  out << "kind,group,S,mode,exact_max,full_max,feature_max,status\n";
  for (const auto& r : reports) {
    ok = ok && r.passed();
    out << r.kernel_kind << ',' << r.group.name() << ',' << r.filter_size << ','
        << mode_name(r.mode) << ',' << io::format_double(r.exact_subgroup_max) << ','
        << io::format_double(r.full_group_max) << ',' << io::format_double(r.feature_exact_max)
        << ',' << (r.passed() ? "PASS" : "FAIL") << '\n';
  }
  if (!args.report.empty()) {
    auto file = open_out(args.report);
    write_report_csv(file, reports);
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string group;
  std::string kind;
  int j = 0;
  int k = 0;
  bool k_given = false;
  bool conjugate = false;
  bool reverse = false;
  std::vector<std::string> bases;
  std::string mode = "bilinear";
  std::string out;
  std::string format = "csv";
};

SteerableKernel build_kernel(const GenArgs& args, const GroupSpec& group,
                             const std::vector<FilterGrid>& bases, InterpolationMode mode) {
  const int n = group.rotation_order();
  auto single = [&]() -> const FilterGrid& {
    if (bases.size() != 1) {
      throw UsageError("--kind " + args.kind + " takes exactly one --base file");
    }
    return bases.front();
  };
  try {
    if (args.kind == "triv2reg") {
      return group.is_dihedral() ? kernel_triv_to_reg_dn(single(), n, mode)
                                 : kernel_triv_to_reg_cn(single(), n, mode);
    }
    if (args.kind == "irrep2reg") {
      if (!args.k_given) throw UsageError("--kind irrep2reg requires --k");
      return group.is_dihedral()
                 ? kernel_irrep_to_reg_dn(single(), n, args.j, args.k, mode)
                 : (args.j != 0 ? throw UsageError("--j 1 requires a dihedral group")
                                : kernel_irrep_to_reg_cn(single(), n, args.k, mode, args.conjugate));
    }
    if (args.kind == "reg2reg") {
      const std::size_t expected = static_cast<std::size_t>((group.is_dihedral() ? 2 : 1) * (n / 2 + 1));
      if (bases.size() != expected) {
        throw UsageError("--kind reg2reg over " + group.name() + " needs " +
                         std::to_string(expected) + " --base files, got " +
                         std::to_string(bases.size()));
      }
      return group.is_dihedral() ? kernel_reg_to_reg_dn(bases, n, mode)
                                 : kernel_reg_to_reg_cn(bases, n, mode);
    }
    if (args.kind == "orn") {
      if (group.is_dihedral()) throw UsageError("--kind orn is defined for cyclic groups only");
      return kernel_orn(single(), n, mode);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown --kind '" + args.kind + "'");
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  const GroupSpec group = parse_group(args.group);
  const InterpolationMode mode = parse_mode_flag(args.mode);
  if (args.format != "csv" && args.format != "pgm") throw UsageError("--format must be csv or pgm");
  std::vector<FilterGrid> bases;
  for (const auto& path : args.bases) bases.push_back(io::read_filter_csv(fs::path(path)));
  for (const auto& b : bases) {
    if (b.size() != bases.front().size()) throw UsageError("all --base filters must share one size");
  }
  SteerableKernel kernel = build_kernel(args, group, bases, mode);
  if (args.reverse) kernel = kernel_reverse(kernel);

  const fs::path dir(args.out);
  fs::create_directories(dir);
  write_kernel(dir, "", kernel, true, args.format == "pgm");
  out << "wrote " << kernel.rows() << "x" << kernel.cols() << " kernel (" << kernel.rep_in().name()
      << " -> " << kernel.rep_out().name() << " over " << group.name() << ") to " << dir.string()
      << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_decompose(const std::string& group_text, const std::string& element, const std::string& format,
                  std::ostream& out) {
  const GroupSpec group = parse_group(group_text);
  int i0 = 0, i1 = 0;
  char comma = 0;
  std::istringstream ss(element);
  if (!(ss >> i0 >> comma >> i1) || comma != ',' || !(ss >> std::ws).eof()) {
    throw UsageError("--element must look like i0,i1");
  }
  if (format != "text" && format != "csv") throw UsageError("--format must be text or csv");
  const GroupElement g = [&] {
    try {
      return GroupElement(group, i0, i1);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();

  const Matrix rho = rho_regular(g);
  const auto decomposition = decompose_regular(g);
  const Matrix rebuilt =
      decomposition.basis.matrix * decomposition.block_diagonal * decomposition.basis.inverse();
  const double residual = (rho - rebuilt).cwiseAbs().maxCoeff();
  const std::string basis_name = group.is_dihedral() ? "W" : "V";

  if (format == "csv") {
    auto section = [&](const std::string& name, const Matrix& m) {
      out << "# " << name << ' ' << m.rows() << 'x' << m.cols() << '\n';
      io::write_matrix_csv(out, m);
    };
    section("rho_reg", rho);
    section(basis_name, decomposition.basis.matrix);
    section("D", decomposition.block_diagonal);
    out << "# residual\n" << io::format_double(residual) << '\n';
    return kExitOk;
  }

  const Eigen::IOFormat fmt(6, 0, " ", "\n", "  ", "");
  out << "group " << group.name() << ", element (" << i0 << "," << i1 << ")\n\n";
  out << "rho_reg(g):\n" << rho.format(fmt) << "\n\n";
  out << basis_name << ":\n" << decomposition.basis.matrix.format(fmt) << "\n\n";
  out << "blocks (j,k):";
  for (const auto& b : decomposition.basis.blocks) out << " (" << b.j << "," << b.k << ")";
  out << "\n\nD(g):\n" << decomposition.block_diagonal.format(fmt) << "\n\n";
  out << "max |rho_reg(g) - " << basis_name << " D(g) " << basis_name
      << "^-1| = " << io::format_double(residual) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_capacity(const std::string& group_text, int size, std::ostream& out) {
  const GroupSpec group = parse_group(group_text);
  if (group.is_dihedral()) throw UsageError("capacity compares C_N kernels; use --group c<N>");
  if (size < 1) throw UsageError("--size must be >= 1");
  for (auto kind : {CapacityKind::FiltraRegReg, CapacityKind::OrnRegReg}) {
    const auto r = capacity_report(group.rotation_order(), size, kind);
    out << capacity_kind_name(kind) << ',' << r.independent_weights << ','
        << r.stored_filter_scalars << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DemoArgs {
  std::string base;
  std::string group = "d8";
  int j = 1;
  int k = 1;
  std::string mode = "bilinear";
  std::string out;
};

int cmd_demo(const DemoArgs& args, std::ostream& out) {
  const GroupSpec group = parse_group(args.group);
  const InterpolationMode mode = parse_mode_flag(args.mode);
  const int n = group.rotation_order();
  const FilterGrid base = io::read_filter_csv(fs::path(args.base));
  if (args.j != 0 && args.j != 1) throw UsageError("--j must be 0 or 1");
  if (args.k < 0 || args.k > n / 2) {
    throw UsageError("--k must lie in [0, " + std::to_string(n / 2) + "]");
  }

  const fs::path dir(args.out);
  fs::create_directories(dir);
  const FilterStack stack = build_stack_K(base, n, mode);
  const FilterStack stack_bar = build_stack_Kbar(base, n, mode);
  for (int i = 0; i < n; ++i) {
    auto f = open_out(dir / ("K_n" + std::to_string(i) + ".pgm"));
    io::write_pgm(f, stack.entries[static_cast<std::size_t>(i)]);
    auto g = open_out(dir / ("Kbar_n" + std::to_string(i) + ".pgm"));
    io::write_pgm(g, stack_bar.entries[static_cast<std::size_t>(i)]);
  }
  const std::string ks = std::to_string(args.k), js = std::to_string(args.j);
  write_kernel(dir, "cn_triv2reg_", kernel_triv_to_reg_cn(base, n, mode), false, true);
  write_kernel(dir, "dn_triv2reg_", kernel_triv_to_reg_dn(base, n, mode), false, true);
  write_kernel(dir, "cn_irrep2reg_k" + ks + "_", kernel_irrep_to_reg_cn(base, n, args.k, mode),
               false, true);
  write_kernel(dir, "dn_irrep2reg_j" + js + "_k" + ks + "_",
               kernel_irrep_to_reg_dn(base, n, args.j, args.k, mode), false, true);
  out << "wrote filter dumps for N=" << n << ", j=" << args.j << ", k=" << args.k << " to "
      << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steerable filter construction by filter transform, with equivariance checks",
               "filtra"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check kernel and feature equivariance");
  verify_cmd->add_option("--group", verify.groups, "Groups, e.g. c8,d4")->required()->delimiter(',');
  verify_cmd->add_option("--size", verify.sizes, "Odd filter sizes")->delimiter(',');
  verify_cmd->add_option("--mode", verify.modes, "bilinear and/or nearest")->delimiter(',');
  verify_cmd->add_option("--seed", verify.seed, "Seed for random base filters");
  verify_cmd->add_option("--report", verify.report, "Per-element residual CSV");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads")->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Build a steerable kernel and dump its grids");
  gen_cmd->add_option("--group", gen.group, "c<N> or d<N>")->required();
  gen_cmd->add_option("--kind", gen.kind, "triv2reg|irrep2reg|reg2reg|orn")->required();
  gen_cmd->add_option("--j", gen.j, "Reflection frequency");
  auto* k_opt = gen_cmd->add_option("--k", gen.k, "Rotation frequency");
  gen_cmd->add_flag("--conjugate", gen.conjugate, "Use the reflected stack (C_N irrep2reg)");
  gen_cmd->add_flag("--reverse", gen.reverse, "Transpose the kernel");
  gen_cmd->add_option("--base", gen.bases, "Base filter CSV file(s)")->required()->delimiter(',');
  gen_cmd->add_option("--mode", gen.mode, "bilinear|nearest");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--format", gen.format, "csv|pgm");

  std::string dec_group, dec_element, dec_format = "text";
  auto* dec_cmd = app.add_subcommand("decompose", "Decompose a regular representation into irreps");
  dec_cmd->add_option("--group", dec_group, "c<N> or d<N>")->required();
  dec_cmd->add_option("--element", dec_element, "i0,i1")->required();
  dec_cmd->add_option("--format", dec_format, "text|csv");

  std::string cap_group;
  int cap_size = 0;
  auto* cap_cmd = app.add_subcommand("capacity", "Weight capacity of reg->reg kernels");
  cap_cmd->add_option("--group", cap_group, "c<N>")->required();
  cap_cmd->add_option("--size", cap_size, "Filter size S")->required();

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "PGM dumps of the basic filter-transform kernels");
  demo_cmd->add_option("--base", demo.base, "Base filter CSV")->required();
  demo_cmd->add_option("--group", demo.group, "c<N> or d<N>");
  demo_cmd->add_option("--j", demo.j, "Reflection frequency");
  demo_cmd->add_option("--k", demo.k, "Rotation frequency");
  demo_cmd->add_option("--mode", demo.mode, "bilinear|nearest");
  demo_cmd->add_option("--out", demo.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*gen_cmd) {
      gen.k_given = k_opt->count() > 0;
      return cmd_gen(gen, out);
    }
    if (*dec_cmd) return cmd_decompose(dec_group, dec_element, dec_format, out);
    if (*cap_cmd) return cmd_capacity(cap_group, cap_size, out);
    if (*demo_cmd) return cmd_demo(demo, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace filtra::cli
