// micromaser: steady-state photon statistics for pair-pumped, one-atom and
// detuned two-photon micromasers.
//
//   micromaser sweep  --model dicke --N 100 --D-from 0 --D-to 25 --D-step 0.1 --out fig1.csv
//   micromaser pn     --model one-atom --N 200 --D 25 --out pn.csv
//   micromaser verify --suite all --seed 42

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "micromaser/micromaser.hpp"
#include "micromaser/verify.hpp"

namespace mm = micromaser;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointFlags {
  std::string model;
  double pump = 0.0;
  double nbar = 0.1;
  double delta = 0.0;
  std::optional<double> D;
  std::optional<double> gtau;
  double tol = 1e-8;
  std::size_t nmax0 = 0;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct SweepFlags : PointFlags {
  std::optional<double> D_from, D_to, D_step;
};

void add_model_flags(CLI::App* cmd, PointFlags& f) {
  cmd->add_option("--model", f.model, "dicke | one-atom | two-photon")
      ->required()
      ->check(CLI::IsMember({"dicke", "one-atom", "two-photon"}));
  cmd->add_option("--N", f.pump, "injection events per photon lifetime")->required();
  cmd->add_option("--nbar", f.nbar, "thermal photon number")->capture_default_str();
  cmd->add_option("--delta", f.delta, "one-photon detuning in units of g (two-photon)")
      ->capture_default_str();
  cmd->add_option("--tol", f.tol, "relative tolerance on <n> and v")->capture_default_str();
  cmd->add_option("--nmax0", f.nmax0, "initial truncation (0: max(64, 4N))")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output CSV (stdout when omitted)");
  cmd->add_option("--seed", f.seed, "recorded in the manifest")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads for sweep points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

mm::ModelSpec spec_from(const PointFlags& f) {
  mm::ModelSpec spec;
  spec.variant = *mm::parse_variant(f.model);
  spec.pump = f.pump;
  spec.nbar_th = f.nbar;
  spec.delta = f.delta;
  try {
    spec.validate();
  } catch (const mm::ConfigError& e) {
    throw UsageError(e.what());
  }
  if (!(spec.pump > 0.0)) throw UsageError("--N must be > 0");
  return spec;
}

mm::AdaptiveOptions adaptive_from(const PointFlags& f) {
  if (!(f.tol > 0.0)) throw UsageError("--tol must be > 0");
  mm::AdaptiveOptions a;
  a.tol = f.tol;
  a.n_max0 = f.nmax0;
  return a;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& out, const std::string& command_line,
                    const std::vector<std::pair<std::string, std::string>>& fields) {
  std::ofstream m(out + ".manifest.txt", std::ios::binary);
  m << "timestamp=" << utc_timestamp() << '\n';
  m << "tool=micromaser " << MICROMASER_VERSION << '\n';
  m << "command=" << command_line << '\n';
  for (const auto& [k, v] : fields) m << k << '=' << v << '\n';
  m << "artifact=" << out << '\n';
}

// Writes via `emit` to --out (plus manifest) or to stdout.
template <class Emit>
void deliver(const PointFlags& f, const std::string& command_line,
             const std::vector<std::pair<std::string, std::string>>& fields,
             Emit&& emit) {
  if (f.out.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream os(f.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + f.out + " for writing");
  emit(os);
  write_manifest(f.out, command_line, fields);
}

std::vector<std::pair<std::string, std::string>> common_fields(const PointFlags& f) {
  using mm::io::format_real;
  return {{"model", f.model},
          {"N", format_real(f.pump)},
          {"nbar", format_real(f.nbar)},
          {"delta", format_real(f.delta)},
          {"tol", format_real(f.tol)},
          {"nmax0", std::to_string(f.nmax0)},
          {"seed", std::to_string(f.seed)},
          {"threads", std::to_string(f.threads)}};
}

std::vector<double> sweep_grid(const SweepFlags& f, const mm::ModelSpec& spec) {
  const bool range = f.D_from || f.D_to || f.D_step;
  const int modes = int(range) + int(f.D.has_value()) + int(f.gtau.has_value());
  if (modes != 1) {
    throw UsageError("give exactly one of --D, --gtau or --D-from/--D-to/--D-step");
  }
  if (f.D) return {*f.D};
  if (f.gtau) return {std::sqrt(spec.pump) * *f.gtau};
  if (!(f.D_from && f.D_to && f.D_step)) {
    throw UsageError("--D-from, --D-to and --D-step must be given together");
  }
  if (!(*f.D_step > 0.0) || *f.D_to < *f.D_from || *f.D_from < 0.0) {
    throw UsageError("D range must satisfy 0 <= from <= to and step > 0");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((*f.D_to - *f.D_from) / *f.D_step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = *f.D_from + static_cast<double>(i) * *f.D_step;
  }
  return grid;
}

int run_sweep(const SweepFlags& f, const std::string& command_line) {
  const auto spec = spec_from(f);
  const auto grid = sweep_grid(f, spec);
  mm::SweepOptions opt;
  opt.adaptive = adaptive_from(f);
  opt.threads = f.threads;
  const auto rows = mm::sweep(spec, grid, opt);

  auto fields = common_fields(f);
  fields.emplace_back("D_first", mm::io::format_real(grid.front()));
  fields.emplace_back("D_last", mm::io::format_real(grid.back()));
  fields.emplace_back("points", std::to_string(grid.size()));
  deliver(f, command_line, fields,
          [&](std::ostream& os) { mm::io::write_sweep_csv(os, rows); });

  bool all_ok = true;
  for (const auto& r : rows) {
    if (!r.ok) {
      all_ok = false;
      std::cerr << "point D=" << mm::io::format_real(r.D) << " failed: " << r.error << '\n';
    }
  }
  return all_ok ? kExitOk : kExitPartial;
}

int run_pn(const PointFlags& f, const std::string& command_line) {
  auto spec = spec_from(f);
  if (f.D.has_value() == f.gtau.has_value()) {
    throw UsageError("give exactly one of --D or --gtau");
  }
  spec = f.D ? mm::at_pump_parameter(spec, *f.D) : [&] {
    if (!(*f.gtau >= 0.0)) throw UsageError("--gtau must be >= 0");
    auto s = spec;
    s.gtau = *f.gtau;
    return s;
  }();

  mm::SteadyState s;
  try {
    s = mm::solve_adaptive(spec, adaptive_from(f));
  } catch (const mm::Error& e) {
    std::cerr << "solve failed: " << e.what() << '\n';
    return kExitPartial;
  }
  const bool ok = s.moments.residual < mm::kResidualRelBound * s.generator_scale;

  using mm::io::format_real;
  std::vector<std::string> comments = {
      "model=" + f.model + " N=" + format_real(spec.pump) +
          " nbar=" + format_real(spec.nbar_th) + " delta=" + format_real(spec.delta) +
          " gtau=" + format_real(spec.gtau) + " D=" + format_real(spec.pump_parameter()),
      "mean_n=" + format_real(s.moments.mean_n) + " v=" + format_real(s.moments.v) +
          " n_max=" + std::to_string(s.moments.n_max_used) +
          " residual=" + format_real(s.moments.residual) +
          " status=" + (ok ? "ok" : "failed")};
  auto fields = common_fields(f);
  fields.emplace_back("gtau", format_real(spec.gtau));
  fields.emplace_back("D", format_real(spec.pump_parameter()));
  deliver(f, command_line, fields, [&](std::ostream& os) {
    mm::io::write_distribution_csv(os, s.distribution, comments);
  });
  if (!ok) {
    std::cerr << "residual above bound\n";
    return kExitPartial;
  }
  return kExitOk;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<mm::verify::CheckResult> results;
  auto append = [&](std::vector<mm::verify::CheckResult> more) {
    results.insert(results.end(), more.begin(), more.end());
  };
  if (suite == "kernel" || suite == "all") append(mm::verify::kernel_suite());
  if (suite == "oracle" || suite == "all") append(mm::verify::oracle_suite());
  if (suite == "mc" || suite == "all") append(mm::verify::monte_carlo_suite(seed));

  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cout << "check=" << r.name << " status=" << (r.passed ? "pass" : "fail")
              << " value=" << mm::io::format_real(r.value)
              << " threshold=" << mm::io::format_real(r.threshold);
    if (!r.detail.empty()) std::cout << " detail=\"" << r.detail << '"';
    std::cout << '\n';
  }
  std::cout << "summary checks=" << results.size() << " status=" << (all ? "pass" : "fail")
            << '\n';
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream cmdline;
  for (int i = 0; i < argc; ++i) cmdline << (i ? " " : "") << argv[i];

  CLI::App app{"Steady-state micromaser photon statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MICROMASER_VERSION));

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "moments versus pump parameter D");
  add_model_flags(sweep, sweep_flags);
  sweep->add_option("--D", sweep_flags.D, "single pump parameter value");
  sweep->add_option("--gtau", sweep_flags.gtau, "single interaction time g*tau");
  sweep->add_option("--D-from", sweep_flags.D_from, "first D of the grid");
  sweep->add_option("--D-to", sweep_flags.D_to, "last D of the grid (inclusive)");
  sweep->add_option("--D-step", sweep_flags.D_step, "grid spacing");

  PointFlags pn_flags;
  auto* pn = app.add_subcommand("pn", "photon distribution at one point");
  add_model_flags(pn, pn_flags);
  pn->add_option("--D", pn_flags.D, "pump parameter");
  pn->add_option("--gtau", pn_flags.gtau, "interaction time g*tau");

  std::string suite = "kernel";
  std::uint64_t verify_seed = 42;
  auto* verify = app.add_subcommand("verify", "run oracle cross-checks");
  verify->add_option("--suite", suite, "kernel | oracle | mc | all")
      ->check(CLI::IsMember({"kernel", "oracle", "mc", "all"}))
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "Monte Carlo seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sweep) return run_sweep(sweep_flags, cmdline.str());
    if (*pn) return run_pn(pn_flags, cmdline.str());
    return run_verify(suite, verify_seed);
  } catch (const UsageError& e) {
    auto* active = *sweep ? sweep : (*pn ? pn : verify);
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPartial;
  }
}
