// ktop: kicked-top moment propagator laboratory.
//
//   ktop run       --config run.json --two-j 10,20 --k 3 --mode compare --out results
//   ktop validate  [--quick] [--kc-variant paper] [--json report.json]
//   ktop export-r  --two-j 4 --out r4.json
//
// Exit codes: 0 success, 1 validation failure, 2 configuration or I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ktop/harness.hpp"
#include "ktop/rotation_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config_path;
  std::vector<int> two_j;
  std::vector<double> k;
  std::optional<double> p;
  std::optional<int> steps;
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<long long> ensemble_size;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::string> kq_variant;
  std::optional<std::string> kc_variant;
};

ktop::ExperimentConfig resolve(const CommonFlags& f) {
  ktop::ExperimentConfig c;
  if (!f.config_path.empty()) c = ktop::load_config(f.config_path);
  if (!f.two_j.empty()) c.two_j = f.two_j;
  if (!f.k.empty()) c.k = f.k;
  if (f.p) c.p = *f.p;
  if (f.steps) c.steps = *f.steps;
  if (f.theta) c.theta = *f.theta;
  if (f.phi) c.phi = *f.phi;
  if (f.mode) c.mode = ktop::parse_mode(*f.mode);
  if (f.seed) c.seed = *f.seed;
  if (f.ensemble_size) {
    if (*f.ensemble_size < 0) throw ktop::ConfigError("ensemble_size", "must be >= 1");
    c.ensemble_size = static_cast<std::size_t>(*f.ensemble_size);
  }
  if (f.out) c.output_path = *f.out;
  if (f.workers) c.workers = *f.workers;
  if (f.kq_variant) c.kq_variant = ktop::parse_kick_variant(*f.kq_variant);
  if (f.kc_variant) c.kc_variant = ktop::parse_classical_kick_variant(*f.kc_variant);
  return c;
}

int cmd_run(const CommonFlags& flags) {
  const ktop::ExperimentConfig config = resolve(flags);
  ktop::validate_config(config);
  const ktop::RunOutput out = ktop::run_experiment(config);
  for (const auto& path : out.csv_files) std::cout << "wrote " << path.string() << '\n';
  return kExitOk;
}

int cmd_validate(const CommonFlags& flags, bool quick, const std::string& json_path) {
  const ktop::ExperimentConfig config = resolve(flags);
  ktop::ValidationOptions opts;
  opts.two_j_max = quick ? 1 : (flags.two_j.empty() && flags.config_path.empty() ? 20 : config.two_j.front());
  opts.k = flags.k.empty() && flags.config_path.empty() ? 3.0 : config.k.front();
  opts.kq_variant = config.kq_variant;
  opts.kc_variant = config.kc_variant;
  opts.tolerances = config.tolerances;
  opts.seed = config.seed;
  if (opts.two_j_max < 1) throw ktop::ConfigError("two_j", "validation needs two_j >= 1");

  const ktop::ValidationReport report = ktop::run_validation(opts);
  std::cout << report.table();
  if (json_path.empty()) {
    std::cout << report.json() << '\n';
  } else {
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw ktop::ConfigError("json", "cannot write " + json_path);
    js << report.json() << '\n';
  }
  return report.passed() ? kExitOk : kExitValidation;
}

int cmd_export_r(int two_j, const std::string& path, int cap) {
  if (two_j < 0) throw ktop::ConfigError("two_j", "must be non-negative");
  if (two_j > cap) {
    const double entries = std::pow(two_j + 1.0, 4);
    throw ktop::ConfigError("two_j", "two_j = " + std::to_string(two_j) + " exceeds the export cap " +
                                         std::to_string(cap) + "; R has (2j+1)^4 = " +
                                         std::to_string(static_cast<long long>(entries)) +
                                         " entries (raise --max-two-j to override)");
  }
  ktop::export_rotation_matrix(path, ktop::SpinJ(two_j));
  std::cout << "wrote " << path << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file; flags override its fields");
  cmd->add_option("--two-j", f.two_j, "2j, or a comma-separated sweep (default 10)")->delimiter(',');
  cmd->add_option("--k", f.k, "kick strength, or a comma-separated sweep (default 3)")->delimiter(',');
  cmd->add_option("--seed", f.seed, "RNG seed (default 1)");
  cmd->add_option("--kq-variant", f.kq_variant, "quantum kick multiplier: eigen (default) or tensor")
      ->check(CLI::IsMember({"eigen", "tensor"}));
  cmd->add_option("--kc-variant", f.kc_variant, "classical kick multiplier: tensor (default) or paper")
      ->check(CLI::IsMember({"tensor", "paper"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ktop: kicked top, spin coherent states and moment propagators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ktop::library_version()));

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "evolve one configuration or sweep and write CSV + JSON sidecars");
  add_common(run, run_flags);
  run->add_option("--p", run_flags.p, "rotation angle (default pi/2; other values only in quantum_matrix mode)");
  run->add_option("--steps", run_flags.steps, "number of periods (default 20)");
  run->add_option("--theta", run_flags.theta, "initial polar angle (default 1.0)");
  run->add_option("--phi", run_flags.phi, "initial azimuth (default 0.7)");
  run->add_option("--mode", run_flags.mode,
                  "quantum_matrix | quantum_moments | classical_point | classical_ensemble | compare (default)");
  run->add_option("--ensemble-size", run_flags.ensemble_size, "points in classical_ensemble mode (default 1000)");
  run->add_option("--out", run_flags.out, "output directory (default ktop_out)");
  run->add_option("--workers", run_flags.workers, "parallel grid points / ensemble threads (default 1)")
      ->check(CLI::PositiveNumber);

  CommonFlags val_flags;
  bool quick = false;
  std::string json_path;
  auto* validate = app.add_subcommand("validate", "run the invariant suites and report pass/fail");
  add_common(validate, val_flags);
  validate->add_flag("--quick", quick, "smallest representation only (two_j = 1)");
  validate->add_option("--json", json_path, "write the machine-readable report here instead of stdout");

  int export_two_j = 1;
  int export_cap = 40;
  std::string export_path;
  auto* export_r = app.add_subcommand("export-r", "write the rotation moment matrix R as JSON");
  export_r->add_option("--two-j", export_two_j, "2j")->required();
  export_r->add_option("--out", export_path, "output file")->required();
  export_r->add_option("--max-two-j", export_cap, "refuse larger two_j (default 40)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*validate) return cmd_validate(val_flags, quick, json_path);
    if (*export_r) return cmd_export_r(export_two_j, export_path, export_cap);
  } catch (const ktop::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ktop::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
