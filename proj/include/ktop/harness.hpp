#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "ktop/moments.hpp"

namespace ktop {

/// Invalid or inconsistent experiment configuration; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : "config field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Mode { QuantumMatrix, QuantumMoments, ClassicalPoint, ClassicalEnsemble, Compare };

std::string_view to_string(Mode mode);
std::string_view to_string(KickVariant v);          // "eigen" | "tensor"
std::string_view to_string(ClassicalKickVariant v);  // "tensor" | "paper"
Mode parse_mode(std::string_view text);
KickVariant parse_kick_variant(std::string_view text);
ClassicalKickVariant parse_classical_kick_variant(std::string_view text);

struct Tolerances {
  double algebra = 1e-11;
  double coherent_norm = 1e-9;
  double identity_resolution = 1e-8;
  double heisenberg = 1e-10;
  double rotation_pointwise = 1e-10;
  double rotation_exact = 1e-13;
  double moment_oracle = 1e-7;
  double classical_chart = 1e-9;
  double factorization = 1e-10;
};

struct ExperimentConfig {
  /// Sweeps: every (two_j, k) pair is one grid point with its own output files.
  std::vector<int> two_j{10};
  std::vector<double> k{3.0};
  double p = std::numbers::pi / 2;
  int steps = 20;
  double theta = 1.0;
  double phi = 0.7;
  Mode mode = Mode::Compare;
  std::size_t ensemble_size = 1000;
  std::uint64_t seed = 1;
  KickVariant kq_variant = kDefaultKickVariant;
  ClassicalKickVariant kc_variant = ClassicalKickVariant::TensorForm;
  Tolerances tolerances;
  std::string output_path = "ktop_out";
  unsigned workers = 1;
};

/// Parses a JSON document; unknown keys and type mismatches raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
/// Throws ConfigError when an invariant is violated.
void validate_config(const ExperimentConfig& config);
/// Resolved configuration as JSON, excluding `workers` (which never changes results).
std::string config_to_json(const ExperimentConfig& config, int indent = 2);

/// One row of output. Quantities a mode does not compute are NaN; the moment residual
/// is |moments(U^t rho U^-t) - propagated moments|_max in compare mode and 0 otherwise.
struct ComparisonRecord {
  int step = 0;
  double jx_q, jy_q, jz_q;
  double jx_m, jy_m, jz_m;
  double x_c, y_c, z_c;
  double max_abs_moment_residual = 0.0;
};

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kCsvHeader =
    "step,jx_q,jy_q,jz_q,jx_m,jy_m,jz_m,x_c,y_c,z_c,max_abs_moment_residual";

std::vector<ComparisonRecord> run_grid_point(const ExperimentConfig& config, int two_j, double k,
                                             unsigned workers = 1);

/// 17 significant digits, LF line endings, header first.
void write_csv(std::ostream& out, const std::vector<ComparisonRecord>& records);

/// Deterministic file stem, e.g. "compare_2j010_k3" or "quantum_matrix_2j001_k0p5".
std::string output_stem(Mode mode, int two_j, double k);

struct RunOutput {
  std::vector<std::filesystem::path> csv_files;
  std::vector<std::filesystem::path> sidecars;
};

/// Validates, runs every grid point (in parallel up to config.workers) and writes
/// <stem>.csv plus <stem>.json into config.output_path.
RunOutput run_experiment(const ExperimentConfig& config);

std::string_view library_version();

struct SuiteResult {
  std::string name;
  bool passed;
  double max_residual;
  double tolerance;
  std::string detail;
  double seconds;
};

struct ValidationOptions {
  /// Upper end of the spin sweeps.
  int two_j_max = 20;
  double k = 3.0;
  KickVariant kq_variant = kDefaultKickVariant;
  ClassicalKickVariant kc_variant = ClassicalKickVariant::TensorForm;
  Tolerances tolerances;
  std::uint64_t seed = 1;
};

struct ValidationReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
  std::string table() const;
  std::string json(int indent = 2) const;
};

ValidationReport run_validation(const ValidationOptions& options);

}  // namespace ktop
