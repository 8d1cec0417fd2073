#include "ktop/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ktop/classical.hpp"
#include "ktop/coherent.hpp"
#include "ktop/quantum.hpp"

#ifndef KTOP_VERSION
#define KTOP_VERSION "0.0.0"
#endif

namespace ktop {

using nlohmann::json;

std::string_view library_version() { return KTOP_VERSION; }

// ---------------------------------------------------------------------------
// Enum spelling

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::QuantumMatrix: return "quantum_matrix";
    case Mode::QuantumMoments: return "quantum_moments";
    case Mode::ClassicalPoint: return "classical_point";
    case Mode::ClassicalEnsemble: return "classical_ensemble";
    case Mode::Compare: return "compare";
  }
  return "?";
}

std::string_view to_string(KickVariant v) {
  return v == KickVariant::EigenvalueForm ? "eigen" : "tensor";
}

std::string_view to_string(ClassicalKickVariant v) {
  return v == ClassicalKickVariant::TensorForm ? "tensor" : "paper";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::QuantumMatrix, Mode::QuantumMoments, Mode::ClassicalPoint,
                 Mode::ClassicalEnsemble, Mode::Compare}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("mode", "unknown mode '" + std::string(text) + "'");
}

KickVariant parse_kick_variant(std::string_view text) {
  if (text == "eigen") return KickVariant::EigenvalueForm;
  if (text == "tensor") return KickVariant::TensorForm;
  throw ConfigError("variants.kq_variant", "expected 'eigen' or 'tensor', got '" + std::string(text) + "'");
}

ClassicalKickVariant parse_classical_kick_variant(std::string_view text) {
  if (text == "tensor") return ClassicalKickVariant::TensorForm;
  if (text == "paper") return ClassicalKickVariant::AsPrinted;
  throw ConfigError("variants.kc_variant", "expected 'tensor' or 'paper', got '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

std::int64_t get_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<std::int64_t>();
}

template <class T, class Get>
std::vector<T> get_scalar_or_list(const json& v, const std::string& field, Get get) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(field, "list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(static_cast<T>(get(v[i], field + "[" + std::to_string(i) + "]")));
    }
  } else {
    out.push_back(static_cast<T>(get(v, field)));
  }
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown field");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C" in its message.
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  reject_unknown(doc,
                 {"two_j", "k", "p", "steps", "initial", "mode", "ensemble_size", "seed", "variants",
                  "tolerances", "output_path", "workers"},
                 "");

  ExperimentConfig c = std::move(base);
  if (doc.contains("two_j")) {
    c.two_j = get_scalar_or_list<int>(doc["two_j"], "two_j", get_integer);
  }
  if (doc.contains("k")) c.k = get_scalar_or_list<double>(doc["k"], "k", get_number);
  if (doc.contains("p")) c.p = get_number(doc["p"], "p");
  if (doc.contains("steps")) c.steps = static_cast<int>(get_integer(doc["steps"], "steps"));
  if (doc.contains("initial")) {
    const json& init = doc["initial"];
    if (!init.is_object()) throw ConfigError("initial", "expected an object {theta, phi}");
    reject_unknown(init, {"theta", "phi"}, "initial.");
    if (init.contains("theta")) c.theta = get_number(init["theta"], "initial.theta");
    if (init.contains("phi")) c.phi = get_number(init["phi"], "initial.phi");
  }
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("mode", "expected a string");
    c.mode = parse_mode(doc["mode"].get<std::string>());
  }
  if (doc.contains("ensemble_size")) {
    const auto n = get_integer(doc["ensemble_size"], "ensemble_size");
    if (n < 0) throw ConfigError("ensemble_size", "must be >= 1");
    c.ensemble_size = static_cast<std::size_t>(n);
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("variants")) {
    const json& v = doc["variants"];
    if (!v.is_object()) throw ConfigError("variants", "expected an object");
    reject_unknown(v, {"kq_variant", "kc_variant"}, "variants.");
    if (v.contains("kq_variant")) {
      if (!v["kq_variant"].is_string()) throw ConfigError("variants.kq_variant", "expected a string");
      c.kq_variant = parse_kick_variant(v["kq_variant"].get<std::string>());
    }
    if (v.contains("kc_variant")) {
      if (!v["kc_variant"].is_string()) throw ConfigError("variants.kc_variant", "expected a string");
      c.kc_variant = parse_classical_kick_variant(v["kc_variant"].get<std::string>());
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    std::pair<const char*, double*> fields[] = {
        {"algebra", &c.tolerances.algebra},
        {"coherent_norm", &c.tolerances.coherent_norm},
        {"identity_resolution", &c.tolerances.identity_resolution},
        {"heisenberg", &c.tolerances.heisenberg},
        {"rotation_pointwise", &c.tolerances.rotation_pointwise},
        {"rotation_exact", &c.tolerances.rotation_exact},
        {"moment_oracle", &c.tolerances.moment_oracle},
        {"classical_chart", &c.tolerances.classical_chart},
        {"factorization", &c.tolerances.factorization},
    };
    std::set<std::string> known;
    for (auto& [name, _] : fields) known.insert(name);
    reject_unknown(t, known, "tolerances.");
    for (auto& [name, target] : fields) {
      if (t.contains(name)) *target = get_number(t[name], std::string("tolerances.") + name);
    }
  }
  if (doc.contains("output_path")) {
    if (!doc["output_path"].is_string()) throw ConfigError("output_path", "expected a string");
    c.output_path = doc["output_path"].get<std::string>();
  }
  if (doc.contains("workers")) {
    const auto w = get_integer(doc["workers"], "workers");
    if (w < 1) throw ConfigError("workers", "must be >= 1");
    c.workers = static_cast<unsigned>(w);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

void validate_config(const ExperimentConfig& c) {
  if (c.steps < 0) throw ConfigError("steps", "must be >= 0");
  if (c.two_j.empty()) throw ConfigError("two_j", "at least one value required");
  if (c.k.empty()) throw ConfigError("k", "at least one value required");
  const bool classical_only = c.mode == Mode::ClassicalPoint;
  for (int tj : c.two_j) {
    if (tj < 0) throw ConfigError("two_j", "must be non-negative");
    if (!classical_only && tj < 1) throw ConfigError("two_j", "must be >= 1 for this mode");
    if ((c.mode == Mode::QuantumMoments || c.mode == Mode::Compare) &&
        tj > RotationMomentMatrix::kMaxTwoJ) {
      throw ConfigError("two_j", "moment modes support two_j <= " +
                                     std::to_string(RotationMomentMatrix::kMaxTwoJ));
    }
  }
  if (std::set<int>(c.two_j.begin(), c.two_j.end()).size() != c.two_j.size()) {
    throw ConfigError("two_j", "sweep values must be distinct");
  }
  if (std::set<double>(c.k.begin(), c.k.end()).size() != c.k.size()) {
    throw ConfigError("k", "sweep values must be distinct");
  }
  for (double k : c.k) {
    if (!std::isfinite(k)) throw ConfigError("k", "must be finite");
  }
  if (!std::isfinite(c.p)) throw ConfigError("p", "must be finite");
  if (c.mode != Mode::QuantumMatrix && std::abs(c.p - std::numbers::pi / 2) > 1e-15) {
    throw ConfigError("p", "only the quantum_matrix mode supports p != pi/2");
  }
  if (!std::isfinite(c.theta) || c.theta < 0.0 || c.theta > std::numbers::pi) {
    throw ConfigError("initial.theta", "must lie in [0, pi]");
  }
  if (!std::isfinite(c.phi)) throw ConfigError("initial.phi", "must be finite");
  if (c.mode == Mode::ClassicalEnsemble && c.ensemble_size < 1) {
    throw ConfigError("ensemble_size", "must be >= 1 in classical_ensemble mode");
  }
  if (c.workers < 1) throw ConfigError("workers", "must be >= 1");
  if (c.output_path.empty()) throw ConfigError("output_path", "must not be empty");
}

namespace {

json config_json(const ExperimentConfig& c) {
  const Tolerances& t = c.tolerances;
  return json{
      {"two_j", c.two_j},
      {"k", c.k},
      {"p", c.p},
      {"steps", c.steps},
      {"initial", {{"theta", c.theta}, {"phi", c.phi}}},
      {"mode", to_string(c.mode)},
      {"ensemble_size", c.ensemble_size},
      {"seed", c.seed},
      {"variants", {{"kq_variant", to_string(c.kq_variant)}, {"kc_variant", to_string(c.kc_variant)}}},
      {"tolerances",
       {{"algebra", t.algebra},
        {"coherent_norm", t.coherent_norm},
        {"identity_resolution", t.identity_resolution},
        {"heisenberg", t.heisenberg},
        {"rotation_pointwise", t.rotation_pointwise},
        {"rotation_exact", t.rotation_exact},
        {"moment_oracle", t.moment_oracle},
        {"classical_chart", t.classical_chart},
        {"factorization", t.factorization}}},
      {"output_path", c.output_path},
  };
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config, int indent) {
  return config_json(config).dump(indent);
}

// ---------------------------------------------------------------------------
// Runs

std::vector<ComparisonRecord> run_grid_point(const ExperimentConfig& c, int two_j, double k,
                                             unsigned workers) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const SpinJ j(two_j);
  const PhasePoint start = PhasePoint::from_angles(c.theta, c.phi);
  const bool want_matrix = c.mode == Mode::QuantumMatrix || c.mode == Mode::Compare;
  const bool want_moments = c.mode == Mode::QuantumMoments || c.mode == Mode::Compare;
  const bool want_point = c.mode == Mode::ClassicalPoint || c.mode == Mode::Compare;
  const bool want_ensemble = c.mode == Mode::ClassicalEnsemble;

  std::vector<ComparisonRecord> rows(static_cast<std::size_t>(c.steps) + 1);
  for (int s = 0; s <= c.steps; ++s) {
    rows[s] = ComparisonRecord{s, nan, nan, nan, nan, nan, nan, nan, nan, nan, 0.0};
  }

  std::vector<CMatrix> densities;
  if (want_matrix) {
    const SpinRep rep = make_spin_rep(j);
    const CMatrix u = floquet_operator(TopParams{j, k, c.p});
    const CVector psi = coherent_vector(j, start, true).components;
    QuantumState state = QuantumState::density(j, psi * psi.adjoint());
    for (int s = 0; s <= c.steps; ++s) {
      if (s > 0) state = step_state(state, u);
      rows[s].jx_q = expectation(state, rep.jx).real() / j.value();
      rows[s].jy_q = expectation(state, rep.jy).real() / j.value();
      rows[s].jz_q = expectation(state, rep.jz).real() / j.value();
      densities.push_back(state.matrix());
    }
  }
  if (want_moments) {
    const RotationMomentMatrix r = rotation_matrix(j);
    const KickSpectrum spectrum = kick_spectrum(j, k, c.kq_variant);
    MomentVector moments = moments_from_delta(j, start);
    for (int s = 0; s <= c.steps; ++s) {
      if (s > 0) moments = quantum_step(r, spectrum, moments);
      const SpinExpectations e = spin_expectations(moments);
      rows[s].jx_m = e.jx / j.value();
      rows[s].jy_m = e.jy / j.value();
      rows[s].jz_m = e.jz / j.value();
      if (want_matrix) {
        rows[s].max_abs_moment_residual =
            (moments_from_density(j, densities[s]).values - moments.values).cwiseAbs().maxCoeff();
      }
    }
  }
  if (want_point) {
    SpherePoint p = start.cartesian();
    for (int s = 0; s <= c.steps; ++s) {
      if (s > 0) p = classical_step(p, k);
      rows[s].x_c = p.x;
      rows[s].y_c = p.y;
      rows[s].z_c = p.z;
    }
  }
  if (want_ensemble) {
    const Ensemble e = sample_coherent_ensemble(start, j, c.ensemble_size, c.seed, workers);
    const EnsembleEvolution ev = evolve_ensemble(e, k, c.steps, std::nullopt, workers);
    for (int s = 0; s <= c.steps; ++s) {
      rows[s].x_c = ev.mean_xyz[s].x;
      rows[s].y_c = ev.mean_xyz[s].y;
      rows[s].z_c = ev.mean_xyz[s].z;
    }
  }
  return rows;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ComparisonRecord>& records) {
  out << kCsvHeader << '\n';
  for (const ComparisonRecord& r : records) {
    out << r.step;
    for (double v : {r.jx_q, r.jy_q, r.jz_q, r.jx_m, r.jy_m, r.jz_m, r.x_c, r.y_c, r.z_c,
                     r.max_abs_moment_residual}) {
      out << ',' << format_number(v);
    }
    out << '\n';
  }
}

std::string output_stem(Mode mode, int two_j, double k) {
  char kbuf[32];
  std::snprintf(kbuf, sizeof kbuf, "%.17g", k);
  std::string ks;
  for (char ch : std::string(kbuf)) {
    if (ch == '.') ks += 'p';
    else if (ch == '-') ks += 'm';
    else if (ch == '+') continue;
    else ks += ch;
  }
  char jbuf[16];
  std::snprintf(jbuf, sizeof jbuf, "%03d", two_j);
  return std::string(to_string(mode)) + "_2j" + jbuf + "_k" + ks;
}

RunOutput run_experiment(const ExperimentConfig& c) {
  validate_config(c);
  const std::filesystem::path dir(c.output_path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output_path", "cannot create directory " + dir.string());
  }

  struct Point {
    int two_j;
    double k;
  };
  std::vector<Point> grid;
  for (int tj : c.two_j) {
    for (double k : c.k) grid.push_back({tj, k});
  }

  RunOutput out;
  for (const Point& g : grid) {
    const std::string stem = output_stem(c.mode, g.two_j, g.k);
    out.csv_files.push_back(dir / (stem + ".csv"));
    out.sidecars.push_back(dir / (stem + ".json"));
  }

  // Grid points share the worker budget; a single point hands it to the ensemble sampler.
  const unsigned inner = grid.size() == 1 ? c.workers : 1;
  parallel_for(grid.size(), c.workers, [&](std::size_t i) {
    const Point& g = grid[i];
    const auto rows = run_grid_point(c, g.two_j, g.k, inner);

    std::ofstream csv(out.csv_files[i], std::ios::binary);
    if (!csv) throw ConfigError("output_path", "cannot write " + out.csv_files[i].string());
    write_csv(csv, rows);
    if (!csv) throw ConfigError("output_path", "failed writing " + out.csv_files[i].string());

    json sidecar{
        {"schema_version", kCsvSchemaVersion},
        {"library", "ktop"},
        {"library_version", library_version()},
        {"csv", out.csv_files[i].filename().string()},
        {"columns", kCsvHeader},
        {"grid_point", {{"two_j", g.two_j}, {"k", g.k}}},
        {"rows", rows.size()},
        {"config", config_json(c)},
    };
    std::ofstream js(out.sidecars[i], std::ios::binary);
    if (!js) throw ConfigError("output_path", "cannot write " + out.sidecars[i].string());
    js << sidecar.dump(2) << '\n';
    if (!js) throw ConfigError("output_path", "failed writing " + out.sidecars[i].string());
  });
  return out;
}

// ---------------------------------------------------------------------------
// Validation suites

bool ValidationReport::passed() const {
  for (const SuiteResult& s : suites) {
    if (!s.passed) return false;
  }
  return true;
}

std::string ValidationReport::table() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-6s %-12s %-12s %s\n", "suite", "result", "residual",
                "tolerance", "detail");
  os << line;
  for (const SuiteResult& s : suites) {
    std::snprintf(line, sizeof line, "%-26s %-6s %-12.3e %-12.3e %s\n", s.name.c_str(),
                  s.passed ? "PASS" : "FAIL", s.max_residual, s.tolerance, s.detail.c_str());
    os << line;
  }
  os << (passed() ? "all suites passed\n" : "one or more suites FAILED\n");
  return os.str();
}

std::string ValidationReport::json(int indent) const {
  nlohmann::json doc{{"passed", passed()}, {"suites", nlohmann::json::array()}};
  for (const SuiteResult& s : suites) {
    doc["suites"].push_back({{"name", s.name},
                             {"passed", s.passed},
                             {"max_residual", s.max_residual},
                             {"tolerance", s.tolerance},
                             {"detail", s.detail},
                             {"seconds", s.seconds}});
  }
  return doc.dump(indent);
}

namespace {

template <class Body>
SuiteResult timed_suite(std::string name, double tolerance, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  double residual = body(detail);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(name), residual <= tolerance, residual, tolerance, std::move(detail), secs};
}

std::vector<int> two_j_range(int lo, int hi) {
  std::vector<int> v;
  for (int t = lo; t <= hi; ++t) v.push_back(t);
  return v;
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& o) {
  if (o.two_j_max < 1) throw ConfigError("two_j", "validation needs two_j >= 1");
  const Tolerances& tol = o.tolerances;
  const int moment_cap = std::min(o.two_j_max, 20);
  ValidationReport report;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_disc_point = [&](double radius) {
    return std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
  };

  report.suites.push_back(timed_suite("algebra", tol.algebra, [&](std::string& detail) {
    double worst = 0.0;
    for (int tj : two_j_range(1, o.two_j_max)) {
      const SpinRep s = make_spin_rep(SpinJ(tj));
      const int d = s.j.dim();
      const double jj = s.j.value();
      const CMatrix id = CMatrix::Identity(d, d);
      const CMatrix u = floquet_operator(TopParams{s.j, o.k});
      worst = std::max({worst,
                        (s.jz * s.jplus - s.jplus * s.jz - s.jplus).cwiseAbs().maxCoeff(),
                        (s.jz * s.jminus - s.jminus * s.jz + s.jminus).cwiseAbs().maxCoeff(),
                        (s.jplus * s.jminus - s.jminus * s.jplus - 2.0 * s.jz).cwiseAbs().maxCoeff(),
                        (s.jx * s.jx + s.jy * s.jy + s.jz * s.jz - jj * (jj + 1.0) * id).cwiseAbs().maxCoeff(),
                        (u.adjoint() * u - id).cwiseAbs().maxCoeff()});
    }
    detail = "commutators, Casimir, Floquet unitarity; two_j=1.." + std::to_string(o.two_j_max);
    return worst;
  }));

  report.suites.push_back(timed_suite("coherent_norm", tol.coherent_norm, [&](std::string& detail) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int tj = 1 + static_cast<int>(unit(rng) * o.two_j_max) % o.two_j_max;
      const Complex g = random_disc_point(5.0);
      const SpinJ j(tj);
      const double norm2 = coherent_vector(j, PhasePoint::from_gamma(g), false).components.squaredNorm();
      const double expected = std::pow(1.0 + std::norm(g), tj);
      worst = std::max(worst, std::abs(norm2 - expected) / expected);
    }
    detail = "relative error of |e^{gJ-}|j,j>|^2 vs (1+|g|^2)^{2j}, 200 samples, |g|<=5";
    return worst;
  }));

  report.suites.push_back(timed_suite("identity_resolution", tol.identity_resolution, [&](std::string& detail) {
    double worst = 0.0;
    for (int tj : two_j_range(0, moment_cap)) worst = std::max(worst, identity_resolution_residual(SpinJ(tj)));
    detail = "default (4j+8)^2 product rule; two_j=0.." + std::to_string(moment_cap);
    return worst;
  }));

  report.suites.push_back(timed_suite("heisenberg_closed_form", tol.heisenberg, [&](std::string& detail) {
    double worst = 0.0, printed = 0.0;
    for (int tj : two_j_range(1, moment_cap)) {
      for (double k : {0.0, 1.0, 3.0, 6.0, 10.0, o.k}) {
        const TopParams params{SpinJ(tj), k};
        worst = std::max(worst, heisenberg_map_residual(params, HeisenbergForm::RotatedRaising));
        printed = std::max(printed, heisenberg_map_residual(params, HeisenbergForm::AsPrinted));
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "(Jz+iJy) form; (Jx+iJy) form residual %.3e; two_j=1..%d", printed,
                  moment_cap);
    detail = buf;
    return worst;
  }));

  report.suites.push_back(timed_suite("rotation_pointwise", tol.rotation_pointwise, [&](std::string& detail) {
    double worst = 0.0;
    for (int tj : two_j_range(1, moment_cap)) {
      const SpinJ j(tj);
      const RotationMomentMatrix r = rotation_matrix(j);
      for (int i = 0; i < 25; ++i) {
        const Complex z = random_disc_point(1.0);
        const PhasePoint p = i % 2 ? PhasePoint::from_south(z) : PhasePoint::from_gamma(z);
        const MomentVector lhs = rotate_moments(r, moments_from_delta(j, p));
        const MomentVector rhs = moments_from_delta(j, quarter_turn(p));
        worst = std::max(worst, (lhs.values - rhs.values).cwiseAbs().maxCoeff());
      }
    }
    detail = "R f(g) vs f((1+g)/(1-g)), both charts; two_j=1.." + std::to_string(moment_cap);
    return worst;
  }));

  const int exact_cap = std::min(o.two_j_max, 12);
  report.suites.push_back(timed_suite("rotation_exact", tol.rotation_exact, [&](std::string& detail) {
    double worst = 0.0;
    for (int tj : two_j_range(1, exact_cap)) {
      const SpinJ j(tj);
      const RotationMomentMatrix r = rotation_matrix(j);
      const std::vector<Rational> q = rotation_matrix_exact(j);
      const int d = j.dim();
      std::size_t idx = 0;
      for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) worst = std::max(worst, std::abs(r(n, m, a, b) - q[idx++].value()));
    }
    detail = "floating R vs reduced fractions; two_j=1.." + std::to_string(exact_cap);
    return worst;
  }));

  report.suites.push_back(timed_suite("kick_variant", tol.moment_oracle, [&](std::string& detail) {
    const KickVariantSelection sel = select_kick_variant();
    const double configured = o.kq_variant == KickVariant::EigenvalueForm ? sel.eigenvalue_residual
                                                                          : sel.tensor_residual;
    char buf[200];
    std::snprintf(buf, sizeof buf, "oracle selects %s (eigen %.2e, tensor %.2e); configured %s",
                  std::string(to_string(sel.chosen)).c_str(), sel.eigenvalue_residual, sel.tensor_residual,
                  std::string(to_string(o.kq_variant)).c_str());
    detail = buf;
    return configured;
  }));

  report.suites.push_back(timed_suite("moment_oracle", tol.moment_oracle, [&](std::string& detail) {
    double worst = 0.0;
    std::vector<int> spins;
    for (int tj : {1, 2, 10, 20}) {
      if (tj <= moment_cap) spins.push_back(tj);
    }
    const PhasePoint start = PhasePoint::from_angles(1.1, 0.6);
    for (int tj : spins) {
      const SpinJ j(tj);
      const SpinRep rep = make_spin_rep(j);
      const RotationMomentMatrix r = rotation_matrix(j);
      for (double k : {0.0, 1.0, 3.0, 6.0}) {
        const KickSpectrum spec = kick_spectrum(j, k, o.kq_variant);
        const CMatrix u = floquet_operator(TopParams{j, k});
        const CVector psi = coherent_vector(j, start, true).components;
        CMatrix rho = psi * psi.adjoint();
        MomentVector m = moments_from_delta(j, start);
        for (int s = 0; s < 20; ++s) {
          rho = u * rho * u.adjoint();
          m = quantum_step(r, spec, m);
          const SpinExpectations e = spin_expectations(m);
          worst = std::max({worst, std::abs(e.jx - (rho * rep.jx).trace().real()),
                            std::abs(e.jy - (rho * rep.jy).trace().real()),
                            std::abs(e.jz - (rho * rep.jz).trace().real())});
        }
      }
    }
    detail = "20-step <J> trajectories, moments vs U rho U^dagger, k in {0,1,3,6}";
    return worst;
  }));

  report.suites.push_back(timed_suite("classical_chart", tol.classical_chart, [&](std::string& detail) {
    double worst = 0.0;
    const int samples = o.two_j_max <= 1 ? 1000 : 10000;
    for (int i = 0; i < samples; ++i) {
      const double z = 2.0 * unit(rng) - 1.0;
      const double az = 2.0 * std::numbers::pi * unit(rng);
      const double s = std::sqrt(1.0 - z * z);
      const SpherePoint p{s * std::cos(az), s * std::sin(az), z};
      const SpherePoint a = classical_step(p, o.k);
      const SpherePoint b = classical_step_stereo(PhasePoint::from_cartesian(p), o.k).cartesian();
      worst = std::max({worst, std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
    }
    detail = std::to_string(samples) + " random points, stereographic vs Cartesian map";
    return worst;
  }));

  report.suites.push_back(timed_suite("classical_factorization", tol.factorization, [&](std::string& detail) {
    double worst = 0.0;
    for (int tj : {1, std::min(10, o.two_j_max)}) {
      const RotationMomentMatrix r = rotation_matrix(SpinJ(tj));
      PhasePoint p = PhasePoint::from_angles(1.1, 0.6);
      for (int s = 0; s < 100; ++s) {
        const ClassicalMomentStep step = classical_step_moments(r, o.k, p, o.kc_variant);
        worst = std::max(worst, step.factorization_residual);
        p = step.next;
      }
    }
    detail = "f(g'') vs K^C (R f(g)), 100 steps, kc_variant=" + std::string(to_string(o.kc_variant));
    return worst;
  }));

  return report;
}

}  // namespace ktop
