#include "ktop/rotation_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace ktop {

namespace {

constexpr const char* kFormatName = "ktop.rotation_moment_matrix";

std::string decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes a [d][d][d][d] nest; leaf(n, m, r, s) emits one element.
template <class Leaf>
void write_nest(std::ostream& out, int d, Leaf&& leaf) {
  out << '[';
  for (int n = 0; n < d; ++n) {
    out << (n ? ",\n  [" : "\n  [");
    for (int m = 0; m < d; ++m) {
      out << (m ? ",[" : "[");
      for (int r = 0; r < d; ++r) {
        out << (r ? ",[" : "[");
        for (int s = 0; s < d; ++s) {
          if (s) out << ',';
          leaf(n, m, r, s);
        }
        out << ']';
      }
      out << ']';
    }
    out << ']';
  }
  out << "\n]";
}

}  // namespace

void write_rotation_json(std::ostream& out, const RotationMomentMatrix& r) {
  const int d = r.dim();
  const int tj = r.j().two_j();
  out << "{\n\"format\": \"" << kFormatName << "\",\n\"version\": 1,\n\"two_j\": " << tj
      << ",\n\"dim\": " << d << ",\n\"index_order\": [\"n\", \"m\", \"r\", \"s\"],\n\"entries\": ";
  write_nest(out, d, [&](int n, int m, int a, int b) { out << decimal(r(n, m, a, b)); });
  if (tj <= kRationalExportMaxTwoJ) {
    const std::vector<Rational> exact = rotation_matrix_exact(r.j());
    out << ",\n\"rational\": ";
    write_nest(out, d, [&](int n, int m, int a, int b) {
      const Rational& q = exact[((static_cast<std::size_t>(n) * d + m) * d + a) * d + b];
      out << '[' << q.num << ',' << q.den << ']';
    });
  }
  out << "\n}\n";
}

void export_rotation_matrix(const std::filesystem::path& path, SpinJ j) {
  const RotationMomentMatrix r = rotation_matrix(j);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_rotation_json(out, r);
  if (!out) throw Error("failed writing " + path.string());
}

RotationImport read_rotation_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("rotation matrix JSON: ") + e.what());
  }
  if (doc.value("format", "") != kFormatName) throw Error("rotation matrix JSON: unknown format");
  const int tj = doc.at("two_j").get<int>();
  const SpinJ j(tj);
  const int d = j.dim();
  if (doc.at("dim").get<int>() != d) throw Error("rotation matrix JSON: dim does not match two_j");

  auto leaf = [&](const nlohmann::json& nest, int n, int m, int r, int s) -> const nlohmann::json& {
    return nest.at(n).at(m).at(r).at(s);
  };
  const nlohmann::json& entries = doc.at("entries");
  Eigen::MatrixXd flat(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) flat(n * d + m, r * d + s) = leaf(entries, n, m, r, s).get<double>();

  RotationImport result{RotationMomentMatrix::from_entries(j, std::move(flat)), std::nullopt};
  if (doc.contains("rational")) {
    const nlohmann::json& rat = doc.at("rational");
    std::vector<Rational> q;
    q.reserve(static_cast<std::size_t>(d) * d * d * d);
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m)
        for (int r = 0; r < d; ++r)
          for (int s = 0; s < d; ++s) {
            const auto& pair = leaf(rat, n, m, r, s);
            q.push_back({pair.at(0).get<std::int64_t>(), pair.at(1).get<std::int64_t>()});
          }
    result.rational = std::move(q);
  }
  return result;
}

RotationImport import_rotation_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_rotation_json(in);
}

}  // namespace ktop
