#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ktop/moments.hpp"

namespace ktop {

/// Rational entries are written alongside the decimals up to this size.
inline constexpr int kRationalExportMaxTwoJ = 12;

/// Portable JSON form of R:
///   {"format": "ktop.rotation_moment_matrix", "version": 1, "two_j": .., "dim": ..,
///    "index_order": ["n","m","r","s"],
///    "entries":  R[n][m][r][s] as nested arrays of decimal literals (17 significant digits),
///    "rational": same nesting with [numerator, denominator] pairs (two_j <= 12 only)}
void write_rotation_json(std::ostream& out, const RotationMomentMatrix& r);
void export_rotation_matrix(const std::filesystem::path& path, SpinJ j);

struct RotationImport {
  RotationMomentMatrix matrix;
  std::optional<std::vector<Rational>> rational;
};

RotationImport read_rotation_json(std::istream& in);
RotationImport import_rotation_matrix(const std::filesystem::path& path);

}  // namespace ktop
