#pragma once

#include <optional>

#include "ktop/spin.hpp"

namespace ktop {

/// Point on the unit sphere in Cartesian form, (X, Y, Z) = J / j in the classical limit.
struct SpherePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
  SpherePoint normalized() const;
};

enum class Chart { North, South };

/// Point on the sphere held in a stereographic chart.
///
/// North chart: gamma = (X + iY) / (1 + Z) = e^{i phi} tan(theta / 2), finite
/// everywhere except the south pole.
/// South chart: w = 1 / conj(gamma) = (X + iY) / (1 - Z), finite everywhere
/// except the north pole. The south pole is representable only here (w = 0).
class PhasePoint {
 public:
  static PhasePoint from_gamma(Complex gamma);
  static PhasePoint from_south(Complex w);
  static PhasePoint from_angles(double theta, double phi);
  /// Picks the chart whose coordinate has modulus <= 1.
  static PhasePoint from_cartesian(const SpherePoint& p);

  Chart chart() const noexcept { return chart_; }
  Complex coordinate() const noexcept { return coord_; }
  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  SpherePoint cartesian() const;

  /// North-chart coordinate; empty at the south pole.
  std::optional<Complex> north_gamma() const;
  /// South-chart coordinate; empty at the north pole.
  std::optional<Complex> south_w() const;

  /// Same point, moved to the chart where |coordinate| <= 1.
  PhasePoint in_preferred_chart() const;

  /// X = (gamma + gamma*) / (1 + |gamma|^2) = sin(theta) cos(phi).
  double x() const;

 private:
  PhasePoint(Chart chart, Complex coord);

  Chart chart_;
  Complex coord_;
  double theta_;
  double phi_;
};

}  // namespace ktop
