#include "ktop/geometry.hpp"

#include <cmath>
#include <numbers>

namespace ktop {

double SpherePoint::norm() const { return std::sqrt(x * x + y * y + z * z); }

SpherePoint SpherePoint::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw Error("cannot normalize the zero vector");
  return {x / n, y / n, z / n};
}

PhasePoint::PhasePoint(Chart chart, Complex coord) : chart_(chart), coord_(coord) {
  if (!std::isfinite(coord.real()) || !std::isfinite(coord.imag())) {
    throw Error("stereographic coordinate must be finite");
  }
  const double r = std::abs(coord);
  if (chart == Chart::North) {
    theta_ = 2.0 * std::atan(r);
  } else {
    theta_ = std::numbers::pi - 2.0 * std::atan(r);
  }
  // arg(1 / conj(w)) = arg(w), so phi reads the same in both charts.
  phi_ = r > 0.0 ? std::arg(coord) : 0.0;
}

PhasePoint PhasePoint::from_gamma(Complex gamma) { return PhasePoint(Chart::North, gamma); }

PhasePoint PhasePoint::from_south(Complex w) { return PhasePoint(Chart::South, w); }

PhasePoint PhasePoint::from_angles(double theta, double phi) {
  if (theta <= 0.5 * std::numbers::pi) {
    return PhasePoint(Chart::North, std::polar(std::tan(0.5 * theta), phi));
  }
  // tan((pi - theta) / 2) = 1 / tan(theta / 2)
  PhasePoint p(Chart::South, std::polar(std::tan(0.5 * (std::numbers::pi - theta)), phi));
  p.theta_ = theta;
  p.phi_ = phi;
  return p;
}

PhasePoint PhasePoint::from_cartesian(const SpherePoint& p) {
  if (p.z >= 0.0) return PhasePoint(Chart::North, Complex(p.x, p.y) / (1.0 + p.z));
  return PhasePoint(Chart::South, Complex(p.x, p.y) / (1.0 - p.z));
}

SpherePoint PhasePoint::cartesian() const {
  const double u = std::norm(coord_);
  const Complex xy = 2.0 * coord_ / (1.0 + u);
  const double zn = (1.0 - u) / (1.0 + u);
  return {xy.real(), xy.imag(), chart_ == Chart::North ? zn : -zn};
}

std::optional<Complex> PhasePoint::north_gamma() const {
  if (chart_ == Chart::North) return coord_;
  if (coord_ == Complex(0.0, 0.0)) return std::nullopt;
  return 1.0 / std::conj(coord_);
}

std::optional<Complex> PhasePoint::south_w() const {
  if (chart_ == Chart::South) return coord_;
  if (coord_ == Complex(0.0, 0.0)) return std::nullopt;
  return 1.0 / std::conj(coord_);
}

PhasePoint PhasePoint::in_preferred_chart() const {
  if (std::abs(coord_) <= 1.0) return *this;
  const Chart other = chart_ == Chart::North ? Chart::South : Chart::North;
  return PhasePoint(other, 1.0 / std::conj(coord_));
}

double PhasePoint::x() const { return 2.0 * coord_.real() / (1.0 + std::norm(coord_)); }

}  // namespace ktop
