#include "ktop/moments.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "ktop/classical.hpp"
#include "ktop/quantum.hpp"

namespace ktop {

namespace {

using Poly = std::vector<std::int64_t>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  }
  return out;
}

Poly power(const Poly& base, int exponent) {
  Poly out{1};
  for (int e = 0; e < exponent; ++e) out = multiply(out, base);
  return out;
}

void check_cap(SpinJ j, int cap, const char* what) {
  if (j.two_j() > cap) {
    throw Error(std::string(what) + ": two_j = " + std::to_string(j.two_j()) +
                " exceeds the supported maximum " + std::to_string(cap));
  }
}

}  // namespace

std::vector<std::vector<std::int64_t>> rotation_factor_exact(SpinJ j) {
  check_cap(j, RotationMomentMatrix::kMaxTwoJ, "rotation_factor_exact");
  const int tj = j.two_j();
  std::vector<std::vector<std::int64_t>> a;
  a.reserve(j.dim());
  for (int n = 0; n <= tj; ++n) a.push_back(multiply(power({1, 1}, n), power({1, -1}, tj - n)));
  return a;
}

RotationMomentMatrix::RotationMomentMatrix(SpinJ j) : RotationMomentMatrix(rotation_matrix(j)) {}

RotationMomentMatrix rotation_matrix(SpinJ j) {
  const auto exact = rotation_factor_exact(j);
  const int d = j.dim();
  Eigen::MatrixXd factor(d, d);
  for (int n = 0; n < d; ++n) {
    for (int r = 0; r < d; ++r) factor(n, r) = static_cast<double>(exact[n][r]);
  }
  const double scale = std::ldexp(1.0, -j.two_j());
  Eigen::MatrixXd entries(d * d, d * d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      for (int r = 0; r < d; ++r) {
        for (int s = 0; s < d; ++s) {
          entries(n * d + m, r * d + s) = scale * factor(n, r) * factor(m, s);
        }
      }
    }
  }
  return RotationMomentMatrix::from_entries(j, std::move(entries));
}

RotationMomentMatrix RotationMomentMatrix::from_entries(SpinJ j, Eigen::MatrixXd entries) {
  check_cap(j, kMaxTwoJ, "RotationMomentMatrix");
  const int d = j.dim();
  if (entries.rows() != d * d || entries.cols() != d * d) {
    throw Error("rotation matrix entries must be (2j+1)^2 x (2j+1)^2");
  }
  const auto exact = rotation_factor_exact(j);
  Eigen::MatrixXd factor(d, d);
  for (int n = 0; n < d; ++n) {
    for (int r = 0; r < d; ++r) factor(n, r) = static_cast<double>(exact[n][r]);
  }
  return RotationMomentMatrix(j, std::move(factor), std::move(entries));
}

std::vector<Rational> rotation_matrix_exact(SpinJ j) {
  check_cap(j, kMaxExactTwoJ, "rotation_matrix_exact");
  const auto a = rotation_factor_exact(j);
  const int d = j.dim();
  const std::int64_t den = std::int64_t{1} << j.two_j();
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(d) * d * d * d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      for (int r = 0; r < d; ++r) {
        for (int s = 0; s < d; ++s) {
          const std::int64_t num = a[n][r] * a[m][s];
          if (num == 0) {
            out.push_back({0, 1});
            continue;
          }
          const std::int64_t g = std::gcd(num, den);
          out.push_back({num / g, den / g});
        }
      }
    }
  }
  return out;
}

MomentVector rotate_moments(const RotationMomentMatrix& r, const MomentVector& moments) {
  const int d = r.dim();
  if (!(moments.j == r.j()) || moments.values.rows() != d || moments.values.cols() != d) {
    throw Error("rotate_moments: dimension mismatch");
  }
  CVector flat(d * d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) flat(n * d + m) = moments(n, m);
  }
  const CVector mixed = r.entries().cast<Complex>() * flat;
  MomentVector out{moments.j, CMatrix(d, d)};
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) out(n, m) = mixed(n * d + m);
  }
  return out;
}

CMatrix KickSpectrum::multiplier() const {
  const int d = j.dim();
  CMatrix out(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      if (variant == KickVariant::TensorForm) {
        out(n, m) = kq_diag(n) * std::conj(kq_diag(m));
      } else {
        out(n, m) = j.two_j() == 0 ? Complex(1.0) : std::polar(1.0, k / j.two_j() * lambda(n, m));
      }
    }
  }
  return out;
}

KickSpectrum kick_spectrum(SpinJ j, double k, KickVariant variant) {
  const int d = j.dim();
  const double jj = j.value();
  KickSpectrum spec{j, k, variant, Eigen::MatrixXd(d, d), CVector(d)};
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) spec.lambda(n, m) = (jj - m) * (jj - m) - (jj - n) * (jj - n);
    spec.kq_diag(n) = j.two_j() == 0 ? Complex(1.0) : std::polar(1.0, k * (n - jj) * (n - jj) / j.two_j());
  }
  return spec;
}

MomentVector quantum_step(const RotationMomentMatrix& r, const KickSpectrum& spectrum,
                          const MomentVector& moments) {
  if (!(spectrum.j == r.j())) throw Error("quantum_step: dimension mismatch");
  MomentVector out = rotate_moments(r, moments);
  out.values = out.values.cwiseProduct(spectrum.multiplier());
  return out;
}

double kick_variant_residual(SpinJ j, double k, const PhasePoint& point, KickVariant variant) {
  const CVector psi = coherent_vector(j, point, true).components;
  const CMatrix u = floquet_operator(TopParams{j, k});
  const CMatrix rho1 = u * (psi * psi.adjoint()) * u.adjoint();
  const MomentVector oracle = moments_from_density(j, rho1);
  const MomentVector propagated =
      quantum_step(rotation_matrix(j), kick_spectrum(j, k, variant), moments_from_delta(j, point));
  return (oracle.values - propagated.values).cwiseAbs().maxCoeff();
}

KickVariantSelection select_kick_variant(SpinJ j, double k) {
  const PhasePoint point = PhasePoint::from_angles(0.9, 0.4);
  const double eig = kick_variant_residual(j, k, point, KickVariant::EigenvalueForm);
  const double ten = kick_variant_residual(j, k, point, KickVariant::TensorForm);
  return {eig <= ten ? KickVariant::EigenvalueForm : KickVariant::TensorForm, eig, ten};
}

CMatrix classical_kick_multiplier(SpinJ j, double k, const PhasePoint& point,
                                  ClassicalKickVariant variant) {
  const int d = j.dim();
  const double x = point.x();
  CMatrix out(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      if (variant == ClassicalKickVariant::TensorForm) {
        out(n, m) = std::polar(1.0, -k * x * (n - m));
      } else {
        out(n, m) = j.two_j() == 0 ? Complex(1.0) : std::polar(1.0, -k * x * (m - n) / j.two_j());
      }
    }
  }
  return out;
}

ClassicalMomentStep classical_step_moments(const RotationMomentMatrix& r, double k,
                                           const PhasePoint& point, ClassicalKickVariant variant) {
  const SpinJ j = r.j();
  const PhasePoint next = classical_step_stereo(point, k);
  MomentVector f_next = moments_from_delta(j, next);
  const MomentVector rotated = rotate_moments(r, moments_from_delta(j, point));
  const CMatrix predicted = rotated.values.cwiseProduct(classical_kick_multiplier(j, k, point, variant));
  const double residual = (f_next.values - predicted).cwiseAbs().maxCoeff();
  return {next, std::move(f_next), residual};
}

}  // namespace ktop
