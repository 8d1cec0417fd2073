#include "ktop/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

namespace ktop {

namespace {

// sqrt(C(2j, r)) e^{i r phi} |z|^r / (1 + |z|^2)^j for the north chart; for the
// south chart |w|^{2j-r} replaces |gamma|^r.
CVector normalized_components(SpinJ j, const PhasePoint& point) {
  const int d = j.dim();
  const Eigen::VectorXd binom = binomial_row(j.two_j());
  const Complex z = point.coordinate();
  const double r_abs = std::abs(z);
  const double denom = std::pow(1.0 + r_abs * r_abs, 0.5 * j.two_j());
  CVector c(d);
  if (point.chart() == Chart::South && r_abs == 0.0) {
    c.setZero();
    c(d - 1) = 1.0;
    return c;
  }
  const double phi = r_abs > 0.0 ? std::arg(z) : 0.0;
  for (int r = 0; r < d; ++r) {
    const int power = point.chart() == Chart::North ? r : j.two_j() - r;
    c(r) = std::polar(std::sqrt(binom(r)) * std::pow(r_abs, power) / denom, r * phi);
  }
  return c;
}

}  // namespace

CoherentVector coherent_vector(SpinJ j, const PhasePoint& point, bool normalized) {
  if (normalized) return {j, true, normalized_components(j, point)};

  const auto gamma = point.north_gamma();
  if (!gamma) throw Error("chart conversion required");
  const Eigen::VectorXd binom = binomial_row(j.two_j());
  CVector c(j.dim());
  Complex power = 1.0;
  for (int r = 0; r < j.dim(); ++r) {
    c(r) = std::sqrt(binom(r)) * power;
    power *= *gamma;
  }
  return {j, false, c};
}

CoherentExpectations coherent_expectations(SpinJ j, const PhasePoint& point) {
  const SpherePoint n = point.cartesian();
  const double jj = j.value();
  const Complex plus(jj * n.x, jj * n.y);
  return {plus, std::conj(plus), jj * n.z};
}

QuadratureSpec QuadratureSpec::default_for(SpinJ j) {
  const int n = 2 * j.two_j() + 8;
  return {n, n};
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  const std::vector<double> positive = boost::math::legendre_p_zeros<double>(n);
  GaussLegendre rule;
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  for (double x : positive) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight(x));
  }
  return rule;
}

double identity_resolution_residual(SpinJ j, QuadratureSpec spec) {
  if (spec.n_theta < 1 || spec.n_phi < 1) throw Error("quadrature needs at least one node per axis");
  const int d = j.dim();
  const GaussLegendre rule = gauss_legendre(spec.n_theta);
  const Eigen::VectorXd binom = binomial_row(j.two_j());
  // d^2 gamma (1 + |gamma|^2)^{-2} = (2j + 1) / (4 pi) sin(theta) dtheta dphi
  const double prefactor = (2.0 * j.value() + 1.0) / (4.0 * std::numbers::pi) *
                           (2.0 * std::numbers::pi / spec.n_phi);

  CMatrix sum = CMatrix::Zero(d, d);
  CVector c(d);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double ch = std::sqrt(0.5 * (1.0 + x));
    const double sh = std::sqrt(0.5 * (1.0 - x));
    for (int l = 0; l < spec.n_phi; ++l) {
      const double phi = 2.0 * std::numbers::pi * l / spec.n_phi;
      for (int r = 0; r < d; ++r) {
        c(r) = std::polar(std::sqrt(binom(r)) * std::pow(ch, j.two_j() - r) * std::pow(sh, r),
                          r * phi);
      }
      sum.noalias() += (prefactor * rule.weights[i]) * (c * c.adjoint());
    }
  }
  return (CMatrix::Identity(d, d) - sum).cwiseAbs().maxCoeff();
}

double MomentVector::hermitian_defect() const {
  return (values - values.adjoint()).cwiseAbs().maxCoeff();
}

MomentVector moments_from_delta(SpinJ j, const PhasePoint& point) {
  const int d = j.dim();
  const int tj = j.two_j();
  const Complex z = point.coordinate();
  const double denom = std::pow(1.0 + std::norm(z), tj);
  // Powers of z and conj(z); the south chart reverses the exponents.
  std::vector<Complex> zp(d), zc(d);
  zp[0] = zc[0] = 1.0;
  for (int i = 1; i < d; ++i) {
    zp[i] = zp[i - 1] * z;
    zc[i] = zc[i - 1] * std::conj(z);
  }
  MomentVector mv{j, CMatrix(d, d)};
  const bool north = point.chart() == Chart::North;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      mv(n, m) = north ? zp[n] * zc[m] / denom : zp[tj - m] * zc[tj - n] / denom;
    }
  }
  return mv;
}

MomentVector moments_from_density(SpinJ j, const CMatrix& rho) {
  const int d = j.dim();
  if (rho.rows() != d || rho.cols() != d) throw Error("moments_from_density: dimension mismatch");
  const Eigen::VectorXd s = binomial_row(j.two_j()).cwiseSqrt();
  MomentVector mv{j, CMatrix(d, d)};
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) mv(r, c) = rho(r, c) / (s(r) * s(c));
  }
  return mv;
}

CMatrix density_from_moments(const MomentVector& moments) {
  const int d = moments.j.dim();
  const Eigen::VectorXd s = binomial_row(moments.j.two_j()).cwiseSqrt();
  CMatrix rho(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) rho(r, c) = moments(r, c) * s(r) * s(c);
  }
  return rho;
}

std::vector<MomentTerm> observable_coefficients(SpinJ j, Observable which) {
  const int tj = j.two_j();
  std::vector<MomentTerm> terms;
  if (which == Observable::Jz) {
    const Eigen::VectorXd b = binomial_row(tj);
    for (int r = 0; r <= tj; ++r) {
      const double c = b(r) * (j.value() - r);
      if (c != 0.0) terms.push_back({r, r, c});
    }
    return terms;
  }
  if (tj == 0) return terms;
  const Eigen::VectorXd b = binomial_row(tj - 1);
  for (int r = 0; r < tj; ++r) {
    const double c = tj * b(r);
    if (which == Observable::Jminus) {
      terms.push_back({r, r + 1, c});
    } else {
      terms.push_back({r + 1, r, c});
    }
  }
  return terms;
}

Complex expectation_from_moments(const MomentVector& moments, Observable which) {
  Complex sum = 0.0;
  for (const MomentTerm& t : observable_coefficients(moments.j, which)) {
    sum += t.coefficient * moments(t.n, t.m);
  }
  return sum;
}

SpinExpectations spin_expectations(const MomentVector& moments) {
  const Complex plus = expectation_from_moments(moments, Observable::Jplus);
  const Complex minus = expectation_from_moments(moments, Observable::Jminus);
  const Complex jz = expectation_from_moments(moments, Observable::Jz);
  const Complex jx = 0.5 * (plus + minus);
  const Complex jy = Complex(0.0, -0.5) * (plus - minus);
  return {jx.real(), jy.real(), jz.real()};
}

}  // namespace ktop
