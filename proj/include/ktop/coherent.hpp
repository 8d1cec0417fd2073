#pragma once

#include <vector>

#include "ktop/geometry.hpp"
#include "ktop/spin.hpp"

namespace ktop {

struct CoherentVector {
  SpinJ j;
  bool normalized;
  CVector components;
};

/// Spin coherent state in the |j, j - r> basis.
///
/// Unnormalized: e^{gamma J-}|j,j>, component r = sqrt(C(2j, r)) gamma^r, squared
/// norm (1 + |gamma|^2)^{2j}. Normalized: the same divided by (1 + |gamma|^2)^j.
/// South-chart points are converted to the north chart first; the south pole has
/// no unnormalized representative and raises Error("chart conversion required").
CoherentVector coherent_vector(SpinJ j, const PhasePoint& point, bool normalized);

struct CoherentExpectations {
  Complex jplus;
  Complex jminus;
  double jz;

  double jx() const { return jplus.real(); }
  double jy() const { return jplus.imag(); }
};

/// <J+> = 2j gamma / (1 + |gamma|^2), <J-> = conj(<J+>), <Jz> = j (1 - |gamma|^2) / (1 + |gamma|^2)
/// in the normalized coherent state.
CoherentExpectations coherent_expectations(SpinJ j, const PhasePoint& point);

struct QuadratureSpec {
  int n_theta;
  int n_phi;

  /// (4j + 8) x (4j + 8) nodes, enough for the polynomial integrands at spin j.
  static QuadratureSpec default_for(SpinJ j);
};

/// max |I - integral d^2 gamma (1 + |gamma|^2)^{-2} |gamma><gamma||, with the measure
/// d^2 gamma = (2j+1)/pi dRe dIm, evaluated by Gauss-Legendre in cos(theta) times a
/// uniform rule in phi.
double identity_resolution_residual(SpinJ j, QuadratureSpec spec);
inline double identity_resolution_residual(SpinJ j) {
  return identity_resolution_residual(j, QuadratureSpec::default_for(j));
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// P-averages <f_nm>, f_nm = gamma^n conj(gamma)^m / (1 + |gamma|^2)^{2j}, n, m = 0..2j.
struct MomentVector {
  SpinJ j;
  CMatrix values;

  Complex operator()(int n, int m) const { return values(n, m); }
  Complex& operator()(int n, int m) { return values(n, m); }

  /// max |value(n,m) - conj(value(m,n))|
  double hermitian_defect() const;
};

/// Moments of a P distribution concentrated at `point`: value(n, m) = f_nm(point).
/// Accepts either chart; on the south chart f_nm = w^{2j-m} conj(w)^{2j-n} / (1 + |w|^2)^{2j}.
MomentVector moments_from_delta(SpinJ j, const PhasePoint& point);

/// Moments of an arbitrary density matrix: <f_rs> = rho_rs / sqrt(C(2j,r) C(2j,s)).
MomentVector moments_from_density(SpinJ j, const CMatrix& rho);
CMatrix density_from_moments(const MomentVector& moments);

enum class Observable { Jz, Jminus, Jplus };

struct MomentTerm {
  int n;
  int m;
  double coefficient;
};

/// Coefficients c_nm with <A> = sum c_nm <f_nm> for every P.
///
/// They are the monomial coefficients of <<gamma|A|gamma>>:
///   Jz: j (1 - u)(1 + u)^{2j-1} = sum_r C(2j, r) (j - r) u^r
///   J-: 2j gamma* (1 + u)^{2j-1} = sum_r 2j C(2j-1, r) gamma^r gamma*^{r+1}
///   J+: conjugate of J-.
std::vector<MomentTerm> observable_coefficients(SpinJ j, Observable which);

Complex expectation_from_moments(const MomentVector& moments, Observable which);

struct SpinExpectations {
  double jx;
  double jy;
  double jz;
};

/// <Jx>, <Jy>, <Jz> reconstructed from moments through observable_coefficients.
SpinExpectations spin_expectations(const MomentVector& moments);

}  // namespace ktop
