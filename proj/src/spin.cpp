#include "ktop/spin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ktop {

SpinRep make_spin_rep(SpinJ j) {
  const int d = j.dim();
  const double jj = j.value();
  SpinRep rep{j, CMatrix::Zero(d, d), CMatrix::Zero(d, d), CMatrix::Zero(d, d),
              CMatrix::Zero(d, d), CMatrix::Zero(d, d)};

  for (int r = 0; r < d; ++r) rep.jz(r, r) = j.m_of_index(r);

  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; in index form r -> r-1.
  for (int r = 1; r < d; ++r) {
    const double m = j.m_of_index(r);
    rep.jplus(r - 1, r) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
  }
  rep.jminus = rep.jplus.adjoint();
  rep.jx = 0.5 * (rep.jplus + rep.jminus);
  rep.jy = Complex(0.0, -0.5) * (rep.jplus - rep.jminus);
  return rep;
}

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix unitary_exp(const CMatrix& h, double t, double tolerance) {
  if (h.rows() != h.cols()) throw Error("not Hermitian: matrix is not square");
  const double scale = h.size() == 0 ? 1.0 : std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > tolerance * scale) throw Error("not Hermitian");
  if (h.size() == 0) return h;

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::polar(1.0, -t * eig.eigenvalues()(i));
  }
  const CMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

CMatrix conjugate(const CMatrix& u, const CMatrix& a) {
  if (u.rows() != u.cols() || a.rows() != a.cols() || u.rows() != a.rows()) {
    throw Error("conjugate: shape mismatch");
  }
  return u.adjoint() * a * u;
}

Eigen::VectorXd binomial_row(int n) {
  if (n < 0) throw Error("binomial_row: negative order");
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
  row(0) = 1.0;
  // Pascal recursion: additions only, exact while entries stay below 2^53.
  for (int i = 1; i <= n; ++i) {
    for (int k = i; k >= 1; --k) row(k) += row(k - 1);
  }
  return row;
}

}  // namespace ktop
