#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ktop {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spin quantum number stored as the integer 2j, so half-integer spins are exact.
class SpinJ {
 public:
  explicit SpinJ(int two_j) : two_j_(two_j) {
    if (two_j < 0) throw Error("two_j must be non-negative, got " + std::to_string(two_j));
  }

  int two_j() const noexcept { return two_j_; }
  int dim() const noexcept { return two_j_ + 1; }
  double value() const noexcept { return 0.5 * two_j_; }

  /// Magnetic quantum number of basis index r (highest weight first).
  double m_of_index(int r) const noexcept { return 0.5 * (two_j_ - 2 * r); }

  friend bool operator==(SpinJ, SpinJ) = default;

 private:
  int two_j_;
};

/// Matrices of the spin-j irreducible representation in the basis
/// |j, j>, |j, j-1>, ..., |j, -j> (index r labels m = j - r).
struct SpinRep {
  SpinJ j;
  CMatrix jx;
  CMatrix jy;
  CMatrix jz;
  CMatrix jplus;
  CMatrix jminus;
};

SpinRep make_spin_rep(SpinJ j);

/// Largest |a_ij - conj(a_ji)|.
double hermiticity_defect(const CMatrix& a);

/// exp(-i t h) for Hermitian h, through its spectral decomposition.
/// Throws Error("not Hermitian") when h deviates from h^dagger by more than
/// `tolerance` (relative to max(1, max|h_ij|)).
CMatrix unitary_exp(const CMatrix& h, double t, double tolerance = 1e-12);

/// u^dagger a u.
CMatrix conjugate(const CMatrix& u, const CMatrix& a);

/// Binomial coefficients C(n, 0..n) as doubles; exact for n <= 56.
Eigen::VectorXd binomial_row(int n);

}  // namespace ktop
