#pragma once

#include <cstdint>
#include <vector>

#include "ktop/coherent.hpp"
#include "ktop/geometry.hpp"
#include "ktop/spin.hpp"

namespace ktop {

/// Linear mixing of moments under the quarter turn about y:
///   <f_nm>' = sum_rs R[n][m][r][s] <f_rs>.
///
/// Substituting the Moebius image (1 + gamma)/(1 - gamma) into f_nm gives
///   f_nm' = 2^{-2j} (1 + g)^n (1 - g)^{2j-n} (1 + g*)^m (1 - g*)^{2j-m} / (1 + |g|^2)^{2j},
/// so R[n][m][r][s] = 2^{-2j} A(n, r) A(m, s) with A(n, r) the coefficient of g^r in
/// (1 + g)^n (1 - g)^{2j-n}:
///   A(n, r) = sum_a C(n, a) C(2j - n, r - a) (-1)^{r - a}.
/// Equivalently R = 2^{-2j} sum_a sum_b C(n,a) C(m,b) C(2j-n, r-a) C(2j-m, s-b) (-1)^{r+s-a-b}.
class RotationMomentMatrix {
 public:
  /// Integer coefficients are exact up to two_j = 60.
  static constexpr int kMaxTwoJ = 60;

  explicit RotationMomentMatrix(SpinJ j);

  SpinJ j() const noexcept { return j_; }
  int dim() const noexcept { return j_.dim(); }

  double operator()(int n, int m, int r, int s) const {
    return entries_(n * dim() + m, r * dim() + s);
  }
  /// (2j+1)^2 x (2j+1)^2, row n*(2j+1)+m, column r*(2j+1)+s.
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  /// A(n, r) as above, integers held in doubles.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

  static RotationMomentMatrix from_entries(SpinJ j, Eigen::MatrixXd entries);

 private:
  RotationMomentMatrix(SpinJ j, Eigen::MatrixXd factor, Eigen::MatrixXd entries)
      : j_(j), factor_(std::move(factor)), entries_(std::move(entries)) {}

  SpinJ j_;
  Eigen::MatrixXd factor_;
  Eigen::MatrixXd entries_;
};

RotationMomentMatrix rotation_matrix(SpinJ j);

/// Integer A(n, r); two_j <= RotationMomentMatrix::kMaxTwoJ.
std::vector<std::vector<std::int64_t>> rotation_factor_exact(SpinJ j);

struct Rational {
  std::int64_t num;
  std::int64_t den;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// R entries as reduced fractions, row-major [n][m][r][s]; two_j <= 30 so the
/// numerators A(n,r) A(m,s) fit in 64 bits.
std::vector<Rational> rotation_matrix_exact(SpinJ j);
inline constexpr int kMaxExactTwoJ = 30;

MomentVector rotate_moments(const RotationMomentMatrix& r, const MomentVector& moments);

enum class KickVariant {
  /// K[n][m] = exp(i k/(2j) lambda_nm), lambda_nm = (j - m)^2 - (j - n)^2.
  EigenvalueForm,
  /// K[n][m] = kq[n] conj(kq[m]), kq[m] = exp(i k (m - j)^2 / (2j)); the conjugate of EigenvalueForm.
  TensorForm,
};

/// Chosen by `select_kick_variant` against the density-matrix oracle; the
/// selection test stays in the suite to guard this constant.
inline constexpr KickVariant kDefaultKickVariant = KickVariant::EigenvalueForm;

struct KickSpectrum {
  SpinJ j;
  double k;
  KickVariant variant;
  /// lambda[n][m] = (j - m)^2 - (j - n)^2
  Eigen::MatrixXd lambda;
  /// kq[m] = exp(i k (m - j)^2 / (2j))
  CVector kq_diag;

  /// K^Q[n][m] in the selected variant.
  CMatrix multiplier() const;
};

KickSpectrum kick_spectrum(SpinJ j, double k, KickVariant variant = kDefaultKickVariant);

/// <f_nm>'' = K^Q[n][m] (R <f>)_nm
MomentVector quantum_step(const RotationMomentMatrix& r, const KickSpectrum& spectrum,
                          const MomentVector& moments);

struct KickVariantSelection {
  KickVariant chosen;
  double eigenvalue_residual;
  double tensor_residual;
};

/// One step from a coherent state, both variants against moments of U rho U^dagger.
KickVariantSelection select_kick_variant(SpinJ j = SpinJ(2), double k = 1.3);

/// Largest moment deviation of one quantum_step with `variant` from the density-matrix
/// oracle, from a coherent state at `point`.
double kick_variant_residual(SpinJ j, double k, const PhasePoint& point, KickVariant variant);

enum class ClassicalKickVariant {
  /// K^C[n][m] = exp(-i k X (n - m)), X at the pre-rotation point.
  TensorForm,
  /// K^C[n][m] = exp(-i k X (m - n) / (2j)); fails the factorization identity.
  AsPrinted,
};

CMatrix classical_kick_multiplier(SpinJ j, double k, const PhasePoint& point,
                                  ClassicalKickVariant variant = ClassicalKickVariant::TensorForm);

struct ClassicalMomentStep {
  PhasePoint next;
  /// f_nm evaluated at `next`.
  MomentVector f;
  /// max |f_nm(next) - K^C[n][m] (R f(point))_nm|
  double factorization_residual;
};

/// Advances `point` by the classical map and checks f(next) = K^C . (R f(point)).
ClassicalMomentStep classical_step_moments(const RotationMomentMatrix& r, double k,
                                           const PhasePoint& point,
                                           ClassicalKickVariant variant = ClassicalKickVariant::TensorForm);

}  // namespace ktop
