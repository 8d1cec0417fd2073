#pragma once

#include <numbers>
#include <variant>

#include "ktop/spin.hpp"

namespace ktop {

/// Kicked-top parameters: rotation by p about y, then the torsion exp(-i k/(2j) Jz^2).
struct TopParams {
  SpinJ j;
  double k = 0.0;
  double p = std::numbers::pi / 2;
};

/// U = exp(-i k/(2j) Jz^2) exp(-i p Jy). For j = 0 the torsion is the identity.
CMatrix floquet_operator(const TopParams& params);

enum class StateKind { PureVector, DensityMatrix };

/// Pure state or density matrix in the |j, j - r> basis.
class QuantumState {
 public:
  /// Throws unless |psi| = 1 to 1e-10.
  static QuantumState pure(SpinJ j, CVector psi);
  /// Throws unless rho is Hermitian, of unit trace and positive semidefinite to 1e-9.
  static QuantumState density(SpinJ j, CMatrix rho);

  SpinJ j() const noexcept { return j_; }
  StateKind kind() const noexcept {
    return std::holds_alternative<CVector>(data_) ? StateKind::PureVector : StateKind::DensityMatrix;
  }
  const CVector& vector() const { return std::get<CVector>(data_); }
  const CMatrix& matrix() const { return std::get<CMatrix>(data_); }

  /// rho; |psi><psi| for pure states.
  CMatrix to_density() const;

 private:
  struct Unchecked {};
  QuantumState(Unchecked, SpinJ j, std::variant<CVector, CMatrix> data)
      : j_(j), data_(std::move(data)) {}

  SpinJ j_;
  std::variant<CVector, CMatrix> data_;

  friend QuantumState step_state(const QuantumState&, const CMatrix&);
};

/// psi -> U psi, rho -> U rho U^dagger.
QuantumState step_state(const QuantumState& state, const CMatrix& u);

/// tr(rho A) or <psi|A|psi>.
Complex expectation(const QuantumState& state, const CMatrix& observable);

/// Which raising combination opens the closed-form one-period Heisenberg map.
enum class HeisenbergForm {
  /// Jx'' = 1/2 (Jz + iJy) e^{-i(k/j)(Jx - 1/2)} + h.c., the form that U^dagger J U obeys.
  RotatedRaising,
  /// Jx'' = 1/2 (Jx + iJy) e^{-i(k/j)(Jx - 1/2)} + h.c.; kept to report its residual.
  AsPrinted,
};

struct HeisenbergOperators {
  CMatrix jx;
  CMatrix jy;
  CMatrix jz;
};

/// Closed-form one-period images of Jx, Jy, Jz at p = pi/2:
///   Jx'' = 1/2 A E + h.c., Jy'' = 1/(2i) A E + h.c., Jz'' = -Jx,
/// with E = exp(-i (k/j)(Jx - 1/2)) and A selected by `form`.
HeisenbergOperators heisenberg_closed_form(const TopParams& params,
                                           HeisenbergForm form = HeisenbergForm::RotatedRaising);

/// Largest Frobenius distance between the closed form and U^dagger J_a U, a = x, y, z.
/// Throws Error("closed form valid only at p=pi/2") for any other rotation angle.
double heisenberg_map_residual(const TopParams& params,
                               HeisenbergForm form = HeisenbergForm::RotatedRaising);

}  // namespace ktop
