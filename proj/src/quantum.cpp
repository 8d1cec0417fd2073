#include "ktop/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace ktop {

namespace {

void check_p_is_quarter_turn(double p) {
  if (std::abs(p - std::numbers::pi / 2) > 1e-15) {
    throw Error("closed form valid only at p=pi/2");
  }
}

}  // namespace

CMatrix floquet_operator(const TopParams& params) {
  const SpinJ j = params.j;
  const SpinRep rep = make_spin_rep(j);
  const CMatrix rotation = unitary_exp(rep.jy, params.p);
  if (j.two_j() == 0) return rotation;

  // Jz^2 is diagonal; its exponential needs no decomposition.
  CVector torsion(j.dim());
  for (int r = 0; r < j.dim(); ++r) {
    const double m = j.m_of_index(r);
    torsion(r) = std::polar(1.0, -params.k / j.two_j() * m * m);
  }
  return torsion.asDiagonal() * rotation;
}

QuantumState QuantumState::pure(SpinJ j, CVector psi) {
  if (psi.size() != j.dim()) throw Error("state dimension does not match 2j+1");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw Error("pure state must have unit norm");
  return QuantumState(Unchecked{}, j, std::move(psi));
}

QuantumState QuantumState::density(SpinJ j, CMatrix rho) {
  if (rho.rows() != j.dim() || rho.cols() != j.dim()) {
    throw Error("density matrix dimension does not match 2j+1");
  }
  if (hermiticity_defect(rho) > 1e-9) throw Error("density matrix must be Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-9) throw Error("density matrix must have unit trace");
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9) throw Error("density matrix must be positive semidefinite");
  return QuantumState(Unchecked{}, j, std::move(rho));
}

CMatrix QuantumState::to_density() const {
  if (kind() == StateKind::DensityMatrix) return matrix();
  return vector() * vector().adjoint();
}

QuantumState step_state(const QuantumState& state, const CMatrix& u) {
  const int d = state.j().dim();
  if (u.rows() != d || u.cols() != d) throw Error("step_state: dimension mismatch");
  if (state.kind() == StateKind::PureVector) {
    return QuantumState(QuantumState::Unchecked{}, state.j(), CVector(u * state.vector()));
  }
  return QuantumState(QuantumState::Unchecked{}, state.j(),
                      CMatrix(u * state.matrix() * u.adjoint()));
}

Complex expectation(const QuantumState& state, const CMatrix& observable) {
  const int d = state.j().dim();
  if (observable.rows() != d || observable.cols() != d) {
    throw Error("expectation: dimension mismatch");
  }
  if (state.kind() == StateKind::PureVector) {
    return state.vector().dot(observable * state.vector());
  }
  return (state.matrix() * observable).trace();
}

HeisenbergOperators heisenberg_closed_form(const TopParams& params, HeisenbergForm form) {
  check_p_is_quarter_turn(params.p);
  const SpinJ j = params.j;
  const SpinRep rep = make_spin_rep(j);
  const int d = j.dim();
  if (j.two_j() == 0) {
    const CMatrix zero = CMatrix::Zero(d, d);
    return {zero, zero, zero};
  }
  const CMatrix shifted = rep.jx - 0.5 * CMatrix::Identity(d, d);
  const CMatrix kick = unitary_exp(shifted, params.k / j.value());
  const Complex i(0.0, 1.0);
  const CMatrix raising =
      (form == HeisenbergForm::RotatedRaising ? rep.jz : rep.jx) + i * rep.jy;
  const CMatrix product = raising * kick;
  return {
      0.5 * (product + product.adjoint()),
      (product / (2.0 * i)) + (product / (2.0 * i)).adjoint(),
      -rep.jx,
  };
}

double heisenberg_map_residual(const TopParams& params, HeisenbergForm form) {
  const HeisenbergOperators closed = heisenberg_closed_form(params, form);
  const SpinRep rep = make_spin_rep(params.j);
  const CMatrix u = floquet_operator(params);
  return std::max({(conjugate(u, rep.jx) - closed.jx).norm(),
                   (conjugate(u, rep.jy) - closed.jy).norm(),
                   (conjugate(u, rep.jz) - closed.jz).norm()});
}

}  // namespace ktop
