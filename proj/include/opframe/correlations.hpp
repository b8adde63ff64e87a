// Copyright 2026 The opframe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "opframe/quasiprob.hpp"

namespace opframe {

/// Exchange unitary: U_SWAP |m, n> = |n, m>. Hermitian, eigenvalue +1 on the
/// symmetric subspace (dimension d(d+1)/2) and -1 on the antisymmetric one.
inline Operator swap_operator(Index d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Index m = 0; m < d; ++m)
    for (Index n = 0; n < d; ++n) s(m * d + n, n * d + m) = 1.0;
  return Operator(std::move(s), {d, d});
}

/// |E> = d^-1/2 sum_n |n, n>.
inline StateVector max_entangled(Index d) {
  Vector v = Vector::Zero(d * d);
  for (Index n = 0; n < d; ++n) v(n * d + n) = 1.0 / std::sqrt(static_cast<double>(d));
  return StateVector(std::move(v));
}

inline Operator max_entangled_projector(Index d) {
  return max_entangled(d).projector().regrouped({d, d});
}

struct SwapIdentityReport {
  std::string frame_id;
  double residual = std::numeric_limits<double>::quiet_NaN();       // sum_i R(i) x L(i) vs U_SWAP
  double fill_residual = std::numeric_limits<double>::quiet_NaN();  // sum_i (R(i)+I) x L(i) vs U_SWAP + I
  bool swap_passed = false;
  bool fill_passed = false;
  int rank = -1;  // reported instead of a residual for incomplete frames
  double sym_projector_residual = std::numeric_limits<double>::quiet_NaN();
  int sym_rank = -1;
};

/// Checks sum_i dual(i) x element(i) = U_SWAP, which holds for every
/// complete expansion regardless of flavor. Incomplete frames get their rank
/// reported instead of a residual.
inline SwapIdentityReport verify_swap_identity(const OperatorFrame& frame,
                                               const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  SwapIdentityReport rep;
  rep.frame_id = f.name();
  rep.rank = frame_rank(f);
  if (rep.rank != static_cast<int>(f.dim() * f.dim())) return rep;

  const Index d = f.dim();
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += tensor(f.dual(i), f.element(i)).matrix();
  rep.residual = (acc - swap_operator(d).matrix()).norm();
  rep.swap_passed = rep.residual <= std::max(tol.absolute, 1e-9);
  return rep;
}

/// Checks the compensated identity sum_i (dual(i)+I) x element(i) =
/// U_SWAP + I x I, which needs the elements to sum to identity, and verifies
/// that (U_SWAP + I)/2 is the rank-d(d+1)/2 symmetric projector.
inline SwapIdentityReport verify_fill_identity(const OperatorFrame& frame,
                                               const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  const double eps = std::max(tol.absolute, 1e-9);
  const Index d = f.dim();

  Operator sum = Operator::zero(d);
  for (const Operator& e : f.elements()) sum += e;
  const double povm_dev = frobenius_distance(sum, Operator::identity(d));
  if (povm_dev > eps)
    throw std::domain_error("verify_fill_identity: frame '" + f.name() +
                            "' elements do not sum to identity (deviation " +
                            std::to_string(povm_dev) + ")");
  require_complete(f, "verify_fill_identity");

  SwapIdentityReport rep = verify_swap_identity(f, tol);

  const Operator swap = swap_operator(d);
  const Operator eye = Operator::identity(d);
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += tensor(f.dual(i) + eye, f.element(i)).matrix();
  const Matrix rhs = swap.matrix() + Matrix::Identity(d * d, d * d);
  rep.fill_residual = (acc - rhs).norm();
  rep.fill_passed = rep.fill_residual <= eps;

  const Matrix p_sym = rhs / 2.0;
  rep.sym_projector_residual = (p_sym * p_sym - p_sym).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(p_sym);
  int r = 0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) > 0.5) ++r;
  rep.sym_rank = r;
  return rep;
}

/// Frobenius residual of (|E><E|)^PT = U_SWAP / d.
inline double verify_pt_swap(Index d) {
  const Operator pt = partial_transpose(max_entangled_projector(d), Subsystem::second);
  return frobenius_distance(pt, swap_operator(d) * Complex(1.0 / static_cast<double>(d)));
}

/// Residual of the entangled expansion |E><E| = (1/d) sum_i w_i R(i) x R*(i).
/// Defined only for frames whose weights exist (orthogonality holds);
/// conjugation is entrywise in the computational basis.
inline double entangled_expansion(const OperatorFrame& frame,
                                  const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  if (!f.has_weights())
    throw std::domain_error("entangled_expansion: frame '" + f.name() +
                            "' has no weights (orthogonality does not hold)");
  require_complete(f, "entangled_expansion");
  const Index d = f.dim();
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += (f.weights()[i] / static_cast<double>(d)) *
           tensor(f.dual(i), f.dual(i).conjugated()).matrix();
  return (acc - max_entangled_projector(d).matrix()).norm();
}

/// Joint Born probabilities of measuring `basis` on system 1 of |E> and the
/// conjugated basis on system 2: P(k, l) = delta(k, l)/d.
inline Eigen::MatrixXd conjugate_correlation_table(Index d, const std::vector<StateVector>& basis,
                                                   const Tolerance& tol = Tolerance::defaults()) {
  detail::require_orthonormal(basis, "conjugate_correlation_table", tol);
  if (basis[0].dim() != d)
    throw std::invalid_argument("conjugate_correlation_table: basis dim mismatch");
  const StateVector e = max_entangled(d);
  Eigen::MatrixXd table(d, d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      const StateVector joint = tensor(basis[k], basis[l].conjugated());
      table(k, l) = std::norm(joint.inner(e));
    }
  return table;
}

}  // namespace opframe
