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

#include "opframe/correlations.hpp"

namespace opframe {

/// Generalized Bell basis |E(q,p)> = (I x W(q,p)*) |E>, orthonormal, with
/// |E(0,0)> = |E>. Conjugation acts on the second (resource) leg, matching
/// the R*(i) convention of the entangled expansion.
inline std::vector<StateVector> bell_basis(Index d) {
  const double root_d = std::sqrt(static_cast<double>(d));
  std::vector<StateVector> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  for (Index q = 0; q < d; ++q)
    for (Index p = 0; p < d; ++p) {
      const Matrix wc = weyl_operator(d, q, p).matrix().conjugate();
      Vector v(d * d);
      for (Index m = 0; m < d; ++m)
        for (Index n = 0; n < d; ++n) v(m * d + n) = wc(n, m) / root_d;
      basis.push_back(StateVector(std::move(v)));
    }
  return basis;
}

struct BellExpansionReport {
  double worst_residual = 0.0;        // shifted frame sum vs best-matching Bell projector
  double sum_identity_residual = 0.0; // the d^2 operators summed vs identity
  double worst_top_eigenvalue_error = 0.0;   // |largest eigenvalue - 1|
  double worst_subdominant_eigenvalue = 0.0; // largest remaining |eigenvalue|
  std::vector<std::array<int, 2>> bell_label_for_shift;  // indexed by shift q*d+p
  bool matching_bijective = false;
};

/// Evaluates the shifted expansion E(m) = (1/d) sum_i w_i R(i) x R*(i+m)
/// over the phase-point frame and matches each shift to a Bell projector.
/// The shift arithmetic is componentwise (q, p) addition mod d.
inline BellExpansionReport verify_bellm_expansion(Index d,
                                                  const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = phase_point_frame(d);  // rejects non-prime d
  const std::vector<StateVector> bell = bell_basis(d);
  std::vector<Matrix> bell_proj;
  bell_proj.reserve(bell.size());
  for (const StateVector& b : bell) bell_proj.push_back(b.projector().matrix());

  BellExpansionReport rep;
  rep.bell_label_for_shift.resize(f.size());
  std::vector<bool> used(bell.size(), false);
  bool bijective = true;

  for (Index sq = 0; sq < d; ++sq)
    for (Index sp = 0; sp < d; ++sp) {
      Matrix acc = Matrix::Zero(d * d, d * d);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t ishift = f.shifted_index(i, {static_cast<int>(sq), static_cast<int>(sp)});
        acc += (f.weights()[i] / static_cast<double>(d)) *
               tensor(f.dual(i), f.dual(ishift).conjugated()).matrix();
      }

      double best = std::numeric_limits<double>::infinity();
      std::size_t best_k = 0;
      for (std::size_t k = 0; k < bell_proj.size(); ++k) {
        const double r = (acc - bell_proj[k]).norm();
        if (r < best) {
          best = r;
          best_k = k;
        }
      }
      rep.worst_residual = std::max(rep.worst_residual, best);
      rep.bell_label_for_shift[static_cast<std::size_t>(sq * d + sp)] = {
          static_cast<int>(best_k / static_cast<std::size_t>(d)),
          static_cast<int>(best_k % static_cast<std::size_t>(d))};
      if (used[best_k]) bijective = false;
      used[best_k] = true;

      Eigen::SelfAdjointEigenSolver<Matrix> es((acc + acc.adjoint()) / 2.0);
      const auto& ev = es.eigenvalues();
      rep.worst_top_eigenvalue_error =
          std::max(rep.worst_top_eigenvalue_error, std::abs(ev(ev.size() - 1) - 1.0));
      for (Index k = 0; k + 1 < ev.size(); ++k)
        rep.worst_subdominant_eigenvalue =
            std::max(rep.worst_subdominant_eigenvalue, std::abs(ev(k)));
    }

  Matrix total = Matrix::Zero(d * d, d * d);
  for (Index sq = 0; sq < d; ++sq)
    for (Index sp = 0; sp < d; ++sp) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::size_t ishift = f.shifted_index(i, {static_cast<int>(sq), static_cast<int>(sp)});
        total += (f.weights()[i] / static_cast<double>(d)) *
                 tensor(f.dual(i), f.dual(ishift).conjugated()).matrix();
      }
    }
  rep.sum_identity_residual = (total - Matrix::Identity(d * d, d * d)).norm();
  rep.matching_bijective = bijective;
  (void)tol;
  return rep;
}

/// <psi|X|psi> against the dominant eigenvector for (near-)pure references,
/// Tr(ref X)/Tr(ref^2) otherwise.
inline double state_fidelity_against(const DensityOperator& reference, const Operator& candidate) {
  if (reference.purity() > 1.0 - 1e-6) {
    const HermitianEig eig = hermitian_eig(reference.op(), Tolerance{1e-6, 1e-6});
    const Vector psi = eig.eigenvectors.col(0);
    return (psi.adjoint() * candidate.matrix() * psi)(0, 0).real();
  }
  const double overlap = (reference.op().matrix() * candidate.matrix()).trace().real();
  return overlap / reference.purity();
}

struct TeleportationOutcome {
  std::array<int, 2> outcome{0, 0};
  double probability = 0.0;
  Operator conditional_remote;          // state of B given m, before correction
  Operator correction;                  // unitary undoing the shift
  std::array<int, 2> correction_label{0, 0};
  double correction_residual = 0.0;     // |U rho_cond U^dag - rho_in|_F
  double fidelity_after_correction = 0.0;
  // Residual between the projection route and the frame-sum route of the
  // conditional state; NaN when d is not an odd prime.
  double frame_sum_residual = std::numeric_limits<double>::quiet_NaN();
  std::array<int, 2> frame_shift{-1, -1};
};

namespace detail {

inline Operator teleport_joint_state(const DensityOperator& input, Index d) {
  // Ordering A, R, B with the resource pair |E> on (R, B), grouped as
  // (A R) vs B for the Bell projection.
  const Operator joint = tensor(input.op(), max_entangled_projector(d));
  return joint.regrouped({d * d, d});
}

}  // namespace detail

/// Exact teleportation conditional for Bell outcome m = (q, p): projects the
/// (A, R) pair of rho_A x |E><E|_{RB} onto the Bell state, traces out, and
/// searches the Weyl group for the correcting unitary. For odd prime d the
/// conditional is recomputed through the phase-point frame sum
/// sum_i w_i Tr(R(i) rho) R(i+m) and the best shift is recorded.
inline TeleportationOutcome teleport(const DensityOperator& input, Index d,
                                     std::array<int, 2> m,
                                     const Tolerance& tol = Tolerance::defaults()) {
  if (input.dim() != d) throw std::invalid_argument("teleport: input dim mismatch");
  if (m[0] < 0 || m[0] >= d || m[1] < 0 || m[1] >= d)
    throw std::invalid_argument("teleport: outcome index out of range");

  const std::vector<StateVector> bell = bell_basis(d);
  const std::size_t mi = static_cast<std::size_t>(m[0] * d + m[1]);
  const Operator joint = detail::teleport_joint_state(input, d);
  const Operator proj = tensor(bell[mi].projector(), Operator::identity(d));
  const Operator selected = proj * joint * proj;

  TeleportationOutcome out;
  out.outcome = m;
  out.probability = selected.trace().real();
  if (out.probability <= 0.0)
    throw std::runtime_error("teleport: outcome has vanishing probability");
  out.conditional_remote =
      partial_trace(selected, Subsystem::second) * Complex(1.0 / out.probability);

  // The correcting unitary is a Weyl operator; find it by exhaustive search
  // so the m <-> (q, p) matching is computed rather than assumed.
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const Operator u = weyl_operator(d, a, b).adjoint();
      const double r =
          frobenius_distance(u * out.conditional_remote * u.adjoint(), input.op());
      if (r < best) {
        best = r;
        out.correction = u;
        out.correction_label = {static_cast<int>(a), static_cast<int>(b)};
      }
    }
  out.correction_residual = best;
  const Operator corrected =
      out.correction * out.conditional_remote * out.correction.adjoint();
  out.fidelity_after_correction = state_fidelity_against(input, corrected);

  if (is_odd_prime(d)) {
    const OperatorFrame f = phase_point_frame(d);
    std::vector<Complex> coeff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      coeff[i] = f.weights()[i] * (f.dual(i) * input.op()).trace();
    double best_shift = std::numeric_limits<double>::infinity();
    for (Index sq = 0; sq < d; ++sq)
      for (Index sp = 0; sp < d; ++sp) {
        Matrix acc = Matrix::Zero(d, d);
        for (std::size_t i = 0; i < f.size(); ++i)
          acc += coeff[i] *
                 f.dual(f.shifted_index(i, {static_cast<int>(sq), static_cast<int>(sp)})).matrix();
        const double r = (acc - out.conditional_remote.matrix()).norm();
        if (r < best_shift) {
          best_shift = r;
          out.frame_shift = {static_cast<int>(sq), static_cast<int>(sp)};
        }
      }
    out.frame_sum_residual = best_shift;
  }
  (void)tol;
  return out;
}

inline std::vector<TeleportationOutcome> teleport_all_outcomes(
    const DensityOperator& input, Index d, const Tolerance& tol = Tolerance::defaults()) {
  std::vector<TeleportationOutcome> outs;
  outs.reserve(static_cast<std::size_t>(d * d));
  for (Index q = 0; q < d; ++q)
    for (Index p = 0; p < d; ++p)
      outs.push_back(teleport(input, d, {static_cast<int>(q), static_cast<int>(p)}, tol));
  return outs;
}

/// Optimal 1 -> 2 cloning output: the symmetric-subspace compression
/// (U_SWAP + I)(I x rho)(U_SWAP + I) / (2(d+1)). Positive, unit trace,
/// symmetric under exchange.
inline Operator clone_map(const DensityOperator& input) {
  const Index d = input.dim();
  const Operator s_plus_i =
      swap_operator(d) + Operator::identity(d * d).regrouped({d, d});
  const Operator embedded = tensor(Operator::identity(d), input.op());
  return (s_plus_i * embedded * s_plus_i) * Complex(1.0 / (2.0 * static_cast<double>(d + 1)));
}

/// The perfect-copy component (U_SWAP (I x rho) + (I x rho) U_SWAP) / (2d).
/// Its trace is 1/d; both partial traces return rho / d.
inline Operator ideal_copy_component(const DensityOperator& input) {
  const Index d = input.dim();
  const Operator swap = swap_operator(d);
  const Operator embedded = tensor(Operator::identity(d), input.op());
  return (swap * embedded + embedded * swap) * Complex(1.0 / (2.0 * static_cast<double>(d)));
}

struct IdealCopyExpansion {
  double first_residual = 0.0;   // (1/d) sum_i R(i) x sym(L(i), rho) vs the closed form
  double second_residual = 0.0;  // mirrored ordering
  double lines_disagreement = 0.0;
};

/// Both orderings of the frame expansion of the ideal copy, compared against
/// the closed form above.
inline IdealCopyExpansion ideal_copy_expansion(const OperatorFrame& frame,
                                               const DensityOperator& input,
                                               const Tolerance& tol = Tolerance::defaults()) {
  require_complete(frame, "ideal_copy_expansion");
  const OperatorFrame f = ensure_duals(frame, tol);
  if (input.dim() != f.dim())
    throw std::invalid_argument("ideal_copy_expansion: state and frame dims differ");
  const Index d = f.dim();
  const Matrix& rho = input.op().matrix();

  Matrix first = Matrix::Zero(d * d, d * d);
  Matrix second = Matrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Matrix sym =
        (f.element(i).matrix() * rho + rho * f.element(i).matrix()) / 2.0;
    const Operator sym_op(sym, {d});
    first += tensor(f.dual(i), sym_op).matrix() / static_cast<double>(d);
    second += tensor(sym_op, f.dual(i)).matrix() / static_cast<double>(d);
  }
  const Matrix closed = ideal_copy_component(input).matrix();
  IdealCopyExpansion out;
  out.first_residual = (first - closed).norm();
  out.second_residual = (second - closed).norm();
  out.lines_disagreement = (first - second).norm();
  return out;
}

/// Discrepancy between the symmetric product of element(i) with rho and the
/// projective-selection model: D_i(rho) = sym(L(i), rho) - Tr(L(i) rho) R(i).
/// Traceless whenever Tr(R(i)) = 1, i.e. for frames whose elements sum to
/// identity.
inline Operator discrepancy_state(const OperatorFrame& frame, std::size_t i,
                                  const DensityOperator& rho,
                                  const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  if (i >= f.size()) throw std::out_of_range("discrepancy_state: element index out of range");
  if (rho.dim() != f.dim())
    throw std::invalid_argument("discrepancy_state: state and frame dims differ");
  const Matrix& lam = f.element(i).matrix();
  const Matrix& r = f.dual(i).matrix();
  const Matrix sym = (lam * rho.op().matrix() + rho.op().matrix() * lam) / 2.0;
  const Complex p = (lam * rho.op().matrix()).trace();
  return Operator(Matrix(sym - p * r), {f.dim()});
}

/// Element-level discrepancy D_j(R_i) = sym(L(j), R(i)) - delta(i,j) R(i);
/// zero for all pairs exactly when the frame is a positive orthogonal
/// (projective) set.
inline Operator discrepancy_elements(const OperatorFrame& frame, std::size_t i, std::size_t j,
                                     const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  if (i >= f.size() || j >= f.size())
    throw std::out_of_range("discrepancy_elements: index out of range");
  const Matrix& lam = f.element(j).matrix();
  const Matrix& r = f.dual(i).matrix();
  Matrix d_ij = (lam * r + r * lam) / 2.0;
  if (i == j) d_ij -= r;
  return Operator(std::move(d_ij), {f.dim()});
}

inline bool element_discrepancies_all_zero(const OperatorFrame& frame,
                                           const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  const double eps = std::max(tol.absolute, 1e-9);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (discrepancy_elements(f, i, j, tol).frobenius_norm() > eps) return false;
  return true;
}

struct JointIdealStatistics {
  Complex frame_sum{0.0, 0.0};
  Complex closed_form{0.0, 0.0};  // Re Tr(E1 E2 rho)
};

/// Joint statistics of two measurements on the (normalized) ideal copy:
/// frame route sum_i Tr(E1 R(i)) sym-trace(L(i); E2, rho), closed route
/// Re Tr(E1 E2 rho). The two must agree for every complete frame; the value
/// is generally non-positive.
inline JointIdealStatistics joint_ideal_statistics(const Operator& e1, const Operator& e2,
                                                   const DensityOperator& rho,
                                                   const OperatorFrame& frame,
                                                   const Tolerance& tol = Tolerance::defaults()) {
  require_complete(frame, "joint_ideal_statistics");
  require_effect(e1, "joint_ideal_statistics (E1)", tol);
  require_effect(e2, "joint_ideal_statistics (E2)", tol);
  const OperatorFrame f = ensure_duals(frame, tol);
  if (e1.dim() != f.dim() || e2.dim() != f.dim() || rho.dim() != f.dim())
    throw std::invalid_argument("joint_ideal_statistics: dim mismatch");

  const Matrix& r2 = rho.op().matrix();
  JointIdealStatistics out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Matrix& lam = f.element(i).matrix();
    const Complex sym_trace =
        ((lam * e2.matrix() * r2).trace() + (lam * r2 * e2.matrix()).trace()) / 2.0;
    out.frame_sum += (e1 * f.dual(i)).trace() * sym_trace;
  }
  out.closed_form = Complex((e1.matrix() * e2.matrix() * r2).trace().real(), 0.0);
  return out;
}

struct CloneReport {
  Operator input;
  Operator output_pair;      // two-system clone state
  Operator ideal_component;  // perfect-copy component, trace 1/d
  Operator marginal_1;
  Operator marginal_2;
  double clone_fidelity_1 = 0.0;
  double clone_fidelity_2 = 0.0;
  double ideal_trace = 0.0;  // recorded, not assumed
  double ideal_marginal_residual_1 = 0.0;  // normalized marginal vs input
  double ideal_marginal_residual_2 = 0.0;
  double swap_symmetry_residual = 0.0;     // |S out S - out|_F
  std::vector<double> discrepancy_norms;   // |D_i(rho)|_F per frame element
  double eq_expansion_residual_first = 0.0;
  double eq_expansion_residual_second = 0.0;
};

inline CloneReport clone_report(const DensityOperator& input, const OperatorFrame& frame,
                                const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  const Index d = input.dim();
  CloneReport rep;
  rep.input = input.op();
  rep.output_pair = clone_map(input);
  rep.ideal_component = ideal_copy_component(input);
  rep.marginal_1 = partial_trace(rep.output_pair, Subsystem::first);
  rep.marginal_2 = partial_trace(rep.output_pair, Subsystem::second);
  rep.clone_fidelity_1 = state_fidelity_against(input, rep.marginal_1);
  rep.clone_fidelity_2 = state_fidelity_against(input, rep.marginal_2);
  rep.ideal_trace = rep.ideal_component.trace().real();

  const Complex scale(1.0 / rep.ideal_trace);
  rep.ideal_marginal_residual_1 = frobenius_distance(
      partial_trace(rep.ideal_component, Subsystem::first) * scale, input.op());
  rep.ideal_marginal_residual_2 = frobenius_distance(
      partial_trace(rep.ideal_component, Subsystem::second) * scale, input.op());

  const Operator swap = swap_operator(d);
  rep.swap_symmetry_residual =
      frobenius_distance(swap * rep.output_pair * swap, rep.output_pair);

  for (std::size_t i = 0; i < f.size(); ++i)
    rep.discrepancy_norms.push_back(discrepancy_state(f, i, input, tol).frobenius_norm());

  if (frame_is_complete(f)) {
    const IdealCopyExpansion exp = ideal_copy_expansion(f, input, tol);
    rep.eq_expansion_residual_first = exp.first_residual;
    rep.eq_expansion_residual_second = exp.second_residual;
  } else {
    rep.eq_expansion_residual_first = std::numeric_limits<double>::quiet_NaN();
    rep.eq_expansion_residual_second = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace opframe
