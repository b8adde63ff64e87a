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

#include <catch2/catch_amalgamated.hpp>

#include "opframe/opframe.hpp"
#include "support/naive_linalg.hpp"
#include "support/test_helpers.hpp"

using namespace opframe;

TEST_CASE("bell_basis: orthonormal, zero label is |E>, reduced states are mixed") {
  for (Index d : {2, 3}) {
    const auto bell = bell_basis(d);
    REQUIRE(bell.size() == static_cast<std::size_t>(d * d));
    for (std::size_t i = 0; i < bell.size(); ++i)
      for (std::size_t j = 0; j < bell.size(); ++j) {
        const double want = (i == j) ? 1.0 : 0.0;
        CHECK(std::abs(bell[i].inner(bell[j]) - Complex(want)) <= 1e-12);
      }
    CHECK(std::abs(bell[0].inner(max_entangled(d)) - Complex(1.0)) < 1e-12);
    for (const StateVector& b : bell) {
      const Operator reduced =
          partial_trace(b.projector().regrouped({d, d}), Subsystem::first);
      CHECK(frobenius_distance(reduced,
                               Operator::identity(d) * Complex(1.0 / static_cast<double>(d))) <=
            1e-12);
    }
  }
}

TEST_CASE("bell_basis: d=2 matches the textbook Bell states up to phase") {
  const auto bell = bell_basis(2);
  const double s = 1.0 / std::sqrt(2.0);
  const auto expect = [&](std::initializer_list<Complex> amps) {
    Vector v(4);
    Index k = 0;
    for (Complex a : amps) v(k++) = a;
    return StateVector(v);
  };
  const std::vector<StateVector> textbook = {
      expect({s, 0, 0, s}),   // phi+
      expect({s, 0, 0, -s}),  // phi-  (label (0,1): Z shift)
      expect({0, s, s, 0}),   // psi+  (label (1,0): X shift)
      expect({0, s, -s, 0}),  // psi-
  };
  for (const StateVector& t : textbook) {
    double best = 0.0;
    for (const StateVector& b : bell) best = std::max(best, std::abs(t.inner(b)));
    CHECK(best == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("verify_bellm_expansion: nine rank-1 projectors forming a measurement") {
  const BellExpansionReport rep = verify_bellm_expansion(3);
  CHECK(rep.worst_residual <= 1e-9);
  CHECK(rep.sum_identity_residual <= 1e-10);
  CHECK(rep.worst_top_eigenvalue_error <= 1e-10);
  CHECK(rep.worst_subdominant_eigenvalue <= 1e-10);
  CHECK(rep.matching_bijective);
  // Zero shift reproduces |E><E| itself.
  CHECK(rep.bell_label_for_shift[0] == std::array<int, 2>{0, 0});
  CHECK_THROWS_AS(verify_bellm_expansion(4), std::invalid_argument);
}

TEST_CASE("teleport: computational input, trivial outcome") {
  const DensityOperator zero = DensityOperator::pure(StateVector::basis_state(2, 0));
  const TeleportationOutcome out = teleport(zero, 2, {0, 0});
  CHECK(out.probability == Catch::Approx(0.25).margin(1e-10));
  CHECK(frobenius_distance(out.conditional_remote, zero.op()) <= 1e-9);
  CHECK(out.correction_label == std::array<int, 2>{0, 0});
  CHECK(frobenius_distance(out.correction, Operator::identity(2)) <= 1e-12);
  CHECK(out.fidelity_after_correction == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("teleport: full protocol at d = 2 and 3 for random pure inputs") {
  for (Index d : {2, 3}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const DensityOperator in = DensityOperator::pure(haar_random_pure(d, 1300 + s));
      double prob_sum = 0.0;
      for (const TeleportationOutcome& out : teleport_all_outcomes(in, d)) {
        prob_sum += out.probability;
        CHECK(std::abs(out.probability - 1.0 / static_cast<double>(d * d)) <= 1e-10);
        CHECK(std::abs(out.fidelity_after_correction - 1.0) <= 1e-9);
        CHECK(out.correction_residual <= 1e-9);
        if (d == 3) {
          CHECK(out.frame_sum_residual <= 1e-9);
          // The computed shift matching is the identity and stays stable.
          CHECK(out.frame_shift == out.outcome);
        }
      }
      CHECK(prob_sum == Catch::Approx(1.0).margin(1e-10));
    }
  }
}

TEST_CASE("teleport: conditional state is the Weyl-shifted input") {
  const DensityOperator in = DensityOperator::pure(haar_random_pure(3, 77));
  const TeleportationOutcome out = teleport(in, 3, {2, 1});
  const Operator w = weyl_operator(3, 2, 1);
  CHECK(frobenius_distance(out.conditional_remote, w * in.op() * w.adjoint()) <= 1e-9);
}

TEST_CASE("teleport: invalid outcome index") {
  CHECK_THROWS_AS(teleport(DensityOperator::maximally_mixed(2), 2, {2, 0}),
                  std::invalid_argument);
}

TEST_CASE("clone_map: maximally mixed input gives (U_SWAP + I)/6 at d=2") {
  const Operator out = clone_map(DensityOperator::maximally_mixed(2));
  // Direct oracle evaluation of (S+I)(I x I/2)(S+I)/6.
  const oracle::Mat s = oracle::from_op(swap_operator(2));
  const oracle::Mat spi = oracle::add(s, oracle::eye(4));
  const oracle::Mat direct = oracle::scale(
      oracle::mul(oracle::mul(spi, oracle::scale(oracle::eye(4), 0.5)), spi), 1.0 / 6.0);
  CHECK(oracle::fdist(direct, oracle::from_op(out)) < 1e-14);
  // Which simplifies to (S + I)/6.
  CHECK(oracle::fdist(oracle::scale(spi, 1.0 / 6.0), oracle::from_op(out)) < 1e-14);
}

TEST_CASE("clone_map: marginal fidelity matches (d+3)/(2(d+1))") {
  for (Index d : {2, 3, 4}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const StateVector psi = haar_random_pure(d, 1400 + s);
      const Operator out = clone_map(DensityOperator::pure(psi));
      // Oracle: evaluate <psi| Tr_2(out) |psi> by brute force.
      const oracle::Mat marg =
          oracle::ptrace_keep_first(oracle::from_op(out), static_cast<std::size_t>(d),
                                    static_cast<std::size_t>(d));
      const oracle::C fid = oracle::expectation(marg, oracle::from_state(psi));
      const double want = static_cast<double>(d + 3) / (2.0 * static_cast<double>(d + 1));
      CHECK(std::abs(fid - oracle::C(want)) <= 1e-10);
      // Library route agrees.
      const double lib_fid = state_fidelity_against(
          DensityOperator::pure(psi), partial_trace(out, Subsystem::first));
      CHECK(std::abs(lib_fid - want) <= 1e-10);
    }
  }
}

TEST_CASE("clone_map: output is a SWAP-symmetric state") {
  const DensityOperator in = testutil::random_mixed(3, 1500);
  const Operator out = clone_map(in);
  CHECK(std::abs(out.trace() - Complex(1.0)) <= 1e-12);
  const Operator s = swap_operator(3);
  CHECK(frobenius_distance(s * out * s, out) <= 1e-12);
  CHECK(min_eigenvalue(out) >= -1e-12);
}

TEST_CASE("ideal_copy_component: closed forms and marginals") {
  // Maximally mixed input at d=2: C_ideal = U_SWAP/4.
  const Operator c_mixed = ideal_copy_component(DensityOperator::maximally_mixed(2));
  CHECK(frobenius_distance(c_mixed, swap_operator(2) * Complex(0.25)) <= 1e-14);

  // Pure input: normalized marginals reproduce it exactly.
  const DensityOperator zero = DensityOperator::pure(StateVector::basis_state(2, 0));
  const Operator c = ideal_copy_component(zero);
  const double tr = c.trace().real();
  CHECK(tr == Catch::Approx(0.5));  // 1/d
  CHECK(frobenius_distance(partial_trace(c, Subsystem::first) * Complex(1.0 / tr), zero.op()) <=
        1e-12);
  CHECK(frobenius_distance(partial_trace(c, Subsystem::second) * Complex(1.0 / tr), zero.op()) <=
        1e-12);

  // It is not the product state: normalized distance stays large.
  const Operator product = tensor(zero.op(), zero.op());
  CHECK(frobenius_distance(c * Complex(1.0 / tr), product) > 0.1);

  // Both orderings of the symmetrized product agree.
  const Operator swap = swap_operator(2);
  const Operator ixr = tensor(Operator::identity(2), zero.op());
  const Operator rxi = tensor(zero.op(), Operator::identity(2));
  const Operator lhs = swap * ixr + ixr * swap;
  const Operator rhs = rxi * swap + swap * rxi;
  CHECK(frobenius_distance(lhs, rhs) <= 1e-12);
}

TEST_CASE("ideal_copy_expansion: both lines reproduce the closed form") {
  const DensityOperator pure2 = DensityOperator::pure(haar_random_pure(2, 1600));
  const IdealCopyExpansion mu = ideal_copy_expansion(matrix_unit_frame(2), pure2);
  CHECK(mu.first_residual <= 1e-10);
  CHECK(mu.second_residual <= 1e-10);
  CHECK(mu.lines_disagreement <= 1e-12);

  const DensityOperator mixed3 = testutil::random_mixed(3, 1601);
  const IdealCopyExpansion pp = ideal_copy_expansion(phase_point_frame(3), mixed3);
  CHECK(pp.first_residual <= 1e-10);
  CHECK(pp.second_residual <= 1e-10);

  const IdealCopyExpansion kd =
      ideal_copy_expansion(kd_frame(computational_basis(2), fourier_basis(2)), pure2);
  CHECK(kd.first_residual <= 1e-10);

  const IdealCopyExpansion sic = ideal_copy_expansion(sic_frame_qubit(), pure2);
  CHECK(sic.first_residual <= 1e-10);

  CHECK_THROWS_AS(ideal_copy_expansion(projective_frame(computational_basis(2)), pure2),
                  std::domain_error);
}

TEST_CASE("discrepancy_state: zero exactly for commuting projective selections") {
  const OperatorFrame proj = projective_frame(computational_basis(2));
  Matrix diag(2, 2);
  diag.setZero();
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  const DensityOperator rho(Operator(diag, {2}));
  for (std::size_t i = 0; i < proj.size(); ++i)
    CHECK(discrepancy_state(proj, i, rho).frobenius_norm() <= 1e-15);
}

TEST_CASE("discrepancy_state: nonzero for the KD frame, always traceless") {
  const OperatorFrame kd = kd_frame(computational_basis(2), fourier_basis(2));
  const DensityOperator zero = DensityOperator::pure(StateVector::basis_state(2, 0));
  double max_norm = 0.0;
  for (std::size_t i = 0; i < kd.size(); ++i)
    max_norm = std::max(max_norm, discrepancy_state(kd, i, zero).frobenius_norm());
  CHECK(max_norm > 1e-3);

  // Trace vanishes for every builtin whose elements sum to identity.
  std::vector<OperatorFrame> frames;
  frames.push_back(projective_frame(computational_basis(3)));
  frames.push_back(kd_frame(computational_basis(3), fourier_basis(3)));
  frames.push_back(phase_point_frame(3));
  for (const OperatorFrame& f : frames) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const DensityOperator rho = testutil::random_mixed(3, 1700 + s);
      for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(discrepancy_state(f, i, rho).trace()) <= 1e-13);
    }
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator rho = testutil::random_mixed(2, 1800 + s);
    const OperatorFrame sic = sic_frame_qubit();
    for (std::size_t i = 0; i < sic.size(); ++i)
      CHECK(std::abs(discrepancy_state(sic, i, rho).trace()) <= 1e-13);
  }
}

TEST_CASE("discrepancy_state: element index out of range") {
  const OperatorFrame f = sic_frame_qubit();
  CHECK_THROWS_AS(discrepancy_state(f, 4, DensityOperator::maximally_mixed(2)),
                  std::out_of_range);
  CHECK_THROWS_AS(discrepancy_elements(f, 0, 17), std::out_of_range);
}

TEST_CASE("discrepancy_elements: zero only for the projective frame") {
  const OperatorFrame proj = projective_frame(computational_basis(3));
  for (std::size_t i = 0; i < proj.size(); ++i)
    for (std::size_t j = 0; j < proj.size(); ++j)
      CHECK(discrepancy_elements(proj, i, j).frobenius_norm() <= 1e-12);
  CHECK(element_discrepancies_all_zero(proj));

  double mu_max = 0.0;
  const OperatorFrame mu = matrix_unit_frame(2);
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j)
      mu_max = std::max(mu_max, discrepancy_elements(mu, i, j).frobenius_norm());
  CHECK(mu_max > 0.1);
  CHECK_FALSE(element_discrepancies_all_zero(mu));
  CHECK_FALSE(element_discrepancies_all_zero(phase_point_frame(3)));
  CHECK_FALSE(element_discrepancies_all_zero(kd_frame(computational_basis(2), fourier_basis(2))));
  CHECK_FALSE(element_discrepancies_all_zero(sic_frame_qubit()));
}

TEST_CASE("discrepancy_elements: all-zero tracks conditions 1 and 2 across builtins") {
  std::vector<OperatorFrame> frames;
  frames.push_back(projective_frame(computational_basis(2)));
  frames.push_back(projective_frame(computational_basis(3)));
  frames.push_back(matrix_unit_frame(2));
  frames.push_back(kd_frame(computational_basis(2), fourier_basis(2)));
  frames.push_back(phase_point_frame(3));
  frames.push_back(sic_frame_qubit());
  for (const OperatorFrame& f : frames) {
    const ConditionReport rep = check_conditions(f);
    CHECK(element_discrepancies_all_zero(f) == (rep.positivity.ok && rep.orthogonality.ok));
  }
}

TEST_CASE("joint_ideal_statistics: projector special cases") {
  const OperatorFrame f = kd_frame(computational_basis(2), fourier_basis(2));
  const DensityOperator zero = DensityOperator::pure(StateVector::basis_state(2, 0));
  const Operator eye = Operator::identity(2);

  const JointIdealStatistics unit = joint_ideal_statistics(eye, eye, zero, f);
  CHECK(std::abs(unit.frame_sum - Complex(1.0)) <= 1e-12);
  CHECK(std::abs(unit.closed_form - Complex(1.0)) <= 1e-12);

  const Operator p0 = StateVector::basis_state(2, 0).projector();
  const JointIdealStatistics same = joint_ideal_statistics(p0, p0, zero, f);
  CHECK(std::abs(same.frame_sum - Complex(1.0)) <= 1e-12);

  // E1 = |0><0|, E2 = |+><+|, rho = |0><0| gives 1/2.
  const Operator pplus = fourier_basis(2)[0].projector();
  const JointIdealStatistics half = joint_ideal_statistics(p0, pplus, zero, f);
  CHECK(std::abs(half.closed_form - Complex(0.5)) <= 1e-12);
  CHECK(std::abs(half.frame_sum - half.closed_form) <= 1e-10);
}

TEST_CASE("joint_ideal_statistics: a documented negative triple") {
  const double pi = 3.14159265358979323846;
  const StateVector phi(
      (Vector(2) << std::sin(pi / 8.0), -std::cos(pi / 8.0)).finished());
  const Operator e1 = fourier_basis(2)[0].projector();  // |+><+|
  const Operator e2 = phi.projector();
  const DensityOperator rho = DensityOperator::pure(StateVector::basis_state(2, 0));

  for (const OperatorFrame& f :
       {kd_frame(computational_basis(2), fourier_basis(2)), matrix_unit_frame(2),
        sic_frame_qubit()}) {
    const JointIdealStatistics js = joint_ideal_statistics(e1, e2, rho, f);
    CHECK(js.closed_form.real() == Catch::Approx((1.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-9));
    CHECK(js.closed_form.real() < 0.0);
    CHECK(std::abs(js.frame_sum - js.closed_form) <= 1e-10);
  }
}

TEST_CASE("joint_ideal_statistics: frame route equals closed form on random triples") {
  std::vector<OperatorFrame> frames;
  frames.push_back(matrix_unit_frame(3));
  frames.push_back(kd_frame(computational_basis(3), fourier_basis(3)));
  frames.push_back(phase_point_frame(3));
  for (const OperatorFrame& f : frames) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Operator e1 = testutil::random_effect(3, 1900 + s);
      const Operator e2 = testutil::random_effect(3, 2000 + s);
      const DensityOperator rho = testutil::random_mixed(3, 2100 + s);
      const JointIdealStatistics js = joint_ideal_statistics(e1, e2, rho, f);
      CHECK(std::abs(js.frame_sum - js.closed_form) <= 1e-10);
    }
  }
}

TEST_CASE("joint_ideal_statistics: validation errors") {
  const OperatorFrame incomplete = projective_frame(computational_basis(2));
  const DensityOperator rho = DensityOperator::maximally_mixed(2);
  const Operator eye = Operator::identity(2);
  CHECK_THROWS_AS(joint_ideal_statistics(eye, eye, rho, incomplete), std::domain_error);

  const OperatorFrame f = matrix_unit_frame(2);
  CHECK_THROWS_AS(joint_ideal_statistics(eye * Complex(3.0), eye, rho, f),
                  std::invalid_argument);  // spectrum above 1
}

TEST_CASE("clone_report: assembled fields are consistent") {
  const OperatorFrame f = kd_frame(computational_basis(2), fourier_basis(2));
  const DensityOperator in = DensityOperator::pure(StateVector::basis_state(2, 0));
  const CloneReport rep = clone_report(in, f);
  CHECK(rep.clone_fidelity_1 == Catch::Approx(5.0 / 6.0).margin(1e-10));
  CHECK(rep.clone_fidelity_2 == Catch::Approx(5.0 / 6.0).margin(1e-10));
  CHECK(rep.ideal_trace == Catch::Approx(0.5).margin(1e-12));
  CHECK(rep.ideal_marginal_residual_1 <= 1e-10);
  CHECK(rep.ideal_marginal_residual_2 <= 1e-10);
  CHECK(rep.swap_symmetry_residual <= 1e-12);
  CHECK(rep.discrepancy_norms.size() == f.size());
  CHECK(rep.eq_expansion_residual_first <= 1e-9);
  CHECK(rep.eq_expansion_residual_second <= 1e-9);
  double max_d = 0.0;
  for (double n : rep.discrepancy_norms) max_d = std::max(max_d, n);
  CHECK(max_d > 1e-3);
}
