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

namespace {

// The documented qubit state with a negative KD value:
// psi = sin(pi/8)|0> - cos(pi/8)|1>. Its KD weight at (a=0, b=+) is
// (1 - sqrt(2))/4, frozen from the brute-force oracle below.
StateVector negative_kd_state() {
  const double pi = 3.14159265358979323846;
  return StateVector((Vector(2) << std::sin(pi / 8.0), -std::cos(pi / 8.0)).finished());
}

constexpr double kNegativeKdValue = -0.10355339059327379;  // (1 - sqrt 2)/4

// Brute-force KD weight <b|a><a|rho|b> for pure rho = |psi><psi|.
oracle::C kd_weight_oracle(const StateVector& a, const StateVector& b, const StateVector& psi) {
  const oracle::Vec av = oracle::from_state(a);
  const oracle::Vec bv = oracle::from_state(b);
  const oracle::Vec pv = oracle::from_state(psi);
  return oracle::inner(bv, av) * oracle::inner(av, pv) * oracle::inner(pv, bv);
}

}  // namespace

TEST_CASE("quasi_distribution: KD weights of |0><0| with the comp/Fourier pair") {
  const OperatorFrame f = kd_frame(computational_basis(2), fourier_basis(2));
  const QuasiDistribution q =
      quasi_distribution(f, DensityOperator::pure(StateVector::basis_state(2, 0)));
  CHECK(std::abs(q.values[f.index_of({0, 0})] - Complex(0.5)) < 1e-12);  // (a=0, b=+)
  CHECK(std::abs(q.values[f.index_of({0, 1})] - Complex(0.5)) < 1e-12);  // (a=0, b=-)
  CHECK(std::abs(q.values[f.index_of({1, 0})]) < 1e-12);
  CHECK(std::abs(q.values[f.index_of({1, 1})]) < 1e-12);
  CHECK(std::abs(q.total - Complex(1.0)) < 1e-12);
}

TEST_CASE("quasi_distribution: the documented negative KD value") {
  const StateVector psi = negative_kd_state();
  const OperatorFrame f = kd_frame(computational_basis(2), fourier_basis(2));
  const QuasiDistribution q = quasi_distribution(f, DensityOperator::pure(psi));
  const Complex p0plus = q.values[f.index_of({0, 0})];

  // Against the independent scalar-product-chain oracle.
  const oracle::C want =
      kd_weight_oracle(computational_basis(2)[0], fourier_basis(2)[0], psi);
  CHECK(std::abs(p0plus - Complex(want.real(), want.imag())) < 1e-14);
  // Against the frozen value.
  CHECK(std::abs(p0plus.real() - kNegativeKdValue) < 1e-12);
  CHECK(std::abs(p0plus.imag()) < 1e-12);
}

TEST_CASE("quasi_distribution: maximally mixed state is flat on projective frames") {
  const OperatorFrame f = projective_frame(computational_basis(3));
  const QuasiDistribution q = quasi_distribution(f, DensityOperator::maximally_mixed(3));
  for (const Complex& v : q.values) CHECK(std::abs(v - Complex(1.0 / 3.0)) < 1e-14);
}

TEST_CASE("quasi_distribution: dim mismatch is rejected") {
  CHECK_THROWS_AS(quasi_distribution(kd_frame(computational_basis(2), fourier_basis(2)),
                                     DensityOperator::maximally_mixed(3)),
                  std::invalid_argument);
}

TEST_CASE("reconstruct_state: round trip over complete builtins") {
  std::vector<OperatorFrame> frames;
  frames.push_back(matrix_unit_frame(2));
  frames.push_back(matrix_unit_frame(3));
  frames.push_back(kd_frame(computational_basis(3), fourier_basis(3)));
  frames.push_back(phase_point_frame(3));
  frames.push_back(sic_frame_qubit());
  for (const OperatorFrame& f : frames) {
    for (int s = 0; s < 50; ++s) {
      const DensityOperator rho =
          DensityOperator::pure(haar_random_pure(f.dim(), 400 + static_cast<std::uint64_t>(s)));
      const Operator rec = reconstruct_state(f, quasi_distribution(f, rho));
      CHECK(frobenius_distance(rec, rho.op()) <= 1e-10);
    }
  }
}

TEST_CASE("reconstruct_state: flat phase-point distribution gives I/3") {
  const OperatorFrame f = phase_point_frame(3);
  const QuasiDistribution q = quasi_distribution(f, DensityOperator::maximally_mixed(3));
  for (const Complex& v : q.values) CHECK(std::abs(v - Complex(1.0 / 9.0)) < 1e-13);
  CHECK(frobenius_distance(reconstruct_state(f, q),
                           Operator::identity(3) * Complex(1.0 / 3.0)) < 1e-12);
}

TEST_CASE("reconstruct_state: matrix-unit coefficients are the density-matrix entries") {
  const OperatorFrame f = matrix_unit_frame(3);
  const DensityOperator rho = testutil::random_mixed(3, 55);
  const QuasiDistribution q = quasi_distribution(f, rho);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto lab = f.label(i);  // element |n><n'| picks out <n'|rho|n>
    CHECK(std::abs(q.values[i] - rho.op().matrix()(lab[1], lab[0])) < 1e-14);
  }
  CHECK(frobenius_distance(reconstruct_state(f, q), rho.op()) < 1e-13);
}

TEST_CASE("reconstruct_state: incomplete frames are refused with the rank") {
  const OperatorFrame f = projective_frame(computational_basis(3));
  const QuasiDistribution q = quasi_distribution(f, DensityOperator::maximally_mixed(3));
  try {
    reconstruct_state(f, q);
    FAIL("expected refusal");
  } catch (const std::domain_error& err) {
    CHECK(std::string(err.what()).find("rank 3") != std::string::npos);
  }
}

TEST_CASE("predict_probability: normalization and projector cases") {
  const OperatorFrame f = phase_point_frame(3);
  const DensityOperator rho = testutil::random_mixed(3, 60);
  CHECK(std::abs(predict_probability(f, rho, Operator::identity(3)) - Complex(1.0)) < 1e-12);

  const OperatorFrame f2 = kd_frame(computational_basis(2), fourier_basis(2));
  const DensityOperator zero = DensityOperator::pure(StateVector::basis_state(2, 0));
  CHECK(std::abs(predict_probability(f2, zero, StateVector::basis_state(2, 0).projector()) -
                 Complex(1.0)) < 1e-12);
}

TEST_CASE("predict_probability: equals the direct product trace") {
  const OperatorFrame f = phase_point_frame(3);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const DensityOperator rho = testutil::random_mixed(3, 600 + s);
    const Operator e = testutil::random_effect(3, 700 + s);
    const Complex via_frame = predict_probability(f, rho, e);
    const oracle::C direct =
        oracle::trace(oracle::mul(oracle::from_op(e), oracle::from_op(rho.op())));
    CHECK(std::abs(via_frame - Complex(direct.real(), direct.imag())) <= 1e-10);
  }
}

TEST_CASE("predict_probability: incomplete frame refused") {
  const OperatorFrame f = projective_frame(computational_basis(2));
  CHECK_THROWS_AS(
      predict_probability(f, DensityOperator::maximally_mixed(2), Operator::identity(2)),
      std::domain_error);
}

TEST_CASE("marginals_kd: Born probabilities on both sides") {
  const OperatorFrame f = kd_frame(computational_basis(2), fourier_basis(2));
  const DensityOperator zero = DensityOperator::pure(StateVector::basis_state(2, 0));
  const KdMarginals m = marginals_kd(f, quasi_distribution(f, zero));
  CHECK(m.over_a[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(m.over_a[1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(m.over_b[0] == Catch::Approx(0.5).margin(1e-12));
  CHECK(m.over_b[1] == Catch::Approx(0.5).margin(1e-12));

  const KdMarginals mm = marginals_kd(f, quasi_distribution(f, DensityOperator::maximally_mixed(2)));
  CHECK(mm.over_a[0] == Catch::Approx(0.5).margin(1e-12));
  CHECK(mm.over_b[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("marginals_kd: imaginary parts vanish and values match Born weights") {
  const auto basis_a = computational_basis(3);
  const auto basis_b = fourier_basis(3);
  const OperatorFrame f = kd_frame(basis_a, basis_b);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator rho = testutil::random_mixed(3, 800 + s);
    const KdMarginals m = marginals_kd(f, quasi_distribution(f, rho));
    CHECK(m.max_imaginary <= 1e-12);
    for (Index k = 0; k < 3; ++k) {
      const oracle::C born_a =
          oracle::expectation(oracle::from_op(rho.op()), oracle::from_state(basis_a[k]));
      const oracle::C born_b =
          oracle::expectation(oracle::from_op(rho.op()), oracle::from_state(basis_b[k]));
      CHECK(std::abs(m.over_a[k] - born_a.real()) <= 1e-10);
      CHECK(std::abs(m.over_b[k] - born_b.real()) <= 1e-10);
    }
  }
}

TEST_CASE("marginals_kd: wrong index scheme is rejected") {
  const OperatorFrame f = projective_frame(computational_basis(2));
  const QuasiDistribution q = quasi_distribution(f, DensityOperator::maximally_mixed(2));
  CHECK_THROWS_AS(marginals_kd(f, q), std::invalid_argument);
}

TEST_CASE("negativity: zero for genuine distributions, the documented value otherwise") {
  const OperatorFrame proj = projective_frame(computational_basis(3));
  CHECK(negativity(quasi_distribution(proj, testutil::random_mixed(3, 90))) < 1e-12);

  const OperatorFrame kd = kd_frame(computational_basis(2), fourier_basis(2));
  const QuasiDistribution q = quasi_distribution(kd, DensityOperator::pure(negative_kd_state()));
  CHECK(negativity(q) == Catch::Approx(-kNegativeKdValue).epsilon(1e-9));

  const OperatorFrame pp = phase_point_frame(3);
  const QuasiDistribution qpp =
      quasi_distribution(pp, DensityOperator::pure(haar_random_pure(3, 91)));
  const double n = negativity(qpp);
  CHECK(n >= 0.0);
  CHECK(std::isfinite(n));
  // Hermitian elements give real-valued weights.
  for (const Complex& v : qpp.values) CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("reconstruction_negativity: projective zero, SIC and phase-point at -1") {
  const ReconstructionNegativity proj =
      reconstruction_negativity(projective_frame(computational_basis(2)));
  CHECK(proj.min_eigenvalue == Catch::Approx(0.0).margin(1e-12));

  const ReconstructionNegativity sic = reconstruction_negativity(sic_frame_qubit());
  CHECK(sic.min_eigenvalue < 0.0);

  const ReconstructionNegativity pp = reconstruction_negativity(phase_point_frame(3));
  CHECK(pp.min_eigenvalue == Catch::Approx(-1.0));

  const ReconstructionNegativity mu = reconstruction_negativity(matrix_unit_frame(3));
  CHECK(mu.non_hermitian_count == 6);  // all off-diagonal duals
}

TEST_CASE("simulate_tomography: exact probabilities invert to the state") {
  const OperatorFrame f = sic_frame_qubit();
  const DensityOperator rho = testutil::random_mixed(2, 95);
  const QuasiDistribution q = quasi_distribution(f, rho);
  std::vector<double> exact;
  for (const Complex& v : q.values) exact.push_back(v.real());
  const Operator est = linear_inversion(f, exact);
  CHECK(frobenius_distance(est, rho.op()) <= 1e-10);
}

TEST_CASE("simulate_tomography: determinism, counts, and unit trace") {
  const OperatorFrame f = sic_frame_qubit();
  const DensityOperator rho = DensityOperator::pure(StateVector::basis_state(2, 0));
  const TomographyRun a = simulate_tomography(f, rho, 20000, 7);
  const TomographyRun b = simulate_tomography(f, rho, 20000, 7);
  CHECK(a.counts == b.counts);
  std::int64_t total = 0;
  for (std::int64_t c : a.counts) total += c;
  CHECK(total == 20000);
  CHECK(std::abs(a.estimate.trace() - Complex(1.0)) < 1e-12);
  CHECK(a.trace_distance < 0.05);

  const TomographyRun c = simulate_tomography(f, rho, 20000, 8);
  CHECK(a.counts != c.counts);
}

TEST_CASE("simulate_tomography: non-POVM frames are rejected") {
  CHECK_THROWS_AS(simulate_tomography(kd_frame(computational_basis(2), fourier_basis(2)),
                                      DensityOperator::maximally_mixed(2), 1000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_tomography(projective_frame(computational_basis(2)),
                                      DensityOperator::maximally_mixed(2), 1000, 1),
                  std::domain_error);  // POVM but incomplete
}

TEST_CASE("simulate_tomography: N = 1e5 keeps 95% of seeds below 0.02 trace distance") {
  const OperatorFrame f = sic_frame_qubit();
  const DensityOperator rho = DensityOperator::pure(StateVector::basis_state(2, 0));
  int ok = 0;
  const int trials = 200;
  for (int s = 0; s < trials; ++s)
    if (simulate_tomography(f, rho, 100000, 10000 + static_cast<std::uint64_t>(s)).trace_distance <=
        0.02)
      ++ok;
  CHECK(ok >= static_cast<int>(0.95 * trials));
}
