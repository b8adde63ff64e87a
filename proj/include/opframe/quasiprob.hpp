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

#include <cstdint>
#include <string>
#include <vector>

#include "opframe/frames.hpp"

namespace opframe {

inline OperatorFrame ensure_duals(const OperatorFrame& f,
                                  const Tolerance& tol = Tolerance::defaults()) {
  return f.has_duals() ? f : dual_frame(f, tol);
}

inline int frame_rank(const OperatorFrame& f) {
  if (f.rank() >= 0) return f.rank();
  return detail::analyze_gram(detail::hs_gram(f.elements())).rank;
}

inline bool frame_is_complete(const OperatorFrame& f) {
  return frame_rank(f) == static_cast<int>(f.dim() * f.dim());
}

inline void require_complete(const OperatorFrame& f, const char* who) {
  const int r = frame_rank(f);
  if (r != static_cast<int>(f.dim() * f.dim()))
    throw std::domain_error(std::string(who) + ": frame '" + f.name() +
                            "' is incomplete (rank " + std::to_string(r) + " of " +
                            std::to_string(f.dim() * f.dim()) + ")");
}

inline void require_effect(const Operator& e, const char* who,
                           const Tolerance& tol = Tolerance::defaults()) {
  const double eps = std::max(tol.absolute, 1e-9);
  if (e.max_asymmetry() > eps)
    throw std::invalid_argument(std::string(who) + ": effect is not Hermitian");
  const HermitianEig eig = hermitian_eig(e, Tolerance{eps, tol.relative});
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -eps ||
      eig.eigenvalues(0) > 1.0 + eps)
    throw std::invalid_argument(std::string(who) + ": effect spectrum is outside [0, 1]");
}

/// Complex-valued weights P(i|a) = Tr(element(i) rho) over a frame's index
/// set. The total is Tr(rho) whenever the elements sum to identity.
struct QuasiDistribution {
  std::string frame_id;
  std::vector<Complex> values;
  Complex total{0.0, 0.0};
};

inline QuasiDistribution quasi_distribution(const OperatorFrame& frame,
                                            const DensityOperator& rho) {
  if (rho.dim() != frame.dim())
    throw std::invalid_argument("quasi_distribution: state and frame dims differ");
  QuasiDistribution q;
  q.frame_id = frame.name();
  q.values.reserve(frame.size());
  for (const Operator& e : frame.elements()) {
    const Complex p = (e * rho.op()).trace();
    q.values.push_back(p);
    q.total += p;
  }
  return q;
}

/// rho = sum_i P(i) dual(i); exact for complete frames.
inline Operator reconstruct_state(const OperatorFrame& frame, const QuasiDistribution& q) {
  require_complete(frame, "reconstruct_state");
  const OperatorFrame f = ensure_duals(frame);
  if (q.values.size() != f.size())
    throw std::invalid_argument("reconstruct_state: value count does not match the frame");
  Matrix acc = Matrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) acc += q.values[i] * f.dual(i).matrix();
  return Operator(std::move(acc), {f.dim()});
}

/// P(b|a) through the element expansion: sum_i Tr(E dual(i)) Tr(element(i) rho).
/// Equals Tr(E rho) for complete frames.
inline Complex predict_probability(const OperatorFrame& frame, const DensityOperator& rho,
                                   const Operator& effect,
                                   const Tolerance& tol = Tolerance::defaults()) {
  require_complete(frame, "predict_probability");
  require_effect(effect, "predict_probability", tol);
  if (rho.dim() != frame.dim() || effect.dim() != frame.dim())
    throw std::invalid_argument("predict_probability: dim mismatch");
  const OperatorFrame f = ensure_duals(frame, tol);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += (effect * f.dual(i)).trace() * (f.element(i) * rho.op()).trace();
  return acc;
}

struct KdMarginals {
  std::vector<double> over_a;  // sum_b P(a,b), the Born weights of basis_a
  std::vector<double> over_b;  // sum_a P(a,b), the Born weights of basis_b
  double max_imaginary = 0.0;  // largest imaginary part dropped
};

inline KdMarginals marginals_kd(const OperatorFrame& frame, const QuasiDistribution& q) {
  if (frame.index_scheme() != IndexScheme::pair)
    throw std::invalid_argument("marginals_kd: frame does not use a pair index scheme");
  if (q.values.size() != frame.size())
    throw std::invalid_argument("marginals_kd: value count does not match the frame");
  const Index d = frame.dim();
  KdMarginals m;
  m.over_a.assign(static_cast<std::size_t>(d), 0.0);
  m.over_b.assign(static_cast<std::size_t>(d), 0.0);
  std::vector<Complex> acc_a(static_cast<std::size_t>(d)), acc_b(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const auto lab = frame.label(i);
    acc_a[static_cast<std::size_t>(lab[0])] += q.values[i];
    acc_b[static_cast<std::size_t>(lab[1])] += q.values[i];
  }
  for (Index k = 0; k < d; ++k) {
    m.over_a[k] = acc_a[k].real();
    m.over_b[k] = acc_b[k].real();
    m.max_imaginary = std::max({m.max_imaginary, std::abs(acc_a[k].imag()),
                                std::abs(acc_b[k].imag())});
  }
  return m;
}

/// Negative-real mass plus imaginary mass; zero iff every value is a
/// non-negative real.
struct NegativityBreakdown {
  double negative_real = 0.0;
  double imaginary = 0.0;
  double total() const { return negative_real + imaginary; }
};

inline NegativityBreakdown negativity_breakdown(const QuasiDistribution& q) {
  NegativityBreakdown n;
  for (const Complex& v : q.values) {
    n.negative_real += std::max(0.0, -v.real());
    n.imaginary += std::abs(v.imag());
  }
  return n;
}

inline double negativity(const QuasiDistribution& q) { return negativity_breakdown(q).total(); }

struct ReconstructionNegativity {
  double min_eigenvalue = 0.0;
  int argmin_index = -1;
  int non_hermitian_count = 0;  // duals excluded from the eigenvalue scan
};

/// Minimum eigenvalue over all Hermitian duals. Non-Hermitian duals (e.g.
/// matrix units) carry no spectrum claim and are counted separately.
inline ReconstructionNegativity reconstruction_negativity(
    const OperatorFrame& frame, const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = ensure_duals(frame, tol);
  const double eps = std::max(tol.absolute, 1e-9);
  ReconstructionNegativity out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.dual(i).max_asymmetry() > eps) {
      ++out.non_hermitian_count;
      continue;
    }
    const double lo = min_eigenvalue(f.dual(i), Tolerance{eps, tol.relative});
    if (lo < out.min_eigenvalue) {
      out.min_eigenvalue = lo;
      out.argmin_index = static_cast<int>(i);
    }
  }
  if (out.argmin_index < 0) out.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  return out;
}

/// Linear-inversion estimate from outcome frequencies; no positivity
/// projection is applied (negativity of the raw estimate is the signal).
inline Operator linear_inversion(const OperatorFrame& frame, const std::vector<double>& freqs) {
  require_complete(frame, "linear_inversion");
  const OperatorFrame f = ensure_duals(frame);
  if (freqs.size() != f.size())
    throw std::invalid_argument("linear_inversion: frequency count does not match the frame");
  Matrix acc = Matrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) acc += Complex(freqs[i]) * f.dual(i).matrix();
  return Operator(std::move(acc), {f.dim()});
}

struct TomographyRun {
  std::string frame_id;
  Operator true_state;
  std::int64_t shots = 0;
  std::vector<std::int64_t> counts;
  Operator estimate;
  double trace_distance = 0.0;
  double min_eigenvalue = 0.0;
  std::uint64_t seed = 0;
};

/// Simulated tomography: multinomial counts from the Born probabilities of a
/// complete POVM frame, inverted linearly through the duals. Sampling is
/// inverse-CDF on the cumulative probability list, deterministic per seed.
inline TomographyRun simulate_tomography(const OperatorFrame& frame, const DensityOperator& rho,
                                         std::int64_t shots, std::uint64_t seed,
                                         const Tolerance& tol = Tolerance::defaults()) {
  if (frame.flavor() != FrameFlavor::povm)
    throw std::invalid_argument("simulate_tomography: frame '" + frame.name() +
                                "' is not a POVM frame");
  require_complete(frame, "simulate_tomography");
  if (shots <= 0) throw std::invalid_argument("simulate_tomography: shots must be positive");
  const OperatorFrame f = ensure_duals(frame, tol);

  const QuasiDistribution q = quasi_distribution(f, rho);
  std::vector<double> cdf(f.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    acc += std::max(0.0, q.values[i].real());
    cdf[i] = acc;
  }
  const double norm = cdf.back();

  TomographyRun run;
  run.frame_id = f.name();
  run.true_state = rho.op();
  run.shots = shots;
  run.seed = seed;
  run.counts.assign(f.size(), 0);
  Rng rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * norm;
    std::size_t lo = 0;
    while (lo + 1 < cdf.size() && cdf[lo] <= u) ++lo;
    ++run.counts[lo];
  }

  std::vector<double> freqs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    freqs[i] = static_cast<double>(run.counts[i]) / static_cast<double>(shots);
  run.estimate = linear_inversion(f, freqs);

  const Operator diff = rho.op() - run.estimate;
  const HermitianEig eig = hermitian_eig(diff, Tolerance{1e-6, 1e-6});
  run.trace_distance = 0.5 * eig.eigenvalues.cwiseAbs().sum();
  run.min_eigenvalue = min_eigenvalue(run.estimate, Tolerance{1e-6, 1e-6});
  return run;
}

}  // namespace opframe
