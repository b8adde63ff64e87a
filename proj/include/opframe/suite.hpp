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

#include <functional>
#include <map>
#include <optional>

#include "opframe/json_io.hpp"
#include "opframe/opframe.hpp"

namespace opframe::suite {

struct Options {
  std::vector<Index> dims{2, 3};
  Tolerance tol = Tolerance::defaults();
  std::uint64_t seed = 20260810;
  std::optional<std::string> frame_filter;
};

struct CheckResult {
  std::string tag;
  std::string module;
  bool passed = true;
  Json details = Json::object();

  void record(const std::string& key, double value, double bound) {
    details[key] = {{"value", value}, {"bound", bound}, {"ok", value <= bound}};
    if (!(value <= bound)) passed = false;
  }
  void record_flag(const std::string& key, bool ok) {
    details[key] = ok;
    if (!ok) passed = false;
  }
};

namespace detail {

inline Operator random_effect(Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c) g(r, c) = Complex(rng.gauss(), rng.gauss());
  const Matrix h = (g + g.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double span = (hi - lo > 1e-12) ? (hi - lo) : 1.0;
  Matrix e = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k)
    e += ((es.eigenvalues()(k) - lo) / span) *
         (es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
  return Operator(std::move(e), {d});
}

inline DensityOperator random_mixed(Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix acc = Matrix::Zero(d, d);
  double total = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double w = rng.uniform() + 0.1;
    acc += w * haar_random_pure(d, seed * 977 + static_cast<std::uint64_t>(k) + 1)
                   .projector()
                   .matrix();
    total += w;
  }
  return DensityOperator(Operator(Matrix(acc / total), {d}));
}

/// Complete builtin frames available at dimension d, honoring the filter.
inline std::vector<OperatorFrame> complete_builtins(Index d, const Options& opt) {
  std::vector<OperatorFrame> out;
  const auto want = [&](const char* name) {
    return !opt.frame_filter || *opt.frame_filter == name;
  };
  if (want("matrix-unit")) out.push_back(matrix_unit_frame(d));
  if (want("kd")) out.push_back(kd_frame(computational_basis(d), fourier_basis(d), opt.tol));
  if (is_odd_prime(d) && want("phase-point")) out.push_back(phase_point_frame(d));
  if (d == 2 && (want("sic2") || (opt.frame_filter && *opt.frame_filter == "sic")))
    out.push_back(sic_frame_qubit());
  return out;
}

}  // namespace detail

using CheckFn = std::function<CheckResult(const Options&)>;

struct CheckEntry {
  std::string tag;
  std::string module;
  CheckFn run;
};

inline std::vector<CheckEntry> registry() {
  std::vector<CheckEntry> checks;

  checks.push_back({"core-identities", "hilbert_core", [](const Options& opt) {
    CheckResult res{"core-identities", "hilbert_core"};
    for (Index d : opt.dims) {
      Rng rng(opt.seed + static_cast<std::uint64_t>(d));
      Matrix am(d, d), bm(d, d);
      for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d; ++c) {
          am(r, c) = Complex(rng.gauss(), rng.gauss());
          bm(r, c) = Complex(rng.gauss(), rng.gauss());
        }
      const Operator a(am, {d}), b(bm, {d});
      const std::string key = "d" + std::to_string(d);
      res.record(key + ".tensor_trace",
                 std::abs(tensor(a, b).trace() - a.trace() * b.trace()), 1e-10);
      const Operator x = tensor(a, b);
      res.record(key + ".pt_involution",
                 frobenius_distance(
                     partial_transpose(partial_transpose(x, Subsystem::second), Subsystem::second),
                     x),
                 1e-12);
      res.record(key + ".ptrace_consistency",
                 frobenius_distance(partial_trace(x, Subsystem::first), a * b.trace()), 1e-10);
      double comp = 0.0;
      const double two_pi = 2.0 * 3.14159265358979323846;
      for (Index q = 0; q < d; ++q)
        for (Index p = 0; p < d; ++p)
          for (Index qp = 0; qp < d; ++qp)
            for (Index pp = 0; pp < d; ++pp) {
              const Complex phase =
                  std::polar(1.0, two_pi * static_cast<double>((p * qp) % d) /
                                      static_cast<double>(d));
              comp = std::max(comp, frobenius_distance(
                                        weyl_operator(d, q, p) * weyl_operator(d, qp, pp),
                                        phase * weyl_operator(d, q + qp, p + pp)));
            }
      res.record(key + ".weyl_composition", comp, 1e-12);
    }
    return res;
  }});

  checks.push_back({"no-go", "frames", [](const Options& opt) {
    CheckResult res{"no-go", "frames"};
    int worst = 0;
    for (Index d : opt.dims) {
      std::vector<OperatorFrame> frames = detail::complete_builtins(d, opt);
      if (!opt.frame_filter || *opt.frame_filter == "projective")
        frames.push_back(projective_frame(computational_basis(d), opt.tol));
      for (std::uint64_t s = 0; s < 10; ++s)
        frames.push_back(deformed_matrix_unit_frame(d, opt.seed + 31 * s + static_cast<std::uint64_t>(d)));
      for (const OperatorFrame& f : frames) {
        const ConditionReport rep = check_conditions(f, opt.tol);
        worst = std::max(worst, rep.satisfied_count);
        no_go_certificate(f, opt.tol);  // must produce a witness without throwing
      }
    }
    res.details["max_satisfied_count"] = worst;
    res.record_flag("at_most_two_conditions", worst <= 2);
    return res;
  }});

  checks.push_back({"eq-causality", "quasiprob", [](const Options& opt) {
    CheckResult res{"eq-causality", "quasiprob"};
    for (Index d : opt.dims)
      for (const OperatorFrame& f : detail::complete_builtins(d, opt)) {
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 25; ++s) {
          const DensityOperator rho = detail::random_mixed(d, opt.seed + 7 * s);
          const Operator e = detail::random_effect(d, opt.seed + 11 * s + 1);
          const Complex direct = (e * rho.op()).trace();
          worst = std::max(worst, std::abs(predict_probability(f, rho, e, opt.tol) - direct));
        }
        res.record(f.name() + ".d" + std::to_string(d), worst, 1e-10);
      }
    return res;
  }});

  checks.push_back({"eq-reconstruction", "quasiprob", [](const Options& opt) {
    CheckResult res{"eq-reconstruction", "quasiprob"};
    for (Index d : opt.dims)
      for (const OperatorFrame& f : detail::complete_builtins(d, opt)) {
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 10; ++s) {
          const DensityOperator rho =
              DensityOperator::pure(haar_random_pure(d, opt.seed + 13 * s));
          worst = std::max(worst, frobenius_distance(
                                      reconstruct_state(f, quasi_distribution(f, rho)), rho.op()));
        }
        res.record(f.name() + ".d" + std::to_string(d), worst, 1e-9);
      }
    return res;
  }});

  checks.push_back({"eq-marginals", "quasiprob", [](const Options& opt) {
    CheckResult res{"eq-marginals", "quasiprob"};
    for (Index d : opt.dims) {
      const auto ba = computational_basis(d);
      const auto bb = fourier_basis(d);
      const OperatorFrame f = kd_frame(ba, bb, opt.tol);
      double worst = 0.0;
      for (std::uint64_t s = 0; s < 10; ++s) {
        const DensityOperator rho = detail::random_mixed(d, opt.seed + 17 * s);
        const KdMarginals m = marginals_kd(f, quasi_distribution(f, rho));
        worst = std::max(worst, m.max_imaginary);
        for (Index k = 0; k < d; ++k) {
          const double born_a =
              (ba[k].amplitudes().adjoint() * rho.op().matrix() * ba[k].amplitudes())(0, 0).real();
          const double born_b =
              (bb[k].amplitudes().adjoint() * rho.op().matrix() * bb[k].amplitudes())(0, 0).real();
          worst = std::max({worst, std::abs(m.over_a[k] - born_a), std::abs(m.over_b[k] - born_b)});
        }
      }
      res.record("kd.d" + std::to_string(d), worst, 1e-10);
    }
    // The documented negative KD value at d=2.
    const double pi = 3.14159265358979323846;
    const StateVector psi(
        (Vector(2) << std::sin(pi / 8.0), -std::cos(pi / 8.0)).finished());
    const OperatorFrame f2 = kd_frame(computational_basis(2), fourier_basis(2), opt.tol);
    const QuasiDistribution q = quasi_distribution(f2, DensityOperator::pure(psi));
    const double neg_value = q.values[f2.index_of({0, 0})].real();
    res.details["negative_kd_value"] = neg_value;
    res.record_flag("negative_value_present", std::abs(neg_value - (-0.1036)) <= 1e-3);
    return res;
  }});

  checks.push_back({"tomo-inversion", "quasiprob", [](const Options& opt) {
    CheckResult res{"tomo-inversion", "quasiprob"};
    const OperatorFrame f = sic_frame_qubit();
    const DensityOperator rho = detail::random_mixed(2, opt.seed);
    const QuasiDistribution q = quasi_distribution(f, rho);
    std::vector<double> exact;
    for (const Complex& v : q.values) exact.push_back(v.real());
    res.record("exact_inversion", frobenius_distance(linear_inversion(f, exact), rho.op()), 1e-10);
    const TomographyRun run = simulate_tomography(f, rho, 10000, opt.seed, opt.tol);
    res.record("sampled_run_n1e4", run.trace_distance, 0.1);
    const ReconstructionNegativity rn = reconstruction_negativity(f, opt.tol);
    res.details["sic_dual_min_eigenvalue"] = rn.min_eigenvalue;
    res.record_flag("sic_dual_negative", rn.min_eigenvalue < 0.0);
    return res;
  }});

  checks.push_back({"eq-swap", "correlations", [](const Options& opt) {
    CheckResult res{"eq-swap", "correlations"};
    for (Index d : opt.dims)
      for (const OperatorFrame& f : detail::complete_builtins(d, opt)) {
        const SwapIdentityReport rep = verify_swap_identity(f, opt.tol);
        res.record(f.name() + ".d" + std::to_string(d), rep.residual,
                   opt.tol.absolute);
      }
    return res;
  }});

  checks.push_back({"eq-fill", "correlations", [](const Options& opt) {
    CheckResult res{"eq-fill", "correlations"};
    bool any = false;
    for (Index d : opt.dims) {
      if (d == 2 && (!opt.frame_filter || *opt.frame_filter == "sic2")) {
        const SwapIdentityReport rep = verify_fill_identity(sic_frame_qubit(), opt.tol);
        res.record("sic2.fill_residual", rep.fill_residual, opt.tol.absolute);
        res.record("sic2.sym_projector_residual", rep.sym_projector_residual, 1e-12);
        res.record_flag("sic2.sym_rank", rep.sym_rank == 3);
        any = true;
      }
      const Operator s = swap_operator(d);
      const Matrix p = (s.matrix() + Matrix::Identity(d * d, d * d)) / 2.0;
      res.record("d" + std::to_string(d) + ".idempotency", (p * p - p).norm(), 1e-12);
      Eigen::SelfAdjointEigenSolver<Matrix> es(p);
      int rank = 0;
      for (Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) > 0.5) ++rank;
      res.record_flag("d" + std::to_string(d) + ".sym_rank",
                      rank == static_cast<int>(d * (d + 1) / 2));
      any = true;
    }
    res.record_flag("checked_anything", any);
    return res;
  }});

  checks.push_back({"eq-pt", "correlations", [](const Options& opt) {
    CheckResult res{"eq-pt", "correlations"};
    for (Index d : opt.dims) {
      res.record("d" + std::to_string(d) + ".pt_residual", verify_pt_swap(d), 1e-12);
      const Operator pt = partial_transpose(max_entangled_projector(d), Subsystem::second);
      const double lo = min_eigenvalue(pt, opt.tol);
      res.record("d" + std::to_string(d) + ".min_eigenvalue_error",
                 std::abs(lo + 1.0 / static_cast<double>(d)), 1e-12);
    }
    return res;
  }});

  checks.push_back({"eq-entangled-expansion", "correlations", [](const Options& opt) {
    CheckResult res{"eq-entangled-expansion", "correlations"};
    for (Index d : opt.dims)
      for (const OperatorFrame& f : detail::complete_builtins(d, opt)) {
        if (!f.has_weights()) continue;  // orthogonality required
        res.record(f.name() + ".d" + std::to_string(d), entangled_expansion(f, opt.tol),
                   opt.tol.absolute);
      }
    return res;
  }});

  checks.push_back({"eq-bellm", "protocols", [](const Options& opt) {
    CheckResult res{"eq-bellm", "protocols"};
    bool any = false;
    for (Index d : opt.dims) {
      if (!is_odd_prime(d)) continue;
      const BellExpansionReport rep = verify_bellm_expansion(d, opt.tol);
      const std::string key = "d" + std::to_string(d);
      res.record(key + ".worst_residual", rep.worst_residual, opt.tol.absolute);
      res.record(key + ".sum_identity", rep.sum_identity_residual, 1e-10);
      res.record(key + ".rank1_top", rep.worst_top_eigenvalue_error, 1e-9);
      res.record(key + ".rank1_rest", rep.worst_subdominant_eigenvalue, 1e-9);
      res.record_flag(key + ".bijective_matching", rep.matching_bijective);
      any = true;
    }
    if (!any) res.details["note"] = "no odd prime dimension selected; nothing to check";
    return res;
  }});

  checks.push_back({"eq-teleport", "protocols", [](const Options& opt) {
    CheckResult res{"eq-teleport", "protocols"};
    for (Index d : opt.dims) {
      double fid_err = 0.0, prob_err = 0.0, frame_resid = 0.0, prob_sum_err = 0.0;
      for (std::uint64_t s = 0; s < 5; ++s) {
        const DensityOperator in =
            DensityOperator::pure(haar_random_pure(d, opt.seed + 19 * s));
        double prob_sum = 0.0;
        for (const TeleportationOutcome& out : teleport_all_outcomes(in, d, opt.tol)) {
          fid_err = std::max(fid_err, std::abs(out.fidelity_after_correction - 1.0));
          prob_err = std::max(prob_err,
                              std::abs(out.probability - 1.0 / static_cast<double>(d * d)));
          if (is_odd_prime(d)) frame_resid = std::max(frame_resid, out.frame_sum_residual);
          prob_sum += out.probability;
        }
        prob_sum_err = std::max(prob_sum_err, std::abs(prob_sum - 1.0));
      }
      const std::string key = "d" + std::to_string(d);
      res.record(key + ".fidelity_error", fid_err, 1e-9);
      res.record(key + ".probability_error", prob_err, 1e-10);
      res.record(key + ".probability_sum_error", prob_sum_err, 1e-10);
      if (is_odd_prime(d)) res.record(key + ".frame_sum_residual", frame_resid, 1e-9);
    }
    return res;
  }});

  checks.push_back({"eq-clone", "protocols", [](const Options& opt) {
    CheckResult res{"eq-clone", "protocols"};
    for (Index d : opt.dims) {
      double fid_err = 0.0, sym_resid = 0.0, trace_err = 0.0;
      const double want = static_cast<double>(d + 3) / (2.0 * static_cast<double>(d + 1));
      for (std::uint64_t s = 0; s < 5; ++s) {
        const DensityOperator in =
            DensityOperator::pure(haar_random_pure(d, opt.seed + 23 * s));
        const Operator out = clone_map(in);
        fid_err = std::max(fid_err,
                           std::abs(state_fidelity_against(in, partial_trace(out, Subsystem::first)) -
                                    want));
        const Operator sw = swap_operator(d);
        sym_resid = std::max(sym_resid, frobenius_distance(sw * out * sw, out));
        trace_err = std::max(trace_err, std::abs(out.trace() - Complex(1.0)));
      }
      const std::string key = "d" + std::to_string(d);
      res.record(key + ".fidelity_vs_formula", fid_err, 1e-10);
      res.record(key + ".swap_symmetry", sym_resid, 1e-12);
      res.record(key + ".trace_error", trace_err, 1e-12);
    }
    return res;
  }});

  checks.push_back({"eq-ideal-copy", "protocols", [](const Options& opt) {
    CheckResult res{"eq-ideal-copy", "protocols"};
    for (Index d : opt.dims) {
      double marg_resid = 0.0;
      for (std::uint64_t s = 0; s < 5; ++s) {
        const DensityOperator in = detail::random_mixed(d, opt.seed + 29 * s);
        const Operator c = ideal_copy_component(in);
        const Complex scale(1.0 / c.trace().real());
        marg_resid = std::max(
            {marg_resid,
             frobenius_distance(partial_trace(c, Subsystem::first) * scale, in.op()),
             frobenius_distance(partial_trace(c, Subsystem::second) * scale, in.op())});
      }
      res.record("d" + std::to_string(d) + ".marginal_residual", marg_resid, 1e-10);
      for (const OperatorFrame& f : detail::complete_builtins(d, opt)) {
        const DensityOperator in = detail::random_mixed(d, opt.seed + 3);
        const IdealCopyExpansion exp = ideal_copy_expansion(f, in, opt.tol);
        const std::string key = f.name() + ".d" + std::to_string(d);
        res.record(key + ".first", exp.first_residual, opt.tol.absolute);
        res.record(key + ".second", exp.second_residual, opt.tol.absolute);
        res.record(key + ".orderings", exp.lines_disagreement, 1e-12);
      }
    }
    return res;
  }});

  checks.push_back({"eq-discrepancy", "protocols", [](const Options& opt) {
    CheckResult res{"eq-discrepancy", "protocols"};
    for (Index d : opt.dims) {
      // Trace-free discrepancies for every frame whose elements sum to I.
      std::vector<OperatorFrame> unit_sum;
      unit_sum.push_back(projective_frame(computational_basis(d), opt.tol));
      unit_sum.push_back(kd_frame(computational_basis(d), fourier_basis(d), opt.tol));
      if (is_odd_prime(d)) unit_sum.push_back(phase_point_frame(d));
      if (d == 2) unit_sum.push_back(sic_frame_qubit());
      double worst_trace = 0.0;
      for (const OperatorFrame& f : unit_sum)
        for (std::uint64_t s = 0; s < 5; ++s) {
          const DensityOperator rho = detail::random_mixed(d, opt.seed + 37 * s);
          for (std::size_t i = 0; i < f.size(); ++i)
            worst_trace =
                std::max(worst_trace, std::abs(discrepancy_state(f, i, rho, opt.tol).trace()));
        }
      res.record("d" + std::to_string(d) + ".trace", worst_trace, 1e-13);

      res.record_flag("d" + std::to_string(d) + ".projective_all_zero",
                      element_discrepancies_all_zero(unit_sum.front(), opt.tol));
      for (const OperatorFrame& f : detail::complete_builtins(d, opt))
        res.record_flag(f.name() + ".d" + std::to_string(d) + ".not_all_zero",
                        !element_discrepancies_all_zero(f, opt.tol));
    }
    return res;
  }});

  checks.push_back({"eq-joint-ideal", "protocols", [](const Options& opt) {
    CheckResult res{"eq-joint-ideal", "protocols"};
    bool saw_negative = false;
    for (Index d : opt.dims)
      for (const OperatorFrame& f : detail::complete_builtins(d, opt)) {
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 25; ++s) {
          const Operator e1 = detail::random_effect(d, opt.seed + 41 * s);
          const Operator e2 = detail::random_effect(d, opt.seed + 43 * s + 1);
          const DensityOperator rho = detail::random_mixed(d, opt.seed + 47 * s + 2);
          const JointIdealStatistics js = joint_ideal_statistics(e1, e2, rho, f, opt.tol);
          worst = std::max(worst, std::abs(js.frame_sum - js.closed_form));
          if (js.closed_form.real() < -1e-6) saw_negative = true;
        }
        res.record(f.name() + ".d" + std::to_string(d), worst, 1e-10);
      }
    // Documented negative triple at d=2.
    if (std::find(opt.dims.begin(), opt.dims.end(), 2) != opt.dims.end()) {
      const double pi = 3.14159265358979323846;
      const StateVector phi(
          (Vector(2) << std::sin(pi / 8.0), -std::cos(pi / 8.0)).finished());
      const JointIdealStatistics js = joint_ideal_statistics(
          fourier_basis(2)[0].projector(), phi.projector(),
          DensityOperator::pure(StateVector::basis_state(2, 0)), matrix_unit_frame(2), opt.tol);
      res.details["documented_negative_value"] = js.closed_form.real();
      if (js.closed_form.real() < 0.0) saw_negative = true;
    }
    res.record_flag("negative_value_in_corpus", saw_negative);
    return res;
  }});

  return checks;
}

inline std::vector<std::string> known_tags() {
  std::vector<std::string> tags;
  for (const CheckEntry& c : registry()) tags.push_back(c.tag);
  return tags;
}

inline std::vector<std::string> known_modules() {
  return {"hilbert_core", "frames", "quasiprob", "correlations", "protocols"};
}

/// Runs the checks selected by "all", a module name, or an equation tag.
/// Throws std::invalid_argument (with the tag list) for unknown selectors.
inline std::vector<CheckResult> run(const std::string& selector, const Options& opt) {
  std::vector<CheckResult> results;
  bool matched = false;
  for (const CheckEntry& c : registry()) {
    if (selector == "all" || selector == c.tag || selector == c.module) {
      results.push_back(c.run(opt));
      matched = true;
    }
  }
  if (!matched) {
    std::string tags = "all";
    for (const auto& m : known_modules()) tags += " " + m;
    for (const auto& t : known_tags()) tags += " " + t;
    throw std::invalid_argument("unknown selector '" + selector + "'; valid selectors: " + tags);
  }
  // Deterministic report order, sorted by tag.
  std::sort(results.begin(), results.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.tag < b.tag; });
  return results;
}

}  // namespace opframe::suite
