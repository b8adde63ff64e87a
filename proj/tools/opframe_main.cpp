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

// Command-line surface: every verification and simulation as a subcommand
// with machine-readable JSON output.
//
// Exit codes: 0 all selected checks pass, 1 a check failed, 2 usage or
// parse/validation error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "opframe/opframe.hpp"
#include "opframe/suite.hpp"

using namespace opframe;

namespace {

struct ReportClock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

Json make_report(const std::string& command, Json parameters, Json results,
                 const Tolerance& tol, std::optional<std::uint64_t> seed,
                 const ReportClock& clock) {
  Json report;
  report["command"] = command;
  report["parameters"] = std::move(parameters);
  report["results"] = std::move(results);
  report["tolerance_used"] = tolerance_to_json(tol);
  if (seed) report["seed"] = *seed;
  report["wall_time_ms"] = clock.elapsed_ms();
  return report;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

std::vector<Index> parse_dims(const std::string& csv) {
  std::vector<Index> dims;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long v = std::stol(item);
    if (v < 2) throw CLI::ValidationError("--dims", "dimensions must be at least 2");
    dims.push_back(static_cast<Index>(v));
  }
  if (dims.empty()) throw CLI::ValidationError("--dims", "empty dimension list");
  return dims;
}

DensityOperator load_state(const std::string& path, const Tolerance& tol) {
  const Operator op = read_operator_file(path);
  std::string why;
  if (!DensityOperator::is_valid(op, tol, &why))
    throw std::invalid_argument("state in '" + path + "' is not physical: " + why);
  return DensityOperator(op, tol);
}

Json spectrum_json(const Operator& op, const Tolerance& tol) {
  const HermitianEig eig = hermitian_eig(op, Tolerance{std::max(tol.absolute, 1e-9), 1e-9});
  Json vals = Json::array();
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) vals.push_back(eig.eigenvalues(k));
  return vals;
}

Json teleport_outcome_json(const TeleportationOutcome& out, bool include_state) {
  Json j;
  j["outcome"] = {out.outcome[0], out.outcome[1]};
  j["probability"] = out.probability;
  j["correction_label"] = {out.correction_label[0], out.correction_label[1]};
  j["correction_residual"] = out.correction_residual;
  j["fidelity_after_correction"] = out.fidelity_after_correction;
  if (!std::isnan(out.frame_sum_residual)) {
    j["frame_sum_residual"] = out.frame_sum_residual;
    j["frame_shift"] = {out.frame_shift[0], out.frame_shift[1]};
  }
  if (include_state) j["conditional_remote"] = operator_to_json(out.conditional_remote);
  return j;
}

int run_verify(const std::string& selector, const suite::Options& opt,
               const std::optional<std::string>& out_path, const ReportClock& clock) {
  const std::vector<suite::CheckResult> results = suite::run(selector, opt);
  bool all_passed = true;
  Json checks = Json::array();
  for (const suite::CheckResult& r : results) {
    checks.push_back(
        {{"tag", r.tag}, {"module", r.module}, {"passed", r.passed}, {"details", r.details}});
    all_passed = all_passed && r.passed;
  }
  Json dims = Json::array();
  for (Index d : opt.dims) dims.push_back(d);
  Json params{{"selector", selector}, {"dims", dims}};
  if (opt.frame_filter) params["frame"] = *opt.frame_filter;
  const Json report =
      make_report("verify", params, Json{{"checks", checks}, {"passed", all_passed}}, opt.tol,
                  opt.seed, clock);
  emit(report);
  if (out_path) write_json_file(*out_path, report);
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-expansion calculus for finite-dimensional quantum statistics"};
  app.require_subcommand(1);
  ReportClock clock;

  Tolerance tol = Tolerance::defaults();
  double tol_flag = -1.0;
  // Lives on the root so every subcommand accepts it; fallthrough is set on
  // each subcommand below once they all exist.
  app.add_option("--tol", tol_flag, "absolute tolerance (default 1e-9, or OPFRAME_TOL)");

  // ---- verify ------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run equation checks (all | module | eq-tag)");
  std::string selector = "all";
  std::string dims_csv = "2,3";
  Index dim_flag = 0;
  std::string frame_name;
  std::uint64_t seed = 20260810;
  std::optional<std::string> out_path;
  std::string out_flag;
  verify->add_option("selector", selector, "all, a module name, or an equation tag");
  verify->add_option("--dims", dims_csv, "comma-separated dimensions (default 2,3)");
  verify->add_option("--dim", dim_flag, "single dimension (overrides --dims)");
  verify->add_option("--frame", frame_name, "restrict frame-indexed checks to one builtin");
  verify->add_option("--seed", seed, "seed for randomized checks");
  verify->add_option("--out", out_flag, "also write the JSON report to this path");

  // ---- describe ----------------------------------------------------------
  auto* describe = app.add_subcommand("describe", "inspect a frame, state, or report");
  auto* describe_frame = describe->add_subcommand("frame", "condition report for a frame");
  std::string builtin_name, file_path;
  Index frame_dim = 2;
  describe_frame->add_option("--builtin", builtin_name, "builtin frame name");
  describe_frame->add_option("--file", file_path, "frame JSON file");
  describe_frame->add_option("--dim", frame_dim, "dimension for builtin frames");
  auto* describe_state = describe->add_subcommand("state", "spectrum and purity of a state");
  std::string state_path;
  describe_state->add_option("--file", state_path, "operator JSON file")->required();
  auto* describe_report = describe->add_subcommand("report", "echo a stored report");
  std::string report_path;
  describe_report->add_option("--file", report_path, "report JSON file")->required();

  // ---- frame describe (spec alias) ----------------------------------------
  auto* frame_cmd = app.add_subcommand("frame", "frame utilities");
  auto* frame_describe = frame_cmd->add_subcommand("describe", "condition report for a builtin");
  std::string frame_describe_name;
  Index frame_describe_dim = 2;
  frame_describe->add_option("--name", frame_describe_name, "builtin frame name")->required();
  frame_describe->add_option("--dim", frame_describe_dim, "dimension");

  // ---- qp ------------------------------------------------------------------
  auto* qp = app.add_subcommand("qp", "quasi-probability distributions and tomography");
  auto* qp_dist = qp->add_subcommand("dist", "quasi-probability of a state in a frame");
  std::string qp_frame = "kd", qp_state, qp_out;
  Index qp_dim = 2;
  qp_dist->add_option("--frame", qp_frame, "builtin frame name");
  qp_dist->add_option("--dim", qp_dim, "dimension");
  qp_dist->add_option("--state", qp_state, "state JSON file")->required();
  qp_dist->add_option("--out", qp_out, "CSV output path");
  auto* qp_tomo = qp->add_subcommand("tomo", "simulated linear-inversion tomography");
  std::string tomo_frame = "sic2", tomo_state, tomo_out;
  Index tomo_dim = 2;
  std::int64_t tomo_shots = 100000;
  std::uint64_t tomo_seed = 0;
  qp_tomo->add_option("--frame", tomo_frame, "builtin POVM frame");
  qp_tomo->add_option("--dim", tomo_dim, "dimension");
  qp_tomo->add_option("--state", tomo_state, "state JSON file")->required();
  qp_tomo->add_option("--shots", tomo_shots, "number of samples");
  qp_tomo->add_option("--seed", tomo_seed, "sampling seed");
  qp_tomo->add_option("--out", tomo_out, "run JSON output path");

  // ---- corr ----------------------------------------------------------------
  auto* corr = app.add_subcommand("corr", "structural identity checks");
  auto* swap_check = corr->add_subcommand("swap-check", "SWAP expansion identity");
  std::string swap_frame = "matrix-unit";
  Index swap_dim = 2;
  std::string swap_out;
  swap_check->add_option("--frame", swap_frame, "builtin frame name");
  swap_check->add_option("--dim", swap_dim, "dimension");
  swap_check->add_option("--out", swap_out, "JSON output path");
  auto* pt_check = corr->add_subcommand("pt-check", "partial transpose of |E><E|");
  Index pt_dim = 2;
  std::string pt_out;
  pt_check->add_option("--dim", pt_dim, "dimension");
  pt_check->add_option("--out", pt_out, "JSON output path");

  // ---- proto ---------------------------------------------------------------
  auto* proto = app.add_subcommand("proto", "teleportation and cloning simulations");
  auto* tele = proto->add_subcommand("teleport", "exact teleportation conditionals");
  Index tele_dim = 2;
  std::string tele_state, tele_out, tele_outcome;
  bool tele_all = false;
  std::int64_t tele_sample = 0;
  std::uint64_t tele_seed = 0;
  tele->add_option("--dim", tele_dim, "dimension");
  tele->add_option("--state", tele_state, "input state JSON file")->required();
  tele->add_flag("--all-outcomes", tele_all, "evaluate every Bell outcome");
  tele->add_option("--outcome", tele_outcome, "single outcome 'q,p'");
  tele->add_option("--sample", tele_sample, "demonstration mode: sample this many outcomes");
  tele->add_option("--seed", tele_seed, "sampling seed");
  tele->add_option("--out", tele_out, "JSON output path");
  auto* clone = proto->add_subcommand("clone", "optimal cloning with discrepancy report");
  Index clone_dim = 2;
  std::string clone_state, clone_frame = "kd", clone_out;
  clone->add_option("--dim", clone_dim, "dimension");
  clone->add_option("--state", clone_state, "input state JSON file")->required();
  clone->add_option("--frame", clone_frame, "frame for the expansion and discrepancies");
  clone->add_option("--out", clone_out, "JSON output path");

  for (CLI::App* sub :
       {verify, describe, describe_frame, describe_state, describe_report, frame_cmd,
        frame_describe, qp, qp_dist, qp_tomo, corr, swap_check, pt_check, proto, tele, clone})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (tol_flag >= 0.0) tol.absolute = tol_flag;

  try {
    if (*verify) {
      suite::Options opt;
      opt.dims = (dim_flag > 0) ? std::vector<Index>{dim_flag} : parse_dims(dims_csv);
      opt.tol = tol;
      opt.seed = seed;
      if (!frame_name.empty()) opt.frame_filter = frame_name;
      if (!out_flag.empty()) out_path = out_flag;
      return run_verify(selector, opt, out_path, clock);
    }

    if (*describe_frame || *frame_describe) {
      OperatorFrame f = [&] {
        if (*frame_describe) return make_builtin_frame(frame_describe_name, frame_describe_dim, tol);
        if (!file_path.empty()) {
          std::ifstream in(file_path);
          if (!in) throw std::runtime_error("cannot open '" + file_path + "'");
          return frame_from_json(Json::parse(in), tol);
        }
        if (builtin_name.empty())
          throw std::invalid_argument("describe frame: give --builtin or --file");
        return make_builtin_frame(builtin_name, frame_dim, tol);
      }();
      f = ensure_duals(f, tol);
      const ConditionReport rep = check_conditions(f, tol);
      Json results;
      results["name"] = f.name();
      results["dim"] = f.dim();
      results["size"] = f.size();
      results["flavor"] = to_string(f.flavor());
      results["index_scheme"] = to_string(f.index_scheme());
      results["conditions"] = condition_report_to_json(rep);
      results["no_go"] = no_go_to_json(no_go_certificate(f, tol));
      const double gram_cond =
          std::isnan(f.gram_condition())
              ? opframe::detail::analyze_gram(opframe::detail::hs_gram(f.elements())).condition
              : f.gram_condition();
      results["gram_condition"] = gram_cond;
      emit(make_report("describe frame",
                       Json{{"name", f.name()}, {"dim", f.dim()}}, results, tol, std::nullopt,
                       clock));
      return 0;
    }

    if (*describe_state) {
      const Operator op = read_operator_file(state_path);
      std::string why;
      if (!DensityOperator::is_valid(op, tol, &why))
        throw std::invalid_argument("state in '" + state_path + "' is not physical: " + why);
      const DensityOperator rho(op, tol);
      Json results;
      results["dim"] = op.dim();
      results["trace_re"] = op.trace().real();
      results["purity"] = rho.purity();
      results["spectrum"] = spectrum_json(op, tol);
      results["max_asymmetry"] = op.max_asymmetry();
      emit(make_report("describe state", Json{{"file", state_path}}, results, tol, std::nullopt,
                       clock));
      return 0;
    }

    if (*describe_report) {
      std::ifstream in(report_path);
      if (!in) throw std::runtime_error("cannot open '" + report_path + "'");
      const Json stored = Json::parse(in);
      emit(make_report("describe report", Json{{"file", report_path}}, stored, tol, std::nullopt,
                       clock));
      return 0;
    }

    if (*qp_dist) {
      const DensityOperator rho = load_state(qp_state, tol);
      const OperatorFrame f = make_builtin_frame(qp_frame, qp_dim, tol);
      if (f.dim() != rho.dim())
        throw std::invalid_argument("state dimension does not match --dim");
      const QuasiDistribution q = quasi_distribution(f, rho);
      const NegativityBreakdown neg = negativity_breakdown(q);
      const std::string csv = distribution_to_csv(f, q);
      if (!qp_out.empty()) {
        std::ofstream out(qp_out);
        if (!out) throw std::runtime_error("cannot open '" + qp_out + "' for writing");
        out << csv;
      }
      Json values = Json::array();
      for (const Complex& v : q.values) values.push_back({v.real(), v.imag()});
      Json results;
      results["frame"] = f.name();
      results["values"] = values;
      results["total_re"] = q.total.real();
      results["total_im"] = q.total.imag();
      results["negativity"] = {{"negative_real", neg.negative_real},
                               {"imaginary", neg.imaginary},
                               {"total", neg.total()}};
      if (!qp_out.empty()) results["csv"] = qp_out;
      emit(make_report("qp dist",
                       Json{{"frame", qp_frame}, {"dim", qp_dim}, {"state", qp_state}}, results,
                       tol, std::nullopt, clock));
      return 0;
    }

    if (*qp_tomo) {
      const DensityOperator rho = load_state(tomo_state, tol);
      const OperatorFrame f = make_builtin_frame(tomo_frame, tomo_dim, tol);
      const TomographyRun run = simulate_tomography(f, rho, tomo_shots, tomo_seed, tol);
      Json results;
      results["frame"] = run.frame_id;
      results["shots"] = run.shots;
      results["counts"] = run.counts;
      results["trace_distance"] = run.trace_distance;
      results["min_eigenvalue"] = run.min_eigenvalue;
      results["estimate"] = operator_to_json(run.estimate);
      const Json report = make_report(
          "qp tomo",
          Json{{"frame", tomo_frame}, {"dim", tomo_dim}, {"state", tomo_state},
               {"shots", tomo_shots}},
          results, tol, tomo_seed, clock);
      emit(report);
      if (!tomo_out.empty()) write_json_file(tomo_out, report);
      return 0;
    }

    if (*swap_check) {
      const OperatorFrame f = make_builtin_frame(swap_frame, swap_dim, tol);
      const SwapIdentityReport rep = verify_swap_identity(f, tol);
      Json results;
      results["frame"] = rep.frame_id;
      results["rank"] = rep.rank;
      results["complete"] = rep.rank == static_cast<int>(f.dim() * f.dim());
      if (!std::isnan(rep.residual)) results["residual"] = rep.residual;
      results["passed"] = rep.swap_passed;
      const Json report = make_report(
          "corr swap-check", Json{{"frame", swap_frame}, {"dim", swap_dim}}, results, tol,
          std::nullopt, clock);
      emit(report);
      if (!swap_out.empty()) write_json_file(swap_out, report);
      return rep.swap_passed ? 0 : 1;
    }

    if (*pt_check) {
      const double residual = verify_pt_swap(pt_dim);
      const Operator pt = partial_transpose(max_entangled_projector(pt_dim), Subsystem::second);
      const double lo = min_eigenvalue(pt, tol);
      const bool passed = residual <= 1e-12 &&
                          std::abs(lo + 1.0 / static_cast<double>(pt_dim)) <= 1e-12;
      Json results{{"residual", residual},
                   {"pt_min_eigenvalue", lo},
                   {"expected_min_eigenvalue", -1.0 / static_cast<double>(pt_dim)},
                   {"passed", passed}};
      const Json report =
          make_report("corr pt-check", Json{{"dim", pt_dim}}, results, tol, std::nullopt, clock);
      emit(report);
      if (!pt_out.empty()) write_json_file(pt_out, report);
      return passed ? 0 : 1;
    }

    if (*tele) {
      const DensityOperator rho = load_state(tele_state, tol);
      if (rho.dim() != tele_dim)
        throw std::invalid_argument("state dimension does not match --dim");
      Json results;
      if (tele_all || tele_outcome.empty()) {
        Json outs = Json::array();
        double worst_fid = 1.0;
        for (const TeleportationOutcome& out : teleport_all_outcomes(rho, tele_dim, tol)) {
          outs.push_back(teleport_outcome_json(out, true));
          worst_fid = std::min(worst_fid, out.fidelity_after_correction);
        }
        results["outcomes"] = outs;
        results["worst_fidelity_after_correction"] = worst_fid;
      } else {
        const auto comma = tele_outcome.find(',');
        if (comma == std::string::npos)
          throw std::invalid_argument("--outcome expects 'q,p'");
        const int q = std::stoi(tele_outcome.substr(0, comma));
        const int p = std::stoi(tele_outcome.substr(comma + 1));
        results["outcome"] = teleport_outcome_json(teleport(rho, tele_dim, {q, p}, tol), true);
      }
      if (tele_sample > 0) {
        // Demonstration sampling of measurement outcomes (uniform over d^2).
        Rng rng(tele_seed);
        std::vector<std::int64_t> hist(static_cast<std::size_t>(tele_dim * tele_dim), 0);
        for (std::int64_t s = 0; s < tele_sample; ++s)
          ++hist[static_cast<std::size_t>(rng.uniform() * static_cast<double>(hist.size()))];
        results["sampled_outcome_histogram"] = hist;
      }
      const Json report = make_report(
          "proto teleport", Json{{"dim", tele_dim}, {"state", tele_state}}, results, tol,
          tele_sample > 0 ? std::optional<std::uint64_t>(tele_seed) : std::nullopt, clock);
      emit(report);
      if (!tele_out.empty()) write_json_file(tele_out, report);
      return 0;
    }

    if (*clone) {
      const DensityOperator rho = load_state(clone_state, tol);
      if (rho.dim() != clone_dim)
        throw std::invalid_argument("state dimension does not match --dim");
      const OperatorFrame f = make_builtin_frame(clone_frame, clone_dim, tol);
      const CloneReport rep = clone_report(rho, f, tol);
      Json results;
      results["clone_fidelity_1"] = rep.clone_fidelity_1;
      results["clone_fidelity_2"] = rep.clone_fidelity_2;
      results["fidelity_formula"] =
          static_cast<double>(clone_dim + 3) / (2.0 * static_cast<double>(clone_dim + 1));
      results["ideal_trace"] = rep.ideal_trace;
      results["ideal_marginal_residuals"] = {rep.ideal_marginal_residual_1,
                                             rep.ideal_marginal_residual_2};
      results["swap_symmetry_residual"] = rep.swap_symmetry_residual;
      results["discrepancy_norms"] = rep.discrepancy_norms;
      if (!std::isnan(rep.eq_expansion_residual_first))
        results["expansion_residuals"] = {rep.eq_expansion_residual_first,
                                          rep.eq_expansion_residual_second};
      results["output_pair"] = operator_to_json(rep.output_pair);
      results["ideal_component"] = operator_to_json(rep.ideal_component);
      const Json report = make_report(
          "proto clone",
          Json{{"dim", clone_dim}, {"state", clone_state}, {"frame", clone_frame}}, results, tol,
          std::nullopt, clock);
      emit(report);
      if (!clone_out.empty()) write_json_file(clone_out, report);
      return 0;
    }

    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const Json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
