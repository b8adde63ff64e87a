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

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "opframe/operator.hpp"

namespace opframe {

enum class IndexScheme { single, pair, phase_point };
enum class FrameFlavor { orthogonal_basis, quasi_probability, povm };

inline const char* to_string(IndexScheme s) {
  switch (s) {
    case IndexScheme::single: return "single";
    case IndexScheme::pair: return "pair";
    case IndexScheme::phase_point: return "phase_point";
  }
  return "?";
}

inline const char* to_string(FrameFlavor f) {
  switch (f) {
    case FrameFlavor::orthogonal_basis: return "orthogonal_basis";
    case FrameFlavor::quasi_probability: return "quasi_probability";
    case FrameFlavor::povm: return "povm";
  }
  return "?";
}

inline bool is_odd_prime(Index d) {
  if (d < 3 || d % 2 == 0) return false;
  for (Index k = 3; k * k <= d; k += 2)
    if (d % k == 0) return false;
  return true;
}

/// Indexed family of expansion elements with optional duals and weights.
/// Weights satisfy element(i) = weight(i) * dual(i)^dag and are stored only
/// when that orthogonality relation actually holds for the construction.
/// Immutable after duals are populated.
class OperatorFrame {
 public:
  struct Spec {
    std::string name;
    Index dim = 0;
    IndexScheme scheme = IndexScheme::single;
    FrameFlavor flavor = FrameFlavor::orthogonal_basis;
    std::vector<Operator> elements;
    std::vector<Operator> duals;                // may be empty
    std::vector<Complex> weights;               // may be empty
    std::vector<std::array<int, 2>> labels;     // may be empty -> 0..m-1
  };

  static OperatorFrame assemble(Spec spec, const Tolerance& tol = Tolerance::defaults()) {
    OperatorFrame f;
    f.name_ = std::move(spec.name);
    f.dim_ = spec.dim;
    f.scheme_ = spec.scheme;
    f.flavor_ = spec.flavor;
    f.elements_ = std::move(spec.elements);
    f.duals_ = std::move(spec.duals);
    f.weights_ = std::move(spec.weights);
    f.labels_ = std::move(spec.labels);
    f.validate(tol);
    return f;
  }

  const std::string& name() const { return name_; }
  Index dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  IndexScheme index_scheme() const { return scheme_; }
  FrameFlavor flavor() const { return flavor_; }

  const std::vector<Operator>& elements() const { return elements_; }
  const Operator& element(std::size_t i) const { return elements_.at(i); }

  bool has_duals() const { return !duals_.empty(); }
  const std::vector<Operator>& duals() const {
    if (duals_.empty()) throw std::logic_error("OperatorFrame: duals have not been computed");
    return duals_;
  }
  const Operator& dual(std::size_t i) const { return duals().at(i); }

  bool has_weights() const { return !weights_.empty(); }
  const std::vector<Complex>& weights() const {
    if (weights_.empty())
      throw std::logic_error("OperatorFrame: weights are undefined (orthogonality does not hold)");
    return weights_;
  }

  const std::vector<std::array<int, 2>>& labels() const { return labels_; }
  std::array<int, 2> label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(std::array<int, 2> label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    throw std::out_of_range("OperatorFrame: no element with the requested label");
  }

  /// Index arithmetic i + m, defined for phase_point frames only:
  /// componentwise addition of (q, p) labels mod d.
  std::size_t shifted_index(std::size_t i, std::array<int, 2> shift) const {
    if (scheme_ != IndexScheme::phase_point)
      throw std::logic_error("OperatorFrame: index arithmetic requires a phase_point scheme");
    const int d = static_cast<int>(dim_);
    const auto l = label(i);
    return index_of({(l[0] + shift[0]) % d, (l[1] + shift[1]) % d});
  }

  /// Rank of the element span in operator space; -1 until computed.
  int rank() const { return rank_; }
  double gram_condition() const { return gram_condition_; }

  OperatorFrame without_duals() const {
    OperatorFrame f = *this;
    f.duals_.clear();
    f.rank_ = -1;
    f.gram_condition_ = std::numeric_limits<double>::quiet_NaN();
    return f;
  }

  friend OperatorFrame dual_frame(const OperatorFrame&, const Tolerance&);

 private:
  OperatorFrame() = default;

  void validate(const Tolerance& tol) {
    const double eps = std::max(tol.absolute, 1e-9);
    if (dim_ < 1) throw std::invalid_argument("OperatorFrame: dim must be positive");
    if (elements_.empty()) throw std::invalid_argument("OperatorFrame: no elements");
    for (const Operator& e : elements_)
      if (e.dim() != dim_) throw std::invalid_argument("OperatorFrame: element dim mismatch");
    if (!duals_.empty()) {
      if (duals_.size() != elements_.size())
        throw std::invalid_argument("OperatorFrame: dual count mismatch");
      for (const Operator& r : duals_)
        if (r.dim() != dim_) throw std::invalid_argument("OperatorFrame: dual dim mismatch");
    }
    if (!weights_.empty() && weights_.size() != elements_.size())
      throw std::invalid_argument("OperatorFrame: weight count mismatch");
    if (labels_.empty()) {
      labels_.resize(elements_.size());
      for (std::size_t i = 0; i < labels_.size(); ++i)
        labels_[i] = {static_cast<int>(i), 0};
    } else if (labels_.size() != elements_.size()) {
      throw std::invalid_argument("OperatorFrame: label count mismatch");
    }

    if (flavor_ == FrameFlavor::quasi_probability || flavor_ == FrameFlavor::povm) {
      Operator sum = Operator::zero(dim_);
      for (const Operator& e : elements_) sum += e;
      const double dev = frobenius_distance(sum, Operator::identity(dim_));
      if (dev > eps)
        throw std::invalid_argument("OperatorFrame: elements do not sum to identity (|sum - I| = " +
                                    std::to_string(dev) + ")");
    }
    if (flavor_ == FrameFlavor::povm) {
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].max_asymmetry() > eps)
          throw std::invalid_argument("OperatorFrame: povm element " + std::to_string(i) +
                                      " is not Hermitian");
        if (min_eigenvalue(elements_[i], Tolerance{eps, 1e-9}) < -eps)
          throw std::invalid_argument("OperatorFrame: povm element " + std::to_string(i) +
                                      " has a negative eigenvalue");
      }
    }
    if (flavor_ == FrameFlavor::quasi_probability && !duals_.empty()) {
      for (std::size_t i = 0; i < duals_.size(); ++i)
        if (std::abs(duals_[i].trace() - Complex(1.0)) > eps)
          throw std::invalid_argument("OperatorFrame: quasi-probability dual " + std::to_string(i) +
                                      " does not have unit trace");
    }
    // Exact frames with duals must be biorthogonal.
    if (!duals_.empty() && size() <= static_cast<std::size_t>(dim_ * dim_)) {
      for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) {
          const Complex t = (elements_[i] * duals_[j]).trace();
          const double want = (i == j) ? 1.0 : 0.0;
          if (std::abs(t - want) > 1e-7)
            throw std::invalid_argument("OperatorFrame: duals are not biorthogonal at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
  }

  std::string name_;
  Index dim_ = 0;
  IndexScheme scheme_ = IndexScheme::single;
  FrameFlavor flavor_ = FrameFlavor::orthogonal_basis;
  std::vector<Operator> elements_;
  std::vector<Operator> duals_;
  std::vector<Complex> weights_;
  std::vector<std::array<int, 2>> labels_;
  int rank_ = -1;
  double gram_condition_ = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void require_orthonormal(const std::vector<StateVector>& basis, const char* who,
                                const Tolerance& tol) {
  const double eps = std::max(tol.absolute, 1e-9);
  if (basis.empty()) throw std::invalid_argument(std::string(who) + ": empty basis");
  const Index d = basis[0].dim();
  if (static_cast<Index>(basis.size()) != d)
    throw std::invalid_argument(std::string(who) + ": basis must contain dim vectors");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex g = basis[i].inner(basis[j]);
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > eps)
        throw std::invalid_argument(std::string(who) + ": basis is not orthonormal at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

// Gram matrix of the elements under the Hilbert-Schmidt inner product:
// G(i,k) = Tr(element(i) element(k)^dag).
inline Matrix hs_gram(const std::vector<Operator>& elements) {
  const std::size_t m = elements.size();
  Matrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      g(static_cast<Index>(i), static_cast<Index>(k)) =
          (elements[i].matrix().array() * elements[k].matrix().array().conjugate()).sum();
  return g;
}

struct GramAnalysis {
  int rank = 0;
  double condition = std::numeric_limits<double>::infinity();
  Matrix pinv;  // pseudo-inverse, eigenvalues below 1e-12 * max dropped
};

inline GramAnalysis analyze_gram(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dual_frame: Gram eigendecomposition failed");
  const Eigen::VectorXd vals = solver.eigenvalues();
  const double vmax = vals.cwiseAbs().maxCoeff();
  const double cutoff = 1e-12 * vmax;
  GramAnalysis out;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  double vmin_kept = vmax;
  for (Index k = 0; k < vals.size(); ++k) {
    if (vals(k) > cutoff) {
      inv(k) = 1.0 / vals(k);
      vmin_kept = std::min(vmin_kept, vals(k));
      ++out.rank;
    }
  }
  out.condition = (out.rank > 0) ? vmax / vmin_kept : std::numeric_limits<double>::infinity();
  out.pinv = solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
  return out;
}

}  // namespace detail

/// Computes duals solving Tr(element(i) dual(j)) = delta(i,j) for linearly
/// independent frames, or the canonical pseudo-inverse dual for overcomplete
/// ones (which satisfies X = sum_i Tr(element(i) X) dual(i) when the span is
/// full). The Gram condition number is recorded on the returned frame.
inline OperatorFrame dual_frame(const OperatorFrame& f, const Tolerance& tol = Tolerance::defaults()) {
  (void)tol;
  const std::size_t m = f.size();
  const Index d = f.dim();
  const Matrix gram = detail::hs_gram(f.elements());
  detail::GramAnalysis an = detail::analyze_gram(gram);

  if (m <= static_cast<std::size_t>(d * d) && an.rank < static_cast<int>(m))
    throw std::domain_error("dual_frame: rank-deficient frame, rank " + std::to_string(an.rank) +
                            " < " + std::to_string(m) + " elements; no dual exists");

  std::vector<Operator> duals;
  duals.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Matrix r = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < m; ++k)
      r += an.pinv(static_cast<Index>(k), static_cast<Index>(j)) * f.element(k).matrix().adjoint();
    duals.push_back(Operator(std::move(r), {d}));
  }

  OperatorFrame out = f;
  out.duals_ = std::move(duals);
  out.rank_ = an.rank;
  out.gram_condition_ = an.condition;
  out.validate(Tolerance::defaults());
  return out;
}

// ---------------------------------------------------------------------------
// Built-in frames

/// Projectors onto an orthonormal basis; self-dual, satisfies positivity and
/// orthogonality but spans only d of the d^2 operator dimensions.
inline OperatorFrame projective_frame(const std::vector<StateVector>& basis,
                                      const Tolerance& tol = Tolerance::defaults()) {
  detail::require_orthonormal(basis, "projective_frame", tol);
  OperatorFrame::Spec spec;
  spec.name = "projective";
  spec.dim = basis[0].dim();
  spec.scheme = IndexScheme::single;
  spec.flavor = FrameFlavor::povm;
  for (const StateVector& b : basis) {
    spec.elements.push_back(b.projector());
    spec.duals.push_back(b.projector());
    spec.weights.push_back(1.0);
  }
  return OperatorFrame::assemble(std::move(spec), tol);
}

/// All d^2 matrix units |n><n'|; the density-matrix expansion. Complete and
/// orthogonal, non-Hermitian off the diagonal.
inline OperatorFrame matrix_unit_frame(Index d) {
  OperatorFrame::Spec spec;
  spec.name = "matrix-unit";
  spec.dim = d;
  spec.scheme = IndexScheme::pair;
  spec.flavor = FrameFlavor::orthogonal_basis;
  for (Index n = 0; n < d; ++n)
    for (Index np = 0; np < d; ++np) {
      Matrix e = Matrix::Zero(d, d);
      e(n, np) = 1.0;
      spec.elements.push_back(Operator(e, {d}));
      spec.duals.push_back(Operator(Matrix(e.adjoint()), {d}));
      spec.weights.push_back(1.0);
      spec.labels.push_back({static_cast<int>(n), static_cast<int>(np)});
    }
  return OperatorFrame::assemble(std::move(spec));
}

/// Kirkwood-Dirac frame built from two bases: element(a,b) = |b><b|a><a|,
/// dual(a,b) = element^dag / Tr(element^dag). Requires <a|b> != 0 for every
/// pair; mutually unbiased bases are the intended input.
inline OperatorFrame kd_frame(const std::vector<StateVector>& basis_a,
                              const std::vector<StateVector>& basis_b,
                              const Tolerance& tol = Tolerance::defaults()) {
  detail::require_orthonormal(basis_a, "kd_frame (basis_a)", tol);
  detail::require_orthonormal(basis_b, "kd_frame (basis_b)", tol);
  const Index d = basis_a[0].dim();
  if (basis_b[0].dim() != d) throw std::invalid_argument("kd_frame: basis dim mismatch");
  const double eps = std::max(tol.absolute, 1e-9);

  OperatorFrame::Spec spec;
  spec.name = "kd";
  spec.dim = d;
  spec.scheme = IndexScheme::pair;
  spec.flavor = FrameFlavor::quasi_probability;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const Complex ba = basis_b[b].inner(basis_a[a]);  // <b|a>
      if (std::abs(ba) <= eps)
        throw std::domain_error("kd_frame: <a|b> = 0 for pair (a=" + std::to_string(a) +
                                ", b=" + std::to_string(b) + "); duals are undefined");
      const Matrix lam =
          ba * (basis_b[b].amplitudes() * basis_a[a].amplitudes().adjoint());
      const Complex tr_adj = std::conj(ba) * ba;  // Tr(element^dag) = |<a|b>|^2
      spec.elements.push_back(Operator(lam, {d}));
      spec.duals.push_back(Operator(Matrix(lam.adjoint() / tr_adj), {d}));
      spec.weights.push_back(tr_adj);
      spec.labels.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
  return OperatorFrame::assemble(std::move(spec), tol);
}

/// Parity operator |n> -> |-n mod d>.
inline Operator parity_operator(Index d) {
  Matrix p = Matrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) p(((d - n) % d), n) = 1.0;
  return Operator(std::move(p), {d});
}

/// Discrete phase-point frame for odd prime d: A(q,p) is the displaced
/// parity, element(q,p) = A(q,p)/d, dual(q,p) = A(q,p). The A operators are
/// Hermitian, trace one, and pairwise orthogonal with Tr(A(i)A(j)) = d.
inline OperatorFrame phase_point_frame(Index d) {
  if (!is_odd_prime(d))
    throw std::invalid_argument("phase_point_frame: d = " + std::to_string(d) +
                                " is not an odd prime; the displaced-parity construction "
                                "is defined here for odd prime dimensions only");
  const Operator a00 = parity_operator(d);
  OperatorFrame::Spec spec;
  spec.name = "phase-point";
  spec.dim = d;
  spec.scheme = IndexScheme::phase_point;
  spec.flavor = FrameFlavor::quasi_probability;
  for (Index q = 0; q < d; ++q)
    for (Index p = 0; p < d; ++p) {
      const Operator w = weyl_operator(d, q, p);
      const Operator a = w * a00 * w.adjoint();
      spec.elements.push_back(a * Complex(1.0 / static_cast<double>(d)));
      spec.duals.push_back(a);
      spec.weights.push_back(1.0 / static_cast<double>(d));
      spec.labels.push_back({static_cast<int>(q), static_cast<int>(p)});
    }
  return OperatorFrame::assemble(std::move(spec));
}

/// Qubit SIC POVM: four tetrahedron effects (I + n_i . sigma)/4. Complete
/// and positive; the canonical duals carry negative eigenvalues.
inline OperatorFrame sic_frame_qubit() {
  const double s = 1.0 / std::sqrt(3.0);
  const std::array<std::array<double, 3>, 4> dirs = {{
      {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
  OperatorFrame::Spec spec;
  spec.name = "sic2";
  spec.dim = 2;
  spec.scheme = IndexScheme::single;
  spec.flavor = FrameFlavor::povm;
  for (const auto& n : dirs) {
    Matrix e(2, 2);
    e(0, 0) = Complex(1.0 + n[2], 0.0);
    e(0, 1) = Complex(n[0], -n[1]);
    e(1, 0) = Complex(n[0], n[1]);
    e(1, 1) = Complex(1.0 - n[2], 0.0);
    spec.elements.push_back(Operator(Matrix(e / 4.0), {2}));
  }
  return dual_frame(OperatorFrame::assemble(std::move(spec)));
}

/// Invertible random linear deformation of the matrix-unit frame: elements
/// are rows of a seeded Gaussian matrix reshaped to d x d. Complete with
/// probability one; duals recomputed from scratch.
inline OperatorFrame deformed_matrix_unit_frame(Index d, std::uint64_t seed) {
  const Index m = d * d;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
    Matrix t(m, m);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) t(i, j) = Complex(rng.gauss(), rng.gauss());
    Eigen::JacobiSVD<Matrix> svd(t);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-3 * sv(0)) continue;  // resample near-singular draws

    OperatorFrame::Spec spec;
    spec.name = "deformed-matrix-unit";
    spec.dim = d;
    spec.scheme = IndexScheme::single;
    spec.flavor = FrameFlavor::orthogonal_basis;
    for (Index k = 0; k < m; ++k) {
      Matrix e(d, d);
      for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d; ++c) e(r, c) = t(k, r * d + c);
      spec.elements.push_back(Operator(std::move(e), {d}));
    }
    return dual_frame(OperatorFrame::assemble(std::move(spec)));
  }
  throw std::runtime_error("deformed_matrix_unit_frame: could not draw an invertible deformation");
}

inline std::vector<std::string> builtin_frame_names() {
  return {"projective", "matrix-unit", "kd", "phase-point", "sic2"};
}

/// Builds a named frame with duals populated. "kd" pairs the computational
/// and Fourier bases; "sic2" ignores dim (qubit only).
inline OperatorFrame make_builtin_frame(const std::string& name, Index d,
                                        const Tolerance& tol = Tolerance::defaults()) {
  if (name == "projective") return projective_frame(computational_basis(d), tol);
  if (name == "matrix-unit") return matrix_unit_frame(d);
  if (name == "kd") return kd_frame(computational_basis(d), fourier_basis(d), tol);
  if (name == "phase-point") return phase_point_frame(d);
  if (name == "sic2" || name == "sic") {
    if (d != 0 && d != 2)
      throw std::invalid_argument("make_builtin_frame: the SIC frame is qubit-only (dim 2)");
    return sic_frame_qubit();
  }
  std::string names;
  for (const auto& n : builtin_frame_names()) names += " " + n;
  throw std::invalid_argument("make_builtin_frame: unknown frame '" + name + "'; builtins:" + names);
}

// ---------------------------------------------------------------------------
// Condition trichotomy

struct Verdict {
  bool ok = false;
  double witness = 0.0;
  int index = -1;
};

/// Machine-checkable verdicts for the three expansion conditions, with raw
/// numeric witnesses so callers can re-judge at their own tolerance.
struct ConditionReport {
  Verdict positivity;      // witness: most negative eigenvalue (Hermitian part), with index
  double max_asymmetry = 0.0;
  int asymmetry_index = -1;
  Verdict orthogonality;   // witness: max |Tr(element(i) dual(j))| over i != j
  double element_overlap = 0.0;    // max normalized HS overlap between distinct elements
  double scaling_residual = 0.0;   // max_i |element(i) - lambda_i dual(i)^dag|_F
  Verdict completeness;    // witness: rank of the element span (target dim^2)
  int rank = 0;
  int satisfied_count = 0;
};

/// Evaluates positivity / orthogonality / completeness. Duals are computed
/// on demand if absent. Orthogonality is the paper's scaling relation
/// element(i) = lambda_i dual(i)^dag, not mere biorthogonality (which holds
/// for every exact dual pair by construction).
inline ConditionReport check_conditions(const OperatorFrame& frame,
                                        const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = frame.has_duals() ? frame : dual_frame(frame, tol);
  const double eps = std::max(tol.absolute, 1e-9);
  const Tolerance eig_tol{eps, tol.relative};
  const std::size_t m = f.size();
  ConditionReport rep;

  // Condition 1: self-adjoint and positive elements.
  rep.positivity.ok = true;
  rep.positivity.witness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double asym = f.element(i).max_asymmetry();
    if (asym > rep.max_asymmetry) {
      rep.max_asymmetry = asym;
      rep.asymmetry_index = static_cast<int>(i);
    }
    const Operator herm_part(
        Matrix((f.element(i).matrix() + f.element(i).matrix().adjoint()) / 2.0), {f.dim()});
    const double lo = min_eigenvalue(herm_part, eig_tol);
    if (lo < rep.positivity.witness) {
      rep.positivity.witness = lo;
      rep.positivity.index = static_cast<int>(i);
    }
    if (asym > eps || lo < -eps) rep.positivity.ok = false;
  }

  // Condition 2: element(i) = lambda_i dual(i)^dag for scalar weights.
  rep.orthogonality.ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix& r = f.dual(i).matrix();
    const double rn2 = r.squaredNorm();
    const Complex lambda = (r * f.element(i).matrix()).trace() / rn2;
    const double resid = (f.element(i).matrix() - lambda * r.adjoint()).norm();
    if (resid > rep.scaling_residual) {
      rep.scaling_residual = resid;
      rep.orthogonality.index = static_cast<int>(i);
    }
    if (resid > eps) rep.orthogonality.ok = false;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double dual_ov = std::abs((f.element(i) * f.dual(j)).trace());
      rep.orthogonality.witness = std::max(rep.orthogonality.witness, dual_ov);
      const double el_ov =
          std::abs((f.element(i).matrix().array() * f.element(j).matrix().array().conjugate()).sum()) /
          (f.element(i).frobenius_norm() * f.element(j).frobenius_norm());
      rep.element_overlap = std::max(rep.element_overlap, el_ov);
    }

  // Condition 3: the elements span all of operator space.
  const detail::GramAnalysis an = detail::analyze_gram(detail::hs_gram(f.elements()));
  rep.rank = an.rank;
  rep.completeness.ok = (an.rank == static_cast<int>(f.dim() * f.dim()));
  rep.completeness.witness = static_cast<double>(an.rank);

  rep.satisfied_count = (rep.positivity.ok ? 1 : 0) + (rep.orthogonality.ok ? 1 : 0) +
                        (rep.completeness.ok ? 1 : 0);
  return rep;
}

/// Constructive witness that no expansion satisfies all three conditions.
struct NoGoCertificate {
  enum class Kind { dual_negativity, element_negativity, nonhermitian_element, rank_deficit };
  Kind kind = Kind::rank_deficit;
  int index = -1;
  double negative_eigenvalue = 0.0;
  Vector eigenvector;       // witness vector for negativity kinds
  double asymmetry = 0.0;   // for the non-Hermitian kind
  int rank = 0;
  int deficit = 0;
  ConditionReport report;
};

inline const char* to_string(NoGoCertificate::Kind k) {
  switch (k) {
    case NoGoCertificate::Kind::dual_negativity: return "dual_negativity";
    case NoGoCertificate::Kind::element_negativity: return "element_negativity";
    case NoGoCertificate::Kind::nonhermitian_element: return "nonhermitian_element";
    case NoGoCertificate::Kind::rank_deficit: return "rank_deficit";
  }
  return "?";
}

inline NoGoCertificate no_go_certificate(const OperatorFrame& frame,
                                         const Tolerance& tol = Tolerance::defaults()) {
  const OperatorFrame f = frame.has_duals() ? frame : dual_frame(frame, tol);
  const double eps = std::max(tol.absolute, 1e-9);
  const Tolerance eig_tol{eps, tol.relative};
  NoGoCertificate cert;
  cert.report = check_conditions(f, tol);

  if (cert.report.satisfied_count == 3)
    throw std::logic_error("no_go_certificate: all three conditions reported satisfied; "
                           "this indicates a numerical bug, not physics");

  if (cert.report.completeness.ok) {
    // A complete expansion must hide non-positivity somewhere. Look in the
    // duals first (tomographic reading), then in the elements.
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.dual(i).max_asymmetry() > eps) continue;
      const HermitianEig eig = hermitian_eig(f.dual(i), eig_tol);
      const double lo = eig.eigenvalues(eig.eigenvalues.size() - 1);
      if (lo < -eps) {
        cert.kind = NoGoCertificate::Kind::dual_negativity;
        cert.index = static_cast<int>(i);
        cert.negative_eigenvalue = lo;
        cert.eigenvector = eig.eigenvectors.col(eig.eigenvalues.size() - 1);
        return cert;
      }
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double asym = f.element(i).max_asymmetry();
      if (asym > eps) {
        cert.kind = NoGoCertificate::Kind::nonhermitian_element;
        cert.index = static_cast<int>(i);
        cert.asymmetry = asym;
        return cert;
      }
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      const HermitianEig eig = hermitian_eig(f.element(i), eig_tol);
      const double lo = eig.eigenvalues(eig.eigenvalues.size() - 1);
      if (lo < -eps) {
        cert.kind = NoGoCertificate::Kind::element_negativity;
        cert.index = static_cast<int>(i);
        cert.negative_eigenvalue = lo;
        cert.eigenvector = eig.eigenvectors.col(eig.eigenvalues.size() - 1);
        return cert;
      }
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double asym = f.dual(i).max_asymmetry();
      if (asym > eps) {
        cert.kind = NoGoCertificate::Kind::nonhermitian_element;
        cert.index = static_cast<int>(i);
        cert.asymmetry = asym;
        return cert;
      }
    }
    throw std::logic_error("no_go_certificate: complete frame with no negativity witness; "
                           "this indicates a numerical bug");
  }

  cert.kind = NoGoCertificate::Kind::rank_deficit;
  cert.rank = cert.report.rank;
  cert.deficit = static_cast<int>(f.dim() * f.dim()) - cert.report.rank;
  return cert;
}

}  // namespace opframe
