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

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "opframe/core.hpp"

namespace opframe {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Subsystem selector for bipartite operations. Factor `first` is the slow
/// (left, most significant) index of the Kronecker layout: the joint basis
/// state |i, k> sits at row i * dim2 + k. This convention is used everywhere.
enum class Subsystem { first, second };

/// Dense complex square matrix with declared subsystem dimensions. The
/// universal carrier for states, effects, frame elements and unitaries.
/// Hermiticity, positivity and unit trace are queryable, never assumed.
class Operator {
 public:
  Operator() = default;

  Operator(Matrix entries, std::vector<Index> factors)
      : factors_(std::move(factors)), m_(std::move(entries)) {
    if (factors_.empty() || factors_.size() > 2)
      throw std::invalid_argument("Operator: factors must have length 1 or 2");
    Index total = 1;
    for (Index f : factors_) {
      if (f <= 0) throw std::invalid_argument("Operator: factor dims must be positive");
      total *= f;
    }
    if (m_.rows() != m_.cols() || m_.rows() != total)
      throw std::invalid_argument("Operator: entries must be square with side equal to the product of factors");
  }

  explicit Operator(Matrix entries) {
    const Index side = entries.rows();
    *this = Operator(std::move(entries), {side});
  }

  static Operator identity(Index d) { return Operator(Matrix::Identity(d, d), {d}); }
  static Operator zero(Index d) { return Operator(Matrix::Zero(d, d), {d}); }

  Index dim() const { return m_.rows(); }
  const std::vector<Index>& factors() const { return factors_; }
  bool bipartite() const { return factors_.size() == 2; }
  const Matrix& matrix() const { return m_; }

  Complex trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }

  Operator adjoint() const { return Operator(m_.adjoint(), factors_); }
  Operator transposed() const { return Operator(m_.transpose(), factors_); }
  /// Entrywise complex conjugation in the computational basis (the paper's
  /// "*" convention; bases supplied by users are conjugated in this basis).
  Operator conjugated() const { return Operator(m_.conjugate(), factors_); }

  /// Same matrix, reinterpreted subsystem grouping (e.g. [d*d, d] for a
  /// tripartite state handled as pair-vs-rest).
  Operator regrouped(std::vector<Index> factors) const {
    return Operator(m_, std::move(factors));
  }

  double max_asymmetry() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  }
  bool is_hermitian(double tol) const { return max_asymmetry() <= tol; }

  Operator& operator+=(const Operator& o) { check_shape(o); m_ += o.m_; return *this; }
  Operator& operator-=(const Operator& o) { check_shape(o); m_ -= o.m_; return *this; }
  Operator& operator*=(Complex s) { m_ *= s; return *this; }

  friend Operator operator+(Operator a, const Operator& b) { a += b; return a; }
  friend Operator operator-(Operator a, const Operator& b) { a -= b; return a; }
  friend Operator operator*(Complex s, Operator a) { a *= s; return a; }
  friend Operator operator*(Operator a, Complex s) { a *= s; return a; }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.check_shape(b);
    return Operator(a.m_ * b.m_, a.factors_);
  }

 private:
  void check_shape(const Operator& o) const {
    if (dim() != o.dim())
      throw std::invalid_argument("Operator: shape mismatch (" + std::to_string(dim()) +
                                  " vs " + std::to_string(o.dim()) + ")");
  }

  std::vector<Index> factors_;
  Matrix m_;
};

/// Unit-norm Hilbert space vector.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes, const Tolerance& tol = Tolerance::defaults())
      : amps_(std::move(amplitudes)) {
    if (amps_.size() < 1) throw std::invalid_argument("StateVector: empty amplitude vector");
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > std::max(tol.absolute, 1e-9))
      throw std::invalid_argument("StateVector: norm " + std::to_string(n) + " is not 1");
  }

  static StateVector normalized(Vector amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize the zero vector");
    return StateVector(Vector(amplitudes / n));
  }

  static StateVector basis_state(Index d, Index n) {
    if (n < 0 || n >= d) throw std::invalid_argument("StateVector: basis index out of range");
    Vector v = Vector::Zero(d);
    v(n) = 1.0;
    return StateVector(std::move(v));
  }

  Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }

  Complex inner(const StateVector& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("StateVector: dim mismatch");
    return amps_.dot(other.amps_);  // <this|other>
  }

  StateVector conjugated() const { return StateVector(amps_.conjugate()); }

  Operator projector() const { return Operator(amps_ * amps_.adjoint(), {dim()}); }

 private:
  Vector amps_;
};

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector v(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i)
    for (Index k = 0; k < b.dim(); ++k)
      v(i * b.dim() + k) = a.amplitudes()(i) * b.amplitudes()(k);
  return StateVector(std::move(v));
}

/// Kronecker product; factors become [dim(a), dim(b)].
inline Operator tensor(const Operator& a, const Operator& b) {
  const Index da = a.dim(), db = b.dim();
  Matrix out(da * db, da * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return Operator(std::move(out), {da, db});
}

inline void require_bipartite(const Operator& x, const char* op) {
  if (!x.bipartite())
    throw std::invalid_argument(std::string(op) + ": operator must have exactly two factors");
}

/// Trace over the factor not kept; Tr(result) = Tr(x).
inline Operator partial_trace(const Operator& x, Subsystem keep) {
  require_bipartite(x, "partial_trace");
  const Index d1 = x.factors()[0], d2 = x.factors()[1];
  if (keep == Subsystem::first) {
    Matrix out = Matrix::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        for (Index k = 0; k < d2; ++k)
          out(i, j) += x.matrix()(i * d2 + k, j * d2 + k);
    return Operator(std::move(out), {d1});
  }
  Matrix out = Matrix::Zero(d2, d2);
  for (Index i = 0; i < d2; ++i)
    for (Index j = 0; j < d2; ++j)
      for (Index k = 0; k < d1; ++k)
        out(i, j) += x.matrix()(k * d2 + i, k * d2 + j);
  return Operator(std::move(out), {d2});
}

/// Transpose of the selected factor's indices; applying twice restores x.
inline Operator partial_transpose(const Operator& x, Subsystem which) {
  require_bipartite(x, "partial_transpose");
  const Index d1 = x.factors()[0], d2 = x.factors()[1];
  Matrix out(x.dim(), x.dim());
  for (Index i = 0; i < d1; ++i)
    for (Index k = 0; k < d2; ++k)
      for (Index j = 0; j < d1; ++j)
        for (Index l = 0; l < d2; ++l) {
          if (which == Subsystem::second)
            out(i * d2 + k, j * d2 + l) = x.matrix()(i * d2 + l, j * d2 + k);
          else
            out(i * d2 + k, j * d2 + l) = x.matrix()(j * d2 + k, i * d2 + l);
        }
  return Operator(std::move(out), x.factors());
}

struct HermitianEig {
  Eigen::VectorXd eigenvalues;  // descending
  Matrix eigenvectors;          // columns, aligned with eigenvalues

  StateVector vector(Index k) const { return StateVector::normalized(eigenvectors.col(k)); }
};

namespace detail {

// Phase convention: first entry above threshold made real positive.
inline Vector phase_normalized(Vector v) {
  const double thresh = 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
  for (Index k = 0; k < v.size(); ++k) {
    const Complex c = v(k);
    if (std::abs(c) > thresh) {
      v *= std::conj(c) / std::abs(c);
      break;
    }
  }
  return v;
}

inline bool lex_less(const Vector& a, const Vector& b) {
  for (Index k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return false;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian operator. Eigenvalues are sorted
/// descending; degenerate groups are ordered lexicographically by the
/// phase-normalized eigenvector entries so output is reproducible.
inline HermitianEig hermitian_eig(const Operator& a, const Tolerance& tol = Tolerance::defaults()) {
  const double asym = a.max_asymmetry();
  const double bound = std::max(tol.absolute, tol.relative * a.frobenius_norm());
  if (asym > bound) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian (max asymmetry " << asym << ")";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((a.matrix() + a.matrix().adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");

  const Index n = a.dim();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Solver returns ascending order; flip to descending.
  std::reverse(order.begin(), order.end());

  std::vector<Vector> vecs(n);
  for (Index k = 0; k < n; ++k)
    vecs[k] = detail::phase_normalized(solver.eigenvectors().col(order[k]));
  Eigen::VectorXd vals(n);
  for (Index k = 0; k < n; ++k) vals(k) = solver.eigenvalues()(order[k]);

  // Lexicographic tie-break inside near-degenerate runs.
  const double tie = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  Index lo = 0;
  while (lo < n) {
    Index hi = lo + 1;
    while (hi < n && std::abs(vals(hi) - vals(lo)) <= tie) ++hi;
    std::sort(vecs.begin() + lo, vecs.begin() + hi, detail::lex_less);
    lo = hi;
  }

  HermitianEig out;
  out.eigenvalues = vals;
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) out.eigenvectors.col(k) = vecs[k];
  return out;
}

inline double min_eigenvalue(const Operator& a, const Tolerance& tol = Tolerance::defaults()) {
  const HermitianEig eig = hermitian_eig(a, tol);
  return eig.eigenvalues(eig.eigenvalues.size() - 1);
}

/// Haar-random pure state; deterministic for a fixed seed.
inline StateVector haar_random_pure(Index d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("haar_random_pure: d must be at least 2");
  Rng rng(seed);
  Vector v(d);
  for (Index k = 0; k < d; ++k) v(k) = Complex(rng.gauss(), rng.gauss());
  return StateVector::normalized(std::move(v));
}

/// Weyl shift unitary W(q, p) = X^q Z^p with X|n> = |n+1 mod d> and
/// Z|n> = w^n |n>, w = exp(2*pi*i/d). W(0, 0) = I and
/// W(q,p) W(q',p') = w^(p q') W(q+q', p+p').
inline Operator weyl_operator(Index d, Index q, Index p) {
  if (d < 1) throw std::invalid_argument("weyl_operator: d must be positive");
  const auto mod = [d](Index v) { return ((v % d) + d) % d; };
  q = mod(q);
  p = mod(p);
  const double two_pi = 2.0 * 3.14159265358979323846;
  Matrix w = Matrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) {
    const double phase = two_pi * static_cast<double>(p * n % d) / static_cast<double>(d);
    w(mod(n + q), n) = std::polar(1.0, phase);
  }
  return Operator(std::move(w), {d});
}

inline double frobenius_distance(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("frobenius_distance: shape mismatch");
  return (a.matrix() - b.matrix()).norm();
}

/// Positive unit-trace operator; physicality is validated at construction.
class DensityOperator {
 public:
  explicit DensityOperator(Operator op, const Tolerance& tol = Tolerance::defaults())
      : op_(std::move(op)) {
    std::string why;
    if (!is_valid(op_, tol, &why)) throw std::invalid_argument("DensityOperator: " + why);
  }

  static DensityOperator pure(const StateVector& psi) { return DensityOperator(psi.projector()); }

  static DensityOperator maximally_mixed(Index d) {
    return DensityOperator(Operator(Matrix::Identity(d, d) / static_cast<double>(d), {d}));
  }

  static bool is_valid(const Operator& op, const Tolerance& tol, std::string* why = nullptr) {
    const double asym = op.max_asymmetry();
    if (asym > std::max(tol.absolute, 1e-9)) {
      if (why) *why = "not Hermitian (max asymmetry " + std::to_string(asym) + ")";
      return false;
    }
    const double tr_err = std::abs(op.trace() - Complex(1.0));
    if (tr_err > std::max(tol.absolute, 1e-9)) {
      if (why) *why = "trace differs from 1 by " + std::to_string(tr_err);
      return false;
    }
    Tolerance eig_tol = tol;
    eig_tol.absolute = std::max(tol.absolute, 1e-9);
    const double min_eig = min_eigenvalue(op, eig_tol);
    if (min_eig < -std::max(tol.absolute, 1e-9)) {
      if (why) *why = "negative eigenvalue " + std::to_string(min_eig);
      return false;
    }
    return true;
  }

  const Operator& op() const { return op_; }
  Index dim() const { return op_.dim(); }
  double purity() const { return (op_.matrix() * op_.matrix()).trace().real(); }

 private:
  Operator op_;
};

inline std::vector<StateVector> computational_basis(Index d) {
  std::vector<StateVector> basis;
  basis.reserve(static_cast<std::size_t>(d));
  for (Index n = 0; n < d; ++n) basis.push_back(StateVector::basis_state(d, n));
  return basis;
}

/// Fourier basis |b_k> = d^-1/2 sum_n w^(kn) |n>; mutually unbiased with the
/// computational basis (|+>, |-> for d = 2).
inline std::vector<StateVector> fourier_basis(Index d) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  std::vector<StateVector> basis;
  basis.reserve(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    Vector v(d);
    for (Index n = 0; n < d; ++n)
      v(n) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                        two_pi * static_cast<double>(k * n % d) / static_cast<double>(d));
    basis.push_back(StateVector(std::move(v)));
  }
  return basis;
}

}  // namespace opframe
