#ifndef LG_EXACT_HPP
#define LG_EXACT_HPP

#include <optional>
#include <utility>

#include "lg/rational.hpp"

namespace lg {

/// Result of Gauss-Jordan elimination on an augmented system A x = b.
template <typename Scalar>
struct ExactSolve {
  Eigen::Index rank = 0;
  bool consistent = false;
  std::optional<Vector<Scalar>> solution;  ///< set only when unique
};

/// Gauss-Jordan elimination over an exact field.  No pivoting strategy is
/// needed beyond "first nonzero", since the arithmetic is exact.
template <typename Scalar>
ExactSolve<Scalar> solve_exact(Matrix<Scalar> a, Vector<Scalar> b) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  ExactSolve<Scalar> out;
  std::vector<Eigen::Index> pivot_col;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = r;
    while (p < rows && a(p, c) == Scalar(0)) ++p;
    if (p == rows) continue;
    a.row(p).swap(a.row(r));
    std::swap(b(p), b(r));
    const Scalar inv = Scalar(1) / a(r, c);
    a.row(r) *= inv;
    b(r) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == Scalar(0)) continue;
      const Scalar f = a(i, c);
      a.row(i) -= f * a.row(r);
      b(i) -= f * b(r);
    }
    pivot_col.push_back(c);
    ++r;
  }
  out.rank = r;
  out.consistent = true;
  for (Eigen::Index i = r; i < rows; ++i)
    if (b(i) != Scalar(0)) out.consistent = false;
  if (out.consistent && r == cols) {
    Vector<Scalar> x(cols);
    for (Eigen::Index i = 0; i < r; ++i) x(pivot_col[static_cast<std::size_t>(i)]) = b(i);
    out.solution = std::move(x);
  }
  return out;
}

template <typename Scalar>
Eigen::Index rank_exact(const Matrix<Scalar>& a) {
  return solve_exact<Scalar>(a, Vector<Scalar>::Zero(a.rows())).rank;
}

/// Exact inverse; std::nullopt when singular.
template <typename Scalar>
std::optional<Matrix<Scalar>> inverse_exact(Matrix<Scalar> a) {
  const Eigen::Index n = a.rows();
  Matrix<Scalar> inv = Matrix<Scalar>::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a(p, c) == Scalar(0)) ++p;
    if (p == n) return std::nullopt;
    a.row(p).swap(a.row(c));
    inv.row(p).swap(inv.row(c));
    const Scalar s = Scalar(1) / a(c, c);
    a.row(c) *= s;
    inv.row(c) *= s;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || a(i, c) == Scalar(0)) continue;
      const Scalar f = a(i, c);
      a.row(i) -= f * a.row(c);
      inv.row(i) -= f * inv.row(c);
    }
  }
  return inv;
}

template <typename Scalar>
Scalar determinant_exact(Matrix<Scalar> a) {
  const Eigen::Index n = a.rows();
  Scalar det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a(p, c) == Scalar(0)) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      a.row(p).swap(a.row(c));
      det = -det;
    }
    det *= a(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (a(i, c) == Scalar(0)) continue;
      const Scalar f = a(i, c) / a(c, c);
      a.row(i) -= f * a.row(c);
    }
  }
  return det;
}

template <typename Derived>
RationalMatrix to_rational(const Eigen::MatrixBase<Derived>& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(i, j) = Rational(static_cast<std::int64_t>(m(i, j)));
  return out;
}

/// Smith normal form U * A * V = D of an integer matrix, with U and V
/// unimodular and D diagonal with d_1 | d_2 | ... (nonnegative).
struct SmithForm {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
};

SmithForm smith_normal_form(const IntMatrix& a);

}  // namespace lg

#endif  // LG_EXACT_HPP
