#include "lg/exact.hpp"

#include <cstdlib>

namespace lg {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  SmithForm s{IntMatrix::Identity(m, m), a, IntMatrix::Identity(n, n)};
  IntMatrix& d = s.d;

  auto swap_rows = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    d.row(i).swap(d.row(j));
    s.u.row(i).swap(s.u.row(j));
  };
  auto swap_cols = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    d.col(i).swap(d.col(j));
    s.v.col(i).swap(s.v.col(j));
  };

  for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      Eigen::Index pi = -1, pj = -1;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (d(i, j) != 0 && (pi < 0 || std::llabs(d(i, j)) < std::llabs(d(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) return s;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        const std::int64_t q = floor_div(d(i, t), d(t, t));
        if (q != 0) {
          d.row(i) -= q * d.row(t);
          s.u.row(i) -= q * s.u.row(t);
        }
        if (d(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        const std::int64_t q = floor_div(d(t, j), d(t, t));
        if (q != 0) {
          d.col(j) -= q * d.col(t);
          s.v.col(j) -= q * s.v.col(t);
        }
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility d_t | remaining entries.
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      d.row(t) += d.row(bad);
      s.u.row(t) += s.u.row(bad);
    }
    if (d(t, t) < 0) {
      d.row(t) *= -1;
      s.u.row(t) *= -1;
    }
  }
  return s;
}

}  // namespace lg
