#ifndef LG_SYMMETRY_HPP
#define LG_SYMMETRY_HPP

#include <cstdint>
#include <vector>

#include "lg/rational.hpp"
#include "lg/wpoly.hpp"

namespace lg {

/// Diagonal symmetry acting on x_i by exp(2 pi i theta_i), theta_i in [0, 1).
struct GroupElement {
  RationalVector theta;

  Eigen::Index size() const { return theta.size(); }
  std::int64_t order() const;
  GroupElement inverse() const;
  bool is_identity() const;

  static GroupElement identity(Eigen::Index n);
  /// Reduces every entry mod 1.
  static GroupElement from_phases(const RationalVector& phases);
};

GroupElement operator*(const GroupElement& a, const GroupElement& b);
bool operator==(const GroupElement& a, const GroupElement& b);
inline bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
/// Lexicographic on theta; the canonical sort order.
bool operator<(const GroupElement& a, const GroupElement& b);
GroupElement power(const GroupElement& g, std::int64_t k);

struct Sector {
  GroupElement gamma;
  std::vector<Eigen::Index> fixed_indices;
  Eigen::Index n_gamma = 0;
  Rational iota;
  std::vector<Eigen::Index> w_gamma_monomials;
  bool is_ramond = false;
  std::int64_t order = 1;  // |<gamma>|
  bool faithful = true;    // <gamma> acts faithfully on the moved coordinates
};

/// True when B theta is integral and theta lies in [0, 1)^N.
bool in_group(const QHPoly& w, const GroupElement& g);

/// All of G_W, from the Smith normal form of the exponent matrix, sorted.
std::vector<GroupElement> enumerate_group(const QHPoly& w);
std::int64_t group_order(const QHPoly& w);

/// theta = q.
GroupElement exponential_grading(const QHPoly& w);

Sector sector_data(const QHPoly& w, const GroupElement& g);

/// W_gamma as a polynomial on the fixed locus, with inherited weights.
QHPoly sector_polynomial(const QHPoly& w, const Sector& s);

/// sum (1 - 2 q_i).
Rational central_charge(const QHPoly& w);

/// I(x)_i = xi^{k_i} x_i with xi = exp(i pi (2m+1) / d), q_i = k_i / d.
/// choice = 0 is the principal xi = exp(i pi / d).
struct GluingInvolution {
  std::int64_t d = 1;
  IntVector k;
  std::int64_t choice = 0;

  /// Phases of the diagonal factors, in turns: k_i (2m+1) / (2d).
  RationalVector turns() const;
  ComplexVector factors() const;
  ComplexVector apply(const ComplexVector& u) const;
  /// I^2 as a group element.
  GroupElement square() const;
  /// If kappa is critical for W + c.x then I(kappa) is critical for
  /// W + c'.x with c'_i = -xi^{-k_i} c_i, at value -alpha.
  ComplexVector transport_perturbation(const ComplexVector& c) const;
};

/// Throws if W(I(u)) = -W(u) fails on random samples.
GluingInvolution gluing_involution(const QHPoly& w, std::int64_t choice = 0, std::uint64_t seed = 0);

/// W1(x) + W2(y) on disjoint variables.
QHPoly direct_sum(const QHPoly& a, const QHPoly& b);

}  // namespace lg

#endif  // LG_SYMMETRY_HPP
