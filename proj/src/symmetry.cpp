#include "lg/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "lg/errors.hpp"
#include "lg/exact.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "symmetry";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

void check_size(const QHPoly& w, const GroupElement& g) {
  if (g.size() != w.n_vars()) fail("group element has wrong length");
}

}  // namespace

std::int64_t GroupElement::order() const { return common_denominator(theta); }

GroupElement GroupElement::inverse() const { return from_phases(-theta); }

bool GroupElement::is_identity() const {
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (theta(i) != Rational(0)) return false;
  return true;
}

GroupElement GroupElement::identity(Eigen::Index n) {
  return GroupElement{RationalVector::Constant(n, Rational(0))};
}

GroupElement GroupElement::from_phases(const RationalVector& phases) {
  GroupElement g{phases};
  for (Eigen::Index i = 0; i < g.theta.size(); ++i) g.theta(i) = frac(g.theta(i));
  return g;
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.size() != b.size()) fail("composing group elements of different length");
  return GroupElement::from_phases(a.theta + b.theta);
}

bool operator==(const GroupElement& a, const GroupElement& b) {
  return a.size() == b.size() && a.theta == b.theta;
}

bool operator<(const GroupElement& a, const GroupElement& b) {
  return std::lexicographical_compare(a.theta.begin(), a.theta.end(), b.theta.begin(), b.theta.end());
}

GroupElement power(const GroupElement& g, std::int64_t k) {
  return GroupElement::from_phases(g.theta * Rational(k));
}

bool in_group(const QHPoly& w, const GroupElement& g) {
  if (g.size() != w.n_vars()) return false;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g.theta(i) < Rational(0) || g.theta(i) >= Rational(1)) return false;
  const RationalVector phase = to_rational(w.exponents()) * g.theta;
  for (Eigen::Index j = 0; j < phase.size(); ++j)
    if (!is_integer(phase(j))) return false;
  return true;
}

std::vector<GroupElement> enumerate_group(const QHPoly& w) {
  const IntMatrix& b = w.exponents();
  const Eigen::Index n = w.n_vars();
  const SmithForm snf = smith_normal_form(b);
  std::vector<std::int64_t> d(static_cast<std::size_t>(n), 0);
  for (Eigen::Index k = 0; k < n && k < snf.d.rows(); ++k) d[static_cast<std::size_t>(k)] = snf.d(k, k);
  for (std::int64_t dk : d)
    if (dk == 0) fail("exponent matrix has rank < N: the diagonal group is infinite");

  // B theta in Z^s  <=>  D V^{-1} theta in Z^s; theta = V phi with phi_k in (1/d_k) Z.
  const RationalMatrix v = to_rational(snf.v);
  std::vector<GroupElement> out;
  std::vector<std::int64_t> m(static_cast<std::size_t>(n), 0);
  for (;;) {
    RationalVector phi(n);
    for (Eigen::Index k = 0; k < n; ++k)
      phi(k) = Rational(m[static_cast<std::size_t>(k)], d[static_cast<std::size_t>(k)]);
    out.push_back(GroupElement::from_phases(v * phi));
    Eigen::Index k = 0;
    for (; k < n; ++k) {
      auto& mk = m[static_cast<std::size_t>(k)];
      if (++mk < d[static_cast<std::size_t>(k)]) break;
      mk = 0;
    }
    if (k == n) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t group_order(const QHPoly& w) { return static_cast<std::int64_t>(enumerate_group(w).size()); }

GroupElement exponential_grading(const QHPoly& w) {
  GroupElement j = GroupElement::from_phases(w.weights());
  if (!in_group(w, j)) throw std::logic_error("exponential grading element is not in G_W");
  return j;
}

Sector sector_data(const QHPoly& w, const GroupElement& g) {
  check_size(w, g);
  if (!in_group(w, g)) fail("element is not in the diagonal symmetry group");
  Sector s;
  s.gamma = g;
  s.iota = Rational(0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g.theta(i) == Rational(0)) s.fixed_indices.push_back(i);
    s.iota += g.theta(i) - w.weights()(i);
  }
  s.n_gamma = static_cast<Eigen::Index>(s.fixed_indices.size());
  s.is_ramond = s.n_gamma > 0;
  const RationalVector phase = to_rational(w.exponents()) * g.theta;
  for (Eigen::Index j = 0; j < phase.size(); ++j)
    if (phase(j) == Rational(0)) s.w_gamma_monomials.push_back(j);
  s.order = g.order();
  std::int64_t moved = 1;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g.theta(i) != Rational(0)) moved = std::lcm(moved, g.theta(i).denominator());
  s.faithful = moved == s.order;
  return s;
}

QHPoly sector_polynomial(const QHPoly& w, const Sector& s) {
  return restrict_to(w, s.fixed_indices, s.w_gamma_monomials);
}

Rational central_charge(const QHPoly& w) {
  Rational c(0);
  for (Eigen::Index i = 0; i < w.n_vars(); ++i) c += Rational(1) - Rational(2) * w.weights()(i);
  return c;
}

RationalVector GluingInvolution::turns() const {
  RationalVector t(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) t(i) = frac(Rational(k(i) * (2 * choice + 1), 2 * d));
  return t;
}

ComplexVector GluingInvolution::factors() const {
  const RationalVector t = turns();
  ComplexVector f(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) f(i) = std::polar(1.0, 2.0 * M_PI * to_double(t(i)));
  return f;
}

ComplexVector GluingInvolution::apply(const ComplexVector& u) const {
  if (u.size() != k.size()) fail("dimension mismatch in gluing involution");
  return factors().cwiseProduct(u);
}

GroupElement GluingInvolution::square() const { return GroupElement::from_phases(turns() * Rational(2)); }

ComplexVector GluingInvolution::transport_perturbation(const ComplexVector& c) const {
  if (c.size() != k.size()) fail("dimension mismatch in gluing involution");
  return -factors().conjugate().cwiseProduct(c);
}

GluingInvolution gluing_involution(const QHPoly& w, std::int64_t choice, std::uint64_t seed) {
  GluingInvolution inv;
  inv.d = common_denominator(w.weights());
  if (choice < 0 || choice >= inv.d) fail("xi choice must lie in [0, d)");
  inv.choice = choice;
  inv.k.resize(w.n_vars());
  for (Eigen::Index i = 0; i < w.n_vars(); ++i) {
    const Rational scaled = w.weights()(i) * Rational(inv.d);
    inv.k(i) = scaled.numerator();
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < 20; ++s) {
    ComplexVector u(w.n_vars());
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = Complex(normal(rng), normal(rng));
    const Complex a = evaluate(w, inv.apply(u));
    const Complex b = evaluate(w, u);
    if (std::abs(a + b) > 1e-10 * (1.0 + std::abs(b))) fail("W(I(u)) = -W(u) fails numerically");
  }
  return inv;
}

QHPoly direct_sum(const QHPoly& a, const QHPoly& b) {
  std::set<std::string> seen(a.names().begin(), a.names().end());
  for (const auto& name : b.names())
    if (seen.count(name)) fail("variable '" + name + "' appears in both summands");
  const Eigen::Index n = a.n_vars() + b.n_vars();
  IntMatrix e = IntMatrix::Zero(a.n_monomials() + b.n_monomials(), n);
  e.topLeftCorner(a.n_monomials(), a.n_vars()) = a.exponents();
  e.bottomRightCorner(b.n_monomials(), b.n_vars()) = b.exponents();
  ComplexVector c(e.rows());
  c << a.coefficients(), b.coefficients();
  std::vector<std::string> names = a.names();
  names.insert(names.end(), b.names().begin(), b.names().end());
  return QHPoly(std::move(e), std::move(c), std::move(names));
}

}  // namespace lg
