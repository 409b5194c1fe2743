#ifndef LG_WPOLY_HPP
#define LG_WPOLY_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lg/rational.hpp"

namespace lg {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Quasi-homogeneous polynomial W = sum_j c_j prod_i x_i^{b_ji}.
///
/// Rows of the exponent matrix are monomials.  The weight vector q is the
/// unique rational solution of B q = 1 and every q_i lies in (0, 1/2).
/// Instances are immutable.
class QHPoly {
 public:
  /// Validates and solves for the weights.  Throws DomainError on a
  /// duplicated monomial, zero coefficient, or bad weight system.
  QHPoly(IntMatrix exponents, ComplexVector coefficients, std::vector<std::string> names);

  /// Builds a polynomial whose weights are inherited rather than solved,
  /// e.g. the restriction W_gamma of W to a fixed locus.  Each monomial
  /// must still have weight exactly one.
  static QHPoly with_weights(IntMatrix exponents, ComplexVector coefficients,
                             std::vector<std::string> names, RationalVector weights);

  Eigen::Index n_vars() const { return weights_.size(); }
  Eigen::Index n_monomials() const { return exponents_.rows(); }
  const IntMatrix& exponents() const { return exponents_; }
  const ComplexVector& coefficients() const { return coefficients_; }
  const RationalVector& weights() const { return weights_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  QHPoly() = default;
  IntMatrix exponents_;
  ComplexVector coefficients_;
  RationalVector weights_;
  std::vector<std::string> names_;
};

/// Parses "x^3 + x*y^2", "x1^4 - 2*x1*x2^2", "(1+2i)*x^3 + y^3", ...
QHPoly parse_polynomial(std::string_view text);

/// Unique exact solution of B q = 1 with 0 < q_i < 1/2.
RationalVector compute_weights(const IntMatrix& exponents);

/// q_i / min_j (1 - q_j).
RationalVector growth_exponents(const QHPoly& w);

/// prod_i (1/q_i - 1); throws if the product is not an integer.
std::int64_t milnor_number(const QHPoly& w);

std::string to_string(const QHPoly& w);

/// Restriction of W to the coordinates `vars`, keeping only the monomials
/// listed in `monomials` (which must involve no other variable).
QHPoly restrict_to(const QHPoly& w, const std::vector<Eigen::Index>& vars,
                   const std::vector<Eigen::Index>& monomials);

template <typename Derived>
Complex evaluate(const QHPoly& w, const Eigen::MatrixBase<Derived>& u);

ComplexVector gradient(const QHPoly& w, const ComplexVector& u);
ComplexMatrix hessian(const QHPoly& w, const ComplexVector& u);

/// Numerical attestation of nondegeneracy: Newton multistart on grad W
/// inside a ball, reporting any critical point away from the origin.
struct NondegeneracyReport {
  bool attested = false;
  int starts = 0;
  std::optional<ComplexVector> witness;
};

NondegeneracyReport attest_nondegenerate(const QHPoly& w, int starts = 200, double radius = 4.0,
                                         std::uint64_t seed = 0);

// ---------------------------------------------------------------------------

namespace detail {
void check_dimension(const QHPoly& w, Eigen::Index n);

inline Complex ipow(Complex z, std::int64_t e) {
  Complex r(1.0, 0.0);
  for (; e > 0; e >>= 1, z *= z)
    if (e & 1) r *= z;
  return r;
}
}  // namespace detail

template <typename Derived>
Complex evaluate(const QHPoly& w, const Eigen::MatrixBase<Derived>& u) {
  detail::check_dimension(w, u.size());
  Complex total(0.0, 0.0);
  for (Eigen::Index j = 0; j < w.n_monomials(); ++j) {
    Complex term = w.coefficients()(j);
    for (Eigen::Index i = 0; i < w.n_vars(); ++i) {
      const auto e = w.exponents()(j, i);
      if (e > 0) term *= detail::ipow(Complex(u(i)), e);
    }
    total += term;
  }
  return total;
}

}  // namespace lg

#endif  // LG_WPOLY_HPP
