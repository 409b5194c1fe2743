#ifndef LG_RATIONAL_HPP
#define LG_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/rational.hpp>

namespace lg {

/// Exact rational scalar used for weights, phases, degree shifts and
/// cycle coordinates.  Denominators in this code base stay small (they
/// divide |G_W|), so 64-bit components are ample.
using Rational = boost::rational<std::int64_t>;

}  // namespace lg

namespace Eigen {

template <>
struct NumTraits<lg::Rational> : GenericNumTraits<lg::Rational> {
  typedef lg::Rational Real;
  typedef lg::Rational NonInteger;
  typedef lg::Rational Literal;
  typedef lg::Rational Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace lg {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RationalVector = Vector<Rational>;
using RationalMatrix = Matrix<Rational>;
using IntMatrix = Matrix<std::int64_t>;
using IntVector = Vector<std::int64_t>;

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline std::int64_t floor(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return q;
}

/// Representative of r in [0, 1).
inline Rational frac(const Rational& r) { return r - Rational(floor(r)); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

template <typename Range>
std::int64_t common_denominator(const Range& values) {
  std::int64_t d = 1;
  for (const Rational& v : values) d = std::lcm(d, v.denominator());
  return d;
}

inline std::vector<std::string> to_strings(const RationalVector& v) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_string(v(i)));
  return out;
}

}  // namespace lg


#endif  // LG_RATIONAL_HPP
