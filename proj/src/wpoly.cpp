#include "lg/wpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>

#include "lg/errors.hpp"
#include "lg/exact.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "wpoly";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

void check_weight_identity(const IntMatrix& b, const RationalVector& q) {
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    Rational total(0);
    for (Eigen::Index i = 0; i < b.cols(); ++i) total += Rational(b(j, i)) * q(i);
    if (total != Rational(1)) fail("monomial " + std::to_string(j) + " does not have weight 1");
  }
}

void check_shape(const IntMatrix& b, const ComplexVector& c, const std::vector<std::string>& names) {
  if (c.size() != b.rows()) fail("coefficient count does not match monomial count");
  if (static_cast<Eigen::Index>(names.size()) != b.cols()) fail("variable name count mismatch");
  if ((b.array() < 0).any()) fail("negative exponent");
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (c(j) == Complex(0.0, 0.0)) fail("zero coefficient");
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index k = j + 1; k < b.rows(); ++k)
      if (b.row(j) == b.row(k)) fail("duplicate monomial");
}

struct RawTerm {
  Complex coefficient;
  std::map<int, std::int64_t> powers;  // variable slot -> exponent
};

class Parser {
 public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  QHPoly parse() {
    if (s_.empty()) fail("empty polynomial");
    std::vector<RawTerm> terms;
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-')
        sign = (get() == '-') ? -1.0 : 1.0;
      else if (!first)
        error("expected '+' or '-'");
      first = false;
      RawTerm t = term();
      t.coefficient *= sign;
      terms.push_back(std::move(t));
    }
    return build(terms);
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }

  [[noreturn]] void error(const std::string& what) const {
    fail("syntax error at position " + std::to_string(pos_) + ": " + what);
  }

  static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
  static bool starts_number(char c) { return is_digit(c) || c == '.'; }
  static bool starts_variable(char c) { return c == 'x' || c == 'y' || c == 'z' || c == 'w'; }

  double number() {
    const std::size_t start = pos_;
    while (starts_number(peek())) ++pos_;
    if ((peek() == 'e' || peek() == 'E') && pos_ > start) {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      while (is_digit(peek())) ++pos_;
    }
    try {
      return std::stod(s_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      error("bad number");
    }
  }

  Complex real_or_imaginary() {
    double value = 1.0;
    bool have_number = false;
    if (starts_number(peek())) {
      value = number();
      have_number = true;
    }
    if (peek() == 'i') {
      ++pos_;
      return {0.0, value};
    }
    if (!have_number) error("expected a number");
    return {value, 0.0};
  }

  Complex parenthesised() {
    ++pos_;
    Complex z(0.0, 0.0);
    bool first = true;
    while (peek() != ')') {
      if (peek() == '\0') error("unterminated '('");
      double sign = 1.0;
      if (peek() == '+' || peek() == '-')
        sign = (get() == '-') ? -1.0 : 1.0;
      else if (!first)
        error("expected '+' or '-' inside coefficient");
      first = false;
      z += sign * real_or_imaginary();
    }
    ++pos_;
    return z;
  }

  int variable() {
    const char c = get();
    if (c == 'x' && is_digit(peek())) {
      int index = 0;
      while (is_digit(peek())) index = index * 10 + (get() - '0');
      if (index < 1) error("variables are numbered from x1");
      set_style(true);
      return index - 1;
    }
    set_style(false);
    switch (c) {
      case 'x': return 0;
      case 'y': return 1;
      case 'z': return 2;
      default: return 3;  // 'w'
    }
  }

  void set_style(bool indexed) {
    const int style = indexed ? 1 : 2;
    if (style_ == 0) style_ = style;
    if (style_ != style) error("mixed variable naming styles");
  }

  RawTerm term() {
    RawTerm t{Complex(1.0, 0.0), {}};
    bool have_coef = false;
    if (peek() == '(') {
      t.coefficient = parenthesised();
      have_coef = true;
    } else if (starts_number(peek()) || peek() == 'i') {
      t.coefficient = real_or_imaginary();
      have_coef = true;
    }
    if (have_coef && peek() == '*') ++pos_;
    if (!starts_variable(peek())) error("expected a variable (constant terms are not quasi-homogeneous)");
    for (;;) {
      const int v = variable();
      std::int64_t e = 1;
      if (peek() == '^') {
        ++pos_;
        if (!is_digit(peek())) error("expected exponent");
        e = 0;
        while (is_digit(peek())) e = e * 10 + (get() - '0');
        if (e < 1) error("exponents must be >= 1");
      }
      t.powers[v] += e;
      if (peek() == '*' && pos_ + 1 < s_.size() && starts_variable(s_[pos_ + 1])) {
        ++pos_;
        continue;
      }
      if (starts_variable(peek())) continue;
      break;
    }
    return t;
  }

  QHPoly build(const std::vector<RawTerm>& terms) const {
    std::set<int> slots;
    for (const auto& t : terms)
      for (const auto& [v, e] : t.powers) slots.insert(v);
    std::vector<int> order(slots.begin(), slots.end());
    std::vector<std::string> names;
    static const char* letters[] = {"x", "y", "z", "w"};
    if (style_ == 1) {
      // x1..xN must all appear.
      if (order.back() + 1 != static_cast<int>(order.size()))
        fail("variables x1..xN must all appear");
      for (int v : order) names.push_back("x" + std::to_string(v + 1));
    } else {
      for (int v : order) names.push_back(letters[v]);
    }
    const auto n = static_cast<Eigen::Index>(order.size());

    std::map<std::vector<std::int64_t>, Complex> merged;
    std::vector<std::vector<std::int64_t>> first_seen;
    for (const auto& t : terms) {
      std::vector<std::int64_t> row(static_cast<std::size_t>(n), 0);
      for (const auto& [v, e] : t.powers) {
        const auto slot = std::lower_bound(order.begin(), order.end(), v) - order.begin();
        row[static_cast<std::size_t>(slot)] = e;
      }
      if (!merged.count(row)) first_seen.push_back(row);
      merged[row] += t.coefficient;
    }
    IntMatrix b(static_cast<Eigen::Index>(first_seen.size()), n);
    ComplexVector c(b.rows());
    for (std::size_t j = 0; j < first_seen.size(); ++j) {
      const Complex coef = merged[first_seen[j]];
      if (std::abs(coef) == 0.0) fail("merged coefficient is zero");
      for (Eigen::Index i = 0; i < n; ++i) b(static_cast<Eigen::Index>(j), i) = first_seen[j][static_cast<std::size_t>(i)];
      c(static_cast<Eigen::Index>(j)) = coef;
    }
    return QHPoly(std::move(b), std::move(c), std::move(names));
  }

  std::string s_;
  std::size_t pos_ = 0;
  int style_ = 0;  // 1: x1..xN, 2: x,y,z,w
};

}  // namespace

namespace detail {
void check_dimension(const QHPoly& w, Eigen::Index n) {
  if (n != w.n_vars())
    throw DomainError(kModule, "dimension mismatch: polynomial has " + std::to_string(w.n_vars()) +
                                   " variables, point has " + std::to_string(n));
}
}  // namespace detail

QHPoly::QHPoly(IntMatrix exponents, ComplexVector coefficients, std::vector<std::string> names)
    : exponents_(std::move(exponents)), coefficients_(std::move(coefficients)), names_(std::move(names)) {
  check_shape(exponents_, coefficients_, names_);
  weights_ = compute_weights(exponents_);
}

QHPoly QHPoly::with_weights(IntMatrix exponents, ComplexVector coefficients,
                            std::vector<std::string> names, RationalVector weights) {
  QHPoly w;
  w.exponents_ = std::move(exponents);
  w.coefficients_ = std::move(coefficients);
  w.names_ = std::move(names);
  w.weights_ = std::move(weights);
  if (w.exponents_.cols() != w.weights_.size()) fail("weight count mismatch");
  check_shape(w.exponents_, w.coefficients_, w.names_);
  check_weight_identity(w.exponents_, w.weights_);
  return w;
}

QHPoly parse_polynomial(std::string_view text) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  return Parser(std::move(compact)).parse();
}

RationalVector compute_weights(const IntMatrix& exponents) {
  if (exponents.rows() == 0 || exponents.cols() == 0) fail("empty exponent matrix");
  const auto b = to_rational(exponents);
  const auto solved = solve_exact<Rational>(b, RationalVector::Constant(b.rows(), Rational(1)));
  if (!solved.consistent) fail("inconsistent weight system: no q with B q = 1");
  if (!solved.solution)
    fail("rank-deficient exponent matrix (rank " + std::to_string(solved.rank) + " < " +
         std::to_string(b.cols()) + "): weights are not unique");
  const RationalVector& q = *solved.solution;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q(i) <= Rational(0) || q(i) >= Rational(1, 2))
      fail("weight q_" + std::to_string(i + 1) + " = " + to_string(q(i)) +
           " outside (0, 1/2); A1-type variables are unsupported");
  return q;
}

RationalVector growth_exponents(const QHPoly& w) {
  const RationalVector& q = w.weights();
  Rational smallest(1);
  for (Eigen::Index i = 0; i < q.size(); ++i) smallest = std::min(smallest, Rational(1) - q(i));
  RationalVector delta(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) delta(i) = q(i) / smallest;
  return delta;
}

std::int64_t milnor_number(const QHPoly& w) {
  Rational mu(1);
  for (Eigen::Index i = 0; i < w.n_vars(); ++i) mu *= Rational(1) / w.weights()(i) - Rational(1);
  if (!is_integer(mu)) fail("Milnor number " + to_string(mu) + " is not an integer: degenerate weight system");
  return mu.numerator();
}

std::string to_string(const QHPoly& w) {
  std::string out;
  for (Eigen::Index j = 0; j < w.n_monomials(); ++j) {
    const Complex c = w.coefficients()(j);
    std::string coef;
    if (c != Complex(1.0, 0.0)) {
      std::ostringstream os;
      os.precision(12);
      if (c.imag() == 0.0)
        os << c.real();
      else
        os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
      coef = os.str() + "*";
    }
    std::string mono;
    for (Eigen::Index i = 0; i < w.n_vars(); ++i) {
      const auto e = w.exponents()(j, i);
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += w.names()[static_cast<std::size_t>(i)];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (j > 0) out += " + ";
    out += coef + mono;
  }
  return out.empty() ? "0" : out;
}

QHPoly restrict_to(const QHPoly& w, const std::vector<Eigen::Index>& vars,
                   const std::vector<Eigen::Index>& monomials) {
  const auto n = static_cast<Eigen::Index>(vars.size());
  IntMatrix b(static_cast<Eigen::Index>(monomials.size()), n);
  ComplexVector c(b.rows());
  RationalVector q(n);
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i) = w.weights()(vars[static_cast<std::size_t>(i)]);
    names.push_back(w.names()[static_cast<std::size_t>(vars[static_cast<std::size_t>(i)])]);
  }
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    const Eigen::Index j = monomials[static_cast<std::size_t>(r)];
    std::int64_t kept = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      b(r, i) = w.exponents()(j, vars[static_cast<std::size_t>(i)]);
      kept += b(r, i);
    }
    if (kept != w.exponents().row(j).sum()) fail("monomial involves a variable outside the restriction");
    c(r) = w.coefficients()(j);
  }
  return QHPoly::with_weights(std::move(b), std::move(c), std::move(names), std::move(q));
}

ComplexVector gradient(const QHPoly& w, const ComplexVector& u) {
  detail::check_dimension(w, u.size());
  const Eigen::Index n = w.n_vars();
  ComplexVector g = ComplexVector::Zero(n);
  for (Eigen::Index j = 0; j < w.n_monomials(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ei = w.exponents()(j, i);
      if (ei == 0) continue;
      Complex term = w.coefficients()(j) * static_cast<double>(ei) * detail::ipow(u(i), ei - 1);
      for (Eigen::Index k = 0; k < n; ++k)
        if (k != i) term *= detail::ipow(u(k), w.exponents()(j, k));
      g(i) += term;
    }
  }
  return g;
}

ComplexMatrix hessian(const QHPoly& w, const ComplexVector& u) {
  detail::check_dimension(w, u.size());
  const Eigen::Index n = w.n_vars();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < w.n_monomials(); ++j) {
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a; b < n; ++b) {
        std::vector<std::int64_t> e(static_cast<std::size_t>(n));
        for (Eigen::Index k = 0; k < n; ++k) e[static_cast<std::size_t>(k)] = w.exponents()(j, k);
        Complex factor = w.coefficients()(j);
        factor *= static_cast<double>(e[static_cast<std::size_t>(a)]);
        --e[static_cast<std::size_t>(a)];
        factor *= static_cast<double>(e[static_cast<std::size_t>(b)]);
        --e[static_cast<std::size_t>(b)];
        if (factor == Complex(0.0, 0.0)) continue;
        for (Eigen::Index k = 0; k < n; ++k) factor *= detail::ipow(u(k), e[static_cast<std::size_t>(k)]);
        h(a, b) += factor;
      }
    }
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < a; ++b) h(a, b) = h(b, a);
  return h;
}

NondegeneracyReport attest_nondegenerate(const QHPoly& w, int starts, double radius, std::uint64_t seed) {
  NondegeneracyReport report;
  report.starts = starts;
  const Eigen::Index n = w.n_vars();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  for (int s = 0; s < starts; ++s) {
    ComplexVector u(n);
    ComplexVector a(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = Complex(normal(rng), normal(rng));
    for (Eigen::Index i = 0; i < n; ++i) a(i) = Complex(normal(rng), normal(rng));
    const double r = radius * std::pow(unit(rng), 1.0 / (2.0 * static_cast<double>(n)));
    u *= r / u.norm();
    u /= a.dot(u);  // a^H u = 1
    // Gauss-Newton on grad W = 0 restricted to the affine chart a^H u = 1;
    // the critical set is a weighted cone, so any nonzero component meets it.
    ComplexMatrix jac(n + 1, n);
    ComplexVector res(n + 1);
    for (int it = 0; it < 200; ++it) {
      res.head(n) = gradient(w, u);
      res(n) = a.dot(u) - 1.0;
      if (res.norm() < 1e-14) break;
      jac.topRows(n) = hessian(w, u);
      jac.row(n) = a.adjoint();
      const ComplexVector step =
          Eigen::JacobiSVD<ComplexMatrix>(jac, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(res);
      u -= step;
      if (!u.allFinite() || u.norm() > 1e6) break;
      if (step.norm() < 1e-15 * (1.0 + u.norm())) break;
    }
    if (!u.allFinite()) continue;
    if (u.norm() > 1e-3 && gradient(w, u).norm() < 1e-10 * (1.0 + std::pow(u.norm(), 4.0))) {
      report.witness = u;
      return report;
    }
  }
  report.attested = true;
  return report;
}

}  // namespace lg
