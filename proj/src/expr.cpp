#include "lg/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "lg/errors.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "cli";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

}  // namespace

struct ComplexExpr::Node {
  enum class Kind { Number, Lambda, Negate, Add, Sub, Mul, Div, Pow, Call } kind = Kind::Number;
  Complex value{0.0, 0.0};
  std::function<Complex(Complex)> fn;
  std::shared_ptr<const Node> a, b;

  Complex eval(double lambda) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Lambda: return Complex(lambda, 0.0);
      case Kind::Negate: return Complex(0.0, 0.0) - a->eval(lambda);
      case Kind::Add: return a->eval(lambda) + b->eval(lambda);
      case Kind::Sub: return a->eval(lambda) - b->eval(lambda);
      case Kind::Mul: return a->eval(lambda) * b->eval(lambda);
      case Kind::Div: return a->eval(lambda) / b->eval(lambda);
      case Kind::Pow: {
        const Complex base = a->eval(lambda), e = b->eval(lambda);
        if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
          const auto k = static_cast<long>(e.real());
          Complex r(1.0, 0.0);
          for (long j = 0; j < std::abs(k); ++j) r *= base;
          return k >= 0 ? r : Complex(1.0, 0.0) / r;
        }
        return std::pow(base, e);
      }
      case Kind::Call: return fn(a->eval(lambda));
    }
    return {};
  }
};

namespace {

using NodePtr = std::shared_ptr<const ComplexExpr::Node>;
using Kind = ComplexExpr::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ComplexExpr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(Complex v) {
  auto n = std::make_shared<ComplexExpr::Node>();
  n->value = v;
  return n;
}

const std::map<std::string, std::function<Complex(Complex)>>& functions() {
  static const std::map<std::string, std::function<Complex(Complex)>> table{
      {"exp", [](Complex z) { return std::exp(z); }},   {"log", [](Complex z) { return std::log(z); }},
      {"sqrt", [](Complex z) { return std::sqrt(z); }}, {"sin", [](Complex z) { return std::sin(z); }},
      {"cos", [](Complex z) { return std::cos(z); }},   {"abs", [](Complex z) { return Complex(std::abs(z)); }},
      {"conj", [](Complex z) { return std::conj(z); }}, {"re", [](Complex z) { return Complex(z.real()); }},
      {"im", [](Complex z) { return Complex(z.imag()); }}};
  return table;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail("cannot parse expression \"" + std::string(s_) + "\" at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isalpha(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           c == '(';
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Kind::Add, n, term());
      else if (eat('-'))
        n = make(Kind::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Kind::Mul, n, unary());
      else if (eat('/'))
        n = make(Kind::Div, n, unary());
      else if (starts_primary())
        n = make(Kind::Mul, n, power());  // implicit: 2i, 3(1+i)
      else
        return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::Negate, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) error("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(rest, &used);
      } catch (const std::exception&) {
        error("bad number");
      }
      pos_ += used;
      return number(Complex(v, 0.0));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      const std::string name(s_.substr(pos_, end - pos_));
      pos_ = end;
      if (name == "i") return number(Complex(0.0, 1.0));
      if (name == "pi") return number(Complex(M_PI, 0.0));
      if (name == "e") return number(Complex(std::exp(1.0), 0.0));
      if (name == "lambda" || name == "l") return make(Kind::Lambda);
      const auto& table = functions();
      const auto it = table.find(name);
      if (it == table.end()) error("unknown name '" + name + "'");
      if (!eat('(')) error("expected '(' after " + name);
      auto n = std::make_shared<ComplexExpr::Node>();
      n->kind = Kind::Call;
      n->fn = it->second;
      n->a = expr();
      if (!eat(')')) error("missing ')'");
      return n;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ComplexExpr::ComplexExpr(std::string_view text) : text_(text), root_(Parser(text).parse()) {}

Complex ComplexExpr::operator()(double lambda) const { return root_->eval(lambda); }

std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string current;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

ComplexVector parse_complex_list(std::string_view text) {
  const auto parts = split_top_level(text);
  ComplexVector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) v(static_cast<Eigen::Index>(k)) = ComplexExpr(parts[k])(0.0);
  return v;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string format_complex(Complex z) {
  const double size = std::max(1.0, std::abs(z));
  double re = std::abs(z.real()) < 1e-13 * size ? 0.0 : z.real();
  double im = std::abs(z.imag()) < 1e-13 * size ? 0.0 : z.imag();
  if (im == 0.0) return format_double(re);
  const std::string ims = format_double(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0 ? "-" : "") + ims;
  return format_double(re) + (im < 0 ? "-" : "+") + ims;
}

}  // namespace lg
