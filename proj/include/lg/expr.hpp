#ifndef LG_EXPR_HPP
#define LG_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lg/wpoly.hpp"

namespace lg {

/// Complex arithmetic expression in one real parameter `lambda` (alias `l`):
/// numbers, i, pi, e, + - * / ^, parentheses, exp log sqrt sin cos abs conj re im.
class ComplexExpr {
 public:
  explicit ComplexExpr(std::string_view text);
  Complex operator()(double lambda = 0.0) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Splits on commas outside parentheses.
std::vector<std::string> split_top_level(std::string_view text);

/// "3, 1+2i, -i" -> vector; each entry may be any constant expression.
ComplexVector parse_complex_list(std::string_view text);

/// Formats with 12 significant digits: "1.5", "-2i", "1+0.5i".
std::string format_complex(Complex z);
std::string format_double(double x);

}  // namespace lg

#endif  // LG_EXPR_HPP
