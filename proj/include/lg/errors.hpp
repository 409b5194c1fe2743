#ifndef LG_ERRORS_HPP
#define LG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lg {

/// A failure caused by the mathematical input (inadmissible type,
/// irregular perturbation, malformed polynomial, ...).  Carries the name
/// of the module that rejected it so reports can point at the origin.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace lg

#endif  // LG_ERRORS_HPP
