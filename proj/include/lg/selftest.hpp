#ifndef LG_SELFTEST_HPP
#define LG_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace lg {

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The worked examples and corpus identities, each checked against a
/// closed form or a brute-force count.  Never throws; a thrown error is a failure.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 0);

/// x^3, x^4, x^3 + x y^2, x^4 + x y^2, x^3 + y^3, x^3 + x y^3.
const std::vector<std::string>& corpus();

}  // namespace lg

#endif  // LG_SELFTEST_HPP
