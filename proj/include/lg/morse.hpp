#ifndef LG_MORSE_HPP
#define LG_MORSE_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lg/wpoly.hpp"

namespace lg {

struct MorseOptions {
  double residual_tol = 1e-10;
  double min_singular_value = 1e-8;
  double separation = 1e-6;
  int starts_per_radius = 64;
  std::uint64_t seed = 0;
};

/// Critical data of F = W + sum b_i x_i.  Points are stored in canonical
/// order (lexicographic on rounded coordinates); `ordering` lists them by
/// increasing (Im alpha, Re alpha).
struct MorseData {
  ComplexVector b;
  std::vector<ComplexVector> critical_points;
  std::vector<Complex> critical_values;
  std::vector<double> hessian_min_singular_value;
  std::vector<Eigen::Index> ordering;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ties;  // pairs with |Im difference| <= tol_im
  double tol_im = 0.0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(critical_points.size()); }
  /// The point of rank r (0-based) in the Im ordering.
  const ComplexVector& ordered_point(Eigen::Index r) const;
  Complex ordered_value(Eigen::Index r) const;
};

Complex perturbed_value(const QHPoly& w, const ComplexVector& b, const ComplexVector& u);
ComplexVector perturbed_gradient(const QHPoly& w, const ComplexVector& b, const ComplexVector& u);

/// All mu critical points by deflated multistart Newton.  Throws
/// DomainError("not W-regular") on a degenerate critical point and
/// "degenerate or unresolved" if fewer than mu are found.
MorseData find_critical_points(const QHPoly& w, const ComplexVector& b, const MorseOptions& opts = {});

/// Rebuilds values, singular values, ordering and ties from the points.
MorseData morse_data_from_points(const QHPoly& w, const ComplexVector& b, std::vector<ComplexVector> points);

struct RegularityReport {
  bool strongly_regular = true;
  std::optional<std::pair<Eigen::Index, Eigen::Index>> witness;  // indices into critical_points
};

RegularityReport is_strongly_regular(const MorseData& m);

double l1_norm(const ComplexVector& b);

using PerturbationPath = std::function<ComplexVector(double)>;

struct WallCrossing {
  double lambda = 0.0;
  Eigen::Index i = 0;  // indices in the labelling at lambda = 0
  Eigen::Index j = 0;
  ComplexVector b;
  std::vector<ComplexVector> points;  // tracked points at lambda, same labelling
};

struct ContinuationOptions {
  int steps = 200;
  double min_step = 1e-9;
  double bisection_tol = 1e-10;
  double residual_tol = 1e-12;
  MorseOptions morse;
};

/// Tracks points of the path's critical set from lambda0 to lambda1,
/// keeping labels.  Throws "loss of tracked root" when steps collapse.
std::vector<ComplexVector> continue_points(const QHPoly& w, const PerturbationPath& path,
                                           std::vector<ComplexVector> points, double lambda0, double lambda1,
                                           const ContinuationOptions& opts = {});

/// Interior sign changes of Im(alpha_i - alpha_j) along lambda in [0, 1].
std::vector<WallCrossing> detect_wall_crossings(const QHPoly& w, const PerturbationPath& path,
                                                const ContinuationOptions& opts = {});

}  // namespace lg

#endif  // LG_MORSE_HPP
