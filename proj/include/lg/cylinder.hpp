#ifndef LG_CYLINDER_HPP
#define LG_CYLINDER_HPP

#include <functional>
#include <vector>

#include "lg/wpoly.hpp"

namespace lg {

// Linear layer on the cylinder R x S^1 for (d_s + i d_theta + Theta) v = f,
// with Fourier modes v = sum_n v_n(s) e^{-i n theta}, so each mode solves
// v_n' + (n + Theta) v_n = rho_n.

struct ForcingMode {
  int n = 0;
  std::function<Complex(double)> rho;
  std::vector<double> breakpoints;  // where rho may be non-smooth
};

struct CylinderMode {
  int n = 0;
  Complex c{0.0, 0.0};                      // homogeneous: v_n = c e^{-(n + Theta) s}
  std::function<Complex(double)> profile;  // inhomogeneous: v_n(s); empty for homogeneous modes
};

struct CylinderField {
  double theta = 0.0;
  double t = 0.0;  // half-tube length for homogeneous fields
  std::vector<CylinderMode> modes;

  Complex mode_value(std::size_t k, double s) const;
  Complex value(double s, double angle) const;
};

struct QuadratureOptions {
  double tol = 1e-12;
  unsigned max_depth = 15;
  double max_error = 1e-10;
};

/// The unique bounded solution on the whole line, mode by mode:
/// n + Theta > 0:  v_n(s) = int_{-inf}^s e^{-(n+Theta)(s-tau)} rho_n(tau) dtau
/// n + Theta < 0:  v_n(s) = -int_s^{inf} e^{-(n+Theta)(s-tau)} rho_n(tau) dtau
CylinderField fourier_bounded_solution(double theta, std::vector<ForcingMode> forcing,
                                       const QuadratureOptions& opts = {});

/// Homogeneous field from coefficients C_n, n >= 0.
CylinderField homogeneous_field(double theta, const std::vector<std::pair<int, Complex>>& coefficients, double t);

struct DecayReport {
  double rate = 0.0;              // -slope of log sup_theta |v| on [T, 2T]
  double relative_error = 0.0;    // |rate - Theta| / Theta
  double max_bound_ratio = 0.0;   // max |v| / bound over the grid
  bool bound_holds = false;
  double energy = 0.0;            // int_0^inf int_{S^1} |d_s v|^2, angle normalised to 1
};

/// Fits the decay rate and checks
/// |v(s, theta)| <= sqrt(2/Theta) e^{-Theta s} energy^{1/2} (1 - e^{-2T})^{-1/2}
/// on a grid x grid sample of [T, 2T] x S^1.
DecayReport homogeneous_decay_check(double theta, const std::vector<std::pair<int, Complex>>& coefficients, double t,
                                    int grid = 64);

/// Mode-pair spectrum of the linear A_1 flow (d_s + i d_theta) u = 2c conj(u),
/// c = 2 + eps: modes (u_n, conj u_{-n}) evolve by [[-n, 2c], [2c, n]].
struct SpectrumReport {
  std::vector<std::pair<int, Complex>> eigenvalues;  // (n, lambda)
  std::vector<int> bounded_modes;                    // modes with |Re lambda| <= tol
  double min_abs_real = 0.0;
};

SpectrumReport a1_liouville_spectrum(double eps, int max_mode, double tol = 1e-9);

struct WittenOptions {
  int ns = 12;             // grid points in s (periodic box)
  int ntheta = 12;         // grid points in theta
  double length = 2.0 * M_PI;
  int starts = 50;
  double amplitude = 0.05;  // sup norm of random starts
  int max_iter = 50;
  double tol = 1e-12;
  std::uint64_t seed = 0;
};

struct WittenReport {
  int starts = 0;
  int converged_to_zero = 0;
  int converged_nonzero = 0;
  int failed = 0;
  double max_final_norm = 0.0;
};

/// Newton on the spectral discretisation of
/// (d_s + i d_theta + Theta_i) v_i + conj(d_i W(v)) = 0, all Theta_i in (0, 1).
WittenReport witten_vanishing_newton(const QHPoly& w, const std::vector<double>& theta, const WittenOptions& opts = {});

}  // namespace lg

#endif  // LG_CYLINDER_HPP
