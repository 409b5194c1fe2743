#ifndef LG_SOLITON_HPP
#define LG_SOLITON_HPP

#include <optional>
#include <string>
#include <vector>

#include "lg/morse.hpp"

namespace lg {

/// du/ds = 2 conj(grad (W + b.x)(u)).  Along the flow d(W + b.x)/ds = 2 |grad|^2.
ComplexVector flow_field(const QHPoly& w, const ComplexVector& b, const ComplexVector& u);

struct FlowOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double capture_radius = 1e-6;
  double escape_factor = 10.0;  // escape radius = factor * max(1, max |kappa|)
  double drift_tol = 1e-8;      // times max(1, max |alpha|)
  double monotone_tol = 1e-10;  // times max(1, max |alpha|)
  double initial_step = 1e-3;
  double max_step = 0.5;
  long max_steps = 200000;
  bool check_invariants = true;
};

struct FlowSample {
  double s = 0.0;
  ComplexVector u;
  double energy = 0.0;  // int 2 |grad|^2 ds from the first sample
};

/// endpoints index into MorseData::critical_points; nullopt = not captured
/// at that end (escape, or the span ran out).
struct FlowTrajectory {
  std::vector<FlowSample> samples;
  double im_value = 0.0;
  double max_im_drift = 0.0;
  double max_re_decrease = 0.0;
  bool re_monotone = true;
  std::optional<Eigen::Index> start;
  std::optional<Eigen::Index> end;
  bool escaped = false;
  double min_distance_to_target = 0.0;  // to `target` if one was given
  long accepted_steps = 0;
  long rejected_steps = 0;

  const FlowSample& front() const { return samples.front(); }
  const FlowSample& back() const { return samples.back(); }
};

/// Adaptive Dormand-Prince integration from u0 over [s0, s1] (s1 < s0 runs the
/// flow backwards).  Stops on capture within opts.capture_radius of a critical
/// point of `morse`, or on escape.  Throws DomainError on invariant drift or a
/// non-finite state.
FlowTrajectory integrate_flow(const QHPoly& w, const MorseData& morse, const ComplexVector& u0, double s0,
                              double s1, const FlowOptions& opts = {},
                              std::optional<Eigen::Index> target = std::nullopt);
FlowTrajectory integrate_flow(const QHPoly& w, const ComplexVector& b, const ComplexVector& u0, double s0,
                              double s1, const FlowOptions& opts = {});

/// Real 2N x 2N linearisation of the flow at a critical point, coordinates
/// (Re u, Im u).  Symmetric with eigenvalues +-2 sigma_k (Takagi values of the Hessian).
Eigen::MatrixXd linearized_flow(const QHPoly& w, const ComplexVector& kappa);

enum class ShootDirection { Forward, Backward };

struct SolitonOptions {
  double sphere_radius = 1e-3;
  double capture_radius = 1e-3;
  double cluster_radius = 1e-3;
  int mesh_per_dim = 64;  // shots = mesh_per_dim * N for N >= 2
  int max_refinements = 1;
  double wall_tol = 1e-7;  // |Im alpha_i - Im alpha_j| / max(1, |alpha|)
  bool require_wall = true;
  ShootDirection direction = ShootDirection::Forward;
  std::uint64_t seed = 0;
  FlowOptions flow{1e-10, 1e-10, 1e-3, 10.0, 1e-8, 1e-10, 1e-3, 0.5, 200000, true};
};

struct SolitonOrbit {
  FlowTrajectory trajectory;  // in forward time, from kappa_i towards kappa_j
  ComplexVector midpoint;     // at Re F = (Re alpha_i + Re alpha_j) / 2
  double energy_residual = 0.0;
};

struct SolitonCount {
  Eigen::Index count = 0;
  long shots = 0;
  long captures = 0;  // shots that reached the target, before clustering
  std::vector<SolitonOrbit> orbits;
};

/// BPS solitons from critical point i to j (indices into m.critical_points) by
/// shooting along the unstable cone of kappa_i (Backward: stable cone of
/// kappa_j, flow reversed).
SolitonCount count_bps_solitons(const QHPoly& w, const MorseData& m, Eigen::Index i, Eigen::Index j,
                                const SolitonOptions& opts = {});

/// |Delta F - 2 A int |grad F|^2 ds| with linearised tail corrections at
/// both ends.  Throws unless both ends are captured.
double energy_identity_check(const QHPoly& w, const MorseData& m, const FlowTrajectory& t, double a = 1.0);

}  // namespace lg

#endif  // LG_SOLITON_HPP
