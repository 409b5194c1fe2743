#include "lg/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include "lg/errors.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "soliton";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

using State = std::vector<double>;

// state = (Re u, Im u, energy)
ComplexVector unpack(const State& x, Eigen::Index n) {
  ComplexVector u(n);
  for (Eigen::Index i = 0; i < n; ++i) u(i) = Complex(x[idx(i)], x[idx(n + i)]);
  return u;
}

State pack(const ComplexVector& u, double energy) {
  const Eigen::Index n = u.size();
  State x(idx(2 * n + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    x[idx(i)] = u(i).real();
    x[idx(n + i)] = u(i).imag();
  }
  x[idx(2 * n)] = energy;
  return x;
}

double value_scale(const MorseData& m) {
  double s = 1.0;
  for (const auto& a : m.critical_values) s = std::max(s, std::abs(a));
  return s;
}

double point_scale(const MorseData& m) {
  double s = 1.0;
  for (const auto& k : m.critical_points) s = std::max(s, k.norm());
  return s;
}

struct Eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Eigenpairs eigen_of(const QHPoly& w, const ComplexVector& kappa) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(linearized_flow(w, kappa));
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd to_real(const ComplexVector& z) {
  const Eigen::Index n = z.size();
  Eigen::VectorXd x(2 * n);
  x.head(n) = z.real();
  x.tail(n) = z.imag();
  return x;
}

ComplexVector to_complex(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  ComplexVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = Complex(x(i), x(n + i));
  return z;
}

// int 2|grad F|^2 over the half-line tail of the quadratic model, keeping the
// eigencomponents with the requested sign (unstable: lambda > 0)
double tail_energy(const Eigenpairs& e, const ComplexVector& offset, bool unstable) {
  const Eigen::VectorXd x = to_real(offset);
  double total = 0.0;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    const double lambda = e.values(k);
    if ((lambda > 0) != unstable) continue;
    const double c = e.vectors.col(k).dot(x);
    total += std::abs(lambda) * c * c / 4.0;
  }
  return total;
}

struct ImplOptions {
  std::optional<Eigen::Index> start;
  std::optional<Eigen::Index> target;
  std::optional<double> stop_re_beyond;  // stop once Re F passes this (in the flow direction)
};

FlowTrajectory integrate_impl(const QHPoly& w, const MorseData& m, const ComplexVector& u0, double s0, double s1,
                              const FlowOptions& opts, const ImplOptions& impl) {
  namespace odeint = boost::numeric::odeint;
  const Eigen::Index n = w.n_vars();
  if (u0.size() != n) fail("initial point has wrong length");
  if (!u0.allFinite()) fail("non-finite initial point");
  if (!std::isfinite(s0) || !std::isfinite(s1)) fail("non-finite s span");
  const ComplexVector& b = m.b;
  const double direction = s1 >= s0 ? 1.0 : -1.0;
  const double vscale = value_scale(m);
  const double escape = opts.escape_factor * point_scale(m);

  auto nearest = [&](const ComplexVector& u) {
    Eigen::Index best = -1;
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      const double e = (m.critical_points[idx(k)] - u).norm();
      if (e < d) {
        d = e;
        best = k;
      }
    }
    return std::make_pair(best, d);
  };

  FlowTrajectory t;
  const Complex f0 = perturbed_value(w, b, u0);
  t.im_value = f0.imag();
  t.samples.push_back({s0, u0, 0.0});
  t.start = impl.start;
  if (!t.start) {
    const auto [k, d] = nearest(u0);
    if (k >= 0 && d <= opts.capture_radius) t.start = k;
  }
  if (impl.target) t.min_distance_to_target = (m.critical_points[idx(*impl.target)] - u0).norm();

  if (flow_field(w, b, u0).norm() == 0.0) {
    t.samples.push_back({s1, u0, 0.0});
    if (t.start) t.end = t.start;
    return t;
  }

  auto system = [&](const State& x, State& dxdt, double) {
    const ComplexVector u = unpack(x, n);
    const ComplexVector g = perturbed_gradient(w, b, u);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex f = 2.0 * std::conj(g(i));
      dxdt[idx(i)] = f.real();
      dxdt[idx(n + i)] = f.imag();
    }
    dxdt[idx(2 * n)] = 2.0 * g.squaredNorm();
  };

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opts.abs_tol, opts.rel_tol);
  State x = pack(u0, 0.0);
  double s = s0;
  double dt = direction * opts.initial_step;
  double prev_re = f0.real();
  bool left_start = !t.start.has_value();

  while (direction * (s1 - s) > 0) {
    if (t.accepted_steps + t.rejected_steps >= opts.max_steps) break;
    if (std::abs(dt) > opts.max_step) dt = direction * opts.max_step;
    if (direction * (s + dt - s1) > 0) dt = s1 - s;
    if (stepper.try_step(system, x, s, dt) == odeint::fail) {
      ++t.rejected_steps;
      if (std::abs(dt) < 1e-14 * (1.0 + std::abs(s))) fail("step size underflow at s = " + num(s));
      continue;
    }
    ++t.accepted_steps;
    for (double v : x)
      if (!std::isfinite(v)) fail("non-finite state at s = " + num(s));
    const ComplexVector u = unpack(x, n);
    const Complex f = perturbed_value(w, b, u);
    const double scale = std::max(vscale, std::abs(f));
    const double drift = std::abs(f.imag() - t.im_value);
    t.max_im_drift = std::max(t.max_im_drift, drift / scale);
    const double decrease = direction * (prev_re - f.real());
    if (decrease > 0) t.max_re_decrease = std::max(t.max_re_decrease, decrease / scale);
    prev_re = f.real();
    if (opts.check_invariants) {
      if (drift > opts.drift_tol * scale)
        fail("invariant drift: Im(W + W0) moved by " + num(drift) + " at s = " + num(s));
      if (decrease > opts.monotone_tol * scale)
        fail("invariant drift: Re(W + W0) not monotone at s = " + num(s));
    }
    if (t.max_re_decrease > opts.monotone_tol) t.re_monotone = false;
    t.samples.push_back({s, u, x[idx(2 * n)]});

    if (impl.target)
      t.min_distance_to_target =
          std::min(t.min_distance_to_target, (m.critical_points[idx(*impl.target)] - u).norm());
    if (!left_start && (m.critical_points[idx(*t.start)] - u).norm() > 2.0 * opts.capture_radius) left_start = true;
    const auto [k, d] = nearest(u);
    if (d <= opts.capture_radius && (left_start || k != *t.start)) {
      t.end = k;
      break;
    }
    if (u.norm() > escape) {
      t.escaped = true;
      break;
    }
    if (impl.stop_re_beyond && direction * (f.real() - *impl.stop_re_beyond) > 0) break;
  }
  return t;
}

// Newton correction of Im F back onto the level Im F = level, moving
// orthogonally to the flow.
ComplexVector project_level(const QHPoly& w, const ComplexVector& b, ComplexVector u, double level) {
  for (int it = 0; it < 5; ++it) {
    const ComplexVector g = perturbed_gradient(w, b, u);
    const double gn = g.squaredNorm();
    if (gn == 0.0) break;
    const double e = perturbed_value(w, b, u).imag() - level;
    u -= (e / gn) * Complex(0.0, 1.0) * g.conjugate();
  }
  return u;
}

ComplexVector midpoint_of(const QHPoly& w, const ComplexVector& b, const FlowTrajectory& t, double re_mid) {
  for (std::size_t k = 1; k < t.samples.size(); ++k) {
    const double r0 = perturbed_value(w, b, t.samples[k - 1].u).real() - re_mid;
    const double r1 = perturbed_value(w, b, t.samples[k].u).real() - re_mid;
    if (r0 == 0.0) return t.samples[k - 1].u;
    if ((r0 < 0) != (r1 < 0) || r1 == 0.0) {
      const double a = r0 / (r0 - r1);
      return (1.0 - a) * t.samples[k - 1].u + a * t.samples[k].u;
    }
  }
  return t.samples[t.samples.size() / 2].u;
}

// Unit directions on the departure sphere S^{d-1} of the chosen cone.
std::vector<Eigen::VectorXd> sphere_mesh(Eigen::Index d, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> out;
  if (d == 1) {
    out.push_back(Eigen::VectorXd::Constant(1, 1.0));
    out.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return out;
  }
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * M_PI * k / count;
      Eigen::VectorXd v(2);
      v << std::cos(phi), std::sin(phi);
      out.push_back(v);
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = normal(rng);
    out.push_back(v.normalized());
  }
  return out;
}

}  // namespace

ComplexVector flow_field(const QHPoly& w, const ComplexVector& b, const ComplexVector& u) {
  if (b.size() != w.n_vars() || u.size() != w.n_vars()) fail("dimension mismatch in flow field");
  return 2.0 * perturbed_gradient(w, b, u).conjugate();
}

Eigen::MatrixXd linearized_flow(const QHPoly& w, const ComplexVector& kappa) {
  const Eigen::Index n = w.n_vars();
  const ComplexMatrix h = hessian(w, kappa);
  const Eigen::MatrixXd p = h.real(), q = h.imag();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << p, -q, -q, -p;
  return 2.0 * m;
}

FlowTrajectory integrate_flow(const QHPoly& w, const MorseData& morse, const ComplexVector& u0, double s0, double s1,
                              const FlowOptions& opts, std::optional<Eigen::Index> target) {
  ImplOptions impl;
  impl.target = target;
  return integrate_impl(w, morse, u0, s0, s1, opts, impl);
}

FlowTrajectory integrate_flow(const QHPoly& w, const ComplexVector& b, const ComplexVector& u0, double s0, double s1,
                              const FlowOptions& opts) {
  return integrate_flow(w, find_critical_points(w, b), u0, s0, s1, opts);
}

double energy_identity_check(const QHPoly& w, const MorseData& m, const FlowTrajectory& t, double a) {
  if (!t.start || !t.end) fail("energy identity needs a trajectory captured at both ends");
  if (t.samples.size() < 2) fail("energy identity needs at least two samples");
  const bool forward = t.back().s >= t.front().s;
  const ComplexVector& k0 = m.critical_points[idx(*t.start)];
  const ComplexVector& k1 = m.critical_points[idx(*t.end)];
  const Complex delta = m.critical_values[idx(*t.end)] - m.critical_values[idx(*t.start)];
  // forward: leaves k0 along its unstable cone, enters k1 along the stable one
  const double head = tail_energy(eigen_of(w, k0), t.front().u - k0, forward);
  const double tail = tail_energy(eigen_of(w, k1), t.back().u - k1, !forward);
  const double sign = forward ? 1.0 : -1.0;
  const double integral = t.back().energy + sign * (head + tail);
  return std::abs(delta - a * integral);
}

SolitonCount count_bps_solitons(const QHPoly& w, const MorseData& m, Eigen::Index i, Eigen::Index j,
                                const SolitonOptions& opts) {
  if (i < 0 || j < 0 || i >= m.size() || j >= m.size()) fail("critical point index out of range");
  SolitonCount result;
  if (i == j) return result;
  const Complex ai = m.critical_values[idx(i)], aj = m.critical_values[idx(j)];
  const double scale = std::max({1.0, std::abs(ai), std::abs(aj)});
  if (opts.require_wall) {
    if (std::abs(ai.imag() - aj.imag()) > opts.wall_tol * scale)
      fail("wall precondition violated: Im alpha_i - Im alpha_j = " + num(ai.imag() - aj.imag()));
    if (!(ai.real() < aj.real())) fail("wall precondition violated: need Re alpha_i < Re alpha_j");
  }

  const bool forward = opts.direction == ShootDirection::Forward;
  const Eigen::Index from = forward ? i : j;
  const Eigen::Index to = forward ? j : i;
  const ComplexVector& kappa = m.critical_points[idx(from)];
  const double level = m.critical_values[idx(from)].imag();
  const Eigenpairs e = eigen_of(w, kappa);

  // departure cone: eigenvectors with lambda > 0 (forward) or < 0 (backward)
  std::vector<Eigen::Index> cone;
  double lambda_min = std::numeric_limits<double>::infinity(), lambda_max = 0.0;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if ((e.values(k) > 0) == forward) cone.push_back(k);
    lambda_min = std::min(lambda_min, std::abs(e.values(k)));
    lambda_max = std::max(lambda_max, std::abs(e.values(k)));
  }
  for (const auto& kp : m.critical_points)
    for (Eigen::Index k = 0; k < 2 * w.n_vars(); ++k) {
      const double l = std::abs(eigen_of(w, kp).values(k));
      lambda_min = std::min(lambda_min, l);
      lambda_max = std::max(lambda_max, l);
    }
  if (cone.empty() || lambda_min <= 0.0) fail("degenerate linearisation at the departure point");
  const double span = 60.0 * std::log(1.0 / opts.sphere_radius) / lambda_min;

  FlowOptions flow = opts.flow;
  flow.capture_radius = opts.capture_radius;
  flow.max_step = opts.flow.max_step / std::max(1.0, lambda_max);
  flow.initial_step = std::min(flow.initial_step, 0.1 / lambda_max);

  ImplOptions impl;
  impl.start = from;
  impl.target = to;
  const double re_target = m.critical_values[idx(to)].real();
  impl.stop_re_beyond = re_target + (forward ? 1.0 : -1.0) * 1e-2 * std::max(std::abs(aj - ai), 1e-3);

  const double s_end = forward ? span : -span;
  auto shoot = [&](const Eigen::VectorXd& dir) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(e.values.size());
    for (std::size_t c = 0; c < cone.size(); ++c) x += dir(static_cast<Eigen::Index>(c)) * e.vectors.col(cone[c]);
    ComplexVector u0 = kappa + opts.sphere_radius * to_complex(x.normalized());
    u0 = project_level(w, m.b, u0, level);
    ++result.shots;
    return integrate_impl(w, m, u0, 0.0, s_end, flow, impl);
  };

  const auto d = static_cast<Eigen::Index>(cone.size());
  std::vector<FlowTrajectory> captured;
  auto run_mesh = [&](int count) {
    std::vector<std::pair<Eigen::VectorXd, FlowTrajectory>> shots;
    for (const auto& dir : sphere_mesh(d, count, opts.seed)) shots.emplace_back(dir, shoot(dir));
    std::vector<FlowTrajectory> hits;
    for (const auto& [dir, t] : shots)
      if (t.end && *t.end == to) hits.push_back(t);
    if (d == 2) {
      // refine local minima of the closest approach over the circle of directions
      const int c = static_cast<int>(shots.size());
      for (int k = 0; k < c; ++k) {
        const double here = shots[idx(k)].second.min_distance_to_target;
        const double left = shots[idx((k + c - 1) % c)].second.min_distance_to_target;
        const double right = shots[idx((k + 1) % c)].second.min_distance_to_target;
        if (shots[idx(k)].second.end || here > left || here > right) continue;
        const double phi = 2.0 * M_PI * k / c, h = 2.0 * M_PI / c;
        auto dist = [&](double p) {
          Eigen::VectorXd v(2);
          v << std::cos(p), std::sin(p);
          return shoot(v).min_distance_to_target;
        };
        const auto best = boost::math::tools::brent_find_minima(dist, phi - h, phi + h, 40);
        Eigen::VectorXd v(2);
        v << std::cos(best.first), std::sin(best.first);
        const auto t = shoot(v);
        if (t.end && *t.end == to) hits.push_back(t);
      }
    }
    return hits;
  };

  const int base = opts.mesh_per_dim * static_cast<int>(d);
  captured = run_mesh(base);
  result.captures = static_cast<long>(captured.size());

  const double re_mid = (ai.real() + aj.real()) / 2.0;
  auto cluster = [&](const std::vector<FlowTrajectory>& hits) {
    std::vector<SolitonOrbit> orbits;
    for (const auto& t : hits) {
      SolitonOrbit o{t, midpoint_of(w, m.b, t, re_mid), 0.0};
      bool dup = false;
      for (const auto& p : orbits)
        if (std::abs(p.trajectory.im_value - o.trajectory.im_value) <= opts.cluster_radius &&
            (p.midpoint - o.midpoint).norm() <= opts.cluster_radius)
          dup = true;
      if (!dup) {
        o.energy_residual = energy_identity_check(w, m, o.trajectory);
        orbits.push_back(std::move(o));
      }
    }
    return orbits;
  };
  result.orbits = cluster(captured);

  if (d >= 2) {
    int count = base;
    for (int r = 0; r < opts.max_refinements; ++r) {
      count *= 2;
      const auto finer = run_mesh(count);
      result.captures += static_cast<long>(finer.size());
      const auto orbits = cluster(finer);
      if (orbits.size() != result.orbits.size())
        fail("shooting budget exhausted with ambiguous clusters (" + std::to_string(result.orbits.size()) + " vs " +
             std::to_string(orbits.size()) + " orbits)");
    }
  }
  result.count = static_cast<Eigen::Index>(result.orbits.size());
  return result;
}

}  // namespace lg
