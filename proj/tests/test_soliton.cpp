#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>

#include "lg/errors.hpp"
#include "lg/soliton.hpp"

using lg::Complex;
using lg::ComplexVector;

namespace {

ComplexVector cv(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

Eigen::Index index_of(const lg::MorseData& m, const ComplexVector& u) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < m.size(); ++k)
    if ((m.critical_points[static_cast<std::size_t>(k)] - u).norm() <
        (m.critical_points[static_cast<std::size_t>(best)] - u).norm())
      best = k;
  return best;
}

}  // namespace

TEST_CASE("flow field") {
  const auto w = lg::parse_polynomial("x^3");
  const ComplexVector b = cv({-3.0});
  CHECK(std::abs(lg::flow_field(w, b, cv({0.0}))(0) - Complex(-6.0)) < 1e-15);
  const auto m = lg::find_critical_points(w, b);
  for (const auto& k : m.critical_points) CHECK(lg::flow_field(w, b, k).norm() < 1e-12);
  CHECK_THROWS_AS(lg::flow_field(w, cv({1.0, 2.0}), cv({0.0})), lg::DomainError);

  // d(W + W0)/ds = 2 |grad|^2, by a centred difference along the field
  const auto w2 = lg::parse_polynomial("x^3 + x*y^2");
  const ComplexVector b2 = cv({Complex(0.3, -1.0), Complex(0.7, 0.2)});
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 10; ++k) {
    const ComplexVector u = cv({Complex(normal(rng), normal(rng)), Complex(normal(rng), normal(rng))});
    const ComplexVector f = lg::flow_field(w2, b2, u);
    const double h = 1e-5;
    const Complex rate = (lg::perturbed_value(w2, b2, u + h * f) - lg::perturbed_value(w2, b2, u - h * f)) / (2 * h);
    const double law = 2.0 * lg::perturbed_gradient(w2, b2, u).squaredNorm();
    CHECK(std::abs(rate - law) < 1e-6 * (1.0 + law));
  }
}

TEST_CASE("integration along the real axis of x^3 - 3x") {
  const auto w = lg::parse_polynomial("x^3");
  const ComplexVector b = cv({-3.0});
  const auto m = lg::find_critical_points(w, b);
  const Eigen::Index plus = index_of(m, cv({1.0})), minus = index_of(m, cv({-1.0}));

  const auto fwd = lg::integrate_flow(w, m, cv({0.999}), 0.0, 20.0);
  REQUIRE(fwd.end.has_value());
  CHECK(*fwd.end == minus);
  CHECK(fwd.max_im_drift < 1e-8);
  CHECK(fwd.re_monotone);
  const auto bwd = lg::integrate_flow(w, m, cv({0.999}), 0.0, -20.0);
  REQUIRE(bwd.end.has_value());
  CHECK(*bwd.end == plus);
  CHECK(bwd.re_monotone);
  for (std::size_t k = 1; k < fwd.samples.size(); ++k) {
    CHECK(fwd.samples[k].u(0).real() <= fwd.samples[k - 1].u(0).real());
    CHECK(fwd.samples[k].u(0).imag() == 0.0);
  }

  const auto still = lg::integrate_flow(w, m, m.critical_points[0], 0.0, 5.0);
  CHECK(still.samples.front().u == still.samples.back().u);
  CHECK(still.end == still.start);
  CHECK(lg::energy_identity_check(w, m, still) == 0.0);

  CHECK_THROWS_AS(lg::integrate_flow(w, m, cv({std::nan("")}), 0.0, 1.0), lg::DomainError);
  CHECK_THROWS_AS(lg::integrate_flow(w, m, cv({0.5}), 0.0, INFINITY), lg::DomainError);
}

TEST_CASE("strongly regular: flow from one critical point never reaches another") {
  const auto w = lg::parse_polynomial("x^3");
  const auto m = lg::find_critical_points(w, cv({3.0}));
  REQUIRE(lg::is_strongly_regular(m).strongly_regular);
  for (Eigen::Index k = 0; k < 2; ++k) {
    for (double sign : {1.0, -1.0}) {
      const auto e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
          lg::linearized_flow(w, m.critical_points[static_cast<std::size_t>(k)]));
      const Eigen::VectorXd dir = e.eigenvectors().col(1);  // unstable
      const ComplexVector u0 = m.critical_points[static_cast<std::size_t>(k)] +
                               sign * 1e-3 * cv({Complex(dir(0), dir(1))});
      const auto t = lg::integrate_flow(w, m, u0, 0.0, 50.0);
      CHECK_FALSE(t.end.has_value());
      CHECK(t.escaped);
    }
  }
}

TEST_CASE("BPS count for x^3 - 3x") {
  const auto w = lg::parse_polynomial("x^3");
  const auto m = lg::find_critical_points(w, cv({-3.0}));
  const Eigen::Index lo = index_of(m, cv({1.0})), hi = index_of(m, cv({-1.0}));
  REQUIRE(std::abs(m.critical_values[static_cast<std::size_t>(lo)] - Complex(-2.0)) < 1e-12);

  const auto t0 = std::chrono::steady_clock::now();
  const auto c = lg::count_bps_solitons(w, m, lo, hi);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(c.count == 1);
  CHECK(seconds < 10.0);
  REQUIRE(c.orbits.size() == 1);
  const auto& orbit = c.orbits[0];
  CHECK(orbit.trajectory.max_im_drift < 1e-8);
  CHECK(orbit.trajectory.re_monotone);
  CHECK(orbit.energy_residual < 1e-6);
  // the orbit runs along the real segment (-1, 1)
  CHECK(std::abs(orbit.midpoint(0)) < 1e-4);
  // Delta = 4 and 2 int |grad|^2 = 4
  CHECK(std::abs(orbit.trajectory.back().energy - 4.0) < 1e-2);

  lg::SolitonOptions back;
  back.direction = lg::ShootDirection::Backward;
  CHECK(lg::count_bps_solitons(w, m, lo, hi, back).count == 1);
  CHECK(lg::count_bps_solitons(w, m, lo, lo).count == 0);
  CHECK_THROWS_WITH_AS(lg::count_bps_solitons(w, m, hi, lo), doctest::Contains("wall precondition"),
                       lg::DomainError);
  const auto reg = lg::find_critical_points(w, cv({3.0}));
  CHECK_THROWS_WITH_AS(lg::count_bps_solitons(w, reg, 0, 1), doctest::Contains("wall precondition"),
                       lg::DomainError);
}

TEST_CASE("energy identity converges with the integrator tolerance") {
  // convergence study: residual against tolerance, halving from 1e-4 down to
  // ~1e-8 where the linearised tail corrections take over
  const auto w = lg::parse_polynomial("x^3");
  const auto m = lg::find_critical_points(w, cv({-3.0}));
  const Eigen::Index lo = index_of(m, cv({1.0}));
  std::vector<double> logs, logr;
  for (double tol = 1e-4; tol > 1e-8; tol /= 2) {
    lg::FlowOptions o;
    o.abs_tol = o.rel_tol = tol;
    o.capture_radius = 1e-3;
    o.check_invariants = false;
    auto t = lg::integrate_flow(w, m, cv({1.0 - 1e-3}), 0.0, 20.0, o);
    REQUIRE(t.end.has_value());
    t.start = lo;
    logs.push_back(std::log(tol));
    logr.push_back(std::log(lg::energy_identity_check(w, m, t)));
  }
  const double n = static_cast<double>(logs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    sx += logs[k];
    sy += logr[k];
    sxx += logs[k] * logs[k];
    sxy += logs[k] * logr[k];
  }
  const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  MESSAGE("observed order " << order);
  CHECK(order >= 1.0);
  CHECK(std::exp(logr.back()) < 1e-6);
}

TEST_CASE("x^4 + bx: counts at two independent walls") {
  const auto w = lg::parse_polynomial("x^4");
  auto check_wall = [&](const lg::PerturbationPath& path) {
    const auto walls = lg::detect_wall_crossings(w, path);
    REQUIRE_FALSE(walls.empty());
    const auto& wall = walls.front();
    const auto m = lg::morse_data_from_points(w, wall.b, wall.points);
    Eigen::Index i = index_of(m, wall.points[static_cast<std::size_t>(wall.i)]);
    Eigen::Index j = index_of(m, wall.points[static_cast<std::size_t>(wall.j)]);
    if (m.critical_values[static_cast<std::size_t>(i)].real() > m.critical_values[static_cast<std::size_t>(j)].real())
      std::swap(i, j);
    // adjacent in the Im ordering
    Eigen::Index ri = 0, rj = 0;
    for (Eigen::Index r = 0; r < m.size(); ++r) {
      if (m.ordering[static_cast<std::size_t>(r)] == i) ri = r;
      if (m.ordering[static_cast<std::size_t>(r)] == j) rj = r;
    }
    CHECK(std::abs(ri - rj) == 1);
    const auto c = lg::count_bps_solitons(w, m, i, j);
    for (const auto& o : c.orbits) {
      CHECK(o.trajectory.max_im_drift < 1e-8);
      CHECK(o.energy_residual < 1e-6);
    }
    return c.count;
  };
  const auto a = check_wall([](double l) { return cv({std::polar(2.0, 0.1 + 0.5 * l)}); });
  const auto b = check_wall([](double l) { return cv({std::polar(0.7, 2.5 + 0.5 * l)}); });
  CHECK(a == 1);
  CHECK(b == a);
}

TEST_CASE("no solitons for strongly regular perturbations") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (const char* text : {"x^3", "x^4"}) {
    const auto w = lg::parse_polynomial(text);
    for (int k = 0; k < 5; ++k) {
      const auto m = lg::find_critical_points(w, cv({Complex(normal(rng), normal(rng))}));
      REQUIRE(lg::is_strongly_regular(m).strongly_regular);
      lg::SolitonOptions o;
      o.require_wall = false;
      for (Eigen::Index i = 0; i < m.size(); ++i)
        for (Eigen::Index j = 0; j < m.size(); ++j) {
          const auto c = lg::count_bps_solitons(w, m, i, j, o);
          CHECK(c.captures == 0);
          CHECK(c.count == 0);
        }
    }
  }
}

TEST_CASE("two-variable shooting on a wall of x^3 + y^3") {
  // decoupled: solitons only move the variable whose pair is aligned
  const auto w = lg::parse_polynomial("x^3 + y^3");
  const auto m = lg::find_critical_points(w, cv({Complex(-3.0), Complex(0.0, 3.0)}));
  // kappa = (+-1, y0) with y0^2 = -i: pick the pair differing only in x
  REQUIRE(m.size() == 4);
  Eigen::Index i = -1, j = -1;
  for (Eigen::Index p = 0; p < 4; ++p)
    for (Eigen::Index q = 0; q < 4; ++q) {
      const auto& u = m.critical_points[static_cast<std::size_t>(p)];
      const auto& v = m.critical_points[static_cast<std::size_t>(q)];
      if (std::abs(u(1) - v(1)) < 1e-9 && std::abs(u(0) - 1.0) < 1e-9 && std::abs(v(0) + 1.0) < 1e-9 && i < 0) {
        i = p;
        j = q;
      }
    }
  REQUIRE(i >= 0);
  lg::SolitonOptions o;
  o.mesh_per_dim = 32;
  const auto c = lg::count_bps_solitons(w, m, i, j, o);
  CHECK(c.count == 1);
  for (const auto& orbit : c.orbits) CHECK(orbit.energy_residual < 1e-6);
}
