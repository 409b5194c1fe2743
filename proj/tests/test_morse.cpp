#include "doctest.h"

#include <chrono>
#include <random>

#include "lg/errors.hpp"
#include "lg/morse.hpp"
#include "lg/symmetry.hpp"

using lg::Complex;
using lg::ComplexVector;

namespace {

const char* const kCorpus[] = {"x^3", "x^4", "x^3 + x*y^2", "x^4 + x*y^2", "x^3 + y^3", "x^3 + x*y^3"};

ComplexVector cv(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

ComplexVector random_b(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  ComplexVector b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = Complex(normal(rng), normal(rng));
  return b;
}

bool contains(const std::vector<ComplexVector>& pts, const ComplexVector& u, double tol) {
  for (const auto& p : pts)
    if ((p - u).norm() < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("closed-form critical points of x^3 + b x") {
  const auto w = lg::parse_polynomial("x^3");
  const auto m = lg::find_critical_points(w, cv({3.0}));
  REQUIRE(m.size() == 2);
  CHECK(contains(m.critical_points, cv({Complex(0, 1)}), 1e-10));
  CHECK(contains(m.critical_points, cv({Complex(0, -1)}), 1e-10));
  CHECK(std::abs(m.ordered_value(0) - Complex(0, -2)) < 1e-10);
  CHECK(std::abs(m.ordered_value(1) - Complex(0, 2)) < 1e-10);
  CHECK(lg::is_strongly_regular(m).strongly_regular);

  const auto n = lg::find_critical_points(w, cv({-3.0}));
  REQUIRE(n.size() == 2);
  CHECK(std::abs(n.ordered_point(0)(0) - 1.0) < 1e-10);
  CHECK(std::abs(n.ordered_value(0) + 2.0) < 1e-10);
  CHECK(std::abs(n.ordered_point(1)(0) + 1.0) < 1e-10);
  CHECK(std::abs(n.ordered_value(1) - 2.0) < 1e-10);
  const auto r = lg::is_strongly_regular(n);
  CHECK_FALSE(r.strongly_regular);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->first != r.witness->second);

  CHECK_THROWS_WITH_AS(lg::find_critical_points(w, cv({0.0})), doctest::Contains("not W-regular"), lg::DomainError);
}

TEST_CASE("degenerate perturbations are rejected") {
  // y stays degenerate when only x is perturbed
  const auto w = lg::parse_polynomial("x^3 + y^3");
  CHECK_THROWS_WITH_AS(lg::find_critical_points(w, cv({1.0, 0.0})), doctest::Contains("not W-regular"),
                       lg::DomainError);
}

TEST_CASE("root counts equal mu across the corpus") {
  std::mt19937_64 rng(9);
  for (const char* text : kCorpus) {
    const auto w = lg::parse_polynomial(text);
    for (int s = 0; s < 5; ++s) {
      const ComplexVector b = random_b(rng, w.n_vars());
      const auto m = lg::find_critical_points(w, b);
      CHECK(m.size() == lg::milnor_number(w));
      for (Eigen::Index k = 0; k < m.size(); ++k) {
        CHECK(lg::perturbed_gradient(w, b, m.critical_points[static_cast<std::size_t>(k)]).norm() < 1e-10);
        CHECK(m.hessian_min_singular_value[static_cast<std::size_t>(k)] > 1e-8);
        for (Eigen::Index l = k + 1; l < m.size(); ++l)
          CHECK((m.critical_points[static_cast<std::size_t>(k)] - m.critical_points[static_cast<std::size_t>(l)])
                    .norm() > 1e-6);
      }
      for (Eigen::Index r = 1; r < m.size(); ++r) CHECK(m.ordered_value(r).imag() >= m.ordered_value(r - 1).imag());
    }
  }
}

TEST_CASE("sector polynomials: N_gamma = 0 and restricted loci") {
  const auto w = lg::parse_polynomial("x^4 + x*y^2");
  for (const auto& g : lg::enumerate_group(w)) {
    const auto s = lg::sector_data(w, g);
    const auto wg = lg::sector_polynomial(w, s);
    std::mt19937_64 rng(4);
    const auto m = lg::find_critical_points(wg, random_b(rng, s.n_gamma));
    if (s.n_gamma == 0) {
      CHECK(m.size() == 1);
      CHECK(m.critical_values[0] == Complex(0.0));
    } else {
      CHECK(m.size() == lg::milnor_number(wg));
    }
  }
}

TEST_CASE("gluing involution maps critical data to the transported perturbation") {
  std::mt19937_64 rng(12);
  for (const char* text : kCorpus) {
    const auto w = lg::parse_polynomial(text);
    const auto inv = lg::gluing_involution(w);
    const ComplexVector b = random_b(rng, w.n_vars());
    const auto m = lg::find_critical_points(w, b);
    const ComplexVector b2 = inv.transport_perturbation(b);
    const auto m2 = lg::find_critical_points(w, b2);
    for (std::size_t k = 0; k < m.critical_points.size(); ++k) {
      const ComplexVector image = inv.apply(m.critical_points[k]);
      CHECK(lg::perturbed_gradient(w, b2, image).norm() < 1e-9);
      CHECK(std::abs(lg::perturbed_value(w, b2, image) + m.critical_values[k]) < 1e-9);
      CHECK(contains(m2.critical_points, image, 1e-8));
    }
  }
}

TEST_CASE("wall detection along 3 exp(i pi lambda)") {
  const auto w = lg::parse_polynomial("x^3");
  const auto t0 = std::chrono::steady_clock::now();
  const auto walls = lg::detect_wall_crossings(w, [](double l) { return cv({3.0 * std::polar(1.0, M_PI * l)}); });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(walls.size() == 1);
  CHECK(std::abs(walls[0].lambda - 1.0 / 3.0) < 1e-8);
  CHECK(seconds < 1.0);
  // closed form: alpha = +-2 exp(i (3 pi lambda + pi) / 2) is real at the wall
  for (const auto& u : walls[0].points) CHECK(std::abs(lg::perturbed_value(w, walls[0].b, u).imag()) < 1e-8);
}

TEST_CASE("wall detection: constant path, collision") {
  const auto w = lg::parse_polynomial("x^3");
  CHECK(lg::detect_wall_crossings(w, [](double) { return cv({3.0}); }).empty());
  CHECK_THROWS_WITH_AS(lg::detect_wall_crossings(w, [](double l) { return cv({-3.0 + 6.0 * l}); }),
                       doctest::Contains("loss of tracked root"), lg::DomainError);
}

TEST_CASE("wall detection against a dense Im-gap scan") {
  // x^4 + b x with b on a circle that stays away from b = 0
  const auto w = lg::parse_polynomial("x^4");
  auto path = [](double l) { return cv({Complex(0.3, 0.0) + 1.5 * std::polar(1.0, 2.0 * M_PI * l)}); };
  const auto walls = lg::detect_wall_crossings(w, path);
  CHECK(walls.size() > 0);
  for (const auto& c : walls) {
    const ComplexVector b = path(c.lambda);
    const Complex a = lg::perturbed_value(w, b, c.points[static_cast<std::size_t>(c.i)]);
    const Complex d = lg::perturbed_value(w, b, c.points[static_cast<std::size_t>(c.j)]);
    CHECK(std::abs(a.imag() - d.imag()) < 1e-8);
  }
  // independent count: closed-form roots of 4x^3 + b = 0 on a 20000-point
  // grid, labels carried by nearest-neighbour matching, sign changes of the Im gaps
  const int grid = 20000;
  auto roots = [&](double l) {
    const Complex b = path(l)(0);
    std::vector<Complex> xs;
    for (int k = 0; k < 3; ++k) xs.push_back(std::pow(-b / 4.0, 1.0 / 3.0) * std::polar(1.0, 2.0 * M_PI * k / 3.0));
    return xs;
  };
  auto im_value = [&](const Complex& x, double l) {
    const Complex b = path(l)(0);
    return (x * x * x * x + b * x).imag();
  };
  int count = 0;
  std::vector<Complex> prev = roots(0.0);
  for (int s = 1; s <= grid; ++s) {
    const double l = static_cast<double>(s) / grid;
    const double lp = static_cast<double>(s - 1) / grid;
    const auto xs = roots(l);
    std::vector<Complex> matched(3);
    for (int k = 0; k < 3; ++k) {
      int best = 0;
      for (int t = 1; t < 3; ++t)
        if (std::abs(xs[t] - prev[k]) < std::abs(xs[best] - prev[k])) best = t;
      matched[k] = xs[best];
    }
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) {
        const double before = im_value(prev[p], lp) - im_value(prev[q], lp);
        const double after = im_value(matched[p], l) - im_value(matched[q], l);
        if (before * after < 0) ++count;
      }
    prev = matched;
  }
  CHECK(static_cast<int>(walls.size()) == count);
}

TEST_CASE("chamber invariance of the ordering") {
  const auto w = lg::parse_polynomial("x^4");
  // walls of x^4 + b x sit at arg b = pi/8 mod pi/4; this arc avoids them
  auto path = [](double l) { return cv({std::polar(2.0, 0.45 + 0.3 * l)}); };
  REQUIRE(lg::detect_wall_crossings(w, path).empty());
  const auto m0 = lg::find_critical_points(w, path(0.0));
  const auto tracked = lg::continue_points(w, path, m0.critical_points, 0.0, 1.0);
  const auto m1 = lg::morse_data_from_points(w, path(1.0), tracked);
  // morse_data_from_points re-sorts canonically; map labels back by nearest point
  std::vector<Eigen::Index> label(tracked.size());
  for (std::size_t k = 0; k < tracked.size(); ++k)
    for (std::size_t t = 0; t < m1.critical_points.size(); ++t)
      if ((m1.critical_points[t] - tracked[k]).norm() < 1e-12) label[t] = static_cast<Eigen::Index>(k);
  for (std::size_t r = 0; r < m0.ordering.size(); ++r)
    CHECK(m0.ordering[r] == label[static_cast<std::size_t>(m1.ordering[r])]);
}
