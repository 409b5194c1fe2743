#include "doctest.h"

#include <random>
#include <set>

#include "lg/errors.hpp"
#include "lg/lefschetz.hpp"

using lg::IntMatrix;
using lg::Rational;
using lg::RationalMatrix;
using lg::RationalVector;
using lg::ThimbleState;
using lg::WallSide;

namespace {

// n_gamma = 1: symmetric, n_gamma = 2: antisymmetric, n_gamma = 3: symmetric with pl_sign +1
ThimbleState random_state(std::mt19937_64& rng, Eigen::Index mu, int n_gamma) {
  std::uniform_int_distribution<int> entry(-3, 3);
  const bool sym = (n_gamma - 1) % 2 == 0;
  IntMatrix r = IntMatrix::Zero(mu, mu);
  for (Eigen::Index i = 0; i < mu; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      r(i, j) = entry(rng);
      r(j, i) = sym ? r(i, j) : -r(i, j);
    }
  ThimbleState probe = lg::a_chain_seed(1, n_gamma);
  r.diagonal().setConstant(probe.self_intersection());
  std::vector<RationalVector> coords;
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  for (int k = 0; k < 3; ++k) {
    RationalVector v(mu);
    for (Eigen::Index i = 0; i < mu; ++i) v(i) = Rational(num(rng), den(rng));
    coords.push_back(v);
  }
  return ThimbleState(n_gamma, r).with_cycle_coords(coords);
}

// independent: Picard-Lefschetz h_i applied to a coordinate vector of the original basis
RationalVector reflect(const ThimbleState& s, Eigen::Index i, const RationalVector& x) {
  const Rational c(s.pl_sign());
  RationalMatrix r = lg::to_rational(s.r());
  RationalVector out = x;
  out(i) += c * (x.transpose() * r.col(i)).value();
  return out;
}

std::int64_t det(const IntMatrix& p) {
  const Rational d = lg::determinant_exact<Rational>(lg::to_rational(p));
  REQUIRE(lg::is_integer(d));
  return d.numerator();
}

void check_pairings_preserved(const ThimbleState& before, const ThimbleState& after) {
  const auto& a = *before.cycle_coords();
  const auto& b = *after.cycle_coords();
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t l = 0; l < a.size(); ++l) CHECK(before.pairing(a[k], a[l]) == after.pairing(b[k], b[l]));
}

}  // namespace

TEST_CASE("construction and parity") {
  CHECK(lg::a_chain_seed(3, 1).symmetric());
  CHECK(lg::a_chain_seed(3, 1).self_intersection() == 2);
  CHECK(lg::a_chain_seed(3, 1).pl_sign() == -1);
  CHECK_FALSE(lg::a_chain_seed(3, 2).symmetric());
  CHECK(lg::a_chain_seed(3, 2).self_intersection() == 0);
  CHECK(lg::a_chain_seed(3, 3).pl_sign() == 1);
  CHECK(lg::a_chain_seed(3, 3).self_intersection() == -2);
  IntMatrix bad(2, 2);
  bad << 2, 1, 0, 2;
  CHECK_THROWS_AS(ThimbleState(1, bad), lg::DomainError);
  CHECK_THROWS_AS(ThimbleState(2, IntMatrix::Identity(2, 2)), lg::DomainError);
}

TEST_CASE("R = 0: monodromy and Gabrielov are the identity, braid is a swap") {
  const ThimbleState s(2, IntMatrix::Zero(4, 4));
  CHECK(lg::monodromy_apply(s, 1) == s);
  CHECK(lg::gabrielov_move(s, 0, 2) == s);
  const auto b = lg::braid_move(s, 1);
  IntMatrix swap = IntMatrix::Identity(4, 4);
  swap.block(1, 1, 2, 2) << 0, 1, 1, 0;
  CHECK(b.frame() == swap);
  CHECK(b.labels() == std::vector<std::string>{"D1", "D3", "D2", "D4"});
}

TEST_CASE("mu = 2 symmetric monodromy with pl_sign +1") {
  IntMatrix r(2, 2);
  r << -2, 1, 1, -2;
  const ThimbleState s(3, r);
  REQUIRE(s.pl_sign() == 1);
  const auto h = lg::monodromy_apply(s, 0);
  // d1 -> d1 + R_{1,1} d1 = -d1,  d2 -> d2 + d1
  IntMatrix expected(2, 2);
  expected << -1, 1, 0, 1;
  CHECK(h.frame() == expected);
  CHECK(h.r() == expected.transpose() * r * expected);
}

TEST_CASE("moves agree with the reflection formula and preserve the form") {
  std::mt19937_64 rng(101);
  for (int n_gamma : {1, 2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = random_state(rng, 4, n_gamma);
      for (Eigen::Index i = 0; i < 4; ++i) {
        const auto h = lg::monodromy_apply(s, i);
        for (Eigen::Index j = 0; j < 4; ++j)
          CHECK(lg::to_rational(IntMatrix(h.frame().col(j))) ==
                reflect(s, i, lg::to_rational(IntMatrix(IntMatrix::Identity(4, 4).col(j)))));
        CHECK(h.r() == s.r());  // h is an isometry: the new basis h(d_j) has the same Gram matrix
        check_pairings_preserved(s, h);
        check_pairings_preserved(s, lg::orientation_flip(s, i));
        if (i + 1 < 4) {
          check_pairings_preserved(s, lg::braid_move(s, i));
          check_pairings_preserved(s, lg::braid_move_inverse(s, i));
        }
        for (Eigen::Index j = 0; j < 4; ++j)
          if (j != i) {
            const auto g = lg::gabrielov_move(s, i, j);
            check_pairings_preserved(s, g);
            CHECK(g.frame().col(j) == h.frame().col(j));
          }
      }
    }
  }
}

TEST_CASE("braid relations on random forms") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(3, 6);
  for (int trial = 0; trial < 100; ++trial) {
    for (int n_gamma : {1, 2}) {
      const Eigen::Index mu = size(rng);
      const auto s = random_state(rng, mu, n_gamma);
      for (Eigen::Index j = 0; j + 2 < mu; ++j) {
        const auto lhs = lg::braid_move(lg::braid_move(lg::braid_move(s, j), j + 1), j);
        const auto rhs = lg::braid_move(lg::braid_move(lg::braid_move(s, j + 1), j), j + 1);
        CHECK(lhs == rhs);
      }
      for (Eigen::Index j = 0; j + 1 < mu; ++j) {
        CHECK(lg::braid_move_inverse(lg::braid_move(s, j), j) == s);
        CHECK(lg::braid_move(lg::braid_move_inverse(s, j), j) == s);
        for (Eigen::Index k = j + 2; k + 1 < mu; ++k)
          CHECK(lg::braid_move(lg::braid_move(s, j), k) == lg::braid_move(lg::braid_move(s, k), j));
      }
    }
  }
}

TEST_CASE("orientation flips") {
  std::mt19937_64 rng(3);
  const auto s = random_state(rng, 5, 2);
  for (Eigen::Index j = 0; j < 5; ++j) {
    const auto o = lg::orientation_flip(s, j);
    CHECK(lg::orientation_flip(o, j) == s);
    for (Eigen::Index k = 0; k < 5; ++k)
      if (k != j) CHECK(o.r()(j, k) == -s.r()(j, k));
    for (std::size_t c = 0; c < 3; ++c) CHECK((*o.cycle_coords())[c](j) == -(*s.cycle_coords())[c](j));
  }
}

TEST_CASE("Gabrielov moves compose to monodromy") {
  std::mt19937_64 rng(17);
  for (int n_gamma : {1, 2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = random_state(rng, 5, n_gamma);
      for (Eigen::Index i = 0; i < 5; ++i) {
        // gabrielov moves use the coefficients of the frame they act on, which
        // are untouched since slot i never changes
        ThimbleState t = s;
        for (Eigen::Index j = 0; j < 5; ++j)
          if (j != i) t = lg::gabrielov_move(t, i, j);
        if (s.symmetric()) t = lg::orientation_flip(t, i);  // h(d_i) = -d_i
        CHECK(t.frame() == lg::monodromy_apply(s, i).frame());
        CHECK(t.r() == lg::monodromy_apply(s, i).r());
      }
    }
  }
}

TEST_CASE("every move is unimodular") {
  std::mt19937_64 rng(23);
  for (int n_gamma : {1, 2, 3}) {
    const auto s = random_state(rng, 5, n_gamma);
    for (Eigen::Index i = 0; i < 5; ++i) {
      CHECK(std::abs(det(lg::monodromy_matrix(s, i))) == 1);
      CHECK(std::abs(det(lg::orientation_matrix(s, i))) == 1);
      for (Eigen::Index j = 0; j < 5; ++j)
        if (j != i) CHECK(std::abs(det(lg::gabrielov_matrix(s, i, j))) == 1);
      if (i + 1 < 5) {
        CHECK(std::abs(det(lg::braid_matrix(s, i))) == 1);
        CHECK(std::abs(det(lg::braid_inverse_matrix(s, i))) == 1);
        for (std::int64_t r : {-2, 0, 3}) {
          CHECK(std::abs(det(lg::wall_cross_matrix(s, i, WallSide::Left, r))) == 1);
          CHECK(std::abs(det(lg::wall_cross_matrix(s, i, WallSide::Right, r))) == 1);
        }
      }
    }
  }
}

TEST_CASE("index errors") {
  const auto s = lg::a_chain_seed(3, 1);
  CHECK_THROWS_AS(lg::monodromy_apply(s, 3), lg::DomainError);
  CHECK_THROWS_AS(lg::braid_move(s, 2), lg::DomainError);
  CHECK_THROWS_AS(lg::orientation_flip(s, -1), lg::DomainError);
  CHECK_THROWS_AS(lg::gabrielov_move(s, 1, 1), lg::DomainError);
  CHECK_THROWS_WITH_AS(lg::wall_cross(s, 0, WallSide::Left, 1), doctest::Contains("cycle coordinates"),
                       lg::DomainError);
}

TEST_CASE("wall crossing") {
  const auto seed = lg::a_chain_seed(3, 2);
  std::vector<RationalVector> units;
  for (Eigen::Index k = 0; k < 3; ++k) units.push_back(RationalVector::Unit(3, k).eval());
  const auto s = seed.with_cycle_coords(units);

  // r = 0 swaps both slots on either side
  for (WallSide side : {WallSide::Left, WallSide::Right}) {
    const auto t = lg::wall_cross(s, 0, side, 0);
    CHECK((*t.cycle_coords())[0] == RationalVector::Unit(3, 1));
    CHECK((*t.cycle_coords())[1] == RationalVector::Unit(3, 0));
    CHECK((*t.cycle_coords())[2] == RationalVector::Unit(3, 2));
  }

  // r = 1: plus-side classes in minus-side ones
  const IntMatrix b = lg::wall_cross_matrix(s, 0, WallSide::Left, 1);
  CHECK(b.col(0) == (IntMatrix::Identity(3, 3).col(1) + IntMatrix::Identity(3, 3).col(0)));
  CHECK(b.col(1) == IntMatrix::Identity(3, 3).col(0));

  // Left with r = c R[j+1][j] is the braid move
  std::mt19937_64 rng(5);
  for (int n_gamma : {1, 2, 3}) {
    const auto t = random_state(rng, 4, n_gamma);
    for (Eigen::Index j = 0; j + 1 < 4; ++j)
      CHECK(lg::wall_cross(t, j, WallSide::Left, t.pl_coefficient(j + 1, j)) == lg::braid_move(t, j));
  }

  // Left(r) then Right(-r) is the identity on random rational vectors
  std::uniform_int_distribution<int> rr(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_state(rng, 5, trial % 2 + 1);
    for (Eigen::Index i = 0; i + 1 < 5; ++i) {
      const std::int64_t r = rr(rng);
      const auto round = lg::wall_cross(lg::wall_cross(t, i, WallSide::Left, r), i, WallSide::Right, -r);
      CHECK(*round.cycle_coords() == *t.cycle_coords());
      CHECK(round.r() == t.r());
      CHECK(round.labels() == t.labels());
    }
  }
}

TEST_CASE("A2 seed: orientation and braid orbit") {
  const auto seed = lg::a_chain_seed(2, 1);
  std::set<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> seen;
  auto key = [](const ThimbleState& s) {
    return std::make_pair(std::vector<std::int64_t>(s.frame().data(), s.frame().data() + 4),
                          std::vector<std::int64_t>(s.r().data(), s.r().data() + 4));
  };
  std::vector<ThimbleState> frontier{seed}, all{seed};
  seen.insert(key(seed));
  for (int depth = 0; depth < 6; ++depth) {
    std::vector<ThimbleState> next;
    for (const auto& s : frontier) {
      for (const auto& t : {lg::orientation_flip(s, 0), lg::orientation_flip(s, 1), lg::braid_move(s, 0),
                            lg::braid_move_inverse(s, 0)})
        if (seen.insert(key(t)).second) {
          next.push_back(t);
          all.push_back(t);
        }
    }
    frontier = std::move(next);
  }
  auto has_frame = [&](const IntMatrix& f) {
    for (const auto& s : all)
      if (s.frame() == f) return true;
    return false;
  };
  auto has_gram = [&](const IntMatrix& r) {
    for (const auto& s : all)
      if (s.r() == r) return true;
    return false;
  };
  // every sign variant of the seed basis
  for (int a : {1, -1})
    for (int c : {1, -1}) {
      IntMatrix f = IntMatrix::Zero(2, 2);
      f(0, 0) = a;
      f(1, 1) = c;
      CHECK(has_frame(f));
    }
  // every Gram variant: both signs of the off-diagonal entry
  IntMatrix r = seed.r();
  CHECK(has_gram(r));
  r(0, 1) = r(1, 0) = -1;
  CHECK(has_gram(r));
  // all reached states are distinguished bases of A2
  for (const auto& s : all) {
    CHECK(std::abs(s.r()(0, 1)) == 1);
    CHECK(s.r().diagonal() == seed.r().diagonal());
  }
}

TEST_CASE("Casimir element") {
  const auto a = lg::a_chain_seed(3, 1);
  const auto id = lg::casimir(a, a, RationalMatrix::Identity(3, 3));
  CHECK(id.matrix() == RationalMatrix::Identity(3, 3));
  const RationalMatrix two = RationalMatrix::Identity(3, 3) * Rational(2);
  const auto half = lg::casimir(a, a, two);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(half.at({i, j}) == (i == j ? Rational(1, 2) : Rational(0)));
  CHECK_THROWS_AS(lg::casimir(a, a, RationalMatrix::Zero(3, 3)), lg::DomainError);
  CHECK_THROWS_AS(lg::casimir(a, a, RationalMatrix::Identity(2, 2)), lg::DomainError);

  // invariance: with eta' = P^T eta Q, C' in new coordinates maps back to C
  std::mt19937_64 rng(31);
  for (int n_gamma : {1, 2}) {
    const auto s = random_state(rng, 4, n_gamma);
    RationalMatrix eta(4, 4);
    std::uniform_int_distribution<int> e(-3, 3);
    do {
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) eta(i, j) = Rational(e(rng));
    } while (lg::determinant_exact<Rational>(eta) == Rational(0));
    for (Eigen::Index j = 0; j + 1 < 4; ++j) {
      const auto sa = lg::braid_move(s, j);
      const auto sb = lg::orientation_flip(lg::braid_move(s, (j + 1) % 3), 0);
      const RationalMatrix p = lg::to_rational(lg::braid_matrix(s, j));
      const RationalMatrix q = lg::to_rational(IntMatrix(lg::braid_matrix(s, (j + 1) % 3) *
                                                         lg::orientation_matrix(lg::braid_move(s, (j + 1) % 3), 0)));
      const RationalMatrix eta_new = p.transpose() * eta * q;
      const auto c_old = lg::casimir(s, s, eta).matrix();
      const auto c_new = lg::casimir(sa, sb, eta_new).matrix();
      // sum C'(i,j) S'_i (x) T'_j with S' = S P, T' = T Q
      CHECK(p * c_new * q.transpose() == c_old);
    }
  }
}

TEST_CASE("pairing contraction") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> e(-3, 3);
  for (Eigen::Index mu = 1; mu <= 5; ++mu) {
    RationalMatrix eta(mu, mu);
    do {
      for (Eigen::Index i = 0; i < mu; ++i)
        for (Eigen::Index j = 0; j < mu; ++j) eta(i, j) = Rational(e(rng), 1 + (i + j) % 2);
    } while (lg::determinant_exact<Rational>(eta) == Rational(0));
    const auto s = lg::a_chain_seed(mu, 2);
    const auto c = lg::casimir(s, s, eta);
    const auto scalar = lg::contract_pm(c, eta);
    CHECK(scalar.data().size() == 1);
    CHECK(scalar.data()[0] == Rational(mu));
    CHECK(lg::contract_pm(c, eta, Rational(3, 2)).data()[0] == Rational(3 * mu, 2));
  }

  // rank one: (v (x) w) contracted = v^T eta w
  RationalVector v(3), w(3);
  v << Rational(1), Rational(-2), Rational(1, 3);
  w << Rational(4), Rational(0), Rational(-1, 2);
  RationalMatrix eta = RationalMatrix::Identity(3, 3);
  eta(0, 2) = Rational(5);
  const auto t = lg::outer(lg::Tensor::from_vector(v), lg::Tensor::from_vector(w));
  CHECK(lg::contract_pm(t, eta).data()[0] == (v.transpose() * eta * w).value());

  // contraction commutes with a simultaneous basis change of the paired slots
  const auto s = random_state(rng, 3, 2);
  const RationalMatrix p = lg::to_rational(lg::braid_matrix(s, 0));
  const RationalMatrix pinv = *lg::inverse_exact<Rational>(p);
  RationalMatrix m(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = Rational(e(rng), 1 + i);
  const RationalMatrix m_new = pinv * m * pinv.transpose();
  const RationalMatrix eta_new = p.transpose() * eta * p;
  CHECK(lg::contract_pm(lg::Tensor::from_matrix(m), eta).data()[0] ==
        lg::contract_pm(lg::Tensor::from_matrix(m_new), eta_new).data()[0]);

  // partial contraction of a rank-3 tensor
  const auto t3 = lg::outer(lg::Tensor::from_vector(v), t);
  const auto part = lg::contract_pm(t3, eta);
  REQUIRE(part.dims() == std::vector<Eigen::Index>{3});
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(part.at({i}) == v(i) * (v.transpose() * eta * w).value());
  CHECK_THROWS_AS(lg::contract_pm(t, RationalMatrix::Identity(2, 2)), lg::DomainError);
  CHECK_THROWS_AS(lg::contract_pm(lg::Tensor::from_vector(v), eta), lg::DomainError);
}
