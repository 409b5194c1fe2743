#include "lg/morse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "lg/errors.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "morse";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

double min_singular_value(const ComplexMatrix& h) {
  if (h.size() == 0) return std::numeric_limits<double>::infinity();
  return Eigen::JacobiSVD<ComplexMatrix>(h).singularValues().minCoeff();
}

// Plain Newton until the step stalls, so a degenerate root is driven far
// enough in that its Hessian is visibly singular.
ComplexVector polish(const QHPoly& w, const ComplexVector& b, ComplexVector u, int max_iter = 100) {
  for (int it = 0; it < max_iter; ++it) {
    const ComplexVector g = perturbed_gradient(w, b, u);
    if (g.norm() == 0.0) break;
    const ComplexVector step = hessian(w, u).fullPivLu().solve(g);
    if (!step.allFinite()) break;
    u -= step;
    if (step.norm() <= 1e-15 * (1.0 + u.norm())) break;
  }
  return u;
}

double coordinate_scale(const QHPoly& w, const ComplexVector& b, Eigen::Index i) {
  const double q = to_double(w.weights()(i));
  return std::pow(std::max(b.norm(), 1e-300), q / (1.0 - q));
}

bool canonical_less(const ComplexVector& a, const ComplexVector& b) {
  auto key = [](double x) { return std::round(x * 1e8); };
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ar = key(a(i).real()), br = key(b(i).real());
    if (ar != br) return ar < br;
    const double ai = key(a(i).imag()), bi = key(b(i).imag());
    if (ai != bi) return ai < bi;
  }
  return false;
}

std::string lambda_text(double lambda) {
  std::ostringstream os;
  os.precision(12);
  os << lambda;
  return os.str();
}

}  // namespace

const ComplexVector& MorseData::ordered_point(Eigen::Index r) const {
  return critical_points.at(idx(ordering.at(idx(r))));
}

Complex MorseData::ordered_value(Eigen::Index r) const { return critical_values.at(idx(ordering.at(idx(r)))); }

Complex perturbed_value(const QHPoly& w, const ComplexVector& b, const ComplexVector& u) {
  return evaluate(w, u) + (b.transpose() * u).value();
}

ComplexVector perturbed_gradient(const QHPoly& w, const ComplexVector& b, const ComplexVector& u) {
  if (b.size() != w.n_vars()) fail("perturbation has wrong length");
  return gradient(w, u) + b;
}

double l1_norm(const ComplexVector& b) { return b.cwiseAbs().sum(); }

MorseData morse_data_from_points(const QHPoly& w, const ComplexVector& b, std::vector<ComplexVector> points) {
  MorseData m;
  m.b = b;
  std::sort(points.begin(), points.end(), canonical_less);
  m.critical_points = std::move(points);
  double scale = 1.0;
  for (const auto& u : m.critical_points) {
    m.critical_values.push_back(perturbed_value(w, b, u));
    m.hessian_min_singular_value.push_back(min_singular_value(hessian(w, u)));
    scale = std::max(scale, std::abs(m.critical_values.back()));
  }
  m.tol_im = 1e-9 * scale;
  const Eigen::Index n = m.size();
  m.ordering.resize(idx(n));
  std::iota(m.ordering.begin(), m.ordering.end(), 0);
  const auto& v = m.critical_values;
  std::sort(m.ordering.begin(), m.ordering.end(),
            [&](Eigen::Index a, Eigen::Index c) { return v[idx(a)].imag() < v[idx(c)].imag(); });
  // runs of equal Im (within tol) are ordered by Re
  for (Eigen::Index s = 0; s < n;) {
    Eigen::Index e = s + 1;
    while (e < n && v[idx(m.ordering[idx(e)])].imag() - v[idx(m.ordering[idx(e - 1)])].imag() <= m.tol_im) ++e;
    std::sort(m.ordering.begin() + s, m.ordering.begin() + e,
              [&](Eigen::Index a, Eigen::Index c) { return v[idx(a)].real() < v[idx(c)].real(); });
    s = e;
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = a + 1; c < n; ++c)
      if (std::abs(v[idx(a)].imag() - v[idx(c)].imag()) <= m.tol_im) m.ties.emplace_back(a, c);
  return m;
}

MorseData find_critical_points(const QHPoly& w, const ComplexVector& b, const MorseOptions& opts) {
  const Eigen::Index n = w.n_vars();
  if (b.size() != n) fail("perturbation has wrong length");
  if (n == 0) return morse_data_from_points(w, b, {ComplexVector(0)});
  const std::int64_t mu = milnor_number(w);
  if (b.norm() == 0.0) fail("not W-regular: b = 0 leaves the degenerate critical point 0");

  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) scale(i) = coordinate_scale(w, b, i);
  const double size = std::max(1.0, scale.maxCoeff());

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::vector<ComplexVector> roots;

  auto register_root = [&](const ComplexVector& u) {
    if (!u.allFinite()) return;
    if (perturbed_gradient(w, b, u).norm() > opts.residual_tol * size) return;
    const double sv = min_singular_value(hessian(w, u));
    if (sv < opts.min_singular_value)
      fail("not W-regular: degenerate critical point (min singular value " + lambda_text(sv) + ")");
    for (const auto& r : roots)
      if ((r - u).norm() <= opts.separation * size) return;
    roots.push_back(u);
  };

  for (double radius : {0.5, 1.0, 2.0, 4.0}) {
    for (int s = 0; s < opts.starts_per_radius && static_cast<std::int64_t>(roots.size()) < mu; ++s) {
      ComplexVector u(n);
      for (Eigen::Index i = 0; i < n; ++i) u(i) = Complex(normal(rng), normal(rng));
      u = radius * u.normalized();
      u = u.cwiseProduct(scale.cast<Complex>());
      for (int it = 0; it < 200; ++it) {
        const ComplexVector g = perturbed_gradient(w, b, u);
        if (!g.allFinite()) break;
        if (g.norm() < 1e-13 * size) break;
        ComplexVector step = hessian(w, u).fullPivLu().solve(g);
        if (!step.allFinite()) break;
        // deflation m(u) = prod (|u - r|^-2 + 1)
        double dlogm = 0.0;
        for (const auto& r : roots) {
          const ComplexVector d = u - r;
          const double d2 = d.squaredNorm();
          if (d2 == 0.0) continue;
          const double t = 1.0 / d2 + 1.0;
          dlogm += -2.0 * d.dot(step).real() / (d2 * d2) / t;
        }
        const double denom = 1.0 + dlogm;
        if (std::abs(denom) > 1e-12) step /= denom;
        u -= step;
        if (u.norm() > 1e8 * size) break;
      }
      if (!u.allFinite()) continue;
      register_root(polish(w, b, u));
    }
  }
  if (static_cast<std::int64_t>(roots.size()) != mu)
    fail("degenerate or unresolved: found " + std::to_string(roots.size()) + " of " + std::to_string(mu) +
         " critical points");
  return morse_data_from_points(w, b, std::move(roots));
}

RegularityReport is_strongly_regular(const MorseData& m) {
  RegularityReport r;
  if (!m.ties.empty()) {
    r.strongly_regular = false;
    r.witness = m.ties.front();
  }
  return r;
}

std::vector<ComplexVector> continue_points(const QHPoly& w, const PerturbationPath& path,
                                           std::vector<ComplexVector> points, double lambda0, double lambda1,
                                           const ContinuationOptions& opts) {
  if (lambda1 == lambda0) return points;
  const double span = lambda1 - lambda0;
  const double h_max = std::abs(span) / opts.steps;
  double h = h_max;
  double lambda = lambda0;
  const double dir = span > 0 ? 1.0 : -1.0;
  std::vector<ComplexVector> velocity(points.size(), ComplexVector::Zero(w.n_vars()));
  while (dir * (lambda1 - lambda) > 0.0) {
    const double step = std::min(h, std::abs(lambda1 - lambda));
    const double next = (step == std::abs(lambda1 - lambda)) ? lambda1 : lambda + dir * step;
    const ComplexVector b = path(next);
    double size = 1.0;
    for (Eigen::Index i = 0; i < w.n_vars(); ++i) size = std::max(size, coordinate_scale(w, b, i));
    bool ok = true;
    std::vector<ComplexVector> moved(points.size());
    double motion = 0.0;
    for (std::size_t k = 0; k < points.size() && ok; ++k) {
      ComplexVector u = points[k] + velocity[k] * step;
      for (int it = 0; it < 30; ++it) {
        const ComplexVector g = perturbed_gradient(w, b, u);
        if (g.norm() < opts.residual_tol * size * 1e-2) break;
        u -= hessian(w, u).fullPivLu().solve(g);
        if (!u.allFinite()) break;
      }
      ok = u.allFinite() && perturbed_gradient(w, b, u).norm() < opts.residual_tol * size &&
           min_singular_value(hessian(w, u)) >= opts.morse.min_singular_value;
      moved[k] = u;
      if (ok) motion = std::max(motion, (u - points[k]).norm());
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; ok && a < moved.size(); ++a)
      for (std::size_t c = a + 1; c < moved.size(); ++c) {
        gap = std::min(gap, (moved[a] - moved[c]).norm());
        gap = std::min(gap, (points[a] - points[c]).norm());
      }
    if (ok && 4.0 * motion < gap) {
      for (std::size_t k = 0; k < points.size(); ++k) velocity[k] = (moved[k] - points[k]) / step;
      points = std::move(moved);
      lambda = next;
      h = std::min(h_max, 1.5 * h);
    } else {
      h /= 2.0;
      if (h < opts.min_step) fail("loss of tracked root near lambda = " + lambda_text(lambda));
    }
  }
  return points;
}

std::vector<WallCrossing> detect_wall_crossings(const QHPoly& w, const PerturbationPath& path,
                                                const ContinuationOptions& opts) {
  const MorseData start = find_critical_points(w, path(0.0), opts.morse);
  const Eigen::Index n = start.size();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  auto im_gaps = [&](double lambda, const std::vector<ComplexVector>& pts) {
    const ComplexVector b = path(lambda);
    std::vector<Complex> v;
    double scale = 1.0;
    for (const auto& u : pts) {
      v.push_back(perturbed_value(w, b, u));
      scale = std::max(scale, std::abs(v.back()));
    }
    std::vector<int> sign;
    std::vector<double> gap;
    for (const auto& [i, j] : pairs) {
      const double d = v[idx(i)].imag() - v[idx(j)].imag();
      gap.push_back(d);
      sign.push_back(std::abs(d) <= 1e-9 * scale ? 0 : (d > 0 ? 1 : -1));
    }
    return std::make_pair(sign, gap);
  };

  struct Anchor {
    int sign = 0;
    double lambda = 0.0;
    std::vector<ComplexVector> points;
  };
  std::vector<Anchor> anchor(pairs.size());
  std::vector<ComplexVector> pts = start.critical_points;
  {
    const auto [sign, gap] = im_gaps(0.0, pts);
    for (std::size_t p = 0; p < pairs.size(); ++p) anchor[p] = {sign[p], 0.0, pts};
  }

  std::vector<WallCrossing> out;
  const double h = 1.0 / opts.steps;
  for (int s = 1; s <= opts.steps; ++s) {
    const double lambda0 = (s - 1) * h;
    const double lambda1 = s == opts.steps ? 1.0 : s * h;
    pts = continue_points(w, path, pts, lambda0, lambda1, opts);
    const auto [sign, gap] = im_gaps(lambda1, pts);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (sign[p] == 0) continue;
      if (anchor[p].sign != 0 && sign[p] != anchor[p].sign) {
        // bisection on the anchored bracket
        double lo = anchor[p].lambda, hi = lambda1;
        std::vector<ComplexVector> lo_pts = anchor[p].points;
        const int lo_sign = anchor[p].sign;
        while (hi - lo > opts.bisection_tol) {
          const double mid = 0.5 * (lo + hi);
          auto mid_pts = continue_points(w, path, lo_pts, lo, mid, opts);
          const auto [ms, mg] = im_gaps(mid, mid_pts);
          const double d = mg[p];
          if (d == 0.0) {
            lo = hi = mid;
            lo_pts = std::move(mid_pts);
            break;
          }
          if ((d > 0 ? 1 : -1) == lo_sign) {
            lo = mid;
            lo_pts = std::move(mid_pts);
          } else {
            hi = mid;
          }
        }
        const double star = 0.5 * (lo + hi);
        WallCrossing c;
        c.lambda = star;
        c.i = pairs[p].first;
        c.j = pairs[p].second;
        c.b = path(star);
        c.points = continue_points(w, path, lo_pts, lo, star, opts);
        out.push_back(std::move(c));
      }
      anchor[p] = {sign[p], lambda1, pts};
    }
  }
  std::sort(out.begin(), out.end(), [](const WallCrossing& a, const WallCrossing& b) { return a.lambda < b.lambda; });
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].lambda - out[k - 1].lambda < 1e-8)
      fail("non-generic crossing: two pairs cross at lambda = " + lambda_text(out[k].lambda));
  return out;
}

}  // namespace lg
