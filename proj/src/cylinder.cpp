#include "lg/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lg/errors.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "soliton";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) fail("Theta must lie in (0, 1)");
}

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

// int_0^inf e^{-a t} g(t) dt with a > 0, split at the given points
Complex damped_integral(double a, const std::function<Complex(double)>& g, std::vector<double> cuts,
                        const QuadratureOptions& opts) {
  using boost::math::quadrature::gauss_kronrod;
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [](double c) { return !(c > 0.0); }), cuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(std::numeric_limits<double>::infinity());
  Complex total(0.0, 0.0);
  double error_total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] <= cuts[k]) continue;
    double er = 0.0, ei = 0.0;
    const double re = gauss_kronrod<double, 31>::integrate(
        [&](double t) { return std::exp(-a * t) * g(t).real(); }, cuts[k], cuts[k + 1], opts.max_depth, opts.tol, &er);
    const double im = gauss_kronrod<double, 31>::integrate(
        [&](double t) { return std::exp(-a * t) * g(t).imag(); }, cuts[k], cuts[k + 1], opts.max_depth, opts.tol, &ei);
    total += Complex(re, im);
    error_total += er + ei;
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag()) ||
      error_total > opts.max_error * (1.0 + std::abs(total)))
    fail("divergent forcing: quadrature error " + std::to_string(error_total));
  return total;
}

// spectral first derivative on a periodic grid of n points over [0, length)
Eigen::MatrixXcd periodic_derivative(int n, double length) {
  Eigen::MatrixXcd f(n, n), finv(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      f(k, j) = std::polar(1.0, -2.0 * M_PI * j * k / n);
      finv(j, k) = std::polar(1.0 / n, 2.0 * M_PI * j * k / n);
    }
  Eigen::VectorXcd symbol(n);
  for (int k = 0; k < n; ++k) {
    int wave = k <= n / 2 ? k : k - n;
    if (n % 2 == 0 && k == n / 2) wave = 0;
    symbol(k) = Complex(0.0, 2.0 * M_PI * wave / length);
  }
  return finv * symbol.asDiagonal() * f;
}

}  // namespace

Complex CylinderField::mode_value(std::size_t k, double s) const {
  const auto& m = modes.at(k);
  if (m.profile) return m.profile(s);
  return m.c * std::exp(-(m.n + theta) * s);
}

Complex CylinderField::value(double s, double angle) const {
  Complex v(0.0, 0.0);
  for (std::size_t k = 0; k < modes.size(); ++k) v += mode_value(k, s) * std::polar(1.0, -modes[k].n * angle);
  return v;
}

CylinderField fourier_bounded_solution(double theta, std::vector<ForcingMode> forcing, const QuadratureOptions& opts) {
  check_theta(theta);
  CylinderField field;
  field.theta = theta;
  for (auto& f : forcing) {
    if (!f.rho) fail("forcing mode without a profile");
    const double k = f.n + theta;
    CylinderMode mode;
    mode.n = f.n;
    auto rho = std::make_shared<std::function<Complex(double)>>(std::move(f.rho));
    auto cuts = std::make_shared<std::vector<double>>(std::move(f.breakpoints));
    mode.profile = [k, rho, cuts, opts](double s) -> Complex {
      std::vector<double> local;
      if (k > 0) {
        for (double c : *cuts) local.push_back(s - c);
        return damped_integral(
            k, [&rho, s](double t) { return (*rho)(s - t); }, local, opts);
      }
      for (double c : *cuts) local.push_back(c - s);
      return Complex(-damped_integral(
          -k, [&rho, s](double t) { return (*rho)(s + t); }, local, opts));
    };
    field.modes.push_back(std::move(mode));
  }
  return field;
}

CylinderField homogeneous_field(double theta, const std::vector<std::pair<int, Complex>>& coefficients, double t) {
  check_theta(theta);
  CylinderField field;
  field.theta = theta;
  field.t = t;
  for (const auto& [n, c] : coefficients) {
    if (n < 0) fail("negative mode " + std::to_string(n) + ": bounded homogeneous solutions have C_n = 0 for n < 0");
    CylinderMode m;
    m.n = n;
    m.c = c;
    field.modes.push_back(m);
  }
  return field;
}

DecayReport homogeneous_decay_check(double theta, const std::vector<std::pair<int, Complex>>& coefficients, double t,
                                    int grid) {
  if (!(t > 0.0)) fail("T must be positive");
  if (grid < 2) fail("grid too small");
  const CylinderField field = homogeneous_field(theta, coefficients, t);
  DecayReport r;
  for (const auto& m : field.modes) r.energy += std::norm(m.c) * (m.n + theta) / 2.0;

  const double bound_factor = std::sqrt(2.0 / theta) * std::sqrt(r.energy) / std::sqrt(1.0 - std::exp(-2.0 * t));
  Eigen::VectorXd ss(grid), logs(grid);
  for (int a = 0; a < grid; ++a) {
    const double s = t + t * a / (grid - 1);
    double sup = 0.0;
    for (int c = 0; c < grid; ++c) {
      const double v = std::abs(field.value(s, 2.0 * M_PI * c / grid));
      sup = std::max(sup, v);
      const double bound = bound_factor * std::exp(-theta * s);
      r.max_bound_ratio = std::max(r.max_bound_ratio, v / bound);
    }
    ss(a) = s;
    logs(a) = std::log(sup);
  }
  const double sm = ss.mean(), lm = logs.mean();
  const double slope = ((ss.array() - sm) * (logs.array() - lm)).sum() / (ss.array() - sm).square().sum();
  r.rate = -slope;
  r.relative_error = std::abs(r.rate - theta) / theta;
  r.bound_holds = r.max_bound_ratio <= 1.0;
  return r;
}

SpectrumReport a1_liouville_spectrum(double eps, int max_mode, double tol) {
  if (max_mode < 0) fail("max_mode must be nonnegative");
  const double c = 2.0 + eps;
  SpectrumReport r;
  r.min_abs_real = std::numeric_limits<double>::infinity();
  for (int n = -max_mode; n <= max_mode; ++n) {
    Eigen::Matrix2d a;
    a << -n, 2.0 * c, 2.0 * c, n;
    Eigen::EigenSolver<Eigen::Matrix2d> es(a);
    bool bounded = false;
    for (int k = 0; k < 2; ++k) {
      const Complex lambda = es.eigenvalues()(k);
      r.eigenvalues.emplace_back(n, lambda);
      r.min_abs_real = std::min(r.min_abs_real, std::abs(lambda.real()));
      if (std::abs(lambda.real()) <= tol) bounded = true;
    }
    if (bounded) r.bounded_modes.push_back(n);
  }
  return r;
}

WittenReport witten_vanishing_newton(const QHPoly& w, const std::vector<double>& theta, const WittenOptions& opts) {
  const Eigen::Index nv = w.n_vars();
  if (static_cast<Eigen::Index>(theta.size()) != nv) fail("one Theta per variable required");
  for (double t : theta) check_theta(t);
  if (opts.ns < 2 || opts.ntheta < 2) fail("grid too small");

  const int ns = opts.ns, nt = opts.ntheta;
  const Eigen::Index g = ns * nt;  // grid points per variable, index a * nt + c
  const Eigen::MatrixXcd ds = periodic_derivative(ns, opts.length);
  const Eigen::MatrixXcd dt = periodic_derivative(nt, 2.0 * M_PI);
  Eigen::MatrixXcd lin = Eigen::MatrixXcd::Zero(g, g);
  for (int a = 0; a < ns; ++a)
    for (int c = 0; c < nt; ++c) {
      for (int a2 = 0; a2 < ns; ++a2) lin(a * nt + c, a2 * nt + c) += ds(a, a2);
      for (int c2 = 0; c2 < nt; ++c2) lin(a * nt + c, a * nt + c2) += Complex(0.0, 1.0) * dt(c, c2);
    }
  const Eigen::Index dim = nv * g;

  // unknowns: v_i at every grid point, stacked per variable; real form (Re, Im)
  auto residual = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd r(dim);
    for (Eigen::Index i = 0; i < nv; ++i) r.segment(i * g, g) = lin * v.segment(i * g, g) + theta[idx(i)] * v.segment(i * g, g);
    for (Eigen::Index p = 0; p < g; ++p) {
      ComplexVector u(nv);
      for (Eigen::Index i = 0; i < nv; ++i) u(i) = v(i * g + p);
      const ComplexVector grad = gradient(w, u);
      for (Eigen::Index i = 0; i < nv; ++i) r(i * g + p) += std::conj(grad(i));
    }
    return r;
  };
  auto jacobian = [&](const Eigen::VectorXcd& v) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    for (Eigen::Index i = 0; i < nv; ++i) {
      Eigen::MatrixXcd a = lin;
      a.diagonal().array() += theta[idx(i)];
      j.block(i * g, i * g, g, g) = a.real();
      j.block(i * g, dim + i * g, g, g) = -a.imag();
      j.block(dim + i * g, i * g, g, g) = a.imag();
      j.block(dim + i * g, dim + i * g, g, g) = a.real();
    }
    // d conj(grad W) = conj(H dv): real form [[Hr, -Hi], [-Hi, -Hr]]
    for (Eigen::Index p = 0; p < g; ++p) {
      ComplexVector u(nv);
      for (Eigen::Index i = 0; i < nv; ++i) u(i) = v(i * g + p);
      const ComplexMatrix h = hessian(w, u);
      for (Eigen::Index i = 0; i < nv; ++i)
        for (Eigen::Index k = 0; k < nv; ++k) {
          const Eigen::Index row = i * g + p, col = k * g + p;
          j(row, col) += h(i, k).real();
          j(row, dim + col) -= h(i, k).imag();
          j(dim + row, col) -= h(i, k).imag();
          j(dim + row, dim + col) -= h(i, k).real();
        }
    }
    return j;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  WittenReport report;
  for (int start = 0; start < opts.starts; ++start) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = Complex(unit(rng), unit(rng));
    v *= opts.amplitude / v.cwiseAbs().maxCoeff();
    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
      const Eigen::VectorXcd r = residual(v);
      if (!r.allFinite()) break;
      if (r.cwiseAbs().maxCoeff() < opts.tol) {
        converged = true;
        break;
      }
      Eigen::VectorXd rr(2 * dim);
      rr.head(dim) = r.real();
      rr.tail(dim) = r.imag();
      const Eigen::VectorXd step = jacobian(v).partialPivLu().solve(rr);
      for (Eigen::Index k = 0; k < dim; ++k) v(k) -= Complex(step(k), step(dim + k));
    }
    ++report.starts;
    const double norm = v.allFinite() ? v.cwiseAbs().maxCoeff() : std::numeric_limits<double>::infinity();
    report.max_final_norm = std::max(report.max_final_norm, norm);
    if (!converged)
      ++report.failed;
    else if (norm < 1e-8)
      ++report.converged_to_zero;
    else
      ++report.converged_nonzero;
  }
  return report;
}

}  // namespace lg
