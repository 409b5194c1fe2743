#include "lg/lefschetz.hpp"

#include "lg/errors.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "lefschetz";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

void check_index(const ThimbleState& s, Eigen::Index i) {
  if (i < 0 || i >= s.mu()) fail("basis index " + std::to_string(i + 1) + " out of range 1.." + std::to_string(s.mu()));
}

void check_adjacent(const ThimbleState& s, Eigen::Index j) {
  if (j < 0 || j + 1 >= s.mu())
    fail("adjacent pair index " + std::to_string(j + 1) + " out of range 1.." + std::to_string(s.mu() - 1));
}

std::vector<std::string> swapped(std::vector<std::string> labels, Eigen::Index j) {
  std::swap(labels[static_cast<std::size_t>(j)], labels[static_cast<std::size_t>(j + 1)]);
  return labels;
}

}  // namespace

ThimbleState::ThimbleState(int n_gamma, IntMatrix r, std::vector<std::string> labels)
    : n_gamma_(n_gamma), r_(std::move(r)), labels_(std::move(labels)) {
  if (n_gamma_ < 1) fail("thimble bases need N_gamma >= 1");
  if (r_.rows() != r_.cols() || r_.rows() == 0) fail("intersection matrix must be square and nonempty");
  pl_sign_ = ((n_gamma_ * (n_gamma_ + 1) / 2) % 2 == 0) ? 1 : -1;
  if (labels_.empty())
    for (Eigen::Index i = 0; i < r_.rows(); ++i) labels_.push_back("D" + std::to_string(i + 1));
  if (static_cast<Eigen::Index>(labels_.size()) != r_.rows()) fail("label count does not match mu");
  frame_ = IntMatrix::Identity(r_.rows(), r_.rows());
  if (!valid_form())
    fail(std::string("intersection matrix must be ") + (symmetric() ? "symmetric" : "antisymmetric") +
         " with diagonal " + std::to_string(self_intersection()));
}

std::int64_t ThimbleState::self_intersection() const {
  if (!symmetric()) return 0;
  const int n = n_gamma_ - 1;
  return ((n * (n - 1) / 2) % 2 == 0) ? 2 : -2;
}

bool ThimbleState::valid_form() const {
  const std::int64_t sigma = symmetric() ? 1 : -1;
  for (Eigen::Index i = 0; i < r_.rows(); ++i) {
    if (r_(i, i) != self_intersection()) return false;
    for (Eigen::Index j = 0; j < i; ++j)
      if (r_(i, j) != sigma * r_(j, i)) return false;
  }
  return true;
}

std::int64_t ThimbleState::pl_coefficient(Eigen::Index j, Eigen::Index i) const { return pl_sign_ * r_(j, i); }

ThimbleState ThimbleState::with_cycle_coords(std::vector<RationalVector> coords) const {
  for (const auto& v : coords)
    if (v.size() != mu()) fail("cycle coordinate vector has wrong length");
  ThimbleState s = *this;
  s.coords_ = std::move(coords);
  return s;
}

Rational ThimbleState::pairing(const RationalVector& v, const RationalVector& w) const {
  if (v.size() != mu() || w.size() != mu()) fail("pairing: wrong vector length");
  return (v.transpose() * to_rational(r_) * w).value();
}

ThimbleState ThimbleState::change_basis(const IntMatrix& p, std::vector<std::string> labels) const {
  if (p.rows() != mu() || p.cols() != mu()) fail("basis change has wrong size");
  const auto inv = inverse_exact<Rational>(to_rational(p));
  if (!inv) fail("basis change is singular");
  ThimbleState s = *this;
  s.r_ = p.transpose() * r_ * p;
  s.frame_ = frame_ * p;
  s.labels_ = std::move(labels);
  if (coords_) {
    for (auto& v : *s.coords_) v = (*inv) * v;
  }
  return s;
}

bool operator==(const ThimbleState& a, const ThimbleState& b) {
  if (a.mu() != b.mu() || a.n_gamma() != b.n_gamma()) return false;
  if (a.r() != b.r() || a.frame() != b.frame() || a.labels() != b.labels()) return false;
  if (a.cycle_coords().has_value() != b.cycle_coords().has_value()) return false;
  if (!a.cycle_coords()) return true;
  const auto& x = *a.cycle_coords();
  const auto& y = *b.cycle_coords();
  if (x.size() != y.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] != y[k]) return false;
  return true;
}

ThimbleState a_chain_seed(Eigen::Index mu, int n_gamma) {
  if (mu < 1) fail("mu must be positive");
  IntMatrix r = IntMatrix::Zero(mu, mu);
  const bool sym = (n_gamma - 1) % 2 == 0;
  for (Eigen::Index i = 0; i + 1 < mu; ++i) {
    r(i + 1, i) = 1;
    r(i, i + 1) = sym ? 1 : -1;
  }
  if (sym) {
    const int n = n_gamma - 1;
    r.diagonal().setConstant(((n * (n - 1) / 2) % 2 == 0) ? 2 : -2);
  }
  return ThimbleState(n_gamma, r);
}

IntMatrix monodromy_matrix(const ThimbleState& s, Eigen::Index i) {
  check_index(s, i);
  IntMatrix p = IntMatrix::Identity(s.mu(), s.mu());
  for (Eigen::Index j = 0; j < s.mu(); ++j) p(i, j) += s.pl_coefficient(j, i);
  return p;
}

IntMatrix braid_matrix(const ThimbleState& s, Eigen::Index j) {
  check_adjacent(s, j);
  IntMatrix p = IntMatrix::Identity(s.mu(), s.mu());
  p(j, j) = s.pl_coefficient(j + 1, j);
  p(j + 1, j) = 1;
  p(j, j + 1) = 1;
  p(j + 1, j + 1) = 0;
  return p;
}

IntMatrix braid_inverse_matrix(const ThimbleState& s, Eigen::Index j) {
  check_adjacent(s, j);
  // h^{-1}(x) = x - c <x, D> D / (1 + c <D, D>), with 1 + c <D, D> = +-1
  const std::int64_t denom = 1 + s.pl_sign() * s.self_intersection();
  IntMatrix p = IntMatrix::Identity(s.mu(), s.mu());
  p(j, j) = 0;
  p(j + 1, j) = 1;
  p(j, j + 1) = 1;
  p(j + 1, j + 1) = -s.pl_coefficient(j, j + 1) / denom;
  return p;
}

IntMatrix orientation_matrix(const ThimbleState& s, Eigen::Index j) {
  check_index(s, j);
  IntMatrix p = IntMatrix::Identity(s.mu(), s.mu());
  p(j, j) = -1;
  return p;
}

IntMatrix gabrielov_matrix(const ThimbleState& s, Eigen::Index i, Eigen::Index j) {
  check_index(s, i);
  check_index(s, j);
  if (i == j) fail("Gabrielov move needs i != j");
  IntMatrix p = IntMatrix::Identity(s.mu(), s.mu());
  p(i, j) += s.pl_coefficient(j, i);
  return p;
}

IntMatrix wall_cross_matrix(const ThimbleState& s, Eigen::Index i, WallSide side, std::int64_t r) {
  check_adjacent(s, i);
  IntMatrix p = IntMatrix::Identity(s.mu(), s.mu());
  p(i, i) = 0;
  p(i + 1, i + 1) = 0;
  p(i + 1, i) = 1;
  p(i, i + 1) = 1;
  if (side == WallSide::Left)
    p(i, i) = r;
  else
    p(i + 1, i + 1) = r;
  return p;
}

ThimbleState monodromy_apply(const ThimbleState& s, Eigen::Index i) {
  return s.change_basis(monodromy_matrix(s, i), s.labels());
}

ThimbleState braid_move(const ThimbleState& s, Eigen::Index j) {
  const IntMatrix p = braid_matrix(s, j);
  return s.change_basis(p, swapped(s.labels(), j));
}

ThimbleState braid_move_inverse(const ThimbleState& s, Eigen::Index j) {
  const IntMatrix p = braid_inverse_matrix(s, j);
  return s.change_basis(p, swapped(s.labels(), j));
}

ThimbleState orientation_flip(const ThimbleState& s, Eigen::Index j) {
  return s.change_basis(orientation_matrix(s, j), s.labels());
}

ThimbleState gabrielov_move(const ThimbleState& s, Eigen::Index i, Eigen::Index j) {
  return s.change_basis(gabrielov_matrix(s, i, j), s.labels());
}

ThimbleState wall_cross(const ThimbleState& s, Eigen::Index i, WallSide side, std::int64_t r) {
  if (!s.cycle_coords()) fail("wall crossing needs cycle coordinates");
  const IntMatrix p = wall_cross_matrix(s, i, side, r);
  return s.change_basis(p, swapped(s.labels(), i));
}

// ---------------------------------------------------------------------------

Tensor::Tensor(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
  std::size_t n = 1;
  for (Eigen::Index d : dims_) {
    if (d < 1) fail("tensor dimensions must be positive");
    n *= static_cast<std::size_t>(d);
  }
  data_.assign(n, Rational(0));
}

Tensor Tensor::from_vector(const RationalVector& v) {
  Tensor t({v.size()});
  for (Eigen::Index i = 0; i < v.size(); ++i) t.data_[static_cast<std::size_t>(i)] = v(i);
  return t;
}

Tensor Tensor::from_matrix(const RationalMatrix& m) {
  Tensor t({m.rows(), m.cols()});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.at({i, j}) = m(i, j);
  return t;
}

std::size_t Tensor::offset(const std::vector<Eigen::Index>& index) const {
  if (index.size() != dims_.size()) fail("tensor index has wrong rank");
  std::size_t off = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (index[k] < 0 || index[k] >= dims_[k]) fail("tensor index out of range");
    off = off * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(index[k]);
  }
  return off;
}

Rational& Tensor::at(const std::vector<Eigen::Index>& index) { return data_[offset(index)]; }
const Rational& Tensor::at(const std::vector<Eigen::Index>& index) const { return data_[offset(index)]; }

RationalMatrix Tensor::matrix() const {
  if (dims_.size() != 2) fail("tensor is not rank 2");
  RationalMatrix m(dims_[0], dims_[1]);
  for (Eigen::Index i = 0; i < dims_[0]; ++i)
    for (Eigen::Index j = 0; j < dims_[1]; ++j) m(i, j) = at({i, j});
  return m;
}

bool operator==(const Tensor& a, const Tensor& b) { return a.dims() == b.dims() && a.data() == b.data(); }

Tensor outer(const Tensor& a, const Tensor& b) {
  std::vector<Eigen::Index> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Tensor t(dims);
  const std::size_t nb = b.data().size();
  for (std::size_t i = 0; i < a.data().size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) t.data()[i * nb + j] = a.data()[i] * b.data()[j];
  return t;
}

Tensor casimir(const ThimbleState& a, const ThimbleState& b, const RationalMatrix& eta) {
  if (eta.rows() != a.mu() || eta.cols() != b.mu()) fail("pairing matrix has wrong size");
  const auto inv = inverse_exact<Rational>(eta);
  if (!inv) fail("pairing matrix is singular");
  return Tensor::from_matrix(inv->transpose());
}

Tensor contract_pm(const Tensor& t, const RationalMatrix& eta, const Rational& scale) {
  if (t.rank() < 2) fail("contraction needs at least two slots");
  const auto& d = t.dims();
  const Eigen::Index na = d[d.size() - 2], nb = d[d.size() - 1];
  if (eta.rows() != na || eta.cols() != nb) fail("pairing matrix does not match the contracted slots");
  std::vector<Eigen::Index> rest(d.begin(), d.end() - 2);
  const std::size_t block = static_cast<std::size_t>(na * nb);
  std::size_t outer_size = 1;
  for (Eigen::Index x : rest) outer_size *= static_cast<std::size_t>(x);
  std::vector<Rational> out(outer_size, Rational(0));
  for (std::size_t o = 0; o < outer_size; ++o) {
    Rational sum(0);
    for (Eigen::Index a = 0; a < na; ++a)
      for (Eigen::Index b = 0; b < nb; ++b)
        sum += t.data()[o * block + static_cast<std::size_t>(a * nb + b)] * eta(a, b);
    out[o] = sum * scale;
  }
  if (rest.empty()) rest.push_back(1);
  Tensor r(rest);
  r.data() = std::move(out);
  return r;
}

}  // namespace lg
