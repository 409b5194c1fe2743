#ifndef LG_LEFSCHETZ_HPP
#define LG_LEFSCHETZ_HPP

#include <optional>
#include <string>
#include <vector>

#include "lg/exact.hpp"
#include "lg/rational.hpp"

namespace lg {

/// Ordered thimble basis with its intersection form, plus tracked cycle
/// vectors in coordinates over that basis.
///
/// R(i, j) = Delta_i o Delta_j.  The form is symmetric when N_gamma - 1 is
/// even, antisymmetric otherwise, with self-intersection
/// 2 (-1)^{(N-1)(N-2)/2} resp. 0 on the diagonal.  The Picard-Lefschetz
/// coefficient used by every move is pl_sign * R(j, i),
/// pl_sign = (-1)^{N(N+1)/2}.
class ThimbleState {
 public:
  ThimbleState(int n_gamma, IntMatrix r, std::vector<std::string> labels = {});

  Eigen::Index mu() const { return r_.rows(); }
  int n_gamma() const { return n_gamma_; }
  bool symmetric() const { return (n_gamma_ - 1) % 2 == 0; }
  int pl_sign() const { return pl_sign_; }
  std::int64_t self_intersection() const;
  const IntMatrix& r() const { return r_; }
  /// pl_sign * R(j, i)
  std::int64_t pl_coefficient(Eigen::Index j, Eigen::Index i) const;
  const std::vector<std::string>& labels() const { return labels_; }
  /// Columns: current basis in terms of the basis the state was built with.
  const IntMatrix& frame() const { return frame_; }

  const std::optional<std::vector<RationalVector>>& cycle_coords() const { return coords_; }
  ThimbleState with_cycle_coords(std::vector<RationalVector> coords) const;

  /// v o w for coordinate vectors in the current basis.
  Rational pairing(const RationalVector& v, const RationalVector& w) const;

  /// Change of basis: new basis vectors are the columns of p (old coordinates).
  ThimbleState change_basis(const IntMatrix& p, std::vector<std::string> labels) const;

  /// Diagonal and (anti)symmetry conditions of a thimble form.
  bool valid_form() const;

 private:
  int n_gamma_;
  int pl_sign_;
  IntMatrix r_;
  IntMatrix frame_;
  std::vector<std::string> labels_;
  std::optional<std::vector<RationalVector>> coords_;
};

bool operator==(const ThimbleState& a, const ThimbleState& b);

/// Tridiagonal A_mu chain: adjacent intersection +1 (below the diagonal for
/// the antisymmetric parity, -1 above it).
ThimbleState a_chain_seed(Eigen::Index mu, int n_gamma);

IntMatrix monodromy_matrix(const ThimbleState& s, Eigen::Index i);
IntMatrix braid_matrix(const ThimbleState& s, Eigen::Index j);
IntMatrix braid_inverse_matrix(const ThimbleState& s, Eigen::Index j);
IntMatrix orientation_matrix(const ThimbleState& s, Eigen::Index j);
IntMatrix gabrielov_matrix(const ThimbleState& s, Eigen::Index i, Eigen::Index j);

enum class WallSide { Left, Right };
IntMatrix wall_cross_matrix(const ThimbleState& s, Eigen::Index i, WallSide side, std::int64_t r);

/// delta_j -> delta_j + R_{j,i} delta_i for every j.
ThimbleState monodromy_apply(const ThimbleState& s, Eigen::Index i);
/// (.., delta_j, delta_{j+1}, ..) -> (.., h_j(delta_{j+1}), delta_j, ..)
ThimbleState braid_move(const ThimbleState& s, Eigen::Index j);
ThimbleState braid_move_inverse(const ThimbleState& s, Eigen::Index j);
ThimbleState orientation_flip(const ThimbleState& s, Eigen::Index j);
/// Slot j only: delta_j -> h_i(delta_j).
ThimbleState gabrielov_move(const ThimbleState& s, Eigen::Index i, Eigen::Index j);
/// Left:  p_i = m_{i+1} + r m_i,  p_{i+1} = m_i
/// Right: p_i = m_{i+1},          p_{i+1} = m_i + r m_{i+1}
/// (plus-side classes in minus-side ones).  Left(r) then Right(-r) is the identity.
ThimbleState wall_cross(const ThimbleState& s, Eigen::Index i, WallSide side, std::int64_t r);

/// Dense rational tensor, row-major.
class Tensor {
 public:
  explicit Tensor(std::vector<Eigen::Index> dims);
  static Tensor from_vector(const RationalVector& v);
  static Tensor from_matrix(const RationalMatrix& m);

  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index rank() const { return static_cast<Eigen::Index>(dims_.size()); }
  Rational& at(const std::vector<Eigen::Index>& index);
  const Rational& at(const std::vector<Eigen::Index>& index) const;
  const std::vector<Rational>& data() const { return data_; }
  std::vector<Rational>& data() { return data_; }
  /// Rank-2 view; throws unless rank() == 2.
  RationalMatrix matrix() const;

 private:
  std::size_t offset(const std::vector<Eigen::Index>& index) const;
  std::vector<Eigen::Index> dims_;
  std::vector<Rational> data_;
};

bool operator==(const Tensor& a, const Tensor& b);
Tensor outer(const Tensor& a, const Tensor& b);

/// C(i, j) = coefficient of S_i (x) T_j in sum eta^{ij} S_i (x) T_j, where
/// eta(i, j) = <S_i, T_j>; equals the transpose of eta^-1, so that it is
/// invariant under basis changes of either side.
Tensor casimir(const ThimbleState& a, const ThimbleState& b, const RationalMatrix& eta);

/// Pairs the last two slots: sum_{a,b} T[.., a, b] eta(a, b), times scale.
Tensor contract_pm(const Tensor& t, const RationalMatrix& eta, const Rational& scale = Rational(1));

}  // namespace lg

#endif  // LG_LEFSCHETZ_HPP
