#ifndef LG_GRAPH_HPP
#define LG_GRAPH_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lg/symmetry.hpp"

namespace lg {

struct Vertex {
  std::int64_t genus = 0;
  bool soliton = false;  // unstable 3-valent genus-0 vertex; excluded from dimension formulas
};

/// Edge a--b; gamma sits on the half-edge at a, gamma^-1 on the one at b.
struct Edge {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  std::optional<GroupElement> gamma;
};

struct Tail {
  Eigen::Index vertex = 0;
  GroupElement gamma;
};

/// Stable dual graph with group decorations, tied to one polynomial W.
class DecoratedGraph {
 public:
  DecoratedGraph(QHPoly w, std::vector<Vertex> vertices, std::vector<Edge> edges, std::vector<Tail> tails);
  DecoratedGraph(std::shared_ptr<const QHPoly> w, std::vector<Vertex> vertices, std::vector<Edge> edges,
                 std::vector<Tail> tails);

  const QHPoly& polynomial() const { return *w_; }
  const std::shared_ptr<const QHPoly>& polynomial_ptr() const { return w_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Tail>& tails() const { return tails_; }

  /// Tails plus edge ends at v (a loop counts twice).
  Eigen::Index valence(Eigen::Index v) const;
  /// Decorations on all half-edges at v: tails first, then edge ends.
  std::vector<GroupElement> decorations_at(Eigen::Index v) const;
  bool fully_decorated() const;
  bool has_soliton_vertices() const;

  /// Vertex sets of the connected components, each sorted.
  std::vector<std::vector<Eigen::Index>> components() const;
  /// sum g_v + first Betti number.
  std::int64_t total_genus() const;
  std::int64_t first_betti_number() const;

  /// Lexicographically least encoding over all vertex relabellings.
  std::string canonical_form() const;

 private:
  void validate() const;

  std::shared_ptr<const QHPoly> w_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Tail> tails_;
};

bool operator==(const DecoratedGraph& a, const DecoratedGraph& b);
bool isomorphic(const DecoratedGraph& a, const DecoratedGraph& b);

struct LineBundleDegrees {
  RationalVector degrees;
  bool admissible = false;
};

/// deg_i = q_i (2g - 2 + k) - sum_tau theta_i(gamma_tau).
LineBundleDegrees line_bundle_degrees(const QHPoly& w, std::int64_t genus, const std::vector<GroupElement>& tails);

/// 2 c-hat (1 - g) - 2 sum iota - sum N.  Throws unless integral.
std::int64_t witten_index(const QHPoly& w, std::int64_t genus, const std::vector<GroupElement>& tails);

struct DegreeReport {
  Rational d;               // c-hat (g - 1) + sum over tails of iota
  Rational degree;          // 6g - 6 + 2k - 2D - 2 #E
  Rational r;               // degree - sum over tails of N_gamma
  Rational two_d;
  bool two_d_integral = false;
  bool two_d_odd = false;
  bool zero_cycle = false;  // 2D not an integer
};

/// Summed over connected components.
DegreeReport virtual_degree(const DecoratedGraph& g);

/// line_bundle_degrees at every vertex, using its genus and all half-edges.
std::vector<LineBundleDegrees> vertex_degrees(const DecoratedGraph& g);
/// line_bundle_degrees of each component, using the component genus and its tails only.
std::vector<LineBundleDegrees> component_degrees(const DecoratedGraph& g);

/// Removes edge e and appends tails (a, gamma) and (b, gamma^-1).
DecoratedGraph cut_edge(const DecoratedGraph& g, Eigen::Index e);
/// Joins tails t_plus and t_minus (gamma_minus = gamma_plus^-1) into a new last edge.
DecoratedGraph glue(const DecoratedGraph& g, Eigen::Index t_plus, Eigen::Index t_minus);
/// Drops a tail decorated with the exponential grading element.
DecoratedGraph forget_tail(const DecoratedGraph& g, Eigen::Index t);

/// JSON interchange: vertices [{genus, soliton?}], edges [{ends: [a, b], gamma?}],
/// tails [{vertex, gamma}], gamma being an index into enumerate_group(W).
DecoratedGraph graph_from_json(const QHPoly& w, const std::string& text);
std::string graph_to_json(const DecoratedGraph& g);

}  // namespace lg

#endif  // LG_GRAPH_HPP
