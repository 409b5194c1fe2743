#include "lg/graph.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

#include "lg/errors.hpp"

namespace lg {

namespace {

constexpr const char* kModule = "graphcalc";

[[noreturn]] void fail(const std::string& what) { throw DomainError(kModule, what); }

std::string encode(const GroupElement& g) {
  std::string s;
  for (const auto& t : to_strings(g.theta)) s += (s.empty() ? "" : ",") + t;
  return s;
}

std::string encode(const std::optional<GroupElement>& g) { return g ? encode(*g) : "-"; }

// Union-find over vertices, joined along edges.
std::vector<Eigen::Index> component_labels(Eigen::Index n, const std::vector<Edge>& edges) {
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index v) {
    while (parent[static_cast<std::size_t>(v)] != v)
      v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    return v;
  };
  for (const auto& e : edges) parent[static_cast<std::size_t>(find(e.a))] = find(e.b);
  std::vector<Eigen::Index> label(static_cast<std::size_t>(n));
  for (Eigen::Index v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = find(v);
  return label;
}

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

bool same_polynomial(const QHPoly& a, const QHPoly& b) {
  return a.exponents().rows() == b.exponents().rows() && a.exponents().cols() == b.exponents().cols() &&
         a.exponents() == b.exponents() && a.coefficients() == b.coefficients();
}

}  // namespace

DecoratedGraph::DecoratedGraph(QHPoly w, std::vector<Vertex> vertices, std::vector<Edge> edges,
                               std::vector<Tail> tails)
    : DecoratedGraph(std::make_shared<const QHPoly>(std::move(w)), std::move(vertices), std::move(edges),
                     std::move(tails)) {}

DecoratedGraph::DecoratedGraph(std::shared_ptr<const QHPoly> w, std::vector<Vertex> vertices,
                               std::vector<Edge> edges, std::vector<Tail> tails)
    : w_(std::move(w)), vertices_(std::move(vertices)), edges_(std::move(edges)), tails_(std::move(tails)) {
  validate();
}

void DecoratedGraph::validate() const {
  const auto n = static_cast<Eigen::Index>(vertices_.size());
  if (n == 0) fail("graph has no vertices");
  for (const auto& v : vertices_)
    if (v.genus < 0) fail("negative vertex genus");
  for (const auto& e : edges_) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n) fail("edge endpoint out of range");
    if (e.gamma && !in_group(*w_, *e.gamma)) fail("edge decoration is not in G_W");
  }
  for (const auto& t : tails_) {
    if (t.vertex < 0 || t.vertex >= n) fail("tail vertex out of range");
    if (!in_group(*w_, t.gamma)) fail("tail decoration is not in G_W");
  }
  for (Eigen::Index v = 0; v < n; ++v) {
    const Vertex& x = vertices_[idx(v)];
    if (x.soliton) {
      if (x.genus != 0) fail("soliton vertex must have genus 0");
      continue;
    }
    if (valence(v) + 2 * x.genus < 3)
      fail("vertex " + std::to_string(v) + " is unstable: k + 2g = " + std::to_string(valence(v) + 2 * x.genus) +
           " < 3");
  }
}

Eigen::Index DecoratedGraph::valence(Eigen::Index v) const {
  Eigen::Index k = 0;
  for (const auto& t : tails_) k += t.vertex == v;
  for (const auto& e : edges_) k += (e.a == v) + (e.b == v);
  return k;
}

std::vector<GroupElement> DecoratedGraph::decorations_at(Eigen::Index v) const {
  std::vector<GroupElement> out;
  for (const auto& t : tails_)
    if (t.vertex == v) out.push_back(t.gamma);
  for (const auto& e : edges_) {
    if (!e.gamma) fail("edge at vertex " + std::to_string(v) + " is undecorated");
    if (e.a == v) out.push_back(*e.gamma);
    if (e.b == v) out.push_back(e.gamma->inverse());
  }
  return out;
}

bool DecoratedGraph::fully_decorated() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.gamma.has_value(); });
}

bool DecoratedGraph::has_soliton_vertices() const {
  return std::any_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.soliton; });
}

std::vector<std::vector<Eigen::Index>> DecoratedGraph::components() const {
  const auto n = static_cast<Eigen::Index>(vertices_.size());
  const auto label = component_labels(n, edges_);
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> slot(idx(n), -1);
  for (Eigen::Index v = 0; v < n; ++v) {
    auto& s = slot[idx(label[idx(v)])];
    if (s < 0) {
      s = static_cast<Eigen::Index>(out.size());
      out.emplace_back();
    }
    out[idx(s)].push_back(v);
  }
  return out;
}

std::int64_t DecoratedGraph::first_betti_number() const {
  return static_cast<std::int64_t>(edges_.size()) - static_cast<std::int64_t>(vertices_.size()) +
         static_cast<std::int64_t>(components().size());
}

std::int64_t DecoratedGraph::total_genus() const {
  std::int64_t g = first_betti_number();
  for (const auto& v : vertices_) g += v.genus;
  return g;
}

std::string DecoratedGraph::canonical_form() const {
  const auto n = static_cast<Eigen::Index>(vertices_.size());
  if (n > 8) fail("canonical labelling is limited to 8 vertices");
  std::vector<Eigen::Index> perm(idx(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::vector<std::string> vs(idx(n));
    for (Eigen::Index v = 0; v < n; ++v)
      vs[idx(perm[idx(v)])] = std::to_string(vertices_[idx(v)].genus) + (vertices_[idx(v)].soliton ? "s" : "");
    std::vector<std::string> es;
    for (const auto& e : edges_) {
      Eigen::Index a = perm[idx(e.a)], b = perm[idx(e.b)];
      std::optional<GroupElement> g = e.gamma;
      if (a > b) {
        std::swap(a, b);
        if (g) g = g->inverse();
      } else if (a == b && g && encode(g->inverse()) < encode(*g)) {
        g = g->inverse();
      }
      es.push_back(std::to_string(a) + "-" + std::to_string(b) + ":" + encode(g));
    }
    std::sort(es.begin(), es.end());
    std::vector<std::string> ts;
    for (const auto& t : tails_) ts.push_back(std::to_string(perm[idx(t.vertex)]) + ":" + encode(t.gamma));
    std::sort(ts.begin(), ts.end());
    std::string s = "V";
    for (const auto& x : vs) s += "|" + x;
    s += "E";
    for (const auto& x : es) s += "|" + x;
    s += "T";
    for (const auto& x : ts) s += "|" + x;
    if (best.empty() || s < best) best = std::move(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool operator==(const DecoratedGraph& a, const DecoratedGraph& b) {
  if (a.vertices().size() != b.vertices().size() || a.edges().size() != b.edges().size() ||
      a.tails().size() != b.tails().size())
    return false;
  for (std::size_t v = 0; v < a.vertices().size(); ++v)
    if (a.vertices()[v].genus != b.vertices()[v].genus || a.vertices()[v].soliton != b.vertices()[v].soliton)
      return false;
  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    const auto& x = a.edges()[e];
    const auto& y = b.edges()[e];
    if (x.a != y.a || x.b != y.b || encode(x.gamma) != encode(y.gamma)) return false;
  }
  for (std::size_t t = 0; t < a.tails().size(); ++t)
    if (a.tails()[t].vertex != b.tails()[t].vertex || a.tails()[t].gamma != b.tails()[t].gamma) return false;
  return same_polynomial(a.polynomial(), b.polynomial());
}

bool isomorphic(const DecoratedGraph& a, const DecoratedGraph& b) {
  return same_polynomial(a.polynomial(), b.polynomial()) && a.canonical_form() == b.canonical_form();
}

LineBundleDegrees line_bundle_degrees(const QHPoly& w, std::int64_t genus, const std::vector<GroupElement>& tails) {
  const auto k = static_cast<std::int64_t>(tails.size());
  if (genus < 0) fail("negative genus");
  if (2 * genus - 2 + k < 0) fail("2g - 2 + k < 0");
  LineBundleDegrees out;
  out.degrees = w.weights() * Rational(2 * genus - 2 + k);
  for (const auto& g : tails) {
    if (!in_group(w, g)) fail("tail decoration is not in G_W");
    out.degrees -= g.theta;
  }
  out.admissible = true;
  for (Eigen::Index i = 0; i < out.degrees.size(); ++i) out.admissible = out.admissible && is_integer(out.degrees(i));
  return out;
}

std::int64_t witten_index(const QHPoly& w, std::int64_t genus, const std::vector<GroupElement>& tails) {
  Rational index = Rational(2) * central_charge(w) * Rational(1 - genus);
  for (const auto& g : tails) {
    const Sector s = sector_data(w, g);
    index -= Rational(2) * s.iota + Rational(s.n_gamma);
  }
  if (!is_integer(index)) fail("Witten index " + to_string(index) + " is not an integer: inadmissible type");
  return index.numerator();
}

DegreeReport virtual_degree(const DecoratedGraph& g) {
  if (g.has_soliton_vertices()) fail("soliton vertices do not enter dimension formulas");
  const QHPoly& w = g.polynomial();
  const Rational chat = central_charge(w);
  DegreeReport out;
  Rational sum_n(0);
  const auto comps = g.components();
  std::vector<Eigen::Index> comp_of(g.vertices().size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (Eigen::Index v : comps[c]) comp_of[idx(v)] = static_cast<Eigen::Index>(c);
  std::vector<std::int64_t> genus(comps.size(), 1), k(comps.size(), 0), edges(comps.size(), 0);
  std::vector<Rational> iota(comps.size(), Rational(0));
  for (std::size_t c = 0; c < comps.size(); ++c)
    genus[c] -= static_cast<std::int64_t>(comps[c].size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) genus[idx(comp_of[v])] += g.vertices()[v].genus;
  for (const auto& e : g.edges()) {
    ++genus[idx(comp_of[idx(e.a)])];
    ++edges[idx(comp_of[idx(e.a)])];
  }
  for (const auto& t : g.tails()) {
    const Sector s = sector_data(w, t.gamma);
    const auto c = idx(comp_of[idx(t.vertex)]);
    ++k[c];
    iota[c] += s.iota;
    sum_n += Rational(s.n_gamma);
  }
  out.d = Rational(0);
  out.degree = Rational(0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const Rational d = chat * Rational(genus[c] - 1) + iota[c];
    out.d += d;
    out.degree += Rational(6 * genus[c] - 6 + 2 * k[c] - 2 * edges[c]) - Rational(2) * d;
  }
  out.r = out.degree - sum_n;
  out.two_d = Rational(2) * out.d;
  out.two_d_integral = is_integer(out.two_d);
  out.two_d_odd = out.two_d_integral && (out.two_d.numerator() % 2 != 0);
  out.zero_cycle = !out.two_d_integral;
  return out;
}

std::vector<LineBundleDegrees> vertex_degrees(const DecoratedGraph& g) {
  std::vector<LineBundleDegrees> out;
  for (std::size_t v = 0; v < g.vertices().size(); ++v)
    out.push_back(line_bundle_degrees(g.polynomial(), g.vertices()[v].genus,
                                      g.decorations_at(static_cast<Eigen::Index>(v))));
  return out;
}

std::vector<LineBundleDegrees> component_degrees(const DecoratedGraph& g) {
  std::vector<LineBundleDegrees> out;
  const auto comps = g.components();
  for (const auto& comp : comps) {
    std::int64_t genus = 1 - static_cast<std::int64_t>(comp.size());
    std::vector<GroupElement> tails;
    for (Eigen::Index v : comp) genus += g.vertices()[idx(v)].genus;
    for (const auto& e : g.edges())
      if (std::binary_search(comp.begin(), comp.end(), e.a)) ++genus;
    for (const auto& t : g.tails())
      if (std::binary_search(comp.begin(), comp.end(), t.vertex)) tails.push_back(t.gamma);
    out.push_back(line_bundle_degrees(g.polynomial(), genus, tails));
  }
  return out;
}

DecoratedGraph cut_edge(const DecoratedGraph& g, Eigen::Index e) {
  if (e < 0 || e >= static_cast<Eigen::Index>(g.edges().size())) fail("edge index out of range");
  const Edge& edge = g.edges()[idx(e)];
  if (!edge.gamma) fail("cannot cut an undecorated edge");
  auto edges = g.edges();
  auto tails = g.tails();
  edges.erase(edges.begin() + e);
  tails.push_back({edge.a, *edge.gamma});
  tails.push_back({edge.b, edge.gamma->inverse()});
  return DecoratedGraph(g.polynomial_ptr(), g.vertices(), std::move(edges), std::move(tails));
}

DecoratedGraph glue(const DecoratedGraph& g, Eigen::Index t_plus, Eigen::Index t_minus) {
  const auto n = static_cast<Eigen::Index>(g.tails().size());
  if (t_plus < 0 || t_plus >= n || t_minus < 0 || t_minus >= n || t_plus == t_minus)
    fail("tail indices out of range");
  const Tail& plus = g.tails()[idx(t_plus)];
  const Tail& minus = g.tails()[idx(t_minus)];
  if (minus.gamma != plus.gamma.inverse()) fail("glued tails must carry gamma and gamma^-1");
  auto edges = g.edges();
  edges.push_back({plus.vertex, minus.vertex, plus.gamma});
  std::vector<Tail> tails;
  for (Eigen::Index t = 0; t < n; ++t)
    if (t != t_plus && t != t_minus) tails.push_back(g.tails()[idx(t)]);
  return DecoratedGraph(g.polynomial_ptr(), g.vertices(), std::move(edges), std::move(tails));
}

DecoratedGraph forget_tail(const DecoratedGraph& g, Eigen::Index t) {
  if (t < 0 || t >= static_cast<Eigen::Index>(g.tails().size())) fail("tail index out of range");
  if (g.tails()[idx(t)].gamma != exponential_grading(g.polynomial()))
    fail("only a tail decorated with the exponential grading element can be forgotten");
  auto tails = g.tails();
  tails.erase(tails.begin() + t);
  return DecoratedGraph(g.polynomial_ptr(), g.vertices(), g.edges(), std::move(tails));
}

DecoratedGraph graph_from_json(const QHPoly& w, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("graph file: ") + e.what());
  }
  const auto group = enumerate_group(w);
  auto element = [&](const nlohmann::json& j) {
    if (!j.is_number_integer()) fail("graph file: gamma must be an integer index");
    const auto i = j.get<std::int64_t>();
    if (i < 0 || i >= static_cast<std::int64_t>(group.size())) fail("graph file: gamma index out of range");
    return group[static_cast<std::size_t>(i)];
  };
  try {
    std::vector<Vertex> vertices;
    for (const auto& v : doc.at("vertices"))
      vertices.push_back({v.at("genus").get<std::int64_t>(), v.value("soliton", false)});
    std::vector<Edge> edges;
    for (const auto& e : doc.value("edges", nlohmann::json::array())) {
      const auto& ends = e.at("ends");
      if (!ends.is_array() || ends.size() != 2) fail("graph file: edge needs two ends");
      Edge edge{ends[0].get<Eigen::Index>(), ends[1].get<Eigen::Index>(), std::nullopt};
      if (e.contains("gamma")) edge.gamma = element(e["gamma"]);
      edges.push_back(edge);
    }
    std::vector<Tail> tails;
    for (const auto& t : doc.value("tails", nlohmann::json::array()))
      tails.push_back({t.at("vertex").get<Eigen::Index>(), element(t.at("gamma"))});
    return DecoratedGraph(w, std::move(vertices), std::move(edges), std::move(tails));
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("graph file: ") + e.what());
  }
}

std::string graph_to_json(const DecoratedGraph& g) {
  const auto group = enumerate_group(g.polynomial());
  auto index_of = [&](const GroupElement& x) {
    return std::distance(group.begin(), std::lower_bound(group.begin(), group.end(), x));
  };
  nlohmann::ordered_json doc;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices()) {
    nlohmann::ordered_json j;
    j["genus"] = v.genus;
    if (v.soliton) j["soliton"] = true;
    doc["vertices"].push_back(j);
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    nlohmann::ordered_json j;
    j["ends"] = {e.a, e.b};
    if (e.gamma) j["gamma"] = index_of(*e.gamma);
    doc["edges"].push_back(j);
  }
  doc["tails"] = nlohmann::ordered_json::array();
  for (const auto& t : g.tails()) {
    nlohmann::ordered_json j;
    j["vertex"] = t.vertex;
    j["gamma"] = index_of(t.gamma);
    doc["tails"].push_back(j);
  }
  return doc.dump(2);
}

}  // namespace lg
