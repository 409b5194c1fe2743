// lgcalc: command-line front end for the lgcore library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "lg/errors.hpp"
#include "lg/expr.hpp"
#include "lg/graph.hpp"
#include "lg/lefschetz.hpp"
#include "lg/selftest.hpp"
#include "lg/soliton.hpp"
#include "lg/symmetry.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
};

json num(double x) {
  if (!std::isfinite(x)) return lg::format_double(x);
  return std::stod(lg::format_double(x));
}

json cnum(lg::Complex z) { return lg::format_complex(z); }

json cvec(const lg::ComplexVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cnum(v(i)));
  return a;
}

json rvec(const lg::RationalVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(lg::to_string(v(i)));
  return a;
}

json imat(const lg::IntMatrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

json indices(const std::vector<Eigen::Index>& v, Eigen::Index shift = 0) {
  json a = json::array();
  for (auto i : v) a.push_back(i + shift);
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lg::DomainError("cli", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lg::ComplexVector parse_b(const lg::QHPoly& w, const std::string& text) {
  const auto b = lg::parse_complex_list(text);
  if (b.size() != w.n_vars())
    throw lg::DomainError("cli", "--b has " + std::to_string(b.size()) + " entries, polynomial has " +
                                     std::to_string(w.n_vars()) + " variables");
  return b;
}

lg::MorseOptions morse_options(const Globals& g) {
  lg::MorseOptions o;
  o.seed = g.seed;
  if (g.tol) o.residual_tol = *g.tol;
  return o;
}

// ---------------------------------------------------------------------------

json analyze(const std::string& text, const Globals& g) {
  const auto w = lg::parse_polynomial(text);
  const auto nd = lg::attest_nondegenerate(w, 200, 4.0, g.seed);
  json r;
  r["polynomial"] = lg::to_string(w);
  r["variables"] = w.names();
  r["weights"] = rvec(w.weights());
  r["milnor_number"] = lg::milnor_number(w);
  r["central_charge"] = lg::to_string(lg::central_charge(w));
  r["growth_exponents"] = rvec(lg::growth_exponents(w));
  r["group_order"] = lg::group_order(w);
  r["nondegenerate_attested"] = nd.attested;
  if (nd.witness) r["degenerate_witness"] = cvec(*nd.witness);
  return r;
}

json group(const std::string& text) {
  const auto w = lg::parse_polynomial(text);
  const auto elements = lg::enumerate_group(w);
  json r;
  r["order"] = elements.size();
  r["exponential_grading"] = rvec(lg::exponential_grading(w).theta);
  json list = json::array();
  for (std::size_t k = 0; k < elements.size(); ++k) {
    json e;
    e["index"] = k;
    e["theta"] = rvec(elements[k].theta);
    e["order"] = elements[k].order();
    list.push_back(e);
  }
  r["elements"] = list;
  return r;
}

json sectors(const std::string& text) {
  const auto w = lg::parse_polynomial(text);
  const auto elements = lg::enumerate_group(w);
  json r;
  r["central_charge"] = lg::to_string(lg::central_charge(w));
  json rows = json::array();
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto s = lg::sector_data(w, elements[k]);
    json row;
    row["index"] = k;
    row["theta"] = rvec(s.gamma.theta);
    row["fixed"] = indices(s.fixed_indices);
    row["n_gamma"] = s.n_gamma;
    row["iota"] = lg::to_string(s.iota);
    row["ramond"] = s.is_ramond;
    row["w_gamma"] = s.n_gamma == 0 ? std::string("0") : lg::to_string(lg::sector_polynomial(w, s));
    rows.push_back(row);
  }
  r["sectors"] = rows;
  return r;
}

json graph(const std::string& text, const std::string& path) {
  const auto w = lg::parse_polynomial(text);
  const auto gr = lg::graph_from_json(w, read_file(path));
  json r;
  r["vertices"] = gr.vertices().size();
  r["edges"] = gr.edges().size();
  r["tails"] = gr.tails().size();
  r["total_genus"] = gr.total_genus();
  r["components"] = gr.components().size();
  r["canonical_form"] = gr.canonical_form();
  bool admissible = gr.fully_decorated();
  if (admissible) {
    json vd = json::array();
    for (const auto& d : lg::vertex_degrees(gr)) {
      json e;
      e["degrees"] = rvec(d.degrees);
      e["admissible"] = d.admissible;
      admissible = admissible && d.admissible;
      vd.push_back(e);
    }
    r["vertex_degrees"] = vd;
  }
  r["admissible"] = admissible;
  if (!admissible) throw lg::DomainError("graphcalc", "inadmissible decorated graph");
  const auto d = lg::virtual_degree(gr);
  r["D"] = lg::to_string(d.d);
  r["degree"] = lg::to_string(d.degree);
  r["r"] = lg::to_string(d.r);
  r["zero_cycle"] = d.zero_cycle;
  return r;
}

json morse_json(const lg::MorseData& m) {
  json pts = json::array();
  for (Eigen::Index rank = 0; rank < m.size(); ++rank) {
    const auto k = static_cast<std::size_t>(m.ordering[static_cast<std::size_t>(rank)]);
    json p;
    p["rank"] = rank + 1;
    p["point"] = cvec(m.critical_points[k]);
    p["value"] = cnum(m.critical_values[k]);
    p["hessian_min_singular_value"] = num(m.hessian_min_singular_value[k]);
    pts.push_back(p);
  }
  return pts;
}

Eigen::Index rank_of(const lg::MorseData& m, Eigen::Index index) {
  for (Eigen::Index r = 0; r < m.size(); ++r)
    if (m.ordering[static_cast<std::size_t>(r)] == index) return r;
  return -1;
}

json perturb(const std::string& text, const std::string& btext, const Globals& g) {
  const auto w = lg::parse_polynomial(text);
  const auto b = parse_b(w, btext);
  const auto m = lg::find_critical_points(w, b, morse_options(g));
  const auto reg = lg::is_strongly_regular(m);
  json r;
  r["b"] = cvec(b);
  r["critical_points"] = morse_json(m);
  r["strongly_regular"] = reg.strongly_regular;
  if (reg.witness) {
    const auto p = rank_of(m, reg.witness->first) + 1, q = rank_of(m, reg.witness->second) + 1;
    r["witness_ranks"] = json::array({std::min(p, q), std::max(p, q)});
  }
  return r;
}

json walls(const std::string& text, const std::string& path_text, const Globals& g) {
  const auto w = lg::parse_polynomial(text);
  std::vector<lg::ComplexExpr> parts;
  for (const auto& p : lg::split_top_level(path_text)) parts.emplace_back(p);
  if (static_cast<Eigen::Index>(parts.size()) != w.n_vars())
    throw lg::DomainError("cli", "--path needs one expression per variable");
  const lg::PerturbationPath path = [&](double l) {
    lg::ComplexVector b(w.n_vars());
    for (std::size_t k = 0; k < parts.size(); ++k) b(static_cast<Eigen::Index>(k)) = parts[k](l);
    return b;
  };
  lg::ContinuationOptions o;
  o.morse = morse_options(g);
  if (g.tol) o.bisection_tol = *g.tol;
  const auto found = lg::detect_wall_crossings(w, path, o);
  const auto start = lg::find_critical_points(w, path(0.0), o.morse);
  json r;
  r["path"] = path_text;
  r["start"] = morse_json(start);
  json list = json::array();
  for (const auto& c : found) {
    json e;
    e["lambda"] = num(c.lambda);
    e["b"] = cvec(c.b);
    // labels at lambda = 0, reported as ranks in the starting ordering
    const auto& pi = c.points[static_cast<std::size_t>(c.i)];
    const auto& pj = c.points[static_cast<std::size_t>(c.j)];
    e["pair_start_ranks"] = json::array({rank_of(start, c.i) + 1, rank_of(start, c.j) + 1});
    e["points"] = json::array({cvec(pi), cvec(pj)});
    e["values"] = json::array({cnum(lg::perturbed_value(w, c.b, pi)), cnum(lg::perturbed_value(w, c.b, pj))});
    list.push_back(e);
  }
  r["walls"] = list;
  return r;
}

json solitons(const std::string& text, const std::string& btext, const std::vector<int>& pair, bool backward,
              int mesh, const std::string& trajectory_path, const Globals& g) {
  const auto w = lg::parse_polynomial(text);
  const auto b = parse_b(w, btext);
  const auto m = lg::find_critical_points(w, b, morse_options(g));
  for (int p : pair)
    if (p < 1 || p > m.size()) throw lg::DomainError("cli", "--pair ranks must lie in 1.." + std::to_string(m.size()));
  const auto i = m.ordering[static_cast<std::size_t>(pair[0] - 1)];
  const auto j = m.ordering[static_cast<std::size_t>(pair[1] - 1)];
  lg::SolitonOptions o;
  o.seed = g.seed;
  if (mesh > 0) o.mesh_per_dim = mesh;
  o.direction = backward ? lg::ShootDirection::Backward : lg::ShootDirection::Forward;
  if (g.tol) o.flow.abs_tol = o.flow.rel_tol = *g.tol;
  const auto c = lg::count_bps_solitons(w, m, i, j, o);

  json r;
  r["convention"] = {{"flow", "du/ds = 2 conj(grad F), F = W + b.x"},
                     {"energy", "per unit angle, A = 1: Re F(end) - Re F(start) = 2 int |grad F|^2 ds"},
                     {"pair", "ranks in the (Im, Re) ordering of critical values"}};
  r["b"] = cvec(b);
  r["from"] = {{"rank", pair[0]}, {"point", cvec(m.critical_points[static_cast<std::size_t>(i)])},
               {"value", cnum(m.critical_values[static_cast<std::size_t>(i)])}};
  r["to"] = {{"rank", pair[1]}, {"point", cvec(m.critical_points[static_cast<std::size_t>(j)])},
             {"value", cnum(m.critical_values[static_cast<std::size_t>(j)])}};
  r["direction"] = backward ? "backward" : "forward";
  r["count"] = c.count;
  r["shots"] = c.shots;
  r["captures"] = c.captures;
  json orbits = json::array();
  for (const auto& orbit : c.orbits) {
    json e;
    e["midpoint"] = cvec(orbit.midpoint);
    e["energy"] = num(orbit.trajectory.back().energy);
    e["energy_residual"] = num(orbit.energy_residual);
    e["max_im_drift"] = num(orbit.trajectory.max_im_drift);
    e["re_monotone"] = orbit.trajectory.re_monotone;
    e["samples"] = orbit.trajectory.samples.size();
    orbits.push_back(e);
  }
  r["orbits"] = orbits;

  if (!trajectory_path.empty()) {
    std::ofstream out(trajectory_path);
    if (!out) throw lg::DomainError("cli", "cannot write " + trajectory_path);
    out << "# du/ds = 2 conj(grad F); energy = int_0^s 2 |grad F|^2, per unit angle\n";
    out << "orbit,s";
    for (const auto& name : w.names()) out << ",re_" << name << ",im_" << name;
    out << ",re_F,im_F,energy\n";
    for (std::size_t k = 0; k < c.orbits.size(); ++k)
      for (const auto& sample : c.orbits[k].trajectory.samples) {
        const lg::Complex f = lg::perturbed_value(w, b, sample.u);
        out << k << ',' << lg::format_double(sample.s);
        for (Eigen::Index v = 0; v < sample.u.size(); ++v)
          out << ',' << lg::format_double(sample.u(v).real()) << ',' << lg::format_double(sample.u(v).imag());
        out << ',' << lg::format_double(f.real()) << ',' << lg::format_double(f.imag()) << ','
            << lg::format_double(sample.energy) << '\n';
      }
  }
  return r;
}

// ---------------------------------------------------------------------------

lg::ThimbleState state_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    const int n_gamma = j.at("n_gamma").get<int>();
    const auto rows = j.at("r");
    const auto mu = static_cast<Eigen::Index>(rows.size());
    lg::IntMatrix r(mu, mu);
    for (Eigen::Index a = 0; a < mu; ++a) {
      if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(a)].size()) != mu)
        throw lg::DomainError("cli", "state matrix r must be square");
      for (Eigen::Index b = 0; b < mu; ++b)
        r(a, b) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].get<std::int64_t>();
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    lg::ThimbleState s(n_gamma, r, labels);
    if (j.contains("coords")) {
      std::vector<lg::RationalVector> coords;
      for (const auto& row : j["coords"]) {
        if (static_cast<Eigen::Index>(row.size()) != mu) throw lg::DomainError("cli", "coordinate length mismatch");
        lg::RationalVector v(mu);
        for (Eigen::Index a = 0; a < mu; ++a) {
          const auto& x = row[static_cast<std::size_t>(a)];
          if (x.is_number_integer()) {
            v(a) = lg::Rational(x.get<std::int64_t>());
          } else {
            const auto str = x.get<std::string>();
            const auto slash = str.find('/');
            v(a) = slash == std::string::npos
                       ? lg::Rational(std::stoll(str))
                       : lg::Rational(std::stoll(str.substr(0, slash)), std::stoll(str.substr(slash + 1)));
          }
        }
        coords.push_back(v);
      }
      s = s.with_cycle_coords(coords);
    }
    return s;
  } catch (const json::exception& e) {
    throw lg::DomainError("cli", std::string("bad state file: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw lg::DomainError("cli", "bad rational in state file");
  }
}

// "L1:2", "R3:-1", "br2", "bri2", "or1", "mono3", "gab1:2"; indices are 1-based
lg::ThimbleState apply_op(const lg::ThimbleState& s, const std::string& op) {
  auto bad = [&]() -> lg::DomainError { return lg::DomainError("cli", "bad move \"" + op + "\""); };
  std::size_t p = 0;
  while (p < op.size() && std::isalpha(static_cast<unsigned char>(op[p]))) ++p;
  const std::string name = op.substr(0, p);
  std::vector<std::int64_t> args;
  std::stringstream rest(op.substr(p));
  std::string part;
  while (std::getline(rest, part, ':')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stoll(part, &used));
      if (used != part.size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  auto index = [&](std::size_t k) { return static_cast<Eigen::Index>(args.at(k) - 1); };
  if ((name == "L" || name == "R") && args.size() == 2)
    return lg::wall_cross(s, index(0), name == "L" ? lg::WallSide::Left : lg::WallSide::Right, args[1]);
  if (name == "br" && args.size() == 1) return lg::braid_move(s, index(0));
  if (name == "bri" && args.size() == 1) return lg::braid_move_inverse(s, index(0));
  if (name == "or" && args.size() == 1) return lg::orientation_flip(s, index(0));
  if (name == "mono" && args.size() == 1) return lg::monodromy_apply(s, index(0));
  if (name == "gab" && args.size() == 2) return lg::gabrielov_move(s, index(0), index(1));
  throw bad();
}

json wallcross(int mu, int n_gamma, const std::string& ops, const std::string& state_path) {
  lg::ThimbleState s = state_path.empty() ? lg::a_chain_seed(mu, n_gamma) : state_from_json(read_file(state_path));
  if (!s.cycle_coords()) {
    // track the starting basis itself
    std::vector<lg::RationalVector> unit;
    for (Eigen::Index k = 0; k < s.mu(); ++k) unit.push_back(lg::RationalVector::Unit(s.mu(), k));
    s = s.with_cycle_coords(unit);
  }
  json applied = json::array();
  if (!ops.empty()) {
    std::stringstream ss(ops);
    std::string op;
    while (std::getline(ss, op, ',')) {
      op.erase(0, op.find_first_not_of(' '));
      op.erase(op.find_last_not_of(' ') + 1);
      s = apply_op(s, op);
      applied.push_back(op);
    }
  }
  json r;
  r["n_gamma"] = s.n_gamma();
  r["symmetric"] = s.symmetric();
  r["pl_sign"] = s.pl_sign();
  r["moves"] = applied;
  r["labels"] = s.labels();
  r["r"] = imat(s.r());
  r["frame"] = imat(s.frame());
  if (s.cycle_coords()) {
    json c = json::array();
    for (const auto& v : *s.cycle_coords()) c.push_back(rvec(v));
    r["coords"] = c;
  }
  return r;
}

void emit(const std::string& text, const Globals& g) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw lg::DomainError("cli", "cannot write " + g.out);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landau-Ginzburg calculator: polynomials, sectors, graphs, solitons, Lefschetz moves"};
  app.require_subcommand(1);
  Globals g;
  double tol = 0.0;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the report here instead of stdout");

  std::string poly, b_text, path_text, graph_path, trajectory_path, ops, state_path;
  std::vector<int> pair;
  bool backward = false;
  int mesh = 0, mu = 3, n_gamma = 1;

  auto* a = app.add_subcommand("analyze", "weights, Milnor number, central charge, growth exponents");
  auto* gr = app.add_subcommand("group", "diagonal symmetry group");
  auto* se = app.add_subcommand("sectors", "sector table");
  for (auto* s : {a, gr, se}) s->add_option("polynomial", poly)->required();

  auto* gc = app.add_subcommand("graph", "degrees and virtual degree of a decorated graph");
  gc->add_option("polynomial", poly)->required();
  gc->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);

  auto* pe = app.add_subcommand("perturb", "critical data of W + b.x");
  pe->add_option("polynomial", poly)->required();
  pe->add_option("--b", b_text, "comma list of complex numbers")->required();

  auto* wa = app.add_subcommand("walls", "wall crossings along b(lambda), lambda in [0, 1]");
  wa->add_option("polynomial", poly)->required();
  wa->add_option("--path", path_text, "one expression in lambda per variable, comma separated")->required();

  auto* so = app.add_subcommand("solitons", "count BPS solitons between two critical points");
  so->add_option("polynomial", poly)->required();
  so->add_option("--b", b_text)->required();
  so->add_option("--pair", pair, "ranks i j in the (Im, Re) ordering, 1-based")->required()->expected(2);
  so->add_flag("--backward", backward, "shoot from the stable cone of the target");
  so->add_option("--mesh", mesh, "shots per dimension")->check(CLI::PositiveNumber);
  so->add_option("--trajectory", trajectory_path, "CSV export of the orbits");

  auto* wc = app.add_subcommand("wallcross", "apply Lefschetz moves to a thimble basis");
  wc->add_option("--mu", mu, "size of the A_mu seed")->check(CLI::Range(1, 64))->capture_default_str();
  wc->add_option("--n-gamma", n_gamma, "fixed-locus dimension")->check(CLI::Range(1, 64))->capture_default_str();
  wc->add_option("--ops", ops, "e.g. \"L1:1,R1:-1,br2,bri2,or1,mono1,gab1:2\"");
  wc->add_option("--state", state_path, "JSON {n_gamma, r, labels?, coords?}")->check(CLI::ExistingFile);

  auto* st = app.add_subcommand("selftest", "run the built-in checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (*tol_opt) g.tol = tol;

  try {
    if (st->parsed()) {
      std::ostringstream report;
      int failed = 0;
      for (const auto& c : lg::run_selftest(g.seed)) {
        report << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failed += !c.pass;
      }
      report << (failed == 0 ? "all checks passed\n" : std::to_string(failed) + " checks FAILED\n");
      emit(report.str(), g);
      if (failed) std::cerr << "selftest: " << failed << " checks failed\n";
      return failed == 0 ? 0 : 1;
    }
    json r;
    if (a->parsed()) r = analyze(poly, g);
    else if (gr->parsed()) r = group(poly);
    else if (se->parsed()) r = sectors(poly);
    else if (gc->parsed()) r = graph(poly, graph_path);
    else if (pe->parsed()) r = perturb(poly, b_text, g);
    else if (wa->parsed()) r = walls(poly, path_text, g);
    else if (so->parsed()) r = solitons(poly, b_text, pair, backward, mesh, trajectory_path, g);
    else if (wc->parsed()) r = wallcross(mu, n_gamma, ops, state_path);
    json doc;
    doc["command"] = app.get_subcommands().front()->get_name();
    if (!poly.empty()) doc["polynomial"] = poly;
    doc["seed"] = g.seed;
    doc["result"] = r;
    emit(doc.dump(2) + "\n", g);
    return 0;
  } catch (const lg::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
