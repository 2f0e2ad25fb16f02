// qflag: command-line driver for the verification campaigns.
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 bad configuration,
// 3 internal inconsistency. Indices on the command line (S, words, basis
// vectors) are 1-based.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qflag/errors.hpp"
#include "qflag/flagalg.hpp"
#include "qflag/funalg.hpp"
#include "qflag/repengine.hpp"
#include "qflag/rootsys.hpp"
#include "qflag/uqmod.hpp"

using json = nlohmann::ordered_json;
using namespace qflag;

namespace {

struct Config {
  std::string type = "A";
  int rank = 1;
  std::string q = "1/2";
  std::string S;
  std::string Lambda;
  int degree = 2;
  int N = 16;
  int margin = -1;
  std::string w;
  std::string w2;
  std::string t;
  std::string format = "json";
  std::uint64_t seed = 1;
  int samples = 8;
  int count = 10;
  int u = 2, v = 1;
};

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  if (text.empty() || text == "-") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("malformed ") + what + ": '" + text + "'");
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("malformed ") + what + ": '" + text + "'");
    }
  }
  return out;
}

std::vector<int> zero_based(const std::vector<int>& one_based, int bound, const char* what) {
  std::vector<int> out;
  for (int i : one_based) {
    if (i < 1 || i > bound) throw ConfigError(std::string(what) + " index " + std::to_string(i) + " out of range");
    out.push_back(i - 1);
  }
  return out;
}

std::vector<int> one_based(const std::vector<int>& word) {
  std::vector<int> out;
  for (int i : word) out.push_back(i + 1);
  return out;
}

json weight_json(const rootsys::Weight& w) { return json(std::vector<int>(w.begin(), w.end())); }

struct Context {
  rootsys::RootSystem R;
  Rational q;
  Context(const Config& c) : R(make_roots(c)), q(uqmod::check_q(parse_rational(c.q))) {}
  static rootsys::RootSystem make_roots(const Config& c) {
    if (c.type.size() != 1) throw ConfigError("type must be one letter");
    return rootsys::build_root_system(c.type[0], c.rank);
  }
  rootsys::Subset subset(const Config& c) const {
    return rootsys::normalize_subset(R, zero_based(parse_ints(c.S, "S"), R.rank, "S"));
  }
  rootsys::Weight lambda(const Config& c) const {
    const auto L = parse_ints(c.Lambda, "Lambda");
    if (static_cast<int>(L.size()) != R.rank) throw ConfigError("Lambda needs " + std::to_string(R.rank) + " coordinates");
    return rootsys::Weight(L.begin(), L.end());
  }
  std::vector<int> word(const std::string& text) const { return zero_based(parse_ints(text, "word"), R.rank, "word"); }
};

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// Tabular view: the first array of objects found at top level (columns are the
// union of row keys), else key,value pairs.
std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

void emit_csv(const json& report) {
  for (const auto& [key, value] : report.items()) {
    if (!value.is_array() || value.empty() || !value[0].is_object()) continue;
    std::vector<std::string> cols;
    for (const auto& row : value)
      for (const auto& [k, x] : row.items())
        if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i) std::cout << (i ? "," : "") << cols[i];
    std::cout << "\n";
    for (const auto& row : value) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        std::cout << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
      std::cout << "\n";
    }
    return;
  }
  std::cout << "key,value\n";
  for (const auto& [key, value] : report.items()) std::cout << key << "," << csv_cell(value) << "\n";
}

int emit(const Config& c, const json& report, bool pass) {
  if (c.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else if (c.format == "csv") {
    emit_csv(report);
  } else {
    throw ConfigError("format '" + c.format + "' is not available for this report");
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// rootsys

int cmd_roots(const Config& c) {
  Context ctx(c);
  json j;
  j["type"] = ctx.R.label();
  j["cartan"] = ctx.R.cartan;
  j["d"] = ctx.R.d;
  json roots = json::array();
  for (std::size_t k = 0; k < ctx.R.positive_roots.size(); ++k)
    roots.push_back({{"fundamental", weight_json(ctx.R.positive_roots[k])},
                     {"simple", weight_json(ctx.R.positive_roots_simple[k])}});
  j["positive_roots"] = roots;
  return emit(c, j, true);
}

json element_json(const rootsys::WeylGroup& W, std::size_t k) {
  return {{"word", one_based(W[k].word)}, {"length", W[k].length()}, {"action", W[k].action}};
}

int cmd_weyl(const Config& c) {
  Context ctx(c);
  const rootsys::WeylGroup W(ctx.R);
  const auto S = ctx.subset(c);
  json j;
  j["type"] = ctx.R.label();
  j["order"] = W.size();
  json el = json::array();
  for (std::size_t k = 0; k < W.size(); ++k) el.push_back(element_json(W, k));
  j["elements"] = el;
  j["S"] = one_based(S);
  const auto reps = rootsys::minimal_coset_reps(W, S);
  const auto par = rootsys::parabolic_subgroup(W, S);
  json cr = json::array(), ps = json::array();
  for (auto k : reps) cr.push_back(element_json(W, k));
  for (auto k : par) ps.push_back(element_json(W, k));
  j["coset_representatives"] = cr;
  j["parabolic_subgroup"] = ps;
  bool additive = true;
  for (std::size_t k = 0; k < W.size(); ++k) {
    const auto f = rootsys::coset_factorize(W, k, S);
    additive = additive && W[k].length() == W[f.u].length() + W[f.v].length() && W.multiply(f.u, f.v) == k;
  }
  const bool pass = reps.size() * par.size() == W.size() && additive;
  j["index_product"] = verdict(reps.size() * par.size() == W.size());
  j["length_additivity"] = verdict(additive);
  return emit(c, j, pass);
}

int cmd_cells(const Config& c) {
  Context ctx(c);
  const rootsys::WeylGroup W(ctx.R);
  const auto S = ctx.subset(c);
  json rows = json::array();
  for (const auto& cell : rootsys::schubert_cells(W, S))
    rows.push_back({{"word", one_based(cell.word)}, {"dimension", cell.length}});
  json j;
  j["type"] = ctx.R.label();
  j["S"] = one_based(S);
  j["cells"] = rows;
  return emit(c, j, true);
}

int cmd_poisson(const Config& c) {
  Context ctx(c);
  const auto d = rootsys::poisson_subgroup_descriptor(ctx.R, ctx.subset(c));
  json j;
  j["type"] = ctx.R.label();
  j["S"] = one_based(d.S);
  json roots = json::array();
  for (const auto& r : d.roots_S) roots.push_back(weight_json(r));
  j["roots_S"] = roots;
  j["generators_kS"] = d.generators_kS;
  j["generators_kS0"] = d.generators_kS0;
  j["center_dim"] = d.center_dim;
  j["statement"] = d.statement;
  return emit(c, j, true);
}

// ---------------------------------------------------------------------------
// uqmod, funalg

int cmd_module(const Config& c) {
  Context ctx(c);
  const auto lambda = ctx.lambda(c);
  const auto V = uqmod::build_irreducible(ctx.R, ctx.q, lambda);
  json ch = json::array();
  for (const auto& [mu, m] : V.character()) ch.push_back({{"weight", weight_json(mu)}, {"multiplicity", m}});
  bool positive = true;
  for (const auto& n : V.norms()) positive = positive && n > 0;
  const bool adjoint = uqmod::star_adjointness_check(V);
  json j;
  j["type"] = ctx.R.label();
  j["q"] = to_string(ctx.q);
  j["Lambda"] = weight_json(lambda);
  j["dim"] = V.dim();
  j["character"] = ch;
  j["form_positive"] = verdict(positive);
  j["star_adjoint"] = verdict(adjoint);
  return emit(c, j, positive && adjoint);
}

std::vector<rootsys::Weight> weights_up_to(const rootsys::RootSystem& R, int total) {
  std::vector<rootsys::Weight> out;
  rootsys::Weight w(static_cast<std::size_t>(R.rank), 0);
  while (true) {
    int sum = 0;
    for (int x : w) sum += x;
    if (sum <= total) out.push_back(w);
    int i = 0;
    while (i < R.rank && w[static_cast<std::size_t>(i)] == total) w[static_cast<std::size_t>(i++)] = 0;
    if (i == R.rank) break;
    ++w[static_cast<std::size_t>(i)];
  }
  return out;
}

// Peter-Weyl and Haar checks over all components with coordinate sum <= degree.
int cmd_funalg(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const auto lambdas = weights_up_to(ctx.R, c.degree);
  json rows = json::array();
  bool all = true;
  auto row = [&](const std::string& claim, bool pass, const std::string& detail) {
    rows.push_back({{"claim", claim}, {"verdict", verdict(pass)}, {"detail", detail}});
    all = all && pass;
  };
  row("h(1) = 1", funalg::haar(funalg::unit(G)) == 1, "exact");
  bool vanish = true;
  for (const auto& l : lambdas) {
    if (l == ctx.R.zero()) continue;
    const auto& V = G.irrep(l);
    for (std::size_t u = 0; u < V.dim(); ++u)
      for (std::size_t v = 0; v < V.dim(); ++v)
        vanish = vanish && funalg::haar(funalg::matrix_coefficient(G, l, u, v)) == 0;
  }
  row("h vanishes on nontrivial components", vanish, std::to_string(lambdas.size()) + " components");
  std::mt19937_64 rng(c.seed);
  bool orth = true, positive = true, involution = true;
  std::vector<funalg::FunElem> samples;
  for (const auto& l : lambdas) samples.push_back(funalg::random_element(G, {l}, rng));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    positive = positive && (samples[i].is_zero() || funalg::haar_inner(G, samples[i], samples[i]) > 0);
    involution = involution && funalg::star(G, funalg::star(G, samples[i])) == samples[i];
    for (std::size_t j = 0; j < samples.size(); ++j)
      if (i != j) orth = orth && funalg::haar_inner(G, samples[i], samples[j]) == 0;
  }
  row("<a,b>_h = 0 across distinct components", orth, "exact");
  row("<a,a>_h > 0", positive, "exact");
  row("a** = a", involution, "exact");
  json j;
  j["type"] = ctx.R.label();
  j["q"] = to_string(ctx.q);
  j["rows"] = rows;
  return emit(c, j, all);
}

// ---------------------------------------------------------------------------
// flagalg

json piece_rows(const std::vector<flagalg::PieceRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json x;
    x["lambda"] = weight_json(r.lambda);
    x["left_weight"] = r.left_weight.empty() ? json("") : weight_json(r.left_weight);
    x["rank_generated"] = r.rank_generated;
    x["dim_invariant"] = r.dim_invariant;
    x["verdict"] = r.verdict;
    out.push_back(x);
  }
  return out;
}

int cmd_flag_algthm(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const auto fw = flagalg::make_flag_weight(ctx.R, ctx.lambda(c), ctx.subset(c));
  const auto rep = flagalg::verify_theorem_algthm(G, fw, c.degree);
  json j;
  j["claim"] = rep.claim;
  j["type"] = ctx.R.label();
  j["S"] = one_based(fw.S);
  j["Lambda"] = weight_json(fw.Lambda);
  j["degree"] = c.degree;
  j["verdict"] = verdict(rep.pass);
  j["rows"] = piece_rows(rep.rows);
  j["secondary_claim"] = rep.secondary_claim;
  j["secondary_verdict"] = verdict(rep.secondary_pass);
  j["secondary_rows"] = piece_rows(rep.secondary_rows);
  return emit(c, j, rep.pass && rep.secondary_pass);
}

int cmd_flag_ss(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const auto S = ctx.subset(c);
  const auto rep = flagalg::verify_theorem_ss_a(G, S, c.degree);
  json j;
  j["claim"] = rep.claim;
  j["type"] = ctx.R.label();
  j["S"] = one_based(S);
  j["degree"] = c.degree;
  j["verdict"] = verdict(rep.pass);
  j["rows"] = piece_rows(rep.rows);
  return emit(c, j, rep.pass);
}

int cmd_flag_a0(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const auto fw = flagalg::make_flag_weight(ctx.R, ctx.lambda(c), ctx.subset(c));
  const auto rep = flagalg::check_a0_proper(G, fw, c.degree);
  json wit = json::array();
  for (const auto& w : rep.witnesses)
    wit.push_back({{"lambda", weight_json(w.lambda)}, {"left_weight", weight_json(w.left_weight)},
                   {"multiplicity", w.multiplicity}});
  json comps = json::array();
  for (const auto& l : rep.components_examined) comps.push_back(weight_json(l));
  json j;
  j["claim"] = rep.claim;
  j["type"] = ctx.R.label();
  j["S"] = one_based(fw.S);
  j["Lambda"] = weight_json(rep.Lambda);
  j["verdict"] = rep.verdict;
  j["components_examined"] = comps;
  j["witnesses"] = wit;
  return emit(c, j, rep.verdict != "NO-WITNESS");
}

// ---------------------------------------------------------------------------
// repengine

std::vector<repengine::cd> parse_torus(const Context& ctx, const Config& c) {
  const auto phases = parse_doubles(c.t, "t");
  if (phases.empty()) return std::vector<repengine::cd>(static_cast<std::size_t>(ctx.R.rank), 1.0);
  if (static_cast<int>(phases.size()) != ctx.R.rank) throw ConfigError("t needs one phase per simple root");
  std::vector<repengine::cd> t;
  for (double p : phases) t.push_back(std::polar(1.0, p));
  return t;
}

void check_reduced(const rootsys::WeylGroup& W, const std::vector<int>& word) {
  if (!W.is_reduced(word)) throw DomainError("word is not reduced");
}

int cmd_rep_matrix(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const repengine::RepEngine E(G);
  const auto word = c.w.empty() ? G.weyl()[G.weyl().longest()].word : ctx.word(c.w);
  check_reduced(G.weyl(), word);
  const auto lambda = c.Lambda.empty() ? ctx.R.fundamental_weight(0) : ctx.lambda(c);
  const auto& V = G.irrep(lambda);
  if (c.u < 1 || c.v < 1 || static_cast<std::size_t>(c.u) > V.dim() || static_cast<std::size_t>(c.v) > V.dim())
    throw ConfigError("basis index out of range for V(Lambda) of dimension " + std::to_string(V.dim()));
  const auto a = funalg::matrix_coefficient(G, lambda, static_cast<std::size_t>(c.u - 1),
                                            static_cast<std::size_t>(c.v - 1));
  const auto op = E.pi_wt(a, word, parse_torus(ctx, c), c.N);
  if (c.format == "binary") {
    const std::int64_t header[2] = {op.N(), op.l()};
    std::fwrite(header, sizeof(std::int64_t), 2, stdout);
    for (std::size_t r = 0; r < op.dim(); ++r)
      for (std::size_t col = 0; col < op.dim(); ++col) {
        const auto z = op.entry(r, col);
        const double pair[2] = {z.real(), z.imag()};
        std::fwrite(pair, sizeof(double), 2, stdout);
      }
    return 0;
  }
  json j;
  j["type"] = ctx.R.label();
  j["q"] = to_string(ctx.q);
  j["element"] = {{"Lambda", weight_json(lambda)}, {"u", c.u}, {"v", c.v}};
  j["word"] = one_based(word);
  j["N"] = op.N();
  j["l"] = op.l();
  if (c.format == "csv") {
    json rows = json::array();
    for (std::size_t r = 0; r < op.dim(); ++r)
      for (std::size_t col = 0; col < op.dim(); ++col) {
        const auto z = op.entry(r, col);
        if (z != 0.0) rows.push_back({{"row", r + 1}, {"col", col + 1}, {"re", z.real()}, {"im", z.imag()}});
      }
    j["entries"] = rows;
    return emit(c, j, true);
  }
  json m = json::array();
  for (std::size_t r = 0; r < op.dim(); ++r) {
    json row = json::array();
    for (std::size_t col = 0; col < op.dim(); ++col) {
      const auto z = op.entry(r, col);
      row.push_back({z.real(), z.imag()});
    }
    m.push_back(row);
  }
  j["matrix"] = m;
  return emit(c, j, true);
}

std::vector<funalg::FunElem> flag_generators(const uqmod::QuantumGroup& G, const flagalg::FlagWeight& fw) {
  const auto span = flagalg::a_lambda_degree1(G, fw);
  std::vector<funalg::FunElem> out;
  for (const auto& [lambda, R] : span.pieces())
    for (const auto& r : R.rows())
      for (std::size_t u = 0; u < G.irrep(lambda).dim(); ++u) out.push_back(flagalg::row_element(G, lambda, u, r));
  return out;
}

int auto_margin(const repengine::RepEngine& E, const std::vector<funalg::FunElem>& gens,
                const std::vector<int>& word, int N) {
  int m = 0;
  for (const auto& g : gens) m = std::max(m, E.pi_w(g, word, N).total_reach());
  return m;
}

int cmd_rep_class(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const repengine::RepEngine E(G);
  const auto& W = G.weyl();
  const auto word1 = c.w.empty() ? W[W.longest()].word : ctx.word(c.w);
  check_reduced(W, word1);
  std::vector<int> word2;
  if (!c.w2.empty()) {
    word2 = ctx.word(c.w2);
  } else {
    word2 = word1;
    for (const auto& r : W.reduced_words(W.from_word(word1)))
      if (r != word1) {
        word2 = r;
        break;
      }
  }
  std::vector<rootsys::Weight> lambdas;
  for (int i = 0; i < ctx.R.rank; ++i) lambdas.push_back(ctx.R.fundamental_weight(i));
  const auto samples = repengine::bihomogeneous_samples(G, lambdas, c.count, c.seed);
  const auto t = parse_torus(ctx, c);
  json rows = json::array();
  bool all = true;

  const auto wi = repengine::reduced_word_independence(E, word1, word2, samples, c.N);
  json levels = json::array();
  for (const auto& l : wi.levels) levels.push_back({{"N", l.N}, {"deviation", l.deviation}});
  rows.push_back({{"claim", wi.claim}, {"verdict", verdict(wi.pass)}, {"word1", one_based(word1)},
                  {"word2", one_based(word2)}, {"levels", levels}});
  all = all && wi.pass;

  const auto sr = repengine::star_rep_check(E, samples, word1, t, std::min(c.N, 12));
  rows.push_back({{"claim", sr.claim}, {"verdict", verdict(sr.pass)}, {"deviation", sr.deviation}});
  all = all && sr.pass;
  std::vector<std::pair<funalg::FunElem, funalg::FunElem>> pairs;
  for (std::size_t k = 0; k + 1 < samples.size(); k += 2) pairs.emplace_back(samples[k], samples[k + 1]);
  const auto hr = repengine::homomorphism_check(E, pairs, word1, std::min(c.N, 12));
  rows.push_back({{"claim", hr.claim}, {"verdict", verdict(hr.pass)}, {"deviation", hr.deviation}});
  all = all && hr.pass;

  // With a flag weight: inequivalence patterns over W^S and irreducibility of pi_w.
  if (!c.Lambda.empty()) {
    const auto fw = flagalg::make_flag_weight(ctx.R, ctx.lambda(c), ctx.subset(c));
    std::set<std::vector<bool>> seen;
    bool distinct = true, stable = true;
    json pats = json::array();
    for (auto k : rootsys::minimal_coset_reps(W, fw.S)) {
      const auto p = repengine::plucker_vanishing_pattern(E, W[k].word, fw.Lambda, c.N);
      const auto p2 = repengine::plucker_vanishing_pattern(E, W[k].word, fw.Lambda, 2 * c.N);
      std::string bits;
      for (bool b : p) bits += b ? '1' : '0';
      pats.push_back({{"word", one_based(W[k].word)}, {"pattern", bits}});
      distinct = distinct && seen.insert(p).second;
      stable = stable && p == p2;
    }
    rows.push_back({{"claim", "Plucker vanishing patterns separate W^S"}, {"verdict", verdict(distinct && stable)},
                    {"patterns", pats}, {"N_stable", stable}});
    all = all && distinct && stable;
    if (rootsys::minimal_coset_reps(W, fw.S).end() !=
        std::find(rootsys::minimal_coset_reps(W, fw.S).begin(), rootsys::minimal_coset_reps(W, fw.S).end(),
                  W.from_word(word1))) {
      const auto gens = flag_generators(G, fw);
      const int margin = c.margin >= 0 ? c.margin : auto_margin(E, gens, word1, c.N);
      const auto ir = repengine::irreducibility_diagnostic(E, word1, gens, c.N, margin, c.seed);
      rows.push_back({{"claim", ir.claim}, {"verdict", verdict(ir.pass)}, {"cyclic_dim", ir.cyclic_dim},
                      {"cyclic_target", ir.cyclic_target}, {"commutant_dim", ir.commutant_dim}, {"margin", margin}});
      all = all && ir.pass;
    }
  }
  json j;
  j["type"] = ctx.R.label();
  j["q"] = to_string(ctx.q);
  j["N"] = c.N;
  j["seed"] = c.seed;
  j["rows"] = rows;
  return emit(c, j, all);
}

int cmd_rep_ssb(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const repengine::RepEngine E(G);
  const auto S = ctx.subset(c);
  const auto rep = repengine::verify_theorem_ss_b(E, S, c.N, c.samples);
  json classes = json::array();
  for (const auto& cl : rep.classes) {
    std::string bits;
    for (bool b : cl.pattern) bits += b ? '1' : '0';
    json t = json::array();
    for (const auto& z : cl.t) t.push_back(std::arg(z));
    json ph = json::array();
    for (double p : cl.phases) ph.push_back(std::isnan(p) ? json(nullptr) : json(p));
    classes.push_back({{"word", one_based(cl.word)}, {"t_phases", t}, {"pattern", bits}, {"phases", ph}});
  }
  json rows = json::array();
  rows.push_back({{"claim", rep.claim + " (S-coordinates of t invisible)"},
                  {"verdict", verdict(rep.invariance_pass)},
                  {"deviation", rep.invariance_deviation}});
  rows.push_back({{"claim", rep.claim + " (classes separated)"}, {"verdict", verdict(rep.separation_pass)},
                  {"classes", rep.classes.size()}});
  bool all = rep.pass;
  // Restriction identity on the degree-one products, when a flag weight is given.
  if (!c.Lambda.empty()) {
    const auto fw = flagalg::make_flag_weight(ctx.R, ctx.lambda(c), S);
    const auto t = c.t.empty() ? repengine::torus_samples(ctx.R.rank, {}, 2).back() : parse_torus(ctx, c);
    const auto rc = repengine::restriction_identity_check(E, flag_generators(G, fw), fw.S, t, c.N);
    rows.push_back({{"claim", rc.claim}, {"verdict", verdict(rc.pass)}, {"deviation", rc.deviation}});
    all = all && rc.pass;
  }
  json j;
  j["type"] = ctx.R.label();
  j["S"] = one_based(S);
  j["N"] = c.N;
  j["rows"] = rows;
  j["class_table"] = classes;
  return emit(c, j, all);
}

int cmd_rep_norms(const Config& c) {
  Context ctx(c);
  const uqmod::QuantumGroup G(ctx.R, ctx.q);
  const repengine::RepEngine E(G);
  const auto fw = flagalg::make_flag_weight(ctx.R, ctx.lambda(c), ctx.subset(c));
  const auto gens = flag_generators(G, fw);
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::vector<int> Ns;
  for (int n = std::max(2, c.N / 4); n <= c.N; n *= 2) Ns.push_back(n);
  const std::vector<std::vector<repengine::cd>> torus{std::vector<repengine::cd>(static_cast<std::size_t>(ctx.R.rank), 1.0)};
  json rows = json::array();
  bool all = true;
  for (int k = 0; k < c.count; ++k) {
    funalg::FunElem a;
    for (const auto& g : gens) a += g * Rational(coeff(rng));
    const auto rep = repengine::sup_norm_vs_haar(E, a, Ns, torus);
    json est = json::array();
    for (const auto& [n, s] : rep.sup_estimates) est.push_back({{"N", n}, {"s_N", s}});
    rows.push_back({{"claim", rep.claim}, {"sample", k + 1}, {"verdict", verdict(rep.pass)},
                    {"haar_norm", rep.haar_norm}, {"sup_estimates", est}});
    all = all && rep.pass;
  }
  json j;
  j["type"] = ctx.R.label();
  j["S"] = one_based(fw.S);
  j["Lambda"] = weight_json(fw.Lambda);
  j["seed"] = c.seed;
  j["rows"] = rows;
  return emit(c, j, all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized flag manifolds: algebra and representation checks"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* s) {
    s->add_option("--type", c.type, "Cartan type letter (A, B, C, G)");
    s->add_option("--rank", c.rank, "rank");
    s->add_option("--q", c.q, "deformation parameter p/r in (0,1)");
    s->add_option("--format", c.format, "json, csv or binary")->check(CLI::IsMember({"json", "csv", "binary"}));
    s->add_option("--seed", c.seed, "seed for random samples");
  };
  auto with_S = [&](CLI::App* s) { s->add_option("--S", c.S, "subset of simple roots, 1-based, comma separated"); };
  auto with_L = [&](CLI::App* s) { s->add_option("--Lambda", c.Lambda, "weight in fundamental coordinates"); };
  auto with_d = [&](CLI::App* s) { s->add_option("--degree", c.degree, "degree bound"); };
  auto with_N = [&](CLI::App* s) {
    s->add_option("--N", c.N, "levels per tensor factor")->check(CLI::Range(2, 1 << 16));
    s->add_option("--margin", c.margin, "interior margin (default: summed per-factor operator reach)");
  };

  std::function<int()> run;
  auto sub = [&](CLI::App* parent, const char* name, const char* help, std::function<int()> f) {
    auto* s = parent->add_subcommand(name, help);
    common(s);
    s->callback([&run, f] { run = f; });
    return s;
  };
  auto* roots = sub(&app, "roots", "root system data", [&] { return cmd_roots(c); });
  (void)roots;
  with_S(sub(&app, "weyl", "Weyl group, coset representatives, factorization", [&] { return cmd_weyl(c); }));
  with_S(sub(&app, "cells", "Schubert cells of U/K_S", [&] { return cmd_cells(c); }));
  with_S(sub(&app, "poisson", "Poisson-Lie subgroup descriptor", [&] { return cmd_poisson(c); }));
  with_L(sub(&app, "module", "irreducible module V(Lambda)", [&] { return cmd_module(c); }));
  with_d(sub(&app, "funalg", "Peter-Weyl and Haar checks", [&] { return cmd_funalg(c); }));

  auto* flag = app.add_subcommand("flag", "flag manifold algebras");
  flag->require_subcommand(1);
  auto* fa = sub(flag, "verify-algthm", "A_Lambda against the K_S-invariants", [&] { return cmd_flag_algthm(c); });
  with_S(fa), with_L(fa), with_d(fa);
  auto* fs = sub(flag, "verify-ss", "C_q[U/K_S^0] against the Plucker generators", [&] { return cmd_flag_ss(c); });
  with_S(fs), with_d(fs);
  auto* f0 = sub(flag, "a0-proper", "left weights beyond Z.Lambda", [&] { return cmd_flag_a0(c); });
  with_S(f0), with_L(f0), with_d(f0);

  auto* rep = app.add_subcommand("rep", "*-representations pi_{w,t}");
  rep->require_subcommand(1);
  auto* rm = sub(rep, "matrix", "truncated matrix of pi_{w,t}(c_{u,v})", [&] { return cmd_rep_matrix(c); });
  with_N(rm), with_L(rm);
  rm->add_option("--w", c.w, "reduced word, 1-based (default: longest element)");
  rm->add_option("--t", c.t, "torus phases in radians");
  rm->add_option("--u", c.u, "row basis index of the coefficient (1-based)");
  rm->add_option("--v", c.v, "column basis index of the coefficient (1-based)");
  auto* rc = sub(rep, "verify-class", "reduced-word independence, *-homomorphism, inequivalence",
                 [&] { return cmd_rep_class(c); });
  with_N(rc), with_S(rc), with_L(rc);
  rc->add_option("--w", c.w, "reduced word (default: longest element)");
  rc->add_option("--w2", c.w2, "second reduced word (default: another word of the same element)");
  rc->add_option("--t", c.t, "torus phases in radians");
  rc->add_option("--count", c.count, "number of samples");
  auto* rs = sub(rep, "verify-ssb", "classification of pi_{w,t} on C_q[U/K_S^0]", [&] { return cmd_rep_ssb(c); });
  with_N(rs), with_S(rs), with_L(rs);
  rs->add_option("--samples", c.samples, "torus samples per free coordinate");
  rs->add_option("--t", c.t, "torus phases for the restriction identity");
  auto* rn = sub(rep, "norms", "Haar norm against truncated operator norms", [&] { return cmd_rep_norms(c); });
  with_N(rn), with_S(rn), with_L(rn);
  rn->add_option("--count", c.count, "number of random elements");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return run();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
