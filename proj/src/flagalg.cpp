#include "qflag/flagalg.hpp"

#include <algorithm>

#include "qflag/errors.hpp"

namespace qflag::flagalg {

namespace {

bool is_zero_weight(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](int m) { return m == 0; });
}

QVector kron_vec(const QVector& a, const QVector& b) {
  QVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

QVector row_of(const QMatrix& C, std::size_t u) {
  QVector r(C.cols());
  for (std::size_t v = 0; v < C.cols(); ++v) r[v] = C(u, v);
  return r;
}

}  // namespace

FlagWeight make_flag_weight(const rootsys::RootSystem& R, const Weight& Lambda, Subset S) {
  S = rootsys::normalize_subset(R, std::move(S));
  if (static_cast<int>(Lambda.size()) != R.rank)
    throw ConfigError("Lambda has " + std::to_string(Lambda.size()) + " coordinates, rank is " +
                      std::to_string(R.rank));
  for (int i = 0; i < R.rank; ++i) {
    const bool in_s = rootsys::contains(S, i);
    if (in_s && Lambda[i] != 0)
      throw ConfigError("Lambda coordinate " + std::to_string(i + 1) + " must vanish on S");
    if (!in_s && Lambda[i] <= 0)
      throw ConfigError("Lambda coordinate " + std::to_string(i + 1) + " must be positive off S");
  }
  return {Lambda, S};
}

const RowSpace* GradedSpan::piece(const Weight& lambda) const {
  auto it = pieces_.find(lambda);
  return it == pieces_.end() ? nullptr : &it->second;
}

std::size_t GradedSpan::row_dim(const Weight& lambda) const {
  const RowSpace* p = piece(lambda);
  return p ? p->dim() : 0;
}

std::size_t GradedSpan::rank(const QuantumGroup& G, const Weight& lambda) const {
  const std::size_t r = row_dim(lambda);
  return r == 0 ? 0 : r * G.irrep(lambda).dim();
}

std::set<Weight> GradedSpan::support() const {
  std::set<Weight> out;
  for (const auto& [l, p] : pieces_)
    if (p.dim() > 0) out.insert(l);
  return out;
}

void GradedSpan::insert_row(const Weight& lambda, const QVector& row) {
  if (is_zero(row)) return;
  auto it = pieces_.try_emplace(lambda, row.size()).first;
  it->second.insert(row);
}

void GradedSpan::insert(const FunElem& a) {
  for (const auto& [lambda, C] : a.components())
    for (std::size_t u = 0; u < C.rows(); ++u) insert_row(lambda, row_of(C, u));
}

void GradedSpan::merge(const GradedSpan& other) {
  for (const auto& [lambda, p] : other.pieces_) {
    auto it = pieces_.try_emplace(lambda, p.width()).first;
    it->second.merge(p);
  }
}

bool GradedSpan::contains(const FunElem& a) const {
  for (const auto& [lambda, C] : a.components()) {
    const RowSpace* p = piece(lambda);
    for (std::size_t u = 0; u < C.rows(); ++u) {
      const QVector r = row_of(C, u);
      if (is_zero(r)) continue;
      if (!p || !p->contains(r)) return false;
    }
  }
  return true;
}

bool GradedSpan::contains(const GradedSpan& other) const {
  for (const auto& [lambda, p] : other.pieces_) {
    if (p.dim() == 0) continue;
    const RowSpace* mine = piece(lambda);
    if (!mine) return false;
    for (const auto& r : p.rows())
      if (!mine->contains(r)) return false;
  }
  return true;
}

GradedSpan GradedSpan::restrict_to(const std::set<Weight>& lambdas) const {
  GradedSpan out;
  for (const auto& [lambda, p] : pieces_)
    if (lambdas.count(lambda)) out.pieces_.emplace(lambda, p);
  return out;
}

GradedSpan unit_span(const QuantumGroup& G) { return span_of({funalg::unit(G)}); }

GradedSpan span_of(const std::vector<FunElem>& elements) {
  GradedSpan out;
  for (const auto& a : elements) out.insert(a);
  return out;
}

GradedSpan product(const QuantumGroup& G, const GradedSpan& A, const GradedSpan& B,
                   const std::set<Weight>* targets) {
  GradedSpan out;
  for (const auto& [l1, R1] : A.pieces())
    for (const auto& [l2, R2] : B.pieces()) {
      if (R1.dim() == 0 || R2.dim() == 0) continue;
      std::set<Weight> kappas;
      if (targets)
        kappas = *targets;
      else
        for (const auto& k : G.tensor_highest_weights(l1, l2)) kappas.insert(k);
      for (const auto& kappa : kappas)
        for (const auto& comp : G.components(l1, l2, kappa))
          for (const auto& r : R1.rows())
            for (const auto& s : R2.rows()) out.insert_row(kappa, G.project(comp, l1, l2, kron_vec(r, s)));
    }
  return out;
}

FunElem row_element(const QuantumGroup& G, const Weight& lambda, std::size_t u, const QVector& r) {
  const std::size_t n = G.irrep(lambda).dim();
  if (u >= n || r.size() != n) throw ConfigError("row element does not fit V" + rootsys::to_string(lambda));
  QMatrix C(n, n);
  for (std::size_t v = 0; v < n; ++v) C(u, v) = r[v];
  FunElem a;
  a.add_component(lambda, C);
  return a;
}

PluckerGenerators plucker_generators(const QuantumGroup& G, const FlagWeight& fw) {
  PluckerGenerators out;
  const auto& V = G.irrep(fw.Lambda);
  // Index 0 of every irreducible basis is the highest weight vector v_Lambda.
  for (std::size_t u = 0; u < V.dim(); ++u) {
    out.holomorphic.push_back(funalg::matrix_coefficient(G, fw.Lambda, u, 0));
    out.antiholomorphic.push_back(funalg::star(G, out.holomorphic.back()));
  }
  return out;
}

GradedSpan a_lambda_degree1(const QuantumGroup& G, const FlagWeight& fw) {
  const auto gens = plucker_generators(G, fw);
  GradedSpan out;
  for (const auto& f : gens.holomorphic)
    for (const auto& g : gens.antiholomorphic) out.insert(funalg::multiply(G, f, g));
  return out;
}

RowSpace invariant_component(const QuantumGroup& G, const Weight& lambda, const Subset& S,
                             InvariantMode mode) {
  const auto& V = G.irrep(lambda);
  RowSpace out(V.dim());
  for (const auto& v : uqmod::invariant_vectors(V, S, mode)) out.insert(v);
  return out;
}

GradedSpan generated_span(const QuantumGroup& G, const GradedSpan& generators, int d,
                          const std::set<Weight>* targets) {
  if (d < 0) throw ConfigError("degree must be nonnegative");
  GradedSpan acc = unit_span(G);
  GradedSpan layer = acc;  // products of exactly k factors
  for (int k = 1; k <= d; ++k) {
    const bool last = k == d;
    layer = product(G, layer, generators, last ? targets : nullptr);
    acc.merge(layer);
  }
  return targets ? acc.restrict_to(*targets) : acc;
}

GradedSpan factorized_components(const QuantumGroup& G, const Subset& S, const Weight& lambda,
                                 const std::set<Weight>* targets) {
  for (int i : S)
    if (lambda[static_cast<std::size_t>(i)] != 0)
      throw DomainError("lambda " + rootsys::to_string(lambda) + " is not supported off S");
  if (!G.roots().is_dominant(lambda)) throw DomainError("lambda must be dominant");
  if (is_zero_weight(lambda)) return targets ? unit_span(G).restrict_to(*targets) : unit_span(G);
  // f_lambda . g_lambda^* has rows p_j(v_lambda (x) w) with w spanning the rows of the g^*.
  const auto& V = G.irrep(lambda);
  GradedSpan hol, anti;
  QVector top(V.dim());
  top[0] = 1;
  hol.insert_row(lambda, top);
  for (std::size_t u = 0; u < V.dim(); ++u)
    anti.insert(funalg::star(G, funalg::matrix_coefficient(G, lambda, u, 0)));
  return product(G, hol, anti, targets);
}

std::set<Weight> reachable_weights(const QuantumGroup& G, const std::vector<Weight>& factors, int d) {
  std::set<Weight> all{G.roots().zero()};
  std::set<Weight> layer = all;
  for (int k = 1; k <= d; ++k) {
    std::set<Weight> next;
    for (const auto& l : layer)
      for (const auto& f : factors)
        for (const auto& h : G.tensor_highest_weights(l, f)) next.insert(h);
    all.insert(next.begin(), next.end());
    layer = std::move(next);
  }
  return all;
}

namespace {

std::vector<Weight> dominant_box(const Weight& bound) {
  std::vector<Weight> out;
  Weight w(bound.size(), 0);
  while (true) {
    out.push_back(w);
    std::size_t i = 0;
    while (i < w.size() && w[i] == bound[i]) w[i++] = 0;
    if (i == w.size()) break;
    ++w[i];
  }
  return out;
}

PieceRow compare_piece(const QuantumGroup& G, const Weight& kappa, const RowSpace* generated,
                       const RowSpace& invariant) {
  PieceRow row;
  row.lambda = kappa;
  const std::size_t n = G.irrep(kappa).dim();
  row.rank_generated = generated ? generated->dim() * n : 0;
  row.dim_invariant = invariant.dim() * n;
  if (generated)
    for (const auto& r : generated->rows())
      if (!invariant.contains(r)) row.contained = false;
  row.verdict = row.contained && row.rank_generated == row.dim_invariant ? "PASS" : "FAIL";
  return row;
}

// Rank of the slice of a weight-homogeneous row space at left weight mu.
std::size_t weight_slice_rank(const uqmod::GradedModule& V, const std::vector<QVector>& rows,
                              const Weight& mu) {
  const auto b = V.find_block(mu);
  if (!b) return 0;
  const auto& idx = V.block_indices(*b);
  RowSpace slice(idx.size());
  for (const auto& r : rows) {
    QVector s(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) s[k] = r[idx[k]];
    slice.insert(s);
  }
  return slice.dim();
}

void add_unreached(const QuantumGroup& G, const std::set<Weight>& reachable, const Subset& S,
                   InvariantMode mode, std::vector<PieceRow>& rows) {
  Weight bound(static_cast<std::size_t>(G.roots().rank), 0);
  for (const auto& k : reachable)
    for (std::size_t i = 0; i < k.size(); ++i) bound[i] = std::max(bound[i], k[i]);
  for (const auto& kappa : dominant_box(bound)) {
    if (reachable.count(kappa)) continue;
    const RowSpace inv = invariant_component(G, kappa, S, mode);
    if (inv.dim() == 0) continue;
    PieceRow row;
    row.lambda = kappa;
    row.dim_invariant = inv.dim() * G.irrep(kappa).dim();
    row.verdict = "UNREACHED";
    rows.push_back(row);
  }
}

}  // namespace

TheoremReport verify_theorem_algthm(const QuantumGroup& G, const FlagWeight& fw, int d) {
  TheoremReport rep;
  rep.claim = "A_Lambda == C_q[U/K_S]";
  const Weight Ls = G.weyl().dual_weight(fw.Lambda);
  const std::set<Weight> reachable = reachable_weights(G, {fw.Lambda, Ls}, d);

  const GradedSpan gens = a_lambda_degree1(G, fw);
  const GradedSpan A = generated_span(G, gens, d, &reachable);

  rep.pass = true;
  for (const auto& kappa : reachable) {
    const RowSpace inv = invariant_component(G, kappa, fw.S, InvariantMode::KS);
    auto row = compare_piece(G, kappa, A.piece(kappa), inv);
    rep.pass = rep.pass && row.verdict == "PASS";
    rep.rows.push_back(row);
  }
  add_unreached(G, reachable, fw.S, InvariantMode::KS, rep.rows);

  // The factorized span: lambda supported off S, bounded by d * Lambda.
  rep.secondary_claim = "A_S == C_q[U/K_S]";
  Weight bound = fw.Lambda;
  for (auto& m : bound) m *= d;
  GradedSpan AS;
  for (const auto& lambda : dominant_box(bound)) {
    AS.merge(factorized_components(G, fw.S, lambda, &reachable));
  }
  rep.secondary_pass = true;
  for (const auto& kappa : reachable) {
    const RowSpace inv = invariant_component(G, kappa, fw.S, InvariantMode::KS);
    auto row = compare_piece(G, kappa, AS.piece(kappa), inv);
    rep.secondary_pass = rep.secondary_pass && row.verdict == "PASS";
    rep.secondary_rows.push_back(row);
  }
  return rep;
}

TheoremReport verify_theorem_ss_a(const QuantumGroup& G, const Subset& S0, int d) {
  TheoremReport rep;
  rep.claim = "C_q[U/K_S^0] generated by f_k, g_l^* (k,l not in S)";
  const Subset S = rootsys::normalize_subset(G.roots(), S0);
  std::vector<FunElem> gens;
  std::vector<Weight> factors;
  for (int k : rootsys::complement(G.roots(), S)) {
    const Weight w = G.roots().fundamental_weight(k);
    const auto& V = G.irrep(w);
    for (std::size_t u = 0; u < V.dim(); ++u) {
      gens.push_back(funalg::matrix_coefficient(G, w, u, 0));
      gens.push_back(funalg::star(G, gens.back()));
    }
    factors.push_back(w);
    factors.push_back(G.weyl().dual_weight(w));
  }
  const std::set<Weight> reachable = reachable_weights(G, factors, d);
  const GradedSpan A = generated_span(G, span_of(gens), d, &reachable);

  rep.pass = true;
  for (const auto& kappa : reachable) {
    const auto& V = G.irrep(kappa);
    const RowSpace inv = invariant_component(G, kappa, S, InvariantMode::KS0);
    const RowSpace* gen = A.piece(kappa);
    auto whole = compare_piece(G, kappa, gen, inv);
    std::set<Weight> weights;
    for (std::size_t k = 0; k < V.dim(); ++k) weights.insert(V.weight(k));
    bool slices_ok = true;
    std::vector<PieceRow> slices;
    for (const auto& mu : weights) {
      PieceRow row;
      row.lambda = kappa;
      row.left_weight = mu;
      row.rank_generated = gen ? weight_slice_rank(V, gen->rows(), mu) * V.dim() : 0;
      row.dim_invariant = weight_slice_rank(V, inv.rows(), mu) * V.dim();
      if (row.rank_generated == 0 && row.dim_invariant == 0) continue;
      row.contained = whole.contained;
      row.verdict = row.contained && row.rank_generated == row.dim_invariant ? "PASS" : "FAIL";
      slices_ok = slices_ok && row.verdict == "PASS";
      slices.push_back(row);
    }
    if (!slices_ok) whole.verdict = "FAIL";
    rep.pass = rep.pass && whole.verdict == "PASS";
    rep.rows.push_back(whole);
    rep.rows.insert(rep.rows.end(), slices.begin(), slices.end());
  }
  add_unreached(G, reachable, S, InvariantMode::KS0, rep.rows);
  return rep;
}

A0Report check_a0_proper(const QuantumGroup& G, const FlagWeight& fw, int d) {
  A0Report rep;
  rep.claim = "A_Lambda^0 properly contained in C_q[U/K_S^0]";
  rep.Lambda = fw.Lambda;
  const auto comp = rootsys::complement(G.roots(), fw.S);
  if (comp.empty() || is_zero_weight(fw.Lambda)) {
    rep.verdict = "NOT-APPLICABLE";
    return rep;
  }
  // n.Lambda for an integer n: the left weights reachable from f_Lambda and g_Lambda^*.
  auto in_lattice = [&](const Weight& mu) {
    std::optional<int> n;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (fw.Lambda[i] == 0) {
        if (mu[i] != 0) return false;
        continue;
      }
      if (mu[i] % fw.Lambda[i] != 0) return false;
      const int m = mu[i] / fw.Lambda[i];
      if (n && *n != m) return false;
      n = m;
    }
    return true;
  };
  std::vector<Weight> factors;
  for (int k : comp) {
    const Weight w = G.roots().fundamental_weight(k);
    factors.push_back(w);
    factors.push_back(G.weyl().dual_weight(w));
  }
  for (const auto& kappa : reachable_weights(G, factors, d)) {
    rep.components_examined.push_back(kappa);
    const auto& V = G.irrep(kappa);
    const RowSpace inv = invariant_component(G, kappa, fw.S, InvariantMode::KS0);
    std::map<Weight, std::size_t> mult;
    for (std::size_t k = 0; k < V.dim(); ++k) mult.try_emplace(V.weight(k), 0);
    for (auto& [mu, m] : mult) {
      m = weight_slice_rank(V, inv.rows(), mu);
      if (m > 0 && !in_lattice(mu)) rep.witnesses.push_back({kappa, mu, m});
    }
  }
  rep.verdict = rep.witnesses.empty() ? "NO-WITNESS" : "PROPER";
  return rep;
}

}  // namespace qflag::flagalg
