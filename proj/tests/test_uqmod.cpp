#include <catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "qflag/errors.hpp"
#include "qflag/uqmod.hpp"

using namespace qflag;
using namespace qflag::uqmod;
using rootsys::build_root_system;

namespace {

const Rational kQ(1, 2);

std::vector<Weight> weights_up_to(int rank, int total) {
  std::vector<Weight> out;
  Weight w(rank, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == rank) {
      out.push_back(w);
      return;
    }
    for (int m = 0; m <= left; ++m) {
      w[i] = m;
      rec(i + 1, left - m);
    }
  };
  rec(0, total);
  return out;
}

Rational qbinom(int n, int k, const Rational& t) {
  Rational num = 1, den = 1;
  for (int j = 0; j < k; ++j) {
    num *= qnumber(n - j, t);
    den *= qnumber(j + 1, t);
  }
  return num / den;
}

QMatrix mpow(const QMatrix& m, int k) {
  QMatrix out = QMatrix::identity(m.rows());
  for (int j = 0; j < k; ++j) out = out * m;
  return out;
}

// All defining relations of U_q(g) as matrix identities.
void check_relations(const GradedModule& M) {
  const std::size_t n = M.dim();
  for (int i = 0; i < M.rank(); ++i) {
    const QMatrix Ei = M.dense({Gen::E, i}), Fi = M.dense({Gen::F, i});
    const QMatrix Ki = M.dense({Gen::K, i}), Kinv = M.dense({Gen::Kinv, i});
    CHECK(Ki * Kinv == QMatrix::identity(n));
    const Rational& qi = M.qi(i);
    for (int j = 0; j < M.rank(); ++j) {
      const QMatrix Ej = M.dense({Gen::E, j}), Fj = M.dense({Gen::F, j});
      const QMatrix comm = Ei * Fj - Fj * Ei;
      if (i == j)
        CHECK(comm == (Ki - Kinv) * (1 / (qi - 1 / qi)));
      else
        CHECK(comm.is_zero());
      // K_i E_j K_i^{-1} = q_i^{a_ij} E_j
      const Rational s = pow(qi, M.cartan()[j][i]);
      CHECK(Ki * Ej * Kinv == Ej * s);
      CHECK(Ki * Fj * Kinv == Fj * (1 / s));
      if (i == j) continue;
      // exponent 1 - 2(alpha_i, alpha_j)/(alpha_i, alpha_i), i.e. the transposed entry here
      const int m = 1 - M.cartan()[j][i];
      INFO("serre i=" << i << " j=" << j << " dim=" << n);
      QMatrix serre_e(n, n), serre_f(n, n);
      for (int k = 0; k <= m; ++k) {
        const Rational c = qbinom(m, k, qi) * (k % 2 ? -1 : 1);
        serre_e += c * (mpow(Ei, m - k) * Ej * mpow(Ei, k));
        serre_f += c * (mpow(Fi, m - k) * Fj * mpow(Fi, k));
      }
      CHECK(serre_e.is_zero());
      CHECK(serre_f.is_zero());
    }
  }
}

std::map<Weight, long> as_long(const std::map<Weight, std::size_t>& m) {
  std::map<Weight, long> out;
  for (auto& [k, v] : m) out[k] = static_cast<long>(v);
  return out;
}

}  // namespace

TEST_CASE("dimensions and characters match Weyl and Freudenthal", "[uqmod]") {
  for (auto [t, r, total] : std::vector<std::tuple<char, int, int>>{
           {'A', 1, 4}, {'A', 2, 3}, {'B', 2, 3}, {'C', 2, 2}, {'G', 2, 1}, {'A', 3, 2}}) {
    const auto R = build_root_system(t, r);
    const auto oc = oracle::cartan(t, r);
    for (const auto& lambda : weights_up_to(r, total)) {
      const IrreducibleModule V = build_irreducible(R, kQ, lambda);
      INFO(R.label() << " " << rootsys::to_string(lambda));
      CHECK(static_cast<long>(V.dim()) == oracle::weyl_dimension(oc, lambda));
      CHECK(as_long(V.character()) == oracle::character(oc, lambda));
      for (const auto& n : V.norms()) CHECK(n > 0);
      CHECK(V.norms()[0] == 1);
    }
  }
}

TEST_CASE("character is Weyl-invariant", "[uqmod]") {
  const auto R = build_root_system('B', 2);
  const auto V = build_irreducible(R, kQ, {1, 1});
  const auto ch = V.character();
  for (const auto& [mu, m] : ch)
    for (int i = 0; i < 2; ++i) CHECK(ch.at(R.reflect(mu, i)) == m);
}

TEST_CASE("generator matrices satisfy the defining relations", "[uqmod]") {
  for (auto [t, r, lambda] : std::vector<std::tuple<char, int, Weight>>{
           {'A', 1, {3}}, {'A', 2, {1, 1}}, {'A', 2, {2, 0}}, {'B', 2, {1, 1}},
           {'C', 2, {0, 1}}, {'G', 2, {1, 0}}, {'A', 3, {1, 0, 1}}}) {
    const auto V = build_irreducible(build_root_system(t, r), Rational(2, 3), lambda);
    check_relations(V);
    CHECK(star_adjointness_check(V));
  }
}

TEST_CASE("star adjointness on small modules and a negative control", "[uqmod]") {
  const auto R = build_root_system('A', 1);
  auto V = build_irreducible(R, kQ, {1});
  REQUIRE(V.dim() == 2);
  CHECK(star_adjointness_check(V));
  // e_- = F e_+ has norm <F e_+, F e_+> = q^{1-1} <e_+, E F e_+> = [1] = 1.
  CHECK(V.norms()[1] == 1);
  auto bad = V;
  auto m = *bad.raise(0, 1);
  m.m(0, 0) += 1;
  bad.set_raise(0, 1, m);
  CHECK_FALSE(star_adjointness_check(bad));
}

TEST_CASE("build errors", "[uqmod]") {
  const auto R = build_root_system('A', 2);
  CHECK_THROWS_AS(build_irreducible(R, kQ, {1, -1}), DomainError);
  CHECK_THROWS_AS(build_irreducible(R, Rational(3, 2), {1, 0}), ConfigError);
  CHECK_THROWS_AS(build_irreducible(R, kQ, {3, 3}, 20), OverflowError);
}

TEST_CASE("tensor products decompose as Brauer-Klimyk predicts", "[uqmod]") {
  for (auto [t, r, l1, l2] : std::vector<std::tuple<char, int, Weight, Weight>>{
           {'A', 1, {1}, {1}}, {'A', 2, {1, 0}, {0, 1}}, {'A', 2, {1, 0}, {1, 0}},
           {'A', 2, {1, 1}, {1, 1}}, {'B', 2, {1, 0}, {0, 1}}, {'G', 2, {1, 0}, {1, 0}}}) {
    const auto R = build_root_system(t, r);
    const QuantumGroup G(R, kQ);
    const GradedModule& T = G.tensor_module(l1, l2);
    CHECK(T.dim() == G.irrep(l1).dim() * G.irrep(l2).dim());
    check_relations(T);
    CHECK(star_adjointness_check(T));
    std::map<Weight, long> got;
    for (const auto& w : G.tensor_highest_weights(l1, l2)) ++got[w];
    CHECK(got == oracle::tensor_multiplicities(oracle::cartan(t, r), l1, l2));
    std::vector<Weight> a = G.tensor_highest_weights(l1, l2), b = G.tensor_highest_weights(l2, l1);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("tensor examples", "[uqmod]") {
  const QuantumGroup A1(build_root_system('A', 1), kQ);
  auto hw = A1.tensor_highest_weights({1}, {1});
  std::sort(hw.begin(), hw.end());
  CHECK(hw == std::vector<Weight>{{0}, {2}});
  const QuantumGroup A2(build_root_system('A', 2), kQ);
  hw = A2.tensor_highest_weights({1, 0}, {1, 0});
  std::sort(hw.begin(), hw.end());
  CHECK(hw == std::vector<Weight>{{0, 1}, {2, 0}});
  hw = A2.tensor_highest_weights({1, 0}, {0, 1});
  std::sort(hw.begin(), hw.end());
  CHECK(hw == std::vector<Weight>{{0, 0}, {1, 1}});
}

TEST_CASE("components give a resolution of the identity", "[uqmod]") {
  const QuantumGroup G(build_root_system('A', 2), kQ);
  const Weight l1{1, 1}, l2{1, 0};
  const GradedModule& T = G.tensor_module(l1, l2);
  QMatrix sum(T.dim(), T.dim());
  std::set<Weight> kappas;
  for (const auto& w : G.tensor_highest_weights(l1, l2)) kappas.insert(w);
  std::vector<const Component*> all;
  for (const auto& k : kappas)
    for (const auto& c : G.components(l1, l2, k)) all.push_back(&c);
  for (const auto* c : all) {
    // Intertwining: iota F_i = F_i iota and iota E_i = E_i iota.
    const auto& V = G.irrep(c->kappa);
    for (int i = 0; i < 2; ++i) {
      CHECK(T.dense({Gen::F, i}) * c->iota == c->iota * V.dense({Gen::F, i}));
      CHECK(T.dense({Gen::E, i}) * c->iota == c->iota * V.dense({Gen::E, i}));
    }
    for (std::size_t s = 0; s < T.dim(); ++s) {
      QVector e(T.dim());
      e[s] = 1;
      const QVector p = G.project(*c, l1, l2, e);
      for (std::size_t t = 0; t < T.dim(); ++t)
        for (std::size_t k = 0; k < p.size(); ++k) sum(t, s) += c->iota(t, k) * p[k];
    }
  }
  CHECK(sum == QMatrix::identity(T.dim()));
}

TEST_CASE("dual modules", "[uqmod]") {
  const QuantumGroup A2(build_root_system('A', 2), kQ);
  for (const Weight& lambda : std::vector<Weight>{{1, 0}, {1, 1}, {2, 1}}) {
    const GradedModule D = dual(A2.irrep(lambda));
    check_relations(D);
    const auto hw = highest_weight_vectors(D);
    REQUIRE(hw.size() == 1);
    CHECK(hw[0].weight == A2.weyl().dual_weight(lambda));
    // biduality at the level of characters
    CHECK(dual(D).character() == A2.irrep(lambda).character());
    // (X.f)(v) = f(S(X).v) on generators
    const auto& V = A2.irrep(lambda);
    for (int i = 0; i < 2; ++i) {
      const QMatrix E = V.dense({Gen::E, i}), F = V.dense({Gen::F, i});
      const QMatrix K = V.dense({Gen::K, i}), Ki = V.dense({Gen::Kinv, i});
      CHECK(D.dense({Gen::E, i}) == (Ki * E).transpose() * Rational(-1));
      CHECK(D.dense({Gen::F, i}) == (F * K).transpose() * Rational(-1));
      CHECK(D.dense({Gen::K, i}) == Ki.transpose());
    }
    const auto& dd = A2.dual_data(lambda);
    CHECK(dd.J * dd.J_inv == QMatrix::identity(V.dim()));
  }
  const QuantumGroup A1(build_root_system('A', 1), kQ);
  CHECK(A1.dual_data({1}).lambda_star == Weight{1});
  CHECK(A2.dual_data({1, 0}).lambda_star == Weight{0, 1});
}

TEST_CASE("invariant vectors", "[uqmod]") {
  const QuantumGroup A2(build_root_system('A', 2), kQ);
  CHECK(invariant_vectors(A2.irrep({1, 0}), {0}, InvariantMode::KS).empty());
  CHECK(invariant_vectors(A2.irrep({0, 0}), {0}, InvariantMode::KS).size() == 1);
  CHECK(invariant_vectors(A2.irrep({0, 0}), {1}, InvariantMode::KS0).size() == 1);
  CHECK(invariant_vectors(A2.irrep({1, 1}), {0}, InvariantMode::KS).size() == 1);
  // S = {alpha_1}: V(w2) restricted to U_q(k_S^0) has a trivial line of weight w2 - ... = lowest
  // alpha_1-singlet; K_S0 mode keeps weights with mu_1 = 0.
  const auto v = invariant_vectors(A2.irrep({0, 1}), {0}, InvariantMode::KS0);
  CHECK(v.size() == 1);
  // The K_S answer is the weight-0 slice of the K_S0 answer.
  for (const Weight& lambda : std::vector<Weight>{{1, 1}, {2, 2}, {3, 0}}) {
    const auto& V = A2.irrep(lambda);
    const auto ks = invariant_vectors(V, {0}, InvariantMode::KS);
    std::size_t zero_slice = 0;
    for (const auto& x : invariant_vectors(V, {0}, InvariantMode::KS0)) {
      std::size_t k = 0;
      while (x[k] == 0) ++k;
      if (V.weight(k) == Weight{0, 0}) ++zero_slice;
    }
    CHECK(ks.size() == zero_slice);
  }
}

TEST_CASE("sl2 strings", "[uqmod]") {
  const QuantumGroup A2(build_root_system('A', 2), kQ);
  auto spins = [](const std::vector<Sl2String>& s) {
    std::multiset<int> out;
    for (const auto& x : s) out.insert(x.two_spin);
    return out;
  };
  CHECK(spins(sl2_strings(A2.irrep({1, 0}), 0)) == std::multiset<int>{0, 1});
  const QuantumGroup A1(build_root_system('A', 1), kQ);
  CHECK(spins(sl2_strings(A1.irrep({1}), 0)) == std::multiset<int>{1});
  const auto& adj = A2.irrep({1, 1});
  const auto s = sl2_strings(adj, 0);
  std::size_t total = 0;
  for (const auto& x : s) total += x.vectors.size();
  CHECK(total == 8);
  CHECK(spins(s) == std::multiset<int>{0, 1, 1, 2});
  // strings are mutually orthogonal
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      for (const auto& x : s[a].vectors)
        for (const auto& y : s[b].vectors) CHECK(adj.inner(x, y) == 0);
}
