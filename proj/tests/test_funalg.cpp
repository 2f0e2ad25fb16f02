#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "qflag/errors.hpp"
#include "qflag/funalg.hpp"

using namespace qflag;
using namespace qflag::funalg;
using rootsys::build_root_system;
using uqmod::Gen;

namespace {

const Rational kQ(1, 2);

Gen gen_of(int kind, int i) {
  static const Gen::Kind kinds[] = {Gen::E, Gen::F, Gen::K, Gen::Kinv};
  return Gen{kinds[kind], i};
}

Monomial to_monomial(const oracle::Word& w) {
  Monomial m;
  for (const auto& [k, i] : w) m.push_back(gen_of(k, i));
  return m;
}

oracle::Word random_word(std::mt19937_64& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), kind(0, 3), idx(0, rank - 1);
  oracle::Word w;
  for (int n = len(rng); n > 0; --n) w.emplace_back(kind(rng), idx(rng));
  return w;
}

// Words with rational coefficients, used for the symbolic antipode and star.
using Poly = std::vector<std::pair<Rational, oracle::Word>>;

Poly poly_product(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ca, wa] : a)
    for (const auto& [cb, wb] : b) {
      oracle::Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.emplace_back(ca * cb, w);
    }
  return out;
}

Rational qi_of(const QuantumGroup& G, int i) {
  Rational r = 1;
  for (int k = 0; k < G.roots().d[i]; ++k) r *= G.q();
  return r;
}

// S(X)^* for a word X; both maps are antimultiplicative so the composite is multiplicative.
Poly antipode_star(const QuantumGroup& G, const oracle::Word& w) {
  Poly acc{{Rational(1), {}}};
  for (const auto& [kind, i] : w) {
    const Rational qi = qi_of(G, i);
    Poly g;
    switch (kind) {
      // S(E) = -K^{-1}E; (K^{-1}E)^* = E^* K^{-1} = q_i^{-1} F
      case 0: g = {{Rational(-1) / qi, {{1, i}}}}; break;
      // S(F) = -FK; (FK)^* = K F^* = q_i E
      case 1: g = {{-qi, {{0, i}}}}; break;
      case 2: g = {{Rational(1), {{3, i}}}}; break;
      default: g = {{Rational(1), {{2, i}}}}; break;
    }
    acc = poly_product(acc, g);
  }
  return acc;
}

Monomial mono(std::initializer_list<std::pair<int, int>> w) {
  Monomial m;
  for (const auto& [k, i] : w) m.push_back(gen_of(k, i));
  return m;
}

Rational counit_word(const oracle::Word& w) {
  for (const auto& [k, i] : w)
    if (k < 2) return 0;
  return 1;
}

}  // namespace

TEST_CASE("matrix coefficients evaluate as module matrix entries", "[funalg]") {
  QuantumGroup G(build_root_system("A2"), kQ);
  const Weight lambda{1, 1};
  const auto& V = G.irrep(lambda);
  for (std::size_t u = 0; u < V.dim(); ++u)
    for (std::size_t v = 0; v < V.dim(); ++v) {
      const auto c = matrix_coefficient(G, lambda, u, v);
      CHECK(evaluate(G, c, {}) == (u == v ? 1 : 0));
      CHECK(counit(c) == (u == v ? 1 : 0));
      for (int i = 0; i < 2; ++i) {
        const Rational k = evaluate(G, c, mono({{2, i}}));
        CHECK(k == (u == v ? V.k_eigenvalue(i, v) : Rational(0)));
      }
    }
  CHECK_THROWS_AS(matrix_coefficient(G, lambda, 8, 0), ConfigError);
}

TEST_CASE("left and right regular actions", "[funalg]") {
  QuantumGroup G(build_root_system("B2"), kQ);
  std::mt19937_64 rng(7);
  const auto a = random_element(G, {{1, 0}, {0, 1}}, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random_word(rng, 2, 3);
    const auto Y = random_word(rng, 2, 3);
    oracle::Word yx = Y, xy = X;
    yx.insert(yx.end(), X.begin(), X.end());
    xy.insert(xy.end(), Y.begin(), Y.end());
    CHECK(evaluate(G, left_action(G, a, to_monomial(X)), to_monomial(Y)) ==
          evaluate(G, a, to_monomial(yx)));
    CHECK(evaluate(G, right_action(G, a, to_monomial(X)), to_monomial(Y)) ==
          evaluate(G, a, to_monomial(xy)));
  }
}

TEST_CASE("product is dual to the coproduct", "[funalg]") {
  struct Case {
    const char* type;
    std::vector<Weight> la, lb;
  };
  const std::vector<Case> cases = {
      {"A1", {{1}, {2}}, {{1}, {3}}},
      {"A2", {{1, 0}, {0, 1}}, {{1, 0}, {1, 1}}},
      {"B2", {{1, 0}}, {{0, 1}}},
      {"C2", {{0, 1}}, {{1, 0}, {0, 1}}},
      {"G2", {{1, 0}}, {{1, 0}}},
  };
  std::mt19937_64 rng(11);
  for (const auto& cs : cases) {
    QuantumGroup G(build_root_system(cs.type), kQ);
    const int r = G.roots().rank;
    const auto a = random_element(G, cs.la, rng);
    const auto b = random_element(G, cs.lb, rng);
    const auto ab = multiply(G, a, b);
    for (int trial = 0; trial < 25; ++trial) {
      const auto X = random_word(rng, r, 4);
      Rational expect = 0;
      for (const auto& [l, rr] : oracle::coproduct(X))
        expect += evaluate(G, a, to_monomial(l)) * evaluate(G, b, to_monomial(rr));
      INFO(cs.type << " " << uqmod::to_string(to_monomial(X)));
      CHECK(evaluate(G, ab, to_monomial(X)) == expect);
    }
  }
}

TEST_CASE("product is associative and unital", "[funalg]") {
  std::mt19937_64 rng(3);
  QuantumGroup G1(build_root_system("A1"), kQ);
  QuantumGroup G2(build_root_system("A2"), kQ);
  for (int trial = 0; trial < 50; ++trial) {
    const bool small = trial % 2 == 0;
    const QuantumGroup& G = small ? G1 : G2;
    const std::vector<Weight> pool =
        small ? std::vector<Weight>{{0}, {1}, {2}} : std::vector<Weight>{{1, 0}, {0, 1}};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto a = random_element(G, {pool[pick(rng)]}, rng, 2, 0.3);
    const auto b = random_element(G, {pool[pick(rng)]}, rng, 2, 0.3);
    const auto c = random_element(G, {pool[pick(rng)]}, rng, 2, 0.3);
    CHECK(multiply(G, multiply(G, a, b), c) == multiply(G, a, multiply(G, b, c)));
    CHECK(multiply(G, unit(G), a) == a);
    CHECK(multiply(G, a, unit(G)) == a);
  }
}

TEST_CASE("sl2 generators: the diagonal entries commute", "[funalg]") {
  QuantumGroup G(build_root_system("A1"), kQ);
  // e+ = index 0, e- = F e+ = index 1.
  const auto Lpm = matrix_coefficient(G, {1}, 0, 1);
  const auto Lmp = matrix_coefficient(G, {1}, 1, 0);
  const auto Lpp = matrix_coefficient(G, {1}, 0, 0);
  const auto Lmm = matrix_coefficient(G, {1}, 1, 1);
  CHECK(multiply(G, Lpm, Lmp) == multiply(G, Lmp, Lpm));
  CHECK_FALSE(multiply(G, Lpp, Lmm) == multiply(G, Lmm, Lpp));
}

TEST_CASE("star matches the antipode-star formula", "[funalg]") {
  struct Case {
    const char* type;
    std::vector<Weight> lambdas;
  };
  const std::vector<Case> cases = {
      {"A1", {{1}, {2}}}, {"A2", {{1, 0}, {1, 1}}}, {"A3", {{1, 0, 0}}},
      {"B2", {{1, 0}, {0, 1}}}, {"C2", {{1, 0}}}, {"G2", {{1, 0}}},
  };
  std::mt19937_64 rng(5);
  for (const auto& cs : cases) {
    QuantumGroup G(build_root_system(cs.type), kQ);
    const int r = G.roots().rank;
    const auto a = random_element(G, cs.lambdas, rng);
    const auto as = star(G, a);
    CHECK(star(G, as) == a);
    for (int trial = 0; trial < 25; ++trial) {
      const auto X = random_word(rng, r, 3);
      Rational expect = 0;
      for (const auto& [c, w] : antipode_star(G, X)) expect += c * evaluate(G, a, to_monomial(w));
      INFO(cs.type << " " << uqmod::to_string(to_monomial(X)));
      CHECK(evaluate(G, as, to_monomial(X)) == expect);
    }
  }
}

TEST_CASE("star is antimultiplicative", "[funalg]") {
  std::mt19937_64 rng(9);
  QuantumGroup G(build_root_system("A2"), kQ);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_element(G, {{1, 0}}, rng, 2, 0.4);
    const auto b = random_element(G, {{0, 1}, {1, 0}}, rng, 2, 0.4);
    CHECK(star(G, multiply(G, a, b)) == multiply(G, star(G, b), star(G, a)));
  }
}

TEST_CASE("Haar functional", "[funalg]") {
  QuantumGroup G(build_root_system("A2"), kQ);
  CHECK(haar(unit(G)) == 1);
  std::mt19937_64 rng(13);
  const auto a = random_element(G, {{0, 0}, {1, 0}, {1, 1}}, rng);
  const QMatrix* trivial = a.component({0, 0});
  CHECK(haar(a) == (trivial ? (*trivial)(0, 0) : Rational(0)));
  CHECK(haar(matrix_coefficient(G, {1, 1}, 3, 3)) == 0);

  SECTION("positivity and Peter-Weyl orthogonality") {
    const std::vector<Weight> lambdas{{1, 0}, {0, 1}, {1, 1}};
    for (const auto& l1 : lambdas)
      for (const auto& l2 : lambdas) {
        const auto d1 = G.irrep(l1).dim(), d2 = G.irrep(l2).dim();
        for (std::size_t u = 0; u < d1; u += 2)
          for (std::size_t v = 0; v < d1; v += 3)
            for (std::size_t x = 0; x < d2; x += 2)
              for (std::size_t y = 0; y < d2; y += 3) {
                const Rational h = haar_inner(G, matrix_coefficient(G, l1, u, v),
                                              matrix_coefficient(G, l2, x, y));
                if (l1 != l2 || u != x || v != y)
                  CHECK(h == 0);
                else
                  CHECK(h > 0);
              }
      }
    const auto b = random_element(G, {{1, 0}, {0, 1}}, rng);
    CHECK(haar_inner(G, b, b) > 0);
    CHECK(haar_norm(G, b) > 0);
  }

  SECTION("left and right invariance") {
    const auto b = random_element(G, {{0, 0}, {1, 0}, {0, 1}}, rng);
    const auto b2 = multiply(G, b, star(G, b));
    for (int trial = 0; trial < 30; ++trial) {
      const auto X = random_word(rng, 2, 3);
      const auto Xm = to_monomial(X);
      CHECK(haar(left_action(G, b2, Xm)) == counit_word(X) * haar(b2));
      CHECK(haar(right_action(G, b2, Xm)) == counit_word(X) * haar(b2));
    }
  }
}

TEST_CASE("left weight decomposition and one-dimensional representations", "[funalg]") {
  QuantumGroup G(build_root_system("A2"), kQ);
  std::mt19937_64 rng(17);
  const auto a = random_element(G, {{1, 0}, {1, 1}}, rng);
  const auto parts = left_weight_decompose(G, a);
  FunElem sum;
  for (const auto& [mu, p] : parts) {
    sum += p;
    // K_i acting on the left scales by q_i^{mu_i}.
    for (int i = 0; i < 2; ++i) {
      Rational s = 1;
      const Rational qi = qi_of(G, i);
      for (int k = 0; k < std::abs(mu[i]); ++k) s *= mu[i] > 0 ? qi : 1 / qi;
      CHECK(left_action(G, p, mono({{2, i}})) == p * s);
    }
  }
  CHECK(sum == a);

  // tau_t is a character: tau(ab) = tau(a) tau(b).
  const std::vector<std::complex<double>> t{std::polar(1.0, 0.7), std::polar(1.0, -1.9)};
  const auto b = random_element(G, {{0, 1}}, rng);
  const auto ab = multiply(G, a, b);
  CHECK(std::abs(tau(G, ab, t) - tau(G, a, t) * tau(G, b, t)) < 1e-9);
}
