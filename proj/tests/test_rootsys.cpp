#include <catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "qflag/errors.hpp"
#include "qflag/rootsys.hpp"

using namespace qflag::rootsys;

namespace {

const std::vector<std::pair<char, int>> kTypes = {{'A', 1}, {'A', 2}, {'A', 3}, {'A', 4},
                                                 {'B', 2}, {'C', 2}, {'G', 2}};

std::vector<Subset> all_subsets(int r) {
  std::vector<Subset> out;
  for (int mask = 0; mask < (1 << r); ++mask) {
    Subset s;
    for (int i = 0; i < r; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("root system data matches the root-string oracle", "[rootsys]") {
  for (auto [t, r] : kTypes) {
    const RootSystem R = build_root_system(t, r);
    const auto oc = oracle::cartan(t, r);
    CHECK(R.cartan == oc.a);
    CHECK(R.d == oc.d);
    const auto roots = oracle::positive_roots(oc);
    CHECK(R.positive_roots_simple.size() == roots.size());
    std::set<Weight> lib(R.positive_roots_simple.begin(), R.positive_roots_simple.end());
    CHECK(lib == std::set<Weight>(roots.begin(), roots.end()));
    for (int i = 0; i < r; ++i) {
      CHECK(R.cartan[i][i] == 2);
      for (int j = 0; j < r; ++j) {
        if (i != j) CHECK(R.cartan[i][j] <= 0);
        // a_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)
        CHECK(R.form(R.simple_root(i), R.simple_root(j)) * 2 ==
              R.cartan[i][j] * R.form(R.simple_root(j), R.simple_root(j)));
        // (w_i, alpha_j^vee) = delta_ij
        CHECK(R.form(R.fundamental_weight(i), R.simple_root(j)) / R.d[j] == (i == j ? 1 : 0));
      }
    }
  }
}

TEST_CASE("positive root counts", "[rootsys]") {
  CHECK(build_root_system('A', 1).positive_roots.size() == 1);
  CHECK(build_root_system('A', 1).d[0] == 1);
  CHECK(build_root_system('A', 2).positive_roots.size() == 3);
  const auto B2 = build_root_system('B', 2);
  CHECK(B2.positive_roots.size() == 4);
  CHECK(std::set<int>(B2.d.begin(), B2.d.end()) == std::set<int>{1, 2});
  CHECK(build_root_system('G', 2).positive_roots.size() == 6);
  CHECK_THROWS_AS(build_root_system('D', 4), qflag::ConfigError);
  CHECK_THROWS_AS(build_root_system('A', 5), qflag::ConfigError);
  CHECK_THROWS_AS(build_root_system('B', 3), qflag::ConfigError);
}

TEST_CASE("dominance order", "[rootsys]") {
  const auto R = build_root_system('A', 2);
  CHECK(R.dominance_leq({0, 0}, {1, 1}));
  CHECK(R.dominance_leq({-1, 2}, {1, 1}));
  CHECK_FALSE(R.dominance_leq({1, 0}, {1, 1}));  // difference not in the root lattice
  CHECK_FALSE(R.dominance_leq({2, -1}, {0, 1}));
  CHECK(R.is_dominant({0, 3}));
  CHECK_FALSE(R.is_dominant({1, -1}));
}

TEST_CASE("Weyl group matches brute-force closure", "[rootsys]") {
  const std::map<std::string, std::size_t> orders = {{"A1", 2}, {"A2", 6},  {"A3", 24}, {"A4", 120},
                                                     {"B2", 8}, {"C2", 8}, {"G2", 12}};
  for (auto [t, r] : kTypes) {
    const RootSystem R = build_root_system(t, r);
    const WeylGroup W(R);
    const auto og = oracle::weyl_group(oracle::cartan(t, r));
    CHECK(W.size() == orders.at(R.label()));
    CHECK(W.size() == og.elements.size());
    CHECK(W[W.longest()].length() == static_cast<int>(R.positive_roots.size()));
    std::size_t sum_at_one = 0;
    for (std::size_t w = 0; w < W.size(); ++w) {
      const auto& e = W[w];
      // length: word length, BFS distance and inversion count all agree
      CHECK(og.length[og.index.at(e.action)] == e.length());
      CHECK(W.inversion_count(w) == e.length());
      // canonical word is lexicographically smallest reduced word
      const auto words = W.reduced_words(w);
      CHECK(words.front() == e.word);
      for (int i = 0; i < r; ++i) {
        const int l = W[W.multiply(w, W.simple(i))].length();
        CHECK(std::abs(l - e.length()) == 1);
      }
      ++sum_at_one;
    }
    CHECK(sum_at_one == W.size());
  }
}

TEST_CASE("every reduced word yields the same matrix (rank <= 3)", "[rootsys]") {
  for (auto [t, r] : kTypes) {
    if (r > 3) continue;
    const WeylGroup W(build_root_system(t, r));
    const auto c = oracle::cartan(t, r);
    for (std::size_t w = 0; w < W.size(); ++w)
      for (const auto& word : W.reduced_words(w)) {
        CHECK(W.is_reduced(word));
        oracle::Mat m = oracle::weyl_group(c).elements[0];
        for (int i : word) m = oracle::matmul(m, oracle::reflection(c, i));
        CHECK(m == W[w].action);
      }
  }
}

TEST_CASE("parabolic quotients agree with brute-force coset minima", "[rootsys]") {
  for (auto [t, r] : kTypes) {
    const RootSystem R = build_root_system(t, r);
    const WeylGroup W(R);
    for (const auto& S : all_subsets(r)) {
      const auto reps = minimal_coset_reps(W, S);
      const auto WS = parabolic_subgroup(W, S);
      CHECK(reps.size() * WS.size() == W.size());
      // brute force: shortest element of each coset w W_S
      std::set<std::size_t> brute;
      for (std::size_t w = 0; w < W.size(); ++w) {
        std::size_t best = w;
        for (std::size_t v : WS) {
          const std::size_t x = W.multiply(w, v);
          if (W[x].length() < W[best].length()) best = x;
        }
        brute.insert(best);
      }
      CHECK(std::set<std::size_t>(reps.begin(), reps.end()) == brute);
      for (std::size_t w = 0; w < W.size(); ++w) {
        const auto f = coset_factorize(W, w, S);
        CHECK(W.multiply(f.u, f.v) == w);
        CHECK(W[f.u].length() + W[f.v].length() == W[w].length());
        CHECK(std::find(reps.begin(), reps.end(), f.u) != reps.end());
        CHECK(std::find(WS.begin(), WS.end(), f.v) != WS.end());
      }
    }
  }
}

TEST_CASE("coset examples in A2", "[rootsys]") {
  const WeylGroup W(build_root_system('A', 2));
  const auto reps = minimal_coset_reps(W, {0});
  REQUIRE(reps.size() == 3);
  std::multiset<int> lengths;
  for (auto w : reps) lengths.insert(W[w].length());
  CHECK(lengths == std::multiset<int>{0, 1, 2});
  CHECK(minimal_coset_reps(W, {}).size() == 6);
  CHECK(minimal_coset_reps(W, {0, 1}) == std::vector<std::size_t>{W.identity()});
  const auto f = coset_factorize(W, W.simple(0), {0});
  CHECK(f.u == W.identity());
  CHECK(f.v == W.simple(0));
  const auto cells = schubert_cells(W, {0});
  REQUIRE(cells.size() == 3);
  for (std::size_t k = 1; k < cells.size(); ++k) CHECK(cells[k - 1].length <= cells[k].length);
  CHECK(schubert_cells(W, {0, 1}).size() == 1);
  const WeylGroup W1(build_root_system('A', 1));
  const auto c1 = schubert_cells(W1, {});
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].length == 0);
  CHECK(c1[1].length == 1);
}

TEST_CASE("dual weights", "[rootsys]") {
  const WeylGroup A2(build_root_system('A', 2));
  CHECK(A2.dual_weight({1, 0}) == Weight{0, 1});
  CHECK(A2.dual_weight({2, 1}) == Weight{1, 2});
  const WeylGroup A1(build_root_system('A', 1));
  CHECK(A1.dual_weight({1}) == Weight{1});
  const WeylGroup B2(build_root_system('B', 2));
  CHECK(B2.dual_weight({1, 2}) == Weight{1, 2});
}

TEST_CASE("Poisson subgroup descriptor", "[rootsys]") {
  const auto R = build_root_system('A', 2);
  const auto p = poisson_subgroup_descriptor(R, {0});
  CHECK(p.center_dim == 1);
  CHECK(p.roots_S.size() == 1);
  CHECK(p.generators_kS.size() == 4);
  CHECK(p.generators_kS0.size() == 3);
  CHECK(poisson_subgroup_descriptor(R, {0, 1}).center_dim == 0);
  const auto empty = poisson_subgroup_descriptor(R, {});
  CHECK(empty.center_dim == 2);
  CHECK(empty.generators_kS0.empty());
  CHECK(empty.generators_kS.size() == 2);
  CHECK_THROWS_AS(normalize_subset(R, {2}), qflag::ConfigError);
}
