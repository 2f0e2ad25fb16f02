#pragma once

// Test-side reference computations. None of these call into the library: the
// Cartan data, roots, forms and Weyl groups are rebuilt here by different
// algorithms (root strings, Freudenthal recursion, Brauer-Klimyk, brute-force
// group closure) so that agreement with the library is meaningful.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<int>;
using Mat = std::vector<std::vector<int>>;

struct Cartan {
  Mat a;            // a_ij = <alpha_i, alpha_j^vee>
  std::vector<int> d;  // (alpha_i, alpha_i)/2
};

inline Cartan cartan(char type, int rank) {
  Cartan c;
  c.a.assign(rank, std::vector<int>(rank, 0));
  for (int i = 0; i < rank; ++i) c.a[i][i] = 2;
  if (type == 'A') {
    for (int i = 0; i + 1 < rank; ++i) c.a[i][i + 1] = c.a[i + 1][i] = -1;
    c.d.assign(rank, 1);
  } else if (type == 'B') {
    c.a = {{2, -2}, {-1, 2}};
    c.d = {2, 1};
  } else if (type == 'C') {
    c.a = {{2, -1}, {-2, 2}};
    c.d = {1, 2};
  } else {
    c.a = {{2, -1}, {-3, 2}};
    c.d = {1, 3};
  }
  return c;
}

/// Positive roots in simple-root coordinates, grown by root strings.
inline std::vector<Vec> positive_roots(const Cartan& c) {
  const int r = static_cast<int>(c.a.size());
  std::set<Vec> roots;
  std::vector<Vec> layer;
  for (int i = 0; i < r; ++i) {
    Vec e(r, 0);
    e[i] = 1;
    roots.insert(e);
    layer.push_back(e);
  }
  while (!layer.empty()) {
    std::vector<Vec> next;
    for (const auto& beta : layer)
      for (int i = 0; i < r; ++i) {
        int pairing = 0;
        for (int k = 0; k < r; ++k) pairing += beta[k] * c.a[k][i];
        int p = 0;
        Vec down = beta;
        while (true) {
          down[i] -= 1;
          if (!roots.count(down)) break;
          ++p;
        }
        if (p - pairing > 0) {
          Vec up = beta;
          up[i] += 1;
          if (roots.insert(up).second) next.push_back(up);
        }
      }
    layer = std::move(next);
  }
  return {roots.begin(), roots.end()};
}

/// Gram matrix of the fundamental weights: (w_i, w_j) = (A^{-1})_ij d_j.
inline std::vector<std::vector<mpq_class>> weight_form(const Cartan& c) {
  const int r = static_cast<int>(c.a.size());
  std::vector<std::vector<mpq_class>> m(r, std::vector<mpq_class>(2 * r));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) m[i][j] = c.a[i][j];
    m[i][r + i] = 1;
  }
  for (int col = 0; col < r; ++col) {
    int p = col;
    while (m[p][col] == 0) ++p;
    std::swap(m[p], m[col]);
    const mpq_class inv = 1 / m[col][col];
    for (auto& x : m[col]) x *= inv;
    for (int row = 0; row < r; ++row)
      if (row != col && m[row][col] != 0) {
        const mpq_class f = m[row][col];
        for (int k = 0; k < 2 * r; ++k) m[row][k] -= f * m[col][k];
      }
  }
  std::vector<std::vector<mpq_class>> g(r, std::vector<mpq_class>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) g[i][j] = m[i][r + j] * c.d[j];
  return g;
}

inline mpq_class pair(const std::vector<std::vector<mpq_class>>& g, const Vec& x, const Vec& y) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += g[i][j] * x[i] * y[j];
  return s;
}

inline Vec to_fundamental(const Cartan& c, const Vec& simple) {
  const int r = static_cast<int>(c.a.size());
  Vec f(r, 0);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k) f[j] += simple[k] * c.a[k][j];
  return f;
}

inline Vec rho(int r) { return Vec(r, 1); }

inline Vec vadd(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

/// Weyl dimension formula.
inline long weyl_dimension(const Cartan& c, const Vec& lambda) {
  const auto g = weight_form(c);
  const int r = static_cast<int>(c.a.size());
  mpq_class num = 1, den = 1;
  for (const auto& beta : positive_roots(c)) {
    const Vec b = to_fundamental(c, beta);
    num *= pair(g, vadd(lambda, rho(r)), b);
    den *= pair(g, rho(r), b);
  }
  const mpq_class v = num / den;
  return v.get_num().get_si();
}

/// Weight multiplicities of V(lambda) by Freudenthal's recursion.
inline std::map<Vec, long> character(const Cartan& c, const Vec& lambda) {
  const int r = static_cast<int>(c.a.size());
  const auto g = weight_form(c);
  std::vector<Vec> pos;
  for (const auto& beta : positive_roots(c)) pos.push_back(to_fundamental(c, beta));
  std::map<Vec, long> mult{{lambda, 1}};
  const Vec lr = vadd(lambda, rho(r));
  const mpq_class top = pair(g, lr, lr);
  // Walk down by height in the simple-root basis.
  std::vector<Vec> layer{lambda};
  std::set<Vec> seen{lambda};
  while (!layer.empty()) {
    std::set<Vec> cand;
    for (const auto& mu : layer)
      for (int i = 0; i < r; ++i) {
        Vec nu = mu;
        for (int j = 0; j < r; ++j) nu[j] -= c.a[i][j];
        if (!seen.count(nu)) cand.insert(nu);
      }
    std::vector<Vec> next;
    for (const auto& mu : cand) {
      const Vec mr = vadd(mu, rho(r));
      const mpq_class denom = top - pair(g, mr, mr);
      if (denom == 0) continue;
      mpq_class s = 0;
      for (const auto& a : pos) {
        Vec x = mu;
        for (int k = 1; k <= 24; ++k) {
          x = vadd(x, a);
          auto it = mult.find(x);
          if (it != mult.end()) s += mpq_class(it->second) * pair(g, x, a);
        }
      }
      const mpq_class m = 2 * s / denom;
      seen.insert(mu);
      if (m == 0) continue;
      mult[mu] = m.get_num().get_si();
      next.push_back(mu);
    }
    layer = std::move(next);
  }
  return mult;
}

/// Reflect x + rho into the dominant chamber; returns (sign, dominant - rho) or sign 0 on a wall.
inline std::pair<int, Vec> dot_dominant(const Cartan& c, Vec x) {
  const int r = static_cast<int>(c.a.size());
  for (auto& v : x) v += 1;
  int sign = 1;
  while (true) {
    int i = 0;
    while (i < r && x[i] > 0) ++i;
    if (i == r) break;
    if (x[i] == 0) return {0, {}};
    const int xi = x[i];
    for (int j = 0; j < r; ++j) x[j] -= xi * c.a[i][j];
    sign = -sign;
  }
  for (auto& v : x) v -= 1;
  return {sign, x};
}

/// Brauer-Klimyk tensor product multiplicities.
inline std::map<Vec, long> tensor_multiplicities(const Cartan& c, const Vec& l1, const Vec& l2) {
  std::map<Vec, long> out;
  for (const auto& [nu, m] : character(c, l2)) {
    auto [sign, dom] = dot_dominant(c, vadd(l1, nu));
    if (sign == 0) continue;
    out[dom] += sign * m;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

/// Weyl group by brute-force closure of simple reflection matrices, with BFS lengths.
struct Group {
  std::vector<Mat> elements;
  std::vector<int> length;
  std::map<Mat, std::size_t> index;
};

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat reflection(const Cartan& c, int i) {
  const std::size_t n = c.a.size();
  Mat m(n, std::vector<int>(n, 0));
  for (std::size_t j = 0; j < n; ++j) m[j][j] = 1;
  for (std::size_t j = 0; j < n; ++j) m[j][i] -= c.a[i][j];
  return m;
}

inline Group weyl_group(const Cartan& c) {
  const std::size_t n = c.a.size();
  Group g;
  Mat id(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  g.elements.push_back(id);
  g.length.push_back(0);
  g.index[id] = 0;
  for (std::size_t k = 0; k < g.elements.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      Mat m = matmul(g.elements[k], reflection(c, static_cast<int>(i)));
      if (g.index.count(m)) continue;
      g.index[m] = g.elements.size();
      g.elements.push_back(m);
      g.length.push_back(g.length[k] + 1);
    }
  return g;
}

/// Symbolic coproduct of a generator word: list of (left word, right word).
/// Generators are encoded as (kind, index) with kind 0=E, 1=F, 2=K, 3=K^{-1}.
using Word = std::vector<std::pair<int, int>>;

inline std::vector<std::pair<Word, Word>> coproduct(const Word& w) {
  std::vector<std::pair<Word, Word>> terms{{{}, {}}};
  for (const auto& [kind, i] : w) {
    std::vector<std::pair<Word, Word>> next;
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> parts;
    const std::pair<int, int> one{-1, -1};
    switch (kind) {
      case 0: parts = {{{0, i}, one}, {{2, i}, {0, i}}}; break;
      case 1: parts = {{{1, i}, {3, i}}, {one, {1, i}}}; break;
      case 2: parts = {{{2, i}, {2, i}}}; break;
      default: parts = {{{3, i}, {3, i}}}; break;
    }
    for (const auto& [l, r] : terms)
      for (const auto& [pl, pr] : parts) {
        Word nl = l, nr = r;
        if (pl.first >= 0) nl.push_back(pl);
        if (pr.first >= 0) nr.push_back(pr);
        next.emplace_back(std::move(nl), std::move(nr));
      }
    terms = std::move(next);
  }
  return terms;
}

/// Classical branching: dimension of the vectors in V(lambda) fixed by the Levi
/// subalgebra of S (mode 0: together with the whole torus, i.e. weight 0;
/// mode 1: only the semisimple part and the torus directions in S). Uses
/// m(nu) = sum_{w in W_S} sign(w) mult_lambda(nu + rho - w rho).
inline long levi_invariants(const Cartan& c, const Vec& lambda, const std::vector<int>& S, int mode) {
  const int r = static_cast<int>(c.a.size());
  const auto mult = character(c, lambda);
  // W_S by closure, with signs.
  std::vector<std::pair<Mat, int>> ws;
  std::set<Mat> seen;
  Mat id(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i) id[i][i] = 1;
  ws.push_back({id, 1});
  seen.insert(id);
  for (std::size_t k = 0; k < ws.size(); ++k)
    for (int i : S) {
      Mat m = matmul(reflection(c, i), ws[k].first);
      if (seen.insert(m).second) ws.push_back({m, -ws[k].second});
    }
  auto levi_mult = [&](const Vec& nu) {
    long s = 0;
    for (const auto& [m, sign] : ws) {
      Vec x = nu;
      for (int j = 0; j < r; ++j) {
        int wr = 0;
        for (int k = 0; k < r; ++k) wr += m[j][k];
        x[j] += 1 - wr;
      }
      auto it = mult.find(x);
      if (it != mult.end()) s += sign * it->second;
    }
    return s;
  };
  if (mode == 0) return levi_mult(Vec(r, 0));
  long total = 0;
  for (const auto& [nu, m] : mult) {
    bool ok = true;
    for (int j : S) ok = ok && nu[j] == 0;
    if (ok) total += levi_mult(nu);
  }
  return total;
}

}  // namespace oracle
