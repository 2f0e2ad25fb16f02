#include "qflag/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

#include "qflag/errors.hpp"

namespace qflag::rootsys {

char type_letter(CartanType t) {
  switch (t) {
    case CartanType::A: return 'A';
    case CartanType::B: return 'B';
    case CartanType::C: return 'C';
    case CartanType::G: return 'G';
  }
  return '?';
}

std::string RootSystem::label() const { return std::string(1, type_letter(type)) + std::to_string(rank); }

Weight RootSystem::fundamental_weight(int i) const {
  Weight w = zero();
  w[static_cast<std::size_t>(i)] = 1;
  return w;
}

std::vector<Rational> RootSystem::root_coords(const Weight& mu) const {
  // m = A^T c
  const auto n = static_cast<std::size_t>(rank);
  QMatrix At(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) At(j, i) = cartan[i][j];
  QMatrix m(n, 1);
  for (std::size_t i = 0; i < n; ++i) m(i, 0) = mu[i];
  auto c = solve(At, m);
  if (!c) throw InternalError("singular Cartan matrix");
  return c->col(0);
}

Rational RootSystem::form(const Weight& a, const Weight& b) const {
  const auto c = root_coords(b);
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += Rational(a[j] * d[j]) * c[j];
  return s;
}

Weight RootSystem::reflect(const Weight& mu, int i) const {
  Weight out = mu;
  const int mi = mu[static_cast<std::size_t>(i)];
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= mi * cartan[static_cast<std::size_t>(i)][j];
  return out;
}

bool RootSystem::is_dominant(const Weight& mu) const {
  return std::all_of(mu.begin(), mu.end(), [](int m) { return m >= 0; });
}

bool RootSystem::dominance_leq(const Weight& mu, const Weight& lambda) const {
  for (const auto& c : root_coords(sub(lambda, mu)))
    if (c < 0 || c.get_den() != 1) return false;
  return true;
}

bool RootSystem::is_root(const Weight& mu) const {
  const Weight neg = negate(mu);
  for (const auto& beta : positive_roots)
    if (beta == mu || beta == neg) return true;
  return false;
}

namespace {

IntMatrix cartan_for(char type, int rank, std::vector<int>& d) {
  IntMatrix a(static_cast<std::size_t>(rank), std::vector<int>(static_cast<std::size_t>(rank), 0));
  for (int i = 0; i < rank; ++i) a[i][i] = 2;
  switch (type) {
    case 'A':
      for (int i = 0; i + 1 < rank; ++i) a[i][i + 1] = a[i + 1][i] = -1;
      d.assign(static_cast<std::size_t>(rank), 1);
      break;
    case 'B':  // alpha_1 long
      a[0][1] = -2;
      a[1][0] = -1;
      d = {2, 1};
      break;
    case 'C':  // alpha_2 long
      a[0][1] = -1;
      a[1][0] = -2;
      d = {1, 2};
      break;
    case 'G':  // alpha_1 short
      a[0][1] = -1;
      a[1][0] = -3;
      d = {1, 3};
      break;
  }
  return a;
}

}  // namespace

RootSystem build_root_system(char type, int rank) {
  type = static_cast<char>(std::toupper(static_cast<unsigned char>(type)));
  const bool ok = (type == 'A' && rank >= 1 && rank <= 4) ||
                  ((type == 'B' || type == 'C' || type == 'G') && rank == 2);
  if (!ok)
    throw ConfigError("unsupported root system " + std::string(1, type) + std::to_string(rank) +
                      " (supported: A1-A4, B2, C2, G2)");
  RootSystem R;
  R.type = type == 'A' ? CartanType::A : type == 'B' ? CartanType::B
         : type == 'C' ? CartanType::C : CartanType::G;
  R.rank = rank;
  R.cartan = cartan_for(type, rank, R.d);

  // Reflection closure in simple-root coordinates.
  const auto n = static_cast<std::size_t>(rank);
  auto pairing = [&](const Weight& c, std::size_t i) {
    int s = 0;
    for (std::size_t k = 0; k < n; ++k) s += c[k] * R.cartan[k][i];
    return s;
  };
  std::set<Weight> seen;
  std::deque<Weight> queue;
  for (std::size_t i = 0; i < n; ++i) {
    Weight e(n, 0);
    e[i] = 1;
    seen.insert(e);
    queue.push_back(e);
  }
  while (!queue.empty()) {
    Weight beta = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      Weight img = beta;
      img[i] -= pairing(beta, i);
      const bool positive = std::all_of(img.begin(), img.end(), [](int x) { return x >= 0; });
      if (positive && seen.insert(img).second) queue.push_back(img);
    }
  }
  std::vector<Weight> simple_coords(seen.begin(), seen.end());
  std::sort(simple_coords.begin(), simple_coords.end(), [](const Weight& a, const Weight& b) {
    int ha = 0, hb = 0;
    for (int x : a) ha += x;
    for (int x : b) hb += x;
    return ha != hb ? ha < hb : a > b;
  });
  for (const auto& c : simple_coords) {
    Weight f(n, 0);
    for (std::size_t j = 0; j < n; ++j) f[j] = pairing(c, j);
    R.positive_roots.push_back(f);
    R.positive_roots_simple.push_back(c);
  }
  return R;
}

RootSystem build_root_system(const std::string& label) {
  if (label.size() < 2) throw ConfigError("bad root system label '" + label + "'");
  int rank = 0;
  try {
    rank = std::stoi(label.substr(1));
  } catch (const std::exception&) {
    throw ConfigError("bad root system label '" + label + "'");
  }
  return build_root_system(label[0], rank);
}

Weight add(const Weight& a, const Weight& b) {
  Weight out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Weight sub(const Weight& a, const Weight& b) {
  Weight out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Weight scale(const Weight& a, int k) {
  Weight out = a;
  for (auto& x : out) x *= k;
  return out;
}

Weight negate(const Weight& a) { return scale(a, -1); }

std::string to_string(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ')';
  return os.str();
}

bool operator==(const WeylElement& a, const WeylElement& b) { return a.action == b.action; }

namespace {

IntMatrix reflection_matrix(const RootSystem& R, int i) {
  const auto n = static_cast<std::size_t>(R.rank);
  IntMatrix m(n, std::vector<int>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    m[j][j] = 1;
    m[j][static_cast<std::size_t>(i)] -= R.cartan[static_cast<std::size_t>(i)][j];
  }
  return m;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size();
  IntMatrix c(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Weight apply(const IntMatrix& m, const Weight& mu) {
  Weight out(mu.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j) out[i] += m[i][j] * mu[j];
  return out;
}

}  // namespace

WeylGroup::WeylGroup(const RootSystem& R) : R_(R) {
  const auto n = static_cast<std::size_t>(R.rank);
  std::vector<IntMatrix> refl;
  for (int i = 0; i < R.rank; ++i) refl.push_back(reflection_matrix(R, i));

  IntMatrix id(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  elements_.push_back({{}, id});
  index_[id] = 0;

  // Level-by-level: the lexicographically smallest reduced word of s_i w is
  // the minimum over left descents i of [i] + word(s_i w).
  std::size_t level_begin = 0;
  while (true) {
    const std::size_t level_end = elements_.size();
    std::map<IntMatrix, std::vector<int>> next;
    for (std::size_t k = level_begin; k < level_end; ++k)
      for (int i = 0; i < R.rank; ++i) {
        IntMatrix m = matmul(refl[static_cast<std::size_t>(i)], elements_[k].action);
        if (index_.count(m)) continue;
        std::vector<int> word{i};
        word.insert(word.end(), elements_[k].word.begin(), elements_[k].word.end());
        auto it = next.find(m);
        if (it == next.end() || word < it->second) next[m] = word;
      }
    if (next.empty()) break;
    std::vector<WeylElement> level;
    for (auto& [m, w] : next) level.push_back({w, m});
    std::sort(level.begin(), level.end(),
              [](const WeylElement& a, const WeylElement& b) { return a.word < b.word; });
    for (auto& e : level) {
      index_[e.action] = elements_.size();
      elements_.push_back(std::move(e));
    }
    level_begin = level_end;
  }
  for (int i = 0; i < R.rank; ++i) simple_.push_back(index_.at(refl[static_cast<std::size_t>(i)]));
}

std::size_t WeylGroup::index_of(const IntMatrix& action) const {
  auto it = index_.find(action);
  if (it == index_.end()) throw InternalError("matrix is not a Weyl group element");
  return it->second;
}

std::size_t WeylGroup::from_word(const std::vector<int>& word) const {
  std::size_t w = identity();
  for (int i : word) {
    if (i < 0 || i >= R_.rank) throw ConfigError("reflection index out of range in word");
    w = multiply(w, simple(i));
  }
  return w;
}

std::size_t WeylGroup::multiply(std::size_t a, std::size_t b) const {
  return index_of(matmul(elements_[a].action, elements_[b].action));
}

std::size_t WeylGroup::inverse(std::size_t a) const {
  std::vector<int> w = elements_[a].word;
  std::reverse(w.begin(), w.end());
  return from_word(w);
}

int WeylGroup::inversion_count(std::size_t a) const {
  int count = 0;
  for (const auto& beta : R_.positive_roots) {
    const auto c = R_.root_coords(act(a, beta));
    if (std::any_of(c.begin(), c.end(), [](const Rational& x) { return x < 0; })) ++count;
  }
  return count;
}

Weight WeylGroup::act(std::size_t a, const Weight& mu) const { return apply(elements_[a].action, mu); }

bool WeylGroup::is_reduced(const std::vector<int>& word) const {
  return elements_[from_word(word)].length() == static_cast<int>(word.size());
}

std::vector<std::vector<int>> WeylGroup::reduced_words(std::size_t a) const {
  if (elements_[a].length() == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int i = 0; i < R_.rank; ++i) {
    const std::size_t b = multiply(simple(i), a);
    if (elements_[b].length() >= elements_[a].length()) continue;
    for (auto& tail : reduced_words(b)) {
      std::vector<int> w{i};
      w.insert(w.end(), tail.begin(), tail.end());
      out.push_back(std::move(w));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Weight WeylGroup::dual_weight(const Weight& lambda) const { return negate(act(longest(), lambda)); }

Subset normalize_subset(const RootSystem& R, Subset S) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (int i : S)
    if (i < 0 || i >= R.rank) throw ConfigError("subset index out of range for " + R.label());
  return S;
}

Subset complement(const RootSystem& R, const Subset& S) {
  Subset out;
  for (int i = 0; i < R.rank; ++i)
    if (!contains(S, i)) out.push_back(i);
  return out;
}

bool contains(const Subset& S, int i) { return std::find(S.begin(), S.end(), i) != S.end(); }

std::vector<std::size_t> minimal_coset_reps(const WeylGroup& W, const Subset& S) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < W.size(); ++w) {
    bool minimal = true;
    for (int i : S)
      if (W[W.multiply(w, W.simple(i))].length() < W[w].length()) minimal = false;
    if (minimal) out.push_back(w);
  }
  return out;  // elements are already ordered by (length, word)
}

std::vector<std::size_t> parabolic_subgroup(const WeylGroup& W, const Subset& S) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < W.size(); ++w)
    if (std::all_of(W[w].word.begin(), W[w].word.end(), [&](int i) { return contains(S, i); }))
      out.push_back(w);
  return out;
}

CosetFactorization coset_factorize(const WeylGroup& W, std::size_t w, const Subset& S) {
  std::size_t u = w;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i : S) {
      const std::size_t us = W.multiply(u, W.simple(i));
      if (W[us].length() < W[u].length()) {
        u = us;
        changed = true;
      }
    }
  }
  return {u, W.multiply(W.inverse(u), w)};
}

std::vector<SchubertCell> schubert_cells(const WeylGroup& W, const Subset& S) {
  std::vector<SchubertCell> out;
  for (std::size_t w : minimal_coset_reps(W, S)) out.push_back({w, W[w].word, W[w].length()});
  return out;
}

PoissonDescriptor poisson_subgroup_descriptor(const RootSystem& R, const Subset& S_in) {
  PoissonDescriptor p;
  p.S = normalize_subset(R, S_in);
  for (const auto& c : R.positive_roots_simple) {
    bool inside = true;
    for (int i = 0; i < R.rank; ++i)
      if (c[static_cast<std::size_t>(i)] != 0 && !contains(p.S, i)) inside = false;
    if (inside) p.roots_S.push_back(c);
  }
  for (int i = 0; i < R.rank; ++i) p.generators_kS.push_back("K" + std::to_string(i + 1) + "^{+-1}");
  for (int j : p.S) {
    p.generators_kS.push_back("X" + std::to_string(j + 1) + "^+");
    p.generators_kS.push_back("X" + std::to_string(j + 1) + "^-");
    p.generators_kS0.push_back("K" + std::to_string(j + 1) + "^{+-1}");
    p.generators_kS0.push_back("X" + std::to_string(j + 1) + "^+");
    p.generators_kS0.push_back("X" + std::to_string(j + 1) + "^-");
  }
  p.center_dim = R.rank - static_cast<int>(p.S.size());
  p.statement = "connected subgroups K with K_S0 <= K <= K_S are Poisson-Lie subgroups; they "
                "correspond to subtori of the central torus of K_S, of dimension " +
                std::to_string(p.center_dim);
  return p;
}

}  // namespace qflag::rootsys
