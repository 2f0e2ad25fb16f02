#include "qflag/repengine.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "qflag/errors.hpp"

namespace qflag::repengine {

using uqmod::Gen;

// ---------------------------------------------------------------------------
// Rank one

std::string to_string(const Rank1Monomial& m) {
  std::ostringstream os;
  auto part = [&](const char* name, int e) {
    if (e == 0) return;
    os << name;
    if (e > 1) os << "^" << e;
  };
  part(m.raising ? "L++" : "L--", m.a);
  part("L-+", m.b);
  part("L+-", m.c);
  const std::string s = os.str();
  return s.empty() ? "1" : s;
}

std::vector<Rank1Monomial> rank1_basis(int D) {
  std::vector<Rank1Monomial> out;
  for (int deg = 0; deg <= D; ++deg)
    for (int raising = 0; raising < 2; ++raising)
      for (int a = raising; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b) out.push_back({raising == 1, a, b, deg - a - b});
  return out;
}

namespace {

// Tensor powers of the fundamental U_q(sl2)-module, shared per q.
class Sl2Powers {
 public:
  explicit Sl2Powers(const Rational& q) : R_(rootsys::build_root_system('A', 1)), q_(q) {
    powers_.push_back(uqmod::GradedModule());  // placeholder for n = 0
    powers_.push_back(uqmod::build_irreducible(R_, q_, {1}));
  }
  const uqmod::GradedModule& power(int n) {
    while (static_cast<int>(powers_.size()) <= n) {
      uqmod::GradedModule next = uqmod::tensor(powers_.back(), powers_[1]);
      powers_.push_back(std::move(next));
    }
    return powers_[static_cast<std::size_t>(n)];
  }

 private:
  rootsys::RootSystem R_;
  Rational q_;
  std::vector<uqmod::GradedModule> powers_;
};

std::mutex g_rank1_mu;

Sl2Powers& sl2_powers(const Rational& q) {
  static std::map<std::string, std::unique_ptr<Sl2Powers>> cache;
  auto& slot = cache[q.get_str()];
  if (!slot) slot = std::make_unique<Sl2Powers>(q);
  return *slot;
}

// Legs of a monomial as (row, column) pairs, 0 = +, 1 = -.
std::vector<std::pair<int, int>> legs(const Rank1Monomial& m) {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < m.a; ++k) out.push_back(m.raising ? std::pair{0, 0} : std::pair{1, 1});
  for (int k = 0; k < m.b; ++k) out.emplace_back(1, 0);
  for (int k = 0; k < m.c; ++k) out.emplace_back(0, 1);
  return out;
}

Rational counit_of(const Monomial& X) {
  for (const auto& g : X)
    if (g.kind == Gen::E || g.kind == Gen::F) return 0;
  return 1;
}

Rational evaluate_rank1_locked(const Rational& q, const Rank1Monomial& m, const Monomial& X) {
  const auto L = legs(m);
  if (L.empty()) return counit_of(X);
  const auto& T = sl2_powers(q).power(static_cast<int>(L.size()));
  std::size_t row = 0, col = 0;
  for (const auto& [r, c] : L) {
    row = 2 * row + static_cast<std::size_t>(r);
    col = 2 * col + static_cast<std::size_t>(c);
  }
  QVector e(T.dim());
  e[col] = 1;
  return T.apply(X, e)[row];
}

Monomial pbw_word(int a, int b, int c, int index) {
  Monomial X;
  for (int k = 0; k < a; ++k) X.push_back({Gen::F, index});
  for (int k = 0; k < std::abs(b); ++k) X.push_back({b > 0 ? Gen::K : Gen::Kinv, index});
  for (int k = 0; k < c; ++k) X.push_back({Gen::E, index});
  return X;
}

// Evaluation system of the monomial basis on F^a K^b E^c; a square
// invertible subsystem is selected once per (q, D).
struct Rank1Solver {
  std::vector<Rank1Monomial> basis;
  std::vector<std::array<int, 3>> equations;
  QMatrix M;
  std::vector<std::size_t> pivot_rows;
  QMatrix inverse;
};

const Rank1Solver& rank1_solver(const Rational& q, int D) {
  static std::map<std::pair<std::string, int>, std::unique_ptr<Rank1Solver>> cache;
  auto& slot = cache[{q.get_str(), D}];
  if (slot) return *slot;
  auto s = std::make_unique<Rank1Solver>();
  s->basis = rank1_basis(D);
  for (int a = 0; a <= D; ++a)
    for (int c = 0; c <= D; ++c)
      for (int b = -D - 1; b <= D + 1; ++b) s->equations.push_back({a, b, c});
  s->M = QMatrix(s->equations.size(), s->basis.size());
  for (std::size_t r = 0; r < s->equations.size(); ++r) {
    const auto& [a, b, c] = s->equations[r];
    const Monomial X = pbw_word(a, b, c, 0);
    for (std::size_t k = 0; k < s->basis.size(); ++k) s->M(r, k) = evaluate_rank1_locked(q, s->basis[k], X);
  }
  const RowEchelon ech = rref(s->M.transpose());
  if (ech.pivots.size() != s->basis.size())
    throw InternalError("rank-one evaluation system is rank deficient at degree " + std::to_string(D));
  s->pivot_rows = ech.pivots;
  QMatrix sq(s->basis.size(), s->basis.size());
  for (std::size_t r = 0; r < s->pivot_rows.size(); ++r)
    for (std::size_t k = 0; k < s->basis.size(); ++k) sq(r, k) = s->M(s->pivot_rows[r], k);
  s->inverse = qflag::inverse(sq);
  slot = std::move(s);
  return *slot;
}

// Solves for the expansion given the values of the functional on every equation.
Rank1Element solve_rank1(const Rank1Solver& s, const std::vector<Rational>& rhs) {
  const std::size_t n = s.basis.size();
  QVector x(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t r = 0; r < n; ++r)
      if (s.inverse(k, r) != 0 && rhs[s.pivot_rows[r]] != 0) x[k] += s.inverse(k, r) * rhs[s.pivot_rows[r]];
  for (std::size_t r = 0; r < s.equations.size(); ++r) {
    Rational v = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (x[k] != 0 && s.M(r, k) != 0) v += s.M(r, k) * x[k];
    if (v != rhs[r]) throw InternalError("rank-one expansion is inconsistent");
  }
  Rank1Element out;
  for (std::size_t k = 0; k < n; ++k)
    if (x[k] != 0) out[s.basis[k]] = x[k];
  return out;
}

int string_degree(const QuantumGroup& G, const Weight& lambda, int i) {
  const auto& V = G.irrep(lambda);
  int D = 0;
  for (std::size_t k = 0; k < V.dim(); ++k) D = std::max(D, V.weight(k)[static_cast<std::size_t>(i)]);
  return D;
}

void check_index(const QuantumGroup& G, int i) {
  if (i < 0 || i >= G.roots().rank)
    throw ConfigError("simple root index " + std::to_string(i + 1) + " out of range");
}

}  // namespace

Rational evaluate_rank1(const Rational& q, const Rank1Monomial& m, const Monomial& X) {
  std::lock_guard<std::mutex> lock(g_rank1_mu);
  return evaluate_rank1_locked(q, m, X);
}

Rank1Element phi_star_expand(const QuantumGroup& G, const FunElem& a, int i) {
  check_index(G, i);
  int D = 0;
  for (const auto& [lambda, C] : a.components()) D = std::max(D, string_degree(G, lambda, i));
  std::lock_guard<std::mutex> lock(g_rank1_mu);
  const Rank1Solver& s = rank1_solver(G.qi(i), D);
  std::vector<Rational> rhs;
  for (const auto& [p, b, c] : s.equations) rhs.push_back(funalg::evaluate(G, a, pbw_word(p, b, c, i)));
  return solve_rank1(s, rhs);
}

// ---------------------------------------------------------------------------
// Truncated operators

namespace {

std::size_t ipow(int N, int l) {
  std::size_t d = 1;
  for (int k = 0; k < l; ++k) d *= static_cast<std::size_t>(N);
  return d;
}

// Target of source index x under a shift, or -1 when it leaves the box.
long shifted(std::size_t x, const std::vector<int>& shift, int N) {
  long target = 0, stride = 1;
  for (int m = static_cast<int>(shift.size()) - 1; m >= 0; --m) {
    const long c = static_cast<long>(x % static_cast<std::size_t>(N));
    x /= static_cast<std::size_t>(N);
    const long t = c + shift[static_cast<std::size_t>(m)];
    if (t < 0 || t >= N) return -1;
    target += t * stride;
    stride *= N;
  }
  return target;
}

std::vector<long> shift_table(std::size_t dim, const std::vector<int>& shift, int N) {
  std::vector<long> out(dim);
  for (std::size_t x = 0; x < dim; ++x) out[x] = shifted(x, shift, N);
  return out;
}

}  // namespace

TruncatedOp::TruncatedOp(int N, int l) : N_(N), l_(l), dim_(ipow(N, l)) {
  if (N < 1 || l < 0) throw ConfigError("invalid truncation");
}

TruncatedOp TruncatedOp::identity(int N, int l) {
  TruncatedOp I(N, l);
  I.band(std::vector<int>(static_cast<std::size_t>(l), 0)).assign(I.dim_, 1.0);
  return I;
}

std::vector<cd>& TruncatedOp::band(const std::vector<int>& shift) {
  auto it = bands_.find(shift);
  if (it == bands_.end()) it = bands_.emplace(shift, std::vector<cd>(dim_, 0.0)).first;
  return it->second;
}

void TruncatedOp::add(const std::vector<int>& shift, std::size_t source, cd value) {
  if (shifted(source, shift, N_) < 0) return;
  band(shift)[source] += value;
}

TruncatedOp& TruncatedOp::operator+=(const TruncatedOp& o) {
  if (o.N_ != N_ || o.l_ != l_) throw InternalError("operator shape mismatch");
  for (const auto& [s, d] : o.bands_) {
    auto& mine = band(s);
    for (std::size_t x = 0; x < dim_; ++x) mine[x] += d[x];
  }
  return *this;
}

TruncatedOp& TruncatedOp::operator*=(cd s) {
  for (auto& [sh, d] : bands_)
    for (auto& v : d) v *= s;
  return *this;
}

TruncatedOp TruncatedOp::adjoint() const {
  TruncatedOp out(N_, l_);
  for (const auto& [s, d] : bands_) {
    std::vector<int> neg(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) neg[m] = -s[m];
    auto& od = out.band(neg);
    for (std::size_t x = 0; x < dim_; ++x) {
      if (d[x] == 0.0) continue;
      od[static_cast<std::size_t>(shifted(x, s, N_))] = std::conj(d[x]);
    }
  }
  return out;
}

TruncatedOp TruncatedOp::compose(const TruncatedOp& o) const {
  if (o.N_ != N_ || o.l_ != l_) throw InternalError("operator shape mismatch");
  TruncatedOp out(N_, l_);
  for (const auto& [sb, db] : o.bands_) {
    const auto tb = shift_table(dim_, sb, N_);
    for (const auto& [sa, da] : bands_) {
      std::vector<int> s(sa.size());
      for (std::size_t m = 0; m < s.size(); ++m) s[m] = sa[m] + sb[m];
      auto& od = out.band(s);
      for (std::size_t x = 0; x < dim_; ++x) {
        if (db[x] == 0.0) continue;
        const long y = tb[x];
        od[x] += da[static_cast<std::size_t>(y)] * db[x];
      }
    }
  }
  return out;
}

std::vector<cd> TruncatedOp::apply(const std::vector<cd>& v) const {
  std::vector<cd> out(dim_, 0.0);
  for (const auto& [s, d] : bands_)
    for (std::size_t x = 0; x < dim_; ++x)
      if (d[x] != 0.0) out[static_cast<std::size_t>(shifted(x, s, N_))] += d[x] * v[x];
  return out;
}

std::vector<cd> TruncatedOp::apply_adjoint(const std::vector<cd>& v) const {
  std::vector<cd> out(dim_, 0.0);
  for (const auto& [s, d] : bands_)
    for (std::size_t x = 0; x < dim_; ++x)
      if (d[x] != 0.0) out[x] += std::conj(d[x]) * v[static_cast<std::size_t>(shifted(x, s, N_))];
  return out;
}

std::vector<std::vector<cd>> TruncatedOp::dense() const {
  std::vector<std::vector<cd>> out(dim_, std::vector<cd>(dim_, 0.0));
  for (const auto& [s, d] : bands_)
    for (std::size_t x = 0; x < dim_; ++x)
      if (d[x] != 0.0) out[static_cast<std::size_t>(shifted(x, s, N_))][x] += d[x];
  return out;
}

cd TruncatedOp::entry(std::size_t row, std::size_t col) const {
  cd v = 0;
  for (const auto& [s, d] : bands_)
    if (d[col] != 0.0 && shifted(col, s, N_) == static_cast<long>(row)) v += d[col];
  return v;
}

int TruncatedOp::reach() const {
  int r = 0;
  for (const auto& [s, d] : bands_) {
    if (std::all_of(d.begin(), d.end(), [](cd v) { return v == 0.0; })) continue;
    for (int m : s) r = std::max(r, std::abs(m));
  }
  return r;
}

int TruncatedOp::total_reach() const {
  std::vector<int> per(static_cast<std::size_t>(l_), 0);
  for (const auto& [s, d] : bands_) {
    if (std::all_of(d.begin(), d.end(), [](cd v) { return v == 0.0; })) continue;
    for (std::size_t k = 0; k < s.size(); ++k) per[k] = std::max(per[k], std::abs(s[k]));
  }
  return std::accumulate(per.begin(), per.end(), 0);
}

bool TruncatedOp::is_diagonal() const {
  for (const auto& [s, d] : bands_) {
    if (std::all_of(s.begin(), s.end(), [](int m) { return m == 0; })) continue;
    if (std::any_of(d.begin(), d.end(), [](cd v) { return std::abs(v) > 1e-15; })) return false;
  }
  return true;
}

std::vector<int> TruncatedOp::coords(std::size_t k) const {
  std::vector<int> x(static_cast<std::size_t>(l_));
  for (int m = l_ - 1; m >= 0; --m) {
    x[static_cast<std::size_t>(m)] = static_cast<int>(k % static_cast<std::size_t>(N_));
    k /= static_cast<std::size_t>(N_);
  }
  return x;
}

std::size_t TruncatedOp::index(const std::vector<int>& x) const {
  std::size_t k = 0;
  for (int c : x) k = k * static_cast<std::size_t>(N_) + static_cast<std::size_t>(c);
  return k;
}

bool TruncatedOp::interior(std::size_t k, int margin) const {
  for (int m = 0; m < l_; ++m) {
    if (static_cast<int>(k % static_cast<std::size_t>(N_)) >= N_ - margin) return false;
    k /= static_cast<std::size_t>(N_);
  }
  return true;
}

TruncatedOp kron(const TruncatedOp& a, const TruncatedOp& b) {
  if (a.N() != b.N() && a.l() > 0 && b.l() > 0) throw InternalError("kron of different truncations");
  const int N = a.l() > 0 ? a.N() : b.N();
  TruncatedOp out(N, a.l() + b.l());
  const std::size_t db = b.dim();
  for (const auto& [sa, va] : a.bands())
    for (const auto& [sb, vb] : b.bands()) {
      std::vector<int> s = sa;
      s.insert(s.end(), sb.begin(), sb.end());
      std::vector<cd>* od = nullptr;
      for (std::size_t x = 0; x < a.dim(); ++x) {
        if (va[x] == 0.0) continue;
        for (std::size_t y = 0; y < db; ++y) {
          if (vb[y] == 0.0) continue;
          if (!od) od = &out.band(s);
          (*od)[x * db + y] += va[x] * vb[y];
        }
      }
    }
  return out;
}

TruncatedOp pi_q_generator(LGen g, double q, int N) {
  TruncatedOp op(N, 1);
  for (int j = 0; j < N; ++j) {
    const auto x = static_cast<std::size_t>(j);
    switch (g) {
      case LGen::PP:
        if (j > 0) op.add({-1}, x, std::sqrt(1 - std::pow(q, 2 * j)));
        break;
      case LGen::PM: op.add({0}, x, -std::pow(q, j + 1)); break;
      case LGen::MP: op.add({0}, x, std::pow(q, j)); break;
      case LGen::MM: op.add({1}, x, std::sqrt(1 - std::pow(q, 2 * (j + 1)))); break;
    }
  }
  return op;
}

TruncatedOp pi_q_monomial(const Rank1Monomial& m, double q, int N) {
  // Diagonal part L_{-+}^b L_{+-}^c, then the shift.
  TruncatedOp op(N, 1);
  auto& d = op.band({0});
  for (int j = 0; j < N; ++j) d[static_cast<std::size_t>(j)] = std::pow(q, j * m.b) * std::pow(-std::pow(q, j + 1), m.c);
  const TruncatedOp step = pi_q_generator(m.raising ? LGen::PP : LGen::MM, q, N);
  for (int k = 0; k < m.a; ++k) op = step.compose(op);
  return op;
}

TruncatedOp pi_q_element(const Rank1Element& a, double q, int N) {
  TruncatedOp out(N, 1);
  for (const auto& [m, c] : a) out += pi_q_monomial(m, q, N) * cd(c.get_d());
  return out;
}

// ---------------------------------------------------------------------------
// Spectral utilities

double interior_deviation(const TruncatedOp& a, const TruncatedOp& b, int margin) {
  TruncatedOp diff = a;
  diff += b * cd(-1.0);
  double s = 0;
  for (const auto& [sh, d] : diff.bands())
    for (std::size_t x = 0; x < diff.dim(); ++x) {
      if (d[x] == 0.0 || !diff.interior(x, margin)) continue;
      const long y = shifted(x, sh, diff.N());
      if (diff.interior(static_cast<std::size_t>(y), margin)) s += std::norm(d[x]);
    }
  return std::sqrt(s);
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

constexpr long kDenseLimit = 600;

using SparseC = Eigen::SparseMatrix<cd, Eigen::ColMajor, long>;

// Top-k eigenvalues of M^*M by block Krylov iteration with full
// reorthogonalization and Rayleigh-Ritz. Blocks wider than k resolve repeated
// eigenvalues, which a single Lanczos vector cannot see.
std::vector<double> krylov_top(const SparseC& M, std::size_t k) {
  const long n = M.cols();
  const SparseC Mh = M.adjoint();
  const long block = k == 1 ? 1 : static_cast<long>(k) + 4;
  const long max_dim = std::min<long>(n, std::max<long>(20 * block, 300));
  std::vector<Eigen::VectorXcd> Q, AQ;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss;
  std::vector<Eigen::VectorXcd> pending;
  for (long b = 0; b < block; ++b) {
    Eigen::VectorXcd v(n);
    for (long i = 0; i < n; ++i) v(i) = cd(gauss(rng), gauss(rng));
    pending.push_back(std::move(v));
  }
  Eigen::MatrixXcd H(0, 0);
  std::vector<double> prev;
  int stable = 0;
  while (static_cast<long>(Q.size()) < max_dim && !pending.empty()) {
    std::vector<Eigen::VectorXcd> next;
    for (auto& v : pending) {
      if (static_cast<long>(Q.size()) >= max_dim) break;
      const double n0 = v.norm();
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& qv : Q) v -= qv.dot(v) * qv;
      const double n1 = v.norm();
      if (n1 <= 1e-10 * n0 || n1 == 0) continue;
      v /= n1;
      Q.push_back(v);
      AQ.push_back(Mh * (M * v));
      next.push_back(AQ.back());
    }
    const long m = static_cast<long>(Q.size());
    Eigen::MatrixXcd Hn = Eigen::MatrixXcd::Zero(m, m);
    Hn.topLeftCorner(H.rows(), H.cols()) = H;
    for (long j = H.cols(); j < m; ++j)
      for (long i = 0; i < m; ++i) {
        Hn(i, j) = Q[static_cast<std::size_t>(i)].dot(AQ[static_cast<std::size_t>(j)]);
        Hn(j, i) = std::conj(Hn(i, j));
      }
    H = Hn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(ev.rbegin(), ev.rend());
    ev.resize(std::min(k, ev.size()));
    bool same = prev.size() == ev.size() && ev.size() == std::min<std::size_t>(k, static_cast<std::size_t>(n));
    for (std::size_t i = 0; same && i < ev.size(); ++i)
      same = std::abs(ev[i] - prev[i]) <= 1e-14 * std::max(1e-300, ev[0]);
    stable = same ? stable + 1 : 0;
    prev = ev;
    if (stable >= 2) break;
    pending = std::move(next);
  }
  return prev;
}

}  // namespace

std::vector<double> singular_values(const TruncatedOp& a, int margin, std::size_t k) {
  const std::size_t n = a.dim();
  std::vector<char> inside(n);
  for (std::size_t x = 0; x < n; ++x) inside[x] = a.interior(x, margin);
  struct Entry {
    std::size_t row, col;
    cd value;
  };
  std::vector<Entry> entries;
  UnionFind uf(2 * n);
  for (const auto& [s, d] : a.bands())
    for (std::size_t x = 0; x < n; ++x) {
      if (d[x] == 0.0 || !inside[x]) continue;
      const auto y = static_cast<std::size_t>(shifted(x, s, a.N()));
      if (!inside[y]) continue;
      uf.unite(y, n + x);
      entries.push_back({y, x, d[x]});
    }
  // Local indices of rows and columns inside their component.
  std::map<std::size_t, std::pair<long, long>> comp_dims;
  std::vector<long> row_pos(n, -1), col_pos(n, -1);
  for (const auto& e : entries) {
    auto& [r, c] = comp_dims[uf.find(e.row)];
    if (row_pos[e.row] < 0) row_pos[e.row] = r++;
    if (col_pos[e.col] < 0) col_pos[e.col] = c++;
  }
  std::map<std::size_t, std::vector<Eigen::Triplet<cd, long>>> comp_entries;
  for (const auto& e : entries) comp_entries[uf.find(e.row)].emplace_back(row_pos[e.row], col_pos[e.col], e.value);
  std::vector<double> all;
  for (const auto& [root, trips] : comp_entries) {
    const auto [rows, cols] = comp_dims[root];
    SparseC M(rows, cols);
    M.setFromTriplets(trips.begin(), trips.end());
    if (rows == 1 && cols == 1) {
      all.push_back(std::abs(M.coeff(0, 0)));
    } else if (std::max(rows, cols) <= kDenseLimit) {
      Eigen::MatrixXcd D(M);
      if (rows < cols) D = D.adjoint().eval();
      Eigen::BDCSVD<Eigen::MatrixXcd> bdc(D);
      const auto& sv = bdc.singularValues();
      for (long i = 0; i < sv.size() && static_cast<std::size_t>(i) < k; ++i) all.push_back(sv(i));
    } else {
      for (double e : krylov_top(rows < cols ? SparseC(M.adjoint()) : M, k))
        all.push_back(std::sqrt(std::max(0.0, e)));
    }
  }
  std::sort(all.rbegin(), all.rend());
  if (all.size() > k) all.resize(k);
  while (all.size() < k) all.push_back(0.0);
  return all;
}

double operator_norm(const TruncatedOp& a, int margin) { return singular_values(a, margin, 1)[0]; }

// ---------------------------------------------------------------------------
// pi_w

cd torus_character(const std::vector<cd>& t, const Weight& mu) {
  cd v = 1;
  for (std::size_t i = 0; i < mu.size() && i < t.size(); ++i) v *= std::pow(t[i], mu[i]);
  return v;
}

RepEngine::RepEngine(const QuantumGroup& G) : G_(G) {}

double RepEngine::qi(int i) const { return G_.qi(i).get_d(); }

const std::vector<std::vector<Rank1Element>>& RepEngine::phi_table(const Weight& lambda, int i) const {
  check_index(G_, i);
  const auto key = std::make_pair(lambda, i);
  auto it = phi_cache_.find(key);
  if (it != phi_cache_.end()) return it->second;
  const auto& V = G_.irrep(lambda);
  const std::size_t n = V.dim();
  std::lock_guard<std::mutex> lock(g_rank1_mu);
  const Rank1Solver& s = rank1_solver(G_.qi(i), string_degree(G_, lambda, i));
  // rho(phi_i(X)) for every equation monomial X.
  std::vector<std::vector<QVector>> images;  // [equation][column v]
  for (const auto& [a, b, c] : s.equations) {
    const Monomial X = pbw_word(a, b, c, i);
    std::vector<QVector> cols;
    for (std::size_t v = 0; v < n; ++v) {
      QVector e(n);
      e[v] = 1;
      cols.push_back(V.apply(X, e));
    }
    images.push_back(std::move(cols));
  }
  std::vector<std::vector<Rank1Element>> table(n, std::vector<Rank1Element>(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<Rational> rhs;
      bool any = false;
      for (const auto& cols : images) {
        rhs.push_back(cols[v][u]);
        any = any || cols[v][u] != 0;
      }
      if (any) table[u][v] = solve_rank1(s, rhs);
    }
  return phi_cache_.emplace(key, std::move(table)).first->second;
}

const std::vector<std::vector<TruncatedOp>>& RepEngine::factor_ops(const Weight& lambda, int i, int N) const {
  const auto key = std::make_tuple(lambda, i, N);
  auto it = op_cache_.find(key);
  if (it != op_cache_.end()) return it->second;
  const auto& table = phi_table(lambda, i);
  std::vector<std::vector<TruncatedOp>> ops(table.size());
  for (std::size_t u = 0; u < table.size(); ++u)
    for (std::size_t v = 0; v < table.size(); ++v) ops[u].push_back(pi_q_element(table[u][v], qi(i), N));
  return op_cache_.emplace(key, std::move(ops)).first->second;
}

TruncatedOp RepEngine::pi_component(const Weight& lambda, const CMatrix& C, const std::vector<int>& word,
                                    int N) const {
  const std::size_t n = C.size();
  const int l = static_cast<int>(word.size());
  if (l == 0) {
    TruncatedOp out(N, 0);
    cd tr = 0;
    for (std::size_t u = 0; u < n; ++u) tr += C[u][u];
    out.band({})[0] = tr;
    return out;
  }
  TruncatedOp out(N, l);
  const auto& first = factor_ops(lambda, word[0], N);
  const auto& last = factor_ops(lambda, word[static_cast<std::size_t>(l - 1)], N);
  for (std::size_t u = 0; u < n; ++u) {
    if (std::all_of(C[u].begin(), C[u].end(), [](cd c) { return c == 0.0; })) continue;
    // Right end contracted with row u of C.
    std::vector<TruncatedOp> right(n, TruncatedOp(N, 1));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t v = 0; v < n; ++v)
        if (C[u][v] != 0.0 && !last[k][v].bands().empty()) right[k] += last[k][v] * C[u][v];
    if (l == 1) {
      out += right[u];
      continue;
    }
    std::vector<TruncatedOp> left = first[u];
    for (int m = 1; m + 1 < l; ++m) {
      const auto& mid = factor_ops(lambda, word[static_cast<std::size_t>(m)], N);
      std::vector<TruncatedOp> next(n, TruncatedOp(N, m + 1));
      for (std::size_t k = 0; k < n; ++k) {
        if (left[k].bands().empty()) continue;
        for (std::size_t k2 = 0; k2 < n; ++k2)
          if (!mid[k][k2].bands().empty()) next[k2] += kron(left[k], mid[k][k2]);
      }
      left = std::move(next);
    }
    for (std::size_t k = 0; k < n; ++k)
      if (!left[k].bands().empty() && !right[k].bands().empty()) out += kron(left[k], right[k]);
  }
  return out;
}

TruncatedOp RepEngine::pi_w(const FunElem& a, const std::vector<int>& word, int N) const {
  return pi_wt(a, word, std::vector<cd>(static_cast<std::size_t>(G_.roots().rank), 1.0), N);
}

TruncatedOp RepEngine::pi_wt(const FunElem& a, const std::vector<int>& word, const std::vector<cd>& t,
                             int N) const {
  for (int i : word) check_index(G_, i);
  if (N < 2) throw ConfigError("truncation N must be at least 2");
  TruncatedOp out(N, static_cast<int>(word.size()));
  for (const auto& [lambda, C] : a.components()) {
    const auto& V = G_.irrep(lambda);
    CMatrix Cc(C.rows(), std::vector<cd>(C.cols(), 0.0));
    for (std::size_t u = 0; u < C.rows(); ++u)
      for (std::size_t v = 0; v < C.cols(); ++v)
        if (C(u, v) != 0) Cc[u][v] = C(u, v).get_d() * torus_character(t, V.weight(v));
    out += pi_component(lambda, Cc, word, N);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

CheckReport su2_relations_check(const Rational& q, int N, int margin, double tolerance) {
  CheckReport rep;
  rep.claim = "pi_q satisfies the C_q[SU(2)] relations";
  rep.tolerance = tolerance;
  QuantumGroup G(rootsys::build_root_system('A', 1), q);
  const double qd = q.get_d();
  const LGen gens[4] = {LGen::PP, LGen::PM, LGen::MP, LGen::MM};  // c_{0,0}, c_{0,1}, c_{1,0}, c_{1,1}
  std::vector<FunElem> prods;
  std::vector<TruncatedOp> ops;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      prods.push_back(funalg::multiply(G, funalg::matrix_coefficient(G, {1}, x / 2, x % 2),
                                       funalg::matrix_coefficient(G, {1}, y / 2, y % 2)));
      ops.push_back(pi_q_generator(gens[x], qd, N).compose(pi_q_generator(gens[y], qd, N)));
    }
  prods.push_back(funalg::unit(G));
  ops.push_back(TruncatedOp::identity(N, 1));
  // Coordinates in W(0) + W(2).
  QMatrix M(prods.size(), 10);
  for (std::size_t k = 0; k < prods.size(); ++k) {
    if (const QMatrix* c = prods[k].component({0})) M(k, 0) = (*c)(0, 0);
    if (const QMatrix* c = prods[k].component({2}))
      for (std::size_t e = 0; e < 9; ++e) M(k, 1 + e) = (*c)(e / 3, e % 3);
  }
  const QMatrix rel = nullspace(M.transpose());
  for (std::size_t r = 0; r < rel.cols(); ++r) {
    TruncatedOp sum(N, 1);
    for (std::size_t k = 0; k < prods.size(); ++k)
      if (rel(k, r) != 0) sum += ops[k] * cd(rel(k, r).get_d());
    const double dev = interior_deviation(sum, TruncatedOp(N, 1), margin);
    rep.deviation = std::max(rep.deviation, dev);
  }
  rep.details.push_back(std::to_string(rel.cols()) + " relations");
  rep.pass = rel.cols() > 0 && rep.deviation <= tolerance;
  return rep;
}

CheckReport star_rep_check(const RepEngine& E, const std::vector<FunElem>& samples, const std::vector<int>& word,
                           const std::vector<cd>& t, int N, double tolerance) {
  CheckReport rep;
  rep.claim = "pi(a^*) == pi(a)^dagger";
  rep.tolerance = tolerance;
  for (const auto& a : samples) {
    const TruncatedOp pa = E.pi_wt(a, word, t, N);
    const TruncatedOp ps = E.pi_wt(funalg::star(E.group(), a), word, t, N);
    rep.deviation = std::max(rep.deviation, interior_deviation(ps, pa.adjoint(), 0));
  }
  rep.pass = rep.deviation <= tolerance;
  return rep;
}

CheckReport homomorphism_check(const RepEngine& E, const std::vector<std::pair<FunElem, FunElem>>& pairs,
                               const std::vector<int>& word, int N, double tolerance) {
  CheckReport rep;
  rep.claim = "pi(ab) == pi(a) pi(b)";
  rep.tolerance = tolerance;
  for (const auto& [a, b] : pairs) {
    const TruncatedOp pa = E.pi_w(a, word, N), pb = E.pi_w(b, word, N);
    const TruncatedOp pab = E.pi_w(funalg::multiply(E.group(), a, b), word, N);
    const int margin = pb.reach();
    rep.deviation = std::max(rep.deviation, interior_deviation(pab, pa.compose(pb), margin));
  }
  rep.pass = rep.deviation <= tolerance;
  return rep;
}

std::vector<FunElem> bihomogeneous_samples(const QuantumGroup& G, const std::vector<Weight>& lambdas, int count,
                                           std::uint64_t seed) {
  std::set<std::pair<Weight, Weight>> pairs;
  for (const auto& lambda : lambdas) {
    const auto& V = G.irrep(lambda);
    for (std::size_t u = 0; u < V.dim(); ++u)
      for (std::size_t v = 0; v < V.dim(); ++v) pairs.emplace(V.weight(u), V.weight(v));
  }
  const std::vector<std::pair<Weight, Weight>> pool(pairs.begin(), pairs.end());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::vector<FunElem> out;
  while (static_cast<int>(out.size()) < count) {
    const auto& [left, right] = pool[pick(rng)];
    FunElem a;
    for (const auto& lambda : lambdas) {
      const auto& V = G.irrep(lambda);
      QMatrix C(V.dim(), V.dim());
      for (std::size_t u = 0; u < V.dim(); ++u)
        for (std::size_t v = 0; v < V.dim(); ++v)
          if (V.weight(u) == left && V.weight(v) == right) C(u, v) = coeff(rng);
      a.add_component(lambda, C);
    }
    if (!a.is_zero()) out.push_back(std::move(a));
  }
  return out;
}

WordIndependenceReport reduced_word_independence(const RepEngine& E, const std::vector<int>& word1,
                                                 const std::vector<int>& word2, const std::vector<FunElem>& samples,
                                                 int N, double tolerance) {
  const auto& W = E.group().weyl();
  for (const auto* w : {&word1, &word2})
    for (int i : *w) check_index(E.group(), i);
  if (!W.is_reduced(word1) || !W.is_reduced(word2)) throw DomainError("word is not reduced");
  WordIndependenceReport rep;
  rep.claim = "pi_w independent of the reduced expression";
  for (int level : {N, 2 * N}) {
    double dev = 0;
    if (word1 != word2)
      for (const auto& a : samples) {
        const auto s1 = singular_values(E.pi_w(a, word1, level), 0, 10);
        const auto s2 = singular_values(E.pi_w(a, word2, level), 0, 10);
        for (std::size_t k = 0; k < s1.size(); ++k) dev = std::max(dev, std::abs(s1[k] - s2[k]));
      }
    rep.levels.push_back({level, dev});
  }
  rep.pass = rep.levels[0].deviation <= tolerance &&
             rep.levels[1].deviation <= std::max(rep.levels[0].deviation, 1e-12);
  return rep;
}

std::vector<bool> plucker_vanishing_pattern(const RepEngine& E, const std::vector<int>& word, const Weight& Lambda,
                                            int N) {
  const auto& V = E.group().irrep(Lambda);
  std::vector<bool> bits;
  for (std::size_t k = 0; k < V.dim(); ++k)
    bits.push_back(operator_norm(E.pi_w(funalg::matrix_coefficient(E.group(), Lambda, k, 0), word, N), 0) > 1e-8);
  return bits;
}

IrreducibilityReport irreducibility_diagnostic(const RepEngine& E, const std::vector<int>& word,
                                               const std::vector<FunElem>& generators, int N, int margin,
                                               std::uint64_t seed) {
  IrreducibilityReport rep;
  rep.claim = "pi_w irreducible";
  std::vector<TruncatedOp> ops;
  for (const auto& g : generators) {
    ops.push_back(E.pi_w(g, word, N));
    ops.push_back(ops.back().adjoint());
  }
  const int l = static_cast<int>(word.size());
  const std::size_t dim = ops.empty() ? 1 : ops[0].dim();
  rep.cyclic_target = ipow(std::max(N - margin, 0), l);

  // (i) Krylov span from the vacuum.
  std::vector<std::vector<cd>> basis;
  auto try_add = [&](std::vector<cd> v) {
    double n0 = 0;
    for (auto& e : v) n0 += std::norm(e);
    n0 = std::sqrt(n0);
    if (n0 < 1e-300) return false;
    for (auto& e : v) e /= n0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        cd c = 0;
        for (std::size_t i = 0; i < dim; ++i) c += std::conj(b[i]) * v[i];
        for (std::size_t i = 0; i < dim; ++i) v[i] -= c * b[i];
      }
    double n1 = 0;
    for (auto& e : v) n1 += std::norm(e);
    n1 = std::sqrt(n1);
    if (n1 < 1e-8) return false;
    for (auto& e : v) e /= n1;
    basis.push_back(std::move(v));
    return true;
  };
  std::vector<cd> vac(dim, 0.0);
  vac[0] = 1;
  try_add(vac);
  std::size_t frontier_begin = 0;
  while (frontier_begin < basis.size() && basis.size() < dim) {
    const std::size_t frontier_end = basis.size();
    for (std::size_t k = frontier_begin; k < frontier_end && basis.size() < dim; ++k)
      for (const auto& op : ops) {
        if (basis.size() >= dim) break;
        try_add(op.apply(basis[k]));
      }
    frontier_begin = frontier_end;
  }
  rep.cyclic_dim = basis.size();
  rep.cyclic_pass = rep.cyclic_dim >= rep.cyclic_target;

  // (ii) Commutant of the interior compressions.
  std::vector<std::size_t> inner;
  for (std::size_t x = 0; x < dim; ++x)
    if (l == 0 || ops.empty() || ops[0].interior(x, margin)) inner.push_back(x);
  const long n = static_cast<long>(inner.size());
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& op : ops) {
    Eigen::MatrixXcd M(n, n);
    for (long r = 0; r < n; ++r)
      for (long c = 0; c < n; ++c) M(r, c) = op.entry(inner[static_cast<std::size_t>(r)], inner[static_cast<std::size_t>(c)]);
    mats.push_back(std::move(M));
  }
  if (n <= 1) {
    rep.commutant_dim = static_cast<std::size_t>(n);
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& M : mats) H += cd(gauss(rng), gauss(rng)) * M;
    H = (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const Eigen::MatrixXcd U = es.eigenvectors();
    // A generic self-adjoint element has simple spectrum, so the commutant is
    // diagonal in its eigenbasis; commuting with A then forces tau_i = tau_j
    // whenever (U^* A U)_{ij} != 0. The solutions are counted by the connected
    // components of that support graph. Entries decay like powers of q, so
    // weights would be badly conditioned; only support above the noise floor
    // matters.
    std::vector<Eigen::MatrixXcd> rotated;
    double top = 0;
    for (const auto& M : mats) {
      rotated.push_back(U.adjoint() * M * U);
      top = std::max(top, rotated.back().cwiseAbs().maxCoeff());
    }
    std::vector<long> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0L);
    std::function<long(long)> find = [&](long x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      return x;
    };
    const double floor = 1e-10 * std::max(top, 1.0);
    for (const auto& At : rotated)
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
          if (i != j && std::abs(At(i, j)) > floor) parent[static_cast<std::size_t>(find(i))] = find(j);
    std::size_t null = 0;
    for (long i = 0; i < n; ++i) null += find(i) == i;
    rep.commutant_dim = null;
  }
  rep.commutant_pass = rep.commutant_dim == 1;
  rep.pass = rep.cyclic_pass && rep.commutant_pass;
  return rep;
}

NormReport sup_norm_vs_haar(const RepEngine& E, const FunElem& a, const std::vector<int>& Ns,
                            const std::vector<std::vector<cd>>& torus, double tolerance) {
  NormReport rep;
  rep.claim = "||a||_h <= ||a||_inf";
  rep.haar_norm = funalg::haar_norm(E.group(), a);
  const auto& W = E.group().weyl();
  for (int N : Ns) {
    double s = 0;
    for (const auto& w : W.elements())
      for (const auto& t : torus) s = std::max(s, operator_norm(E.pi_wt(a, w.word, t, N), 0));
    rep.sup_estimates.emplace_back(N, s);
  }
  for (std::size_t k = 1; k < rep.sup_estimates.size(); ++k)
    if (rep.sup_estimates[k].second < rep.sup_estimates[k - 1].second - 1e-9) rep.pass = false;
  if (rep.sup_estimates.empty() || rep.haar_norm > rep.sup_estimates.back().second + tolerance) rep.pass = false;
  return rep;
}

CheckReport restriction_identity_check(const RepEngine& E, const std::vector<FunElem>& invariant_samples,
                                       const rootsys::Subset& S, const std::vector<cd>& t, int N,
                                       double tolerance) {
  CheckReport rep;
  rep.claim = "pi_{w,t}(a) == pi_u(a) (x) id";
  rep.tolerance = tolerance;
  const auto& W = E.group().weyl();
  for (std::size_t w = 0; w < W.size(); ++w) {
    const auto f = rootsys::coset_factorize(W, w, S);
    std::vector<int> word = W[f.u].word;
    const auto& vw = W[f.v].word;
    word.insert(word.end(), vw.begin(), vw.end());
    double dev = 0;
    for (const auto& a : invariant_samples) {
      const TruncatedOp lhs = E.pi_wt(a, word, t, N);
      const TruncatedOp rhs = kron(E.pi_w(a, W[f.u].word, N), TruncatedOp::identity(N, W[f.v].length()));
      dev = std::max(dev, interior_deviation(lhs, rhs, 0));
    }
    std::ostringstream os;
    os << "w=" << (W[w].word.empty() ? "e" : "") ;
    for (int i : W[w].word) os << (i + 1);
    os << " deviation=" << dev;
    rep.details.push_back(os.str());
    rep.deviation = std::max(rep.deviation, dev);
  }
  rep.pass = rep.deviation <= tolerance;
  return rep;
}

std::vector<std::vector<cd>> torus_samples(int rank, const rootsys::Subset& S, int per_coordinate) {
  std::vector<std::vector<cd>> out{std::vector<cd>(static_cast<std::size_t>(rank), 1.0)};
  const double two_pi = 2 * std::acos(-1.0);
  for (int i = 0; i < rank; ++i) {
    if (rootsys::contains(S, i)) continue;
    std::vector<std::vector<cd>> next;
    for (const auto& t : out)
      for (int j = 0; j < per_coordinate; ++j) {
        auto u = t;
        // Offsets keep the samples away from 1 and from each other's conjugates.
        u[static_cast<std::size_t>(i)] = std::polar(1.0, two_pi * (j + 0.3 + 0.1 * i) / per_coordinate);
        next.push_back(u);
      }
    out = std::move(next);
  }
  return out;
}

SsbReport verify_theorem_ss_b(const RepEngine& E, const rootsys::Subset& S0, int N, int per_coordinate,
                              double tolerance) {
  SsbReport rep;
  rep.claim = "pi_{w,t}, w in W^S, t in T_{Sigma\\S} classify C_q[U/K_S^0]";
  const auto& G = E.group();
  const auto S = rootsys::normalize_subset(G.roots(), S0);
  const auto& W = G.weyl();
  const auto comp = rootsys::complement(G.roots(), S);

  std::vector<FunElem> samples;
  std::vector<Weight> fundamentals;
  for (int k : comp) {
    const Weight w = G.roots().fundamental_weight(k);
    fundamentals.push_back(w);
    for (std::size_t u = 0; u < G.irrep(w).dim(); ++u) {
      samples.push_back(funalg::matrix_coefficient(G, w, u, 0));
      samples.push_back(funalg::star(G, samples.back()));
    }
  }
  const auto torus = torus_samples(G.roots().rank, S, per_coordinate);
  const auto reps = rootsys::minimal_coset_reps(W, S);

  // (ii) coordinates in S do not matter on the invariant algebra.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0, 2 * std::acos(-1.0));
  for (std::size_t w : reps)
    for (const auto& t : torus) {
      auto t2 = t;
      for (int i : S) t2[static_cast<std::size_t>(i)] = std::polar(1.0, angle(rng));
      for (const auto& a : samples)
        rep.invariance_deviation = std::max(
            rep.invariance_deviation, interior_deviation(E.pi_wt(a, W[w].word, t, N), E.pi_wt(a, W[w].word, t2, N), 0));
    }
  rep.invariance_pass = rep.invariance_deviation <= tolerance;

  // (i) joint invariant per (w, t).
  for (std::size_t w : reps) {
    std::vector<bool> pattern;
    for (const auto& f : fundamentals) {
      const auto bits = plucker_vanishing_pattern(E, W[w].word, f, N);
      pattern.insert(pattern.end(), bits.begin(), bits.end());
    }
    for (const auto& t : torus) {
      SsbClass cls{W[w].word, t, pattern, {}};
      for (const auto& f : fundamentals) {
        double phase = std::nan("");
        for (std::size_t u = 0; u < G.irrep(f).dim() && std::isnan(phase); ++u) {
          const TruncatedOp op = E.pi_wt(funalg::matrix_coefficient(G, f, u, 0), W[w].word, t, N);
          if (!op.is_diagonal()) continue;
          // Normal operator: its spectrum is the diagonal; use the dominant eigenvalue.
          cd best = 0;
          for (const auto& [s, d] : op.bands())
            for (const cd& v : d)
              if (std::abs(v) > std::abs(best)) best = v;
          if (std::abs(best) > 1e-8) phase = std::arg(best);
        }
        cls.phases.push_back(phase);
      }
      rep.classes.push_back(std::move(cls));
    }
  }
  auto same = [](const SsbClass& a, const SsbClass& b) {
    if (a.pattern != b.pattern) return false;
    for (std::size_t k = 0; k < a.phases.size(); ++k) {
      const bool na = std::isnan(a.phases[k]), nb = std::isnan(b.phases[k]);
      if (na != nb) return false;
      if (na) continue;
      const double d = std::abs(std::remainder(a.phases[k] - b.phases[k], 2 * std::acos(-1.0)));
      if (d > 1e-6) return false;
    }
    return true;
  };
  rep.separation_pass = true;
  for (std::size_t i = 0; i < rep.classes.size(); ++i)
    for (std::size_t j = i + 1; j < rep.classes.size(); ++j)
      if (same(rep.classes[i], rep.classes[j])) rep.separation_pass = false;
  rep.pass = rep.invariance_pass && rep.separation_pass;
  return rep;
}

}  // namespace qflag::repengine
