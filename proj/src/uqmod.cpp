#include "qflag/uqmod.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "qflag/errors.hpp"

namespace qflag::uqmod {

Rational qnumber(long n, const Rational& t) {
  if (n == 0) return 0;
  // [n]_t = t^{n-1} + t^{n-3} + ... + t^{1-n}
  const long m = n < 0 ? -n : n;
  Rational s = 0;
  for (long k = 0; k < m; ++k) s += pow(t, m - 1 - 2 * k);
  return n < 0 ? Rational(-s) : s;
}

Rational check_q(const Rational& q) {
  if (!(q > 0 && q < 1)) throw ConfigError("q must satisfy 0 < q < 1, got " + q.get_str());
  return q;
}

std::string to_string(const Monomial& m) {
  std::ostringstream os;
  if (m.empty()) return "1";
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) os << ' ';
    switch (m[k].kind) {
      case Gen::E: os << 'E'; break;
      case Gen::F: os << 'F'; break;
      case Gen::K: os << 'K'; break;
      case Gen::Kinv: os << "Ki"; break;
    }
    os << m[k].index + 1;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// GradedModule

GradedModule::GradedModule(const RootSystem& R, Rational q)
    : rank_(R.rank), q_(std::move(q)), d_(R.d), cartan_(R.cartan) {
  for (int i = 0; i < rank_; ++i) qi_.push_back(pow(q_, d_[static_cast<std::size_t>(i)]));
}

std::optional<std::size_t> GradedModule::find_block(const Weight& mu) const {
  auto it = block_lookup_.find(mu);
  if (it == block_lookup_.end()) return std::nullopt;
  return it->second;
}

void GradedModule::set_basis(std::vector<Weight> weights) {
  weight_of_ = std::move(weights);
  blocks_.clear();
  block_lookup_.clear();
  block_of_index_.assign(weight_of_.size(), 0);
  local_index_.assign(weight_of_.size(), 0);
  for (std::size_t k = 0; k < weight_of_.size(); ++k) {
    auto [it, fresh] = block_lookup_.emplace(weight_of_[k], blocks_.size());
    if (fresh) blocks_.push_back({weight_of_[k], {}});
    Block& b = blocks_[it->second];
    block_of_index_[k] = it->second;
    local_index_[k] = b.indices.size();
    b.indices.push_back(k);
  }
  raise_.assign(static_cast<std::size_t>(rank_),
                std::vector<std::optional<BlockMap>>(blocks_.size()));
  lower_ = raise_;
}

Rational GradedModule::k_eigenvalue(int i, std::size_t k) const {
  return pow(qi(i), weight_of_[k][idx(i)]);
}

QVector GradedModule::apply(const Gen& g, const QVector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("GradedModule::apply: size mismatch");
  QVector y(dim());
  if (g.kind == Gen::K || g.kind == Gen::Kinv) {
    for (std::size_t k = 0; k < dim(); ++k) {
      if (x[k] == 0) continue;
      const long e = weight_of_[k][idx(g.index)];
      y[k] = x[k] * pow(qi(g.index), g.kind == Gen::K ? e : -e);
    }
    return y;
  }
  const auto& maps = g.kind == Gen::E ? raise_[idx(g.index)] : lower_[idx(g.index)];
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (!maps[b]) continue;
    const auto& src = blocks_[b].indices;
    QVector local(src.size());
    bool any = false;
    for (std::size_t l = 0; l < src.size(); ++l)
      if (x[src[l]] != 0) {
        local[l] = x[src[l]];
        any = true;
      }
    if (!any) continue;
    const QVector img = maps[b]->m.apply(local);
    const auto& dst = blocks_[maps[b]->target].indices;
    for (std::size_t l = 0; l < dst.size(); ++l)
      if (img[l] != 0) y[dst[l]] += img[l];
  }
  return y;
}

QVector GradedModule::apply(const Monomial& m, QVector x) const {
  for (auto it = m.rbegin(); it != m.rend(); ++it) x = apply(*it, x);
  return x;
}

QMatrix GradedModule::dense(const Gen& g) const {
  QMatrix out(dim(), dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    QVector e(dim());
    e[k] = 1;
    out.set_col(k, apply(g, e));
  }
  return out;
}

Rational GradedModule::inner(const QVector& x, const QVector& y) const {
  if (!has_form()) throw InternalError("module carries no invariant form");
  Rational s = 0;
  for (std::size_t k = 0; k < dim(); ++k)
    if (x[k] != 0 && y[k] != 0) s += x[k] * y[k] * norms_[k];
  return s;
}

std::map<Weight, std::size_t> GradedModule::character() const {
  std::map<Weight, std::size_t> out;
  for (const auto& b : blocks_) out[b.weight] = b.indices.size();
  return out;
}

// ---------------------------------------------------------------------------
// Irreducible modules

namespace {

Weight plus_root(const GradedModule& M, const Weight& mu, int i) {
  Weight out = mu;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += M.cartan()[static_cast<std::size_t>(i)][j];
  return out;
}

Weight minus_root(const GradedModule& M, const Weight& mu, int i) {
  Weight out = mu;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= M.cartan()[static_cast<std::size_t>(i)][j];
  return out;
}

}  // namespace

IrreducibleModule build_irreducible(const RootSystem& R, const Rational& q_in, const Weight& lambda,
                                    std::size_t dim_cap) {
  const Rational q = check_q(q_in);
  if (static_cast<int>(lambda.size()) != R.rank)
    throw ConfigError("weight " + rootsys::to_string(lambda) + " has wrong rank for " + R.label());
  if (!R.is_dominant(lambda))
    throw DomainError("highest weight " + rootsys::to_string(lambda) + " is not dominant");

  const int r = R.rank;
  const auto ru = static_cast<std::size_t>(r);
  GradedModule shape(R, q);  // only used for q_i and root arithmetic

  // Working state, indexed by global basis index.
  std::vector<Weight> weights{lambda};
  QVector norms{Rational(1)};
  std::vector<std::vector<RecipeTerm>> recipe{{}};
  std::vector<std::vector<int>> words{{}};
  std::vector<std::vector<QVector>> e_img{std::vector<QVector>(ru)};  // [k][j], coords in block wt+alpha_j
  std::vector<std::vector<QVector>> f_img{std::vector<QVector>(ru)};  // [k][i], coords in block wt-alpha_i
  std::map<Weight, std::vector<std::size_t>> block{{lambda, {0}}};

  auto block_dim = [&](const Weight& mu) -> std::size_t {
    auto it = block.find(mu);
    return it == block.end() ? 0 : it->second.size();
  };

  std::set<Weight, std::greater<Weight>> level{lambda};
  while (!level.empty()) {
    std::set<Weight, std::greater<Weight>> next_weights;
    for (const auto& nu : level)
      for (int i = 0; i < r; ++i) next_weights.insert(minus_root(shape, nu, i));

    std::set<Weight, std::greater<Weight>> next_level;
    for (const auto& mu : next_weights) {
      // Segment offsets of the concatenated E-image over j.
      std::vector<std::size_t> seg(ru + 1, 0);
      std::vector<Weight> up(ru);
      for (int j = 0; j < r; ++j) {
        up[static_cast<std::size_t>(j)] = plus_root(shape, mu, j);
        seg[static_cast<std::size_t>(j) + 1] = seg[static_cast<std::size_t>(j)] + block_dim(up[static_cast<std::size_t>(j)]);
      }

      struct Candidate {
        int i;
        std::size_t parent;  // global index
        std::size_t local;   // index within block mu + alpha_i
        std::vector<int> word;
        QVector eimg;
      };
      std::vector<Candidate> cands;
      for (int i = 0; i < r; ++i) {
        auto it = block.find(up[static_cast<std::size_t>(i)]);
        if (it == block.end()) continue;
        for (std::size_t l = 0; l < it->second.size(); ++l) {
          const std::size_t p = it->second[l];
          Candidate c{i, p, l, {i}, QVector(seg[ru])};
          c.word.insert(c.word.end(), words[p].begin(), words[p].end());
          const Weight& nu = weights[p];
          // E_j F_i p = F_i E_j p + delta_ij [nu_i]_{q_i} p
          for (int j = 0; j < r; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const QVector& ep = e_img[p][ju];
            if (!ep.empty()) {
              const auto& src = block.at(plus_root(shape, nu, j));
              for (std::size_t s = 0; s < src.size(); ++s) {
                if (ep[s] == 0) continue;
                const QVector& fs = f_img[src[s]][static_cast<std::size_t>(i)];
                for (std::size_t t = 0; t < fs.size(); ++t)
                  if (fs[t] != 0) c.eimg[seg[ju] + t] += ep[s] * fs[t];
              }
            }
            if (j == i) c.eimg[seg[ju] + l] += qnumber(nu[static_cast<std::size_t>(i)], shape.qi(i));
          }
          cands.push_back(std::move(c));
        }
      }
      if (cands.empty()) continue;
      std::stable_sort(cands.begin(), cands.end(),
                       [](const Candidate& a, const Candidate& b) { return a.word < b.word; });

      // <F_i b_p, y> = q_i^{1 - nu_i} n_p (E_i y)_p
      auto pair_with = [&](const Candidate& c, const QVector& y_eimg) {
        const auto iu = static_cast<std::size_t>(c.i);
        const Rational& ey = y_eimg[seg[iu] + c.local];
        if (ey == 0) return Rational(0);
        const long nu_i = weights[c.parent][iu];
        return Rational(pow(shape.qi(c.i), 1 - nu_i) * norms[c.parent] * ey);
      };

      struct Orth {
        QVector coeff;  // over candidates
        QVector eimg;
        Rational norm;
        std::size_t source;
      };
      std::vector<Orth> ys;
      for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        Orth y{QVector(cands.size()), cands[ci].eimg, 0, ci};
        y.coeff[ci] = 1;
        for (const auto& yk : ys) {
          const Rational t = pair_with(cands[ci], yk.eimg) / yk.norm;
          if (t == 0) continue;
          for (std::size_t s = 0; s < y.eimg.size(); ++s)
            if (yk.eimg[s] != 0) y.eimg[s] -= t * yk.eimg[s];
          for (std::size_t s = 0; s < y.coeff.size(); ++s)
            if (yk.coeff[s] != 0) y.coeff[s] -= t * yk.coeff[s];
        }
        if (is_zero(y.eimg)) continue;
        y.norm = pair_with(cands[ci], y.eimg);
        if (y.norm <= 0)
          throw InternalError("contravariant form not positive at weight " + rootsys::to_string(mu));
        ys.push_back(std::move(y));
      }
      if (ys.empty()) continue;
      if (weights.size() + ys.size() > dim_cap)
        throw OverflowError("V" + rootsys::to_string(lambda) + " exceeds the dimension cap " +
                            std::to_string(dim_cap));

      std::vector<std::size_t>& here = block[mu];
      for (const auto& y : ys) {
        const std::size_t k = weights.size();
        here.push_back(k);
        weights.push_back(mu);
        norms.push_back(y.norm);
        std::vector<RecipeTerm> terms;
        for (std::size_t s = 0; s < cands.size(); ++s)
          if (y.coeff[s] != 0) terms.push_back({cands[s].i, cands[s].parent, y.coeff[s]});
        recipe.push_back(std::move(terms));
        words.push_back(cands[y.source].word);
        std::vector<QVector> ek(ru);
        for (std::size_t j = 0; j < ru; ++j)
          ek[j] = QVector(y.eimg.begin() + static_cast<std::ptrdiff_t>(seg[j]),
                          y.eimg.begin() + static_cast<std::ptrdiff_t>(seg[j + 1]));
        // Blocks that do not exist have empty coordinate vectors.
        for (std::size_t j = 0; j < ru; ++j)
          if (block_dim(up[j]) == 0) ek[j].clear();
        e_img.push_back(std::move(ek));
        f_img.push_back(std::vector<QVector>(ru));
      }
      // F_i b_p = sum_k (<F_i b_p, y_k> / n_k) y_k
      for (const auto& c : cands) {
        QVector coords(ys.size());
        for (std::size_t k = 0; k < ys.size(); ++k) coords[k] = pair_with(c, ys[k].eimg) / ys[k].norm;
        f_img[c.parent][static_cast<std::size_t>(c.i)] = std::move(coords);
      }
      next_level.insert(mu);
    }
    level = std::move(next_level);
  }

  IrreducibleModule V;
  static_cast<GradedModule&>(V) = GradedModule(R, q);
  V.set_basis(weights);
  V.set_norms(norms);
  V.lambda_ = lambda;
  V.recipe_ = std::move(recipe);
  V.words_ = std::move(words);

  for (std::size_t b = 0; b < V.num_blocks(); ++b) {
    const Weight& mu = V.block_weight(b);
    const auto& idx = V.block_indices(b);
    for (int i = 0; i < r; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      if (auto tb = V.find_block(plus_root(V, mu, i))) {
        QMatrix m(V.block_indices(*tb).size(), idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
          const QVector& col = e_img[idx[c]][iu];
          for (std::size_t rr = 0; rr < col.size(); ++rr) m(rr, c) = col[rr];
        }
        V.set_raise(i, b, {*tb, std::move(m)});
      }
      if (auto tb = V.find_block(minus_root(V, mu, i))) {
        QMatrix m(V.block_indices(*tb).size(), idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
          const QVector& col = f_img[idx[c]][iu];
          for (std::size_t rr = 0; rr < col.size(); ++rr) m(rr, c) = col[rr];
        }
        V.set_lower(i, b, {*tb, std::move(m)});
      }
    }
  }
  return V;
}

bool star_adjointness_check(const GradedModule& M) {
  if (!M.has_form()) return false;
  const std::size_t n = M.dim();
  for (int i = 0; i < M.rank(); ++i) {
    const QMatrix E = M.dense({Gen::E, i});
    const QMatrix F = M.dense({Gen::F, i});
    const Rational& qi = M.qi(i);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        // <E e_x, e_y> = E(y,x) n_y ; <e_x, q_i^{-1} F K e_y> = q_i^{-1} k_y F(x,y) n_x
        const Rational lhs_e = E(y, x) * M.norms()[y];
        const Rational rhs_e = F(x, y) * M.k_eigenvalue(i, y) * M.norms()[x] / qi;
        if (lhs_e != rhs_e) return false;
        const Rational lhs_f = F(y, x) * M.norms()[y];
        const Rational rhs_f = E(x, y) * qi / M.k_eigenvalue(i, x) * M.norms()[x];
        if (lhs_f != rhs_f) return false;
      }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tensor products and duals

namespace {

// Column of a block map as (global index, value) pairs in M.
template <class Fn>
void for_image(const GradedModule& M, const std::optional<BlockMap>& map, std::size_t local, Fn&& fn) {
  if (!map) return;
  const auto& dst = M.block_indices(map->target);
  for (std::size_t r = 0; r < dst.size(); ++r)
    if (map->m(r, local) != 0) fn(dst[r], map->m(r, local));
}

}  // namespace

GradedModule tensor(const GradedModule& M1, const GradedModule& M2) {
  if (M1.rank() != M2.rank() || M1.q() != M2.q() || M1.cartan() != M2.cartan())
    throw ConfigError("tensor: modules over different quantum groups");
  RootSystem shape;
  shape.rank = M1.rank();
  shape.cartan = M1.cartan();
  shape.d = M1.d();
  GradedModule T(shape, M1.q());
  const std::size_t d1 = M1.dim(), d2 = M2.dim();
  std::vector<Weight> w(d1 * d2);
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b) w[a * d2 + b] = rootsys::add(M1.weight(a), M2.weight(b));
  T.set_basis(std::move(w));
  if (M1.has_form() && M2.has_form()) {
    QVector n(d1 * d2);
    for (std::size_t a = 0; a < d1; ++a)
      for (std::size_t b = 0; b < d2; ++b) n[a * d2 + b] = M1.norms()[a] * M2.norms()[b];
    T.set_norms(std::move(n));
  }

  for (int i = 0; i < T.rank(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (std::size_t blk = 0; blk < T.num_blocks(); ++blk) {
      const auto& src = T.block_indices(blk);
      for (int kind = 0; kind < 2; ++kind) {
        const bool raise = kind == 0;
        const Weight target_w = raise ? plus_root(T, T.block_weight(blk), i)
                                      : minus_root(T, T.block_weight(blk), i);
        const auto tb = T.find_block(target_w);
        if (!tb) continue;
        QMatrix m(T.block_indices(*tb).size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
          const std::size_t a = src[c] / d2, b = src[c] % d2;
          const auto& map1 = raise ? M1.raise(i, M1.block_of_index(a)) : M1.lower(i, M1.block_of_index(a));
          const auto& map2 = raise ? M2.raise(i, M2.block_of_index(b)) : M2.lower(i, M2.block_of_index(b));
          // E(a(x)b) = Ea(x)b + q_i^{wt(a)_i} a(x)Eb ; F(a(x)b) = q_i^{-wt(b)_i} Fa(x)b + a(x)Fb
          const Rational s1 = raise ? Rational(1) : pow(T.qi(i), -M2.weight(b)[iu]);
          const Rational s2 = raise ? pow(T.qi(i), M1.weight(a)[iu]) : Rational(1);
          for_image(M1, map1, M1.local_index(a), [&](std::size_t a2, const Rational& v) {
            m(T.local_index(a2 * d2 + b), c) += s1 * v;
          });
          for_image(M2, map2, M2.local_index(b), [&](std::size_t b2, const Rational& v) {
            m(T.local_index(a * d2 + b2), c) += s2 * v;
          });
        }
        if (m.is_zero()) continue;
        if (raise)
          T.set_raise(i, blk, {*tb, std::move(m)});
        else
          T.set_lower(i, blk, {*tb, std::move(m)});
      }
    }
  }
  return T;
}

GradedModule dual(const GradedModule& M) {
  RootSystem shape;
  shape.rank = M.rank();
  shape.cartan = M.cartan();
  shape.d = M.d();
  GradedModule D(shape, M.q());
  std::vector<Weight> w(M.dim());
  for (std::size_t k = 0; k < M.dim(); ++k) w[k] = rootsys::negate(M.weight(k));
  D.set_basis(std::move(w));
  for (int i = 0; i < M.rank(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (std::size_t b = 0; b < M.num_blocks(); ++b) {
      const Weight& mu = M.block_weight(b);
      const std::size_t db = *D.find_block(rootsys::negate(mu));
      // rho*(E) = -(K^{-1}E)^T: dual block -mu -> -(mu - alpha_i), from E: (mu - alpha_i) -> mu.
      if (auto src = M.find_block(minus_root(M, mu, i))) {
        if (const auto& em = M.raise(i, *src)) {
          QMatrix m = em->m.transpose();
          m *= -pow(M.qi(i), -mu[iu]);
          D.set_raise(i, db, {*D.find_block(rootsys::negate(M.block_weight(*src))), std::move(m)});
        }
      }
      // rho*(F) = -(FK)^T: dual block -mu -> -(mu + alpha_i), from F: (mu + alpha_i) -> mu.
      if (auto src = M.find_block(plus_root(M, mu, i))) {
        if (const auto& fm = M.lower(i, *src)) {
          QMatrix m = fm->m.transpose();
          m *= -pow(M.qi(i), M.block_weight(*src)[iu]);
          D.set_lower(i, db, {*D.find_block(rootsys::negate(M.block_weight(*src))), std::move(m)});
        }
      }
    }
  }
  return D;
}

QMatrix embed(const GradedModule& M, const QVector& x, const IrreducibleModule& V) {
  QMatrix out(M.dim(), V.dim());
  std::vector<QVector> img(V.dim());
  img[0] = x;
  for (std::size_t k = 1; k < V.dim(); ++k) {
    QVector acc(M.dim());
    for (const auto& t : V.recipe(k)) {
      const QVector f = M.apply(Gen{Gen::F, t.i}, img[t.parent]);
      for (std::size_t s = 0; s < acc.size(); ++s)
        if (f[s] != 0) acc[s] += t.coeff * f[s];
    }
    img[k] = std::move(acc);
  }
  for (std::size_t k = 0; k < V.dim(); ++k) out.set_col(k, img[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Kernels

namespace {

QVector lift(const GradedModule& M, std::size_t b, const QVector& local) {
  QVector v(M.dim());
  const auto& idx = M.block_indices(b);
  for (std::size_t l = 0; l < idx.size(); ++l) v[idx[l]] = local[l];
  return v;
}

// Joint kernel of the given block maps (restricted to block b), as block-local columns.
std::vector<QVector> block_kernel(const GradedModule& M, std::size_t b,
                                  const std::vector<const std::optional<BlockMap>*>& maps) {
  const std::size_t n = M.block_indices(b).size();
  QMatrix stacked(0, n);
  for (const auto* m : maps)
    if (*m) stacked = vstack(stacked, (*m)->m);
  std::vector<QVector> out;
  if (stacked.rows() == 0) {
    for (std::size_t l = 0; l < n; ++l) {
      QVector e(n);
      e[l] = 1;
      out.push_back(std::move(e));
    }
    return out;
  }
  const QMatrix K = nullspace(stacked);
  for (std::size_t c = 0; c < K.cols(); ++c) out.push_back(K.col(c));
  return out;
}

void orthogonalize(const GradedModule& M, std::vector<QVector>& vs) {
  if (!M.has_form()) return;
  std::vector<Rational> norms;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const Rational t = M.inner(vs[k], vs[j]) / norms[j];
      if (t == 0) continue;
      for (std::size_t s = 0; s < vs[k].size(); ++s)
        if (vs[j][s] != 0) vs[k][s] -= t * vs[j][s];
    }
    norms.push_back(M.inner(vs[k], vs[k]));
  }
}

}  // namespace

std::vector<HighestWeightVector> highest_weight_vectors(const GradedModule& M, const Weight& mu) {
  std::vector<HighestWeightVector> out;
  const auto b = M.find_block(mu);
  if (!b) return out;
  std::vector<const std::optional<BlockMap>*> maps;
  for (int i = 0; i < M.rank(); ++i) maps.push_back(&M.raise(i, *b));
  std::vector<QVector> vs;
  for (const auto& local : block_kernel(M, *b, maps)) vs.push_back(lift(M, *b, local));
  orthogonalize(M, vs);
  for (auto& v : vs) out.push_back({mu, std::move(v)});
  return out;
}

std::vector<HighestWeightVector> highest_weight_vectors(const GradedModule& M) {
  std::vector<HighestWeightVector> out;
  std::vector<Weight> ws;
  for (std::size_t b = 0; b < M.num_blocks(); ++b)
    if (std::all_of(M.block_weight(b).begin(), M.block_weight(b).end(), [](int m) { return m >= 0; }))
      ws.push_back(M.block_weight(b));
  std::sort(ws.begin(), ws.end(), std::greater<>());
  for (const auto& mu : ws)
    for (auto& h : highest_weight_vectors(M, mu)) out.push_back(std::move(h));
  return out;
}

std::vector<QVector> invariant_vectors(const GradedModule& M, const rootsys::Subset& S,
                                       InvariantMode mode) {
  std::vector<QVector> out;
  for (std::size_t b = 0; b < M.num_blocks(); ++b) {
    const Weight& mu = M.block_weight(b);
    bool ok = true;
    if (mode == InvariantMode::KS) {
      ok = std::all_of(mu.begin(), mu.end(), [](int m) { return m == 0; });
    } else {
      for (int j : S)
        if (mu[static_cast<std::size_t>(j)] != 0) ok = false;
    }
    if (!ok) continue;
    std::vector<const std::optional<BlockMap>*> maps;
    for (int j : S) {
      maps.push_back(&M.raise(j, b));
      maps.push_back(&M.lower(j, b));
    }
    std::vector<QVector> vs;
    for (const auto& local : block_kernel(M, b, maps)) vs.push_back(lift(M, b, local));
    orthogonalize(M, vs);
    for (auto& v : vs) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Sl2String> sl2_strings(const GradedModule& M, int i) {
  std::vector<Sl2String> out;
  for (std::size_t b = 0; b < M.num_blocks(); ++b) {
    const int top = M.block_weight(b)[static_cast<std::size_t>(i)];
    std::vector<QVector> vs;
    for (const auto& local : block_kernel(M, b, {&M.raise(i, b)})) vs.push_back(lift(M, b, local));
    orthogonalize(M, vs);
    for (auto& x : vs) {
      if (top < 0) throw InternalError("E_i-kernel vector of negative weight");
      Sl2String s{top, {x}};
      for (int k = 0; k < top; ++k) s.vectors.push_back(M.apply(Gen{Gen::F, i}, s.vectors.back()));
      if (!is_zero(M.apply(Gen{Gen::F, i}, s.vectors.back())))
        throw InternalError("sl2 string does not terminate");
      out.push_back(std::move(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// QuantumGroup

QuantumGroup::QuantumGroup(RootSystem R, Rational q, std::size_t dim_cap)
    : R_(std::move(R)), W_(R_), q_(check_q(q)), dim_cap_(dim_cap) {}

Rational QuantumGroup::qi(int i) const { return pow(q_, R_.d[static_cast<std::size_t>(i)]); }

const IrreducibleModule& QuantumGroup::irrep(const Weight& lambda) const {
  {
    std::lock_guard<std::mutex> lock(mu_irrep_);
    auto it = irreps_.find(lambda);
    if (it != irreps_.end()) return *it->second;
  }
  auto built = std::make_unique<IrreducibleModule>(build_irreducible(R_, q_, lambda, dim_cap_));
  std::lock_guard<std::mutex> lock(mu_irrep_);
  auto [it, fresh] = irreps_.emplace(lambda, std::move(built));
  return *it->second;
}

const GradedModule& QuantumGroup::tensor_module(const Weight& l1, const Weight& l2) const {
  const auto key = std::make_pair(l1, l2);
  {
    std::lock_guard<std::mutex> lock(mu_tensor_);
    auto it = tensors_.find(key);
    if (it != tensors_.end()) return *it->second;
  }
  auto built = std::make_unique<GradedModule>(tensor(irrep(l1), irrep(l2)));
  std::lock_guard<std::mutex> lock(mu_tensor_);
  auto [it, fresh] = tensors_.emplace(key, std::move(built));
  return *it->second;
}

const std::vector<Component>& QuantumGroup::components(const Weight& l1, const Weight& l2,
                                                       const Weight& kappa) const {
  const auto key = std::make_tuple(l1, l2, kappa);
  {
    std::lock_guard<std::mutex> lock(mu_comp_);
    auto it = components_.find(key);
    if (it != components_.end()) return *it->second;
  }
  auto built = std::make_unique<std::vector<Component>>();
  const GradedModule& T = tensor_module(l1, l2);
  for (const auto& h : highest_weight_vectors(T, kappa)) {
    const IrreducibleModule& V = irrep(kappa);
    built->push_back({kappa, embed(T, h.vector, V), T.inner(h.vector, h.vector)});
  }
  std::lock_guard<std::mutex> lock(mu_comp_);
  auto [it, fresh] = components_.emplace(key, std::move(built));
  return *it->second;
}

std::vector<Weight> QuantumGroup::tensor_highest_weights(const Weight& l1, const Weight& l2) const {
  std::vector<Weight> out;
  for (const auto& h : highest_weight_vectors(tensor_module(l1, l2))) out.push_back(h.weight);
  return out;
}

const DualData& QuantumGroup::dual_data(const Weight& lambda) const {
  {
    std::lock_guard<std::mutex> lock(mu_dual_);
    auto it = duals_.find(lambda);
    if (it != duals_.end()) return *it->second;
  }
  auto built = std::make_unique<DualData>();
  const IrreducibleModule& V = irrep(lambda);
  const GradedModule D = dual(V);
  built->lambda_star = W_.dual_weight(lambda);
  const auto h = highest_weight_vectors(D, built->lambda_star);
  if (h.size() != 1) throw InternalError("dual module does not have a unique highest weight vector");
  built->J = embed(D, h[0].vector, irrep(built->lambda_star));
  built->J_inv = inverse(built->J);
  std::lock_guard<std::mutex> lock(mu_dual_);
  auto [it, fresh] = duals_.emplace(lambda, std::move(built));
  return *it->second;
}

QVector QuantumGroup::project(const Component& c, const Weight& l1, const Weight& l2,
                              const QVector& x) const {
  const GradedModule& T = tensor_module(l1, l2);
  const IrreducibleModule& V = irrep(c.kappa);
  QVector out(V.dim());
  for (std::size_t s = 0; s < T.dim(); ++s) {
    if (x[s] == 0) continue;
    const Rational y = x[s] * T.norms()[s];
    for (std::size_t k = 0; k < V.dim(); ++k)
      if (c.iota(s, k) != 0) out[k] += c.iota(s, k) * y;
  }
  for (std::size_t k = 0; k < V.dim(); ++k)
    if (out[k] != 0) out[k] /= c.hw_norm * V.norms()[k];
  return out;
}

}  // namespace qflag::uqmod
