#include "qflag/funalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qflag/errors.hpp"

namespace qflag::funalg {

using uqmod::Gen;
using uqmod::IrreducibleModule;

const QMatrix* FunElem::component(const Weight& lambda) const {
  auto it = comps_.find(lambda);
  return it == comps_.end() ? nullptr : &it->second;
}

void FunElem::add_component(const Weight& lambda, const QMatrix& M) {
  auto it = comps_.find(lambda);
  if (it == comps_.end())
    comps_.emplace(lambda, M);
  else
    it->second += M;
  prune();
}

bool FunElem::is_zero() const { return comps_.empty(); }

void FunElem::prune() {
  for (auto it = comps_.begin(); it != comps_.end();)
    it = it->second.is_zero() ? comps_.erase(it) : std::next(it);
}

FunElem& FunElem::operator+=(const FunElem& b) {
  for (const auto& [l, m] : b.comps_) {
    auto it = comps_.find(l);
    if (it == comps_.end())
      comps_.emplace(l, m);
    else
      it->second += m;
  }
  prune();
  return *this;
}

FunElem& FunElem::operator-=(const FunElem& b) {
  for (const auto& [l, m] : b.comps_) {
    auto it = comps_.find(l);
    if (it == comps_.end())
      comps_.emplace(l, m * Rational(-1));
    else
      it->second -= m;
  }
  prune();
  return *this;
}

FunElem& FunElem::operator*=(const Rational& s) {
  for (auto& [l, m] : comps_) m *= s;
  prune();
  return *this;
}

bool operator==(const FunElem& a, const FunElem& b) { return a.comps_ == b.comps_; }

FunElem unit(const QuantumGroup& G) {
  QMatrix one(1, 1);
  one(0, 0) = 1;
  FunElem a;
  a.add_component(G.roots().zero(), one);
  return a;
}

FunElem matrix_coefficient(const QuantumGroup& G, const Weight& lambda, std::size_t u, std::size_t v) {
  const auto& V = G.irrep(lambda);
  if (u >= V.dim() || v >= V.dim())
    throw ConfigError("matrix coefficient index out of range for V" + rootsys::to_string(lambda));
  QMatrix m(V.dim(), V.dim());
  m(u, v) = 1;
  FunElem a;
  a.add_component(lambda, m);
  return a;
}

Rational evaluate(const QuantumGroup& G, const FunElem& a, const Monomial& X) {
  Rational s = 0;
  for (const auto& [lambda, C] : a.components()) {
    const auto& V = G.irrep(lambda);
    for (std::size_t v = 0; v < V.dim(); ++v) {
      bool any = false;
      for (std::size_t u = 0; u < V.dim() && !any; ++u) any = C(u, v) != 0;
      if (!any) continue;
      QVector e(V.dim());
      e[v] = 1;
      const QVector img = V.apply(X, e);
      for (std::size_t u = 0; u < V.dim(); ++u)
        if (C(u, v) != 0 && img[u] != 0) s += C(u, v) * img[u];
    }
  }
  return s;
}

Rational counit(const FunElem& a) {
  Rational s = 0;
  for (const auto& [lambda, C] : a.components())
    for (std::size_t k = 0; k < C.rows(); ++k) s += C(k, k);
  return s;
}

namespace {

QMatrix rho(const IrreducibleModule& V, const Monomial& X) {
  QMatrix out(V.dim(), V.dim());
  for (std::size_t v = 0; v < V.dim(); ++v) {
    QVector e(V.dim());
    e[v] = 1;
    out.set_col(v, V.apply(X, e));
  }
  return out;
}

}  // namespace

FunElem left_action(const QuantumGroup& G, const FunElem& a, const Monomial& X) {
  FunElem out;
  for (const auto& [lambda, C] : a.components())
    out.add_component(lambda, C * rho(G.irrep(lambda), X).transpose());
  return out;
}

FunElem right_action(const QuantumGroup& G, const FunElem& a, const Monomial& X) {
  FunElem out;
  for (const auto& [lambda, C] : a.components())
    out.add_component(lambda, rho(G.irrep(lambda), X).transpose() * C);
  return out;
}

FunElem multiply(const QuantumGroup& G, const FunElem& a, const FunElem& b,
                 const std::set<Weight>* targets) {
  FunElem out;
  for (const auto& [l1, C] : a.components())
    for (const auto& [l2, D] : b.components()) {
      const auto& V1 = G.irrep(l1);
      const auto& V2 = G.irrep(l2);
      const std::size_t d1 = V1.dim(), d2 = V2.dim();
      const QMatrix Dt = D.transpose();
      std::set<Weight> kappas;
      if (targets)
        kappas = *targets;
      else
        for (const auto& k : G.tensor_highest_weights(l1, l2)) kappas.insert(k);
      for (const auto& kappa : kappas) {
        const auto& Vk = G.irrep(kappa);
        QMatrix E(Vk.dim(), Vk.dim());
        for (const auto& comp : G.components(l1, l2, kappa)) {
          // E[k][l] = (1 / (M n_l)) <iota_k, (C (x) D) N_T iota_l>, with
          // (C (x) D) vec(X) = vec(C X D^T) for the row-major reshape X.
          for (std::size_t l = 0; l < Vk.dim(); ++l) {
            QMatrix X(d1, d2);
            bool any = false;
            for (std::size_t s = 0; s < d1 * d2; ++s) {
              const Rational& x = comp.iota(s, l);
              if (x == 0) continue;
              X(s / d2, s % d2) = x * V1.norms()[s / d2] * V2.norms()[s % d2];
              any = true;
            }
            if (!any) continue;
            const QMatrix Z = (C * X) * Dt;
            const Rational scale = 1 / (comp.hw_norm * Vk.norms()[l]);
            for (std::size_t k = 0; k < Vk.dim(); ++k) {
              Rational acc = 0;
              for (std::size_t s = 0; s < d1 * d2; ++s) {
                const Rational& y = comp.iota(s, k);
                if (y == 0) continue;
                const Rational& z = Z(s / d2, s % d2);
                if (z != 0) acc += y * z;
              }
              if (acc != 0) E(k, l) += acc * scale;
            }
          }
        }
        out.add_component(kappa, E);
      }
    }
  return out;
}

FunElem star(const QuantumGroup& G, const FunElem& a) {
  FunElem out;
  for (const auto& [lambda, C] : a.components()) {
    const auto& V = G.irrep(lambda);
    const auto& dd = G.dual_data(lambda);
    QMatrix A(C.rows(), C.cols());
    for (std::size_t u = 0; u < C.rows(); ++u)
      for (std::size_t v = 0; v < C.cols(); ++v)
        if (C(u, v) != 0) A(u, v) = C(u, v) * V.norms()[v] / V.norms()[u];
    out.add_component(dd.lambda_star, dd.J.transpose() * A * dd.J_inv.transpose());
  }
  return out;
}

std::map<Weight, FunElem> left_weight_decompose(const QuantumGroup& G, const FunElem& a) {
  std::map<Weight, FunElem> out;
  for (const auto& [lambda, C] : a.components()) {
    const auto& V = G.irrep(lambda);
    std::map<Weight, QMatrix> parts;
    for (std::size_t v = 0; v < V.dim(); ++v) {
      auto [it, fresh] = parts.try_emplace(V.weight(v), C.rows(), C.cols());
      for (std::size_t u = 0; u < C.rows(); ++u) it->second(u, v) = C(u, v);
    }
    for (auto& [mu, M] : parts)
      if (!M.is_zero()) out[mu].add_component(lambda, M);
  }
  return out;
}

Rational haar(const FunElem& a) {
  for (const auto& [lambda, C] : a.components())
    if (std::all_of(lambda.begin(), lambda.end(), [](int m) { return m == 0; })) return C(0, 0);
  return 0;
}

Rational haar_inner(const QuantumGroup& G, const FunElem& a, const FunElem& b) {
  const std::set<Weight> zero{G.roots().zero()};
  return haar(multiply(G, star(G, b), a, &zero));
}

double haar_norm(const QuantumGroup& G, const FunElem& a) {
  const Rational n2 = haar_inner(G, a, a);
  if (n2 < 0) throw InternalError("negative Haar norm square");
  return std::sqrt(n2.get_d());
}

std::complex<double> tau(const QuantumGroup& G, const FunElem& a,
                         const std::vector<std::complex<double>>& t) {
  std::complex<double> s = 0;
  for (const auto& [lambda, C] : a.components()) {
    const auto& V = G.irrep(lambda);
    for (std::size_t v = 0; v < V.dim(); ++v) {
      if (C(v, v) == 0) continue;
      std::complex<double> phase = 1;
      for (std::size_t i = 0; i < t.size(); ++i) phase *= std::pow(t[i], V.weight(v)[i]);
      s += C(v, v).get_d() * phase;
    }
  }
  return s;
}

FunElem random_element(const QuantumGroup& G, const std::vector<Weight>& lambdas, std::mt19937_64& rng,
                       int range, double density) {
  std::uniform_int_distribution<int> val(-range, range);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  FunElem out;
  for (const auto& lambda : lambdas) {
    const std::size_t n = G.irrep(lambda).dim();
    QMatrix m(n, n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (coin(rng) < density) m(u, v) = val(rng);
    out.add_component(lambda, m);
  }
  return out;
}

std::string to_string(const FunElem& a) {
  std::ostringstream os;
  for (const auto& [lambda, C] : a.components()) {
    os << rootsys::to_string(lambda) << ":";
    for (std::size_t u = 0; u < C.rows(); ++u)
      for (std::size_t v = 0; v < C.cols(); ++v)
        if (C(u, v) != 0) os << " [" << u << "," << v << "]=" << C(u, v).get_str();
    os << "\n";
  }
  return os.str();
}

}  // namespace qflag::funalg
