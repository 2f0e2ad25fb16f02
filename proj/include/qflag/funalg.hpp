#pragma once

// The function algebra C_q[U] in Peter-Weyl coordinates.
//
// An element is a finite map lambda -> C^lambda with
//   a(X) = sum_{u,v} C^lambda_{uv} e_u^*(X e_v),
// where {e_v} is the orthogonal weight basis of V(lambda) and {e_u^*} its dual
// basis. Everything stays rational: the product, star and Haar functional are
// computed from the exact module data held by a QuantumGroup.

#include <complex>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qflag/rational.hpp"
#include "qflag/uqmod.hpp"

namespace qflag::funalg {

using rootsys::Weight;
using uqmod::Monomial;
using uqmod::QuantumGroup;

class FunElem {
 public:
  FunElem() = default;

  const std::map<Weight, QMatrix>& components() const { return comps_; }
  const QMatrix* component(const Weight& lambda) const;
  /// Adds M into the lambda component (allocating it if needed).
  void add_component(const Weight& lambda, const QMatrix& M);
  bool is_zero() const;

  FunElem& operator+=(const FunElem& b);
  FunElem& operator-=(const FunElem& b);
  FunElem& operator*=(const Rational& s);
  friend FunElem operator+(FunElem a, const FunElem& b) { return a += b; }
  friend FunElem operator-(FunElem a, const FunElem& b) { return a -= b; }
  friend FunElem operator*(FunElem a, const Rational& s) { return a *= s; }
  friend FunElem operator*(const Rational& s, FunElem a) { return a *= s; }
  friend bool operator==(const FunElem& a, const FunElem& b);

 private:
  void prune();
  std::map<Weight, QMatrix> comps_;
};

FunElem unit(const QuantumGroup& G);

/// c_{u,v}: single entry 1 at (u, v) of component lambda. Throws ConfigError on bad indices.
FunElem matrix_coefficient(const QuantumGroup& G, const Weight& lambda, std::size_t u, std::size_t v);

Rational evaluate(const QuantumGroup& G, const FunElem& a, const Monomial& X);
Rational counit(const FunElem& a);

/// (X.a)(Y) = a(YX); on coefficients C -> C rho(X)^T.
FunElem left_action(const QuantumGroup& G, const FunElem& a, const Monomial& X);
/// (a.X)(Y) = a(XY); on coefficients C -> rho(X)^T C.
FunElem right_action(const QuantumGroup& G, const FunElem& a, const Monomial& X);

/// Product dual to Delta. With `targets`, only those Peter-Weyl components of
/// the result are computed.
FunElem multiply(const QuantumGroup& G, const FunElem& a, const FunElem& b,
                 const std::set<Weight>* targets = nullptr);

/// a*(X) = conj(a(S(X)^*)); the lambda component lands in -w0 lambda.
FunElem star(const QuantumGroup& G, const FunElem& a);

/// Left regular weight decomposition; c_{u,v} has left weight wt(e_v).
std::map<Weight, FunElem> left_weight_decompose(const QuantumGroup& G, const FunElem& a);

Rational haar(const FunElem& a);
/// <a, b>_h = h(b^* a).
Rational haar_inner(const QuantumGroup& G, const FunElem& a, const FunElem& b);
double haar_norm(const QuantumGroup& G, const FunElem& a);

/// One-dimensional representation: a of left weight mu maps to a(1) t^mu.
std::complex<double> tau(const QuantumGroup& G, const FunElem& a,
                         const std::vector<std::complex<double>>& t);

/// Seeded random element with small integer coefficients supported on the given components.
FunElem random_element(const QuantumGroup& G, const std::vector<Weight>& lambdas, std::mt19937_64& rng,
                       int range = 3, double density = 0.5);

std::string to_string(const FunElem& a);

}  // namespace qflag::funalg
