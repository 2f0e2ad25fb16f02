#pragma once

// *-representations of C_q[U] on truncated tensor powers of l_2(Z_+).
//
// The rank-one representation pi_q of C_q[SU(2)] acts on l_2(Z_+) by
//   L_{++} e_j = sqrt(1 - q^{2j}) e_{j-1},   L_{+-} e_j = -q^{j+1} e_j,
//   L_{-+} e_j = q^j e_j,                     L_{--} e_j = sqrt(1 - q^{2(j+1)}) e_{j+1},
// where L_{ab} is the matrix coefficient of the fundamental U_q(sl2)-module in
// the basis {e_+, e_- = F e_+}. The rank-one images phi_i^*(a) are expanded
// exactly in a monomial basis of these generators, and pi_w is assembled along
// a reduced word through the iterated coproduct.
//
// Operators are stored as sums of shifted diagonals ("bands") over the
// multi-index set {0..N-1}^l. Every rank-one monomial is a diagonal followed by
// a single shift, so the stored truncation of pi_w(a) is exactly the compression
// P_N pi_w(a) P_N.

#include <complex>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "qflag/flagalg.hpp"
#include "qflag/funalg.hpp"
#include "qflag/rational.hpp"
#include "qflag/uqmod.hpp"

namespace qflag::repengine {

using cd = std::complex<double>;
using funalg::FunElem;
using rootsys::Weight;
using uqmod::Monomial;
using uqmod::QuantumGroup;

// ---------------------------------------------------------------------------
// Rank one

enum class LGen { PP, PM, MP, MM };  // L_{++}, L_{+-}, L_{-+}, L_{--}

/// L_{++}^a L_{-+}^b L_{+-}^c when raising, else L_{--}^a L_{-+}^b L_{+-}^c.
struct Rank1Monomial {
  bool raising = false;
  int a = 0, b = 0, c = 0;
  int degree() const { return a + b + c; }
  auto operator<=>(const Rank1Monomial&) const = default;
};

using Rank1Element = std::map<Rank1Monomial, Rational>;

std::string to_string(const Rank1Monomial& m);

/// Basis monomials of total degree <= D (the raising family needs a >= 1).
std::vector<Rank1Monomial> rank1_basis(int D);

/// Exact value of a rank-one monomial at X in U_q(sl2) (generator index 0).
Rational evaluate_rank1(const Rational& q, const Rank1Monomial& m, const Monomial& X);

/// Expansion of X -> a(phi_i(X)) in the monomial basis with parameter q_i.
/// Throws InternalError if the evaluation system is inconsistent or rank deficient.
Rank1Element phi_star_expand(const QuantumGroup& G, const FunElem& a, int i);

// ---------------------------------------------------------------------------
// Truncated operators

class TruncatedOp {
 public:
  TruncatedOp() = default;
  TruncatedOp(int N, int l);

  static TruncatedOp identity(int N, int l);

  int N() const { return N_; }
  int l() const { return l_; }
  std::size_t dim() const { return dim_; }
  const std::map<std::vector<int>, std::vector<cd>>& bands() const { return bands_; }

  /// Entry (x + shift, x) += value, x the source multi-index.
  void add(const std::vector<int>& shift, std::size_t source, cd value);
  std::vector<cd>& band(const std::vector<int>& shift);

  TruncatedOp& operator+=(const TruncatedOp& o);
  TruncatedOp& operator*=(cd s);
  friend TruncatedOp operator+(TruncatedOp a, const TruncatedOp& b) { return a += b; }
  friend TruncatedOp operator*(TruncatedOp a, cd s) { return a *= s; }

  TruncatedOp adjoint() const;
  /// Truncated matrix product this * o.
  TruncatedOp compose(const TruncatedOp& o) const;

  std::vector<cd> apply(const std::vector<cd>& x) const;
  std::vector<cd> apply_adjoint(const std::vector<cd>& x) const;

  /// Dense matrix (only for small dims).
  std::vector<std::vector<cd>> dense() const;
  cd entry(std::size_t row, std::size_t col) const;

  /// Largest |shift| over bands carrying a nonzero entry.
  int reach() const;
  /// Sum over tensor factors of the largest |shift| in that factor; bounds the
  /// generator degree and serves as the default interior margin.
  int total_reach() const;
  bool is_diagonal() const;

  std::vector<int> coords(std::size_t k) const;
  std::size_t index(const std::vector<int>& x) const;
  bool interior(std::size_t k, int margin) const;

 private:
  int N_ = 1, l_ = 0;
  std::size_t dim_ = 1;
  std::map<std::vector<int>, std::vector<cd>> bands_;
};

TruncatedOp kron(const TruncatedOp& a, const TruncatedOp& b);

/// pi_q of one generator on l_2(Z_+) truncated to N levels.
TruncatedOp pi_q_generator(LGen g, double q, int N);
TruncatedOp pi_q_monomial(const Rank1Monomial& m, double q, int N);
TruncatedOp pi_q_element(const Rank1Element& a, double q, int N);

/// Frobenius norm of (a - b) on the interior block.
double interior_deviation(const TruncatedOp& a, const TruncatedOp& b, int margin);
/// Top-k singular values of the interior compression, descending.
std::vector<double> singular_values(const TruncatedOp& a, int margin, std::size_t k);
double operator_norm(const TruncatedOp& a, int margin);

// ---------------------------------------------------------------------------
// pi_w and pi_{w,t}

/// Caches rank-one expansions of matrix coefficients per (lambda, i).
class RepEngine {
 public:
  explicit RepEngine(const QuantumGroup& G);

  const QuantumGroup& group() const { return G_; }
  double qi(int i) const;

  /// table[u][v] = phi_i^*(c_{u,v}) for V(lambda).
  const std::vector<std::vector<Rank1Element>>& phi_table(const Weight& lambda, int i) const;

  /// pi_w(a) along the given word of 0-based simple indices. Words are not
  /// checked for reducedness here.
  TruncatedOp pi_w(const FunElem& a, const std::vector<int>& word, int N) const;
  /// pi_{w,t} = (pi_w (x) tau_t) Delta.
  TruncatedOp pi_wt(const FunElem& a, const std::vector<int>& word, const std::vector<cd>& t, int N) const;

 private:
  using CMatrix = std::vector<std::vector<cd>>;
  TruncatedOp pi_component(const Weight& lambda, const CMatrix& C, const std::vector<int>& word, int N) const;
  const std::vector<std::vector<TruncatedOp>>& factor_ops(const Weight& lambda, int i, int N) const;

  const QuantumGroup& G_;
  mutable std::map<std::pair<Weight, int>, std::vector<std::vector<Rank1Element>>> phi_cache_;
  mutable std::map<std::tuple<Weight, int, int>, std::vector<std::vector<TruncatedOp>>> op_cache_;
};

/// t^mu = prod t_i^{mu_i}.
cd torus_character(const std::vector<cd>& t, const Weight& mu);

// ---------------------------------------------------------------------------
// Checks and diagnostics

struct CheckReport {
  std::string claim;
  bool pass = false;
  double deviation = 0;  // worst observed deviation
  double tolerance = 0;
  std::vector<std::string> details;
};

/// Quadratic relations of C_q[SU(2)], computed exactly by the product of the
/// function algebra, checked on pi_q.
CheckReport su2_relations_check(const Rational& q, int N, int margin, double tolerance = 1e-10);

CheckReport star_rep_check(const RepEngine& E, const std::vector<FunElem>& samples, const std::vector<int>& word,
                           const std::vector<cd>& t, int N, double tolerance = 1e-9);

CheckReport homomorphism_check(const RepEngine& E, const std::vector<std::pair<FunElem, FunElem>>& pairs,
                               const std::vector<int>& word, int N, double tolerance = 1e-9);

struct WordComparison {
  int N;
  double deviation;  // max over samples of max |sigma_k - sigma'_k|, k <= 10
};

struct WordIndependenceReport {
  std::string claim;
  bool pass = false;
  std::vector<WordComparison> levels;
};

/// Seeded random elements, each supported on the coefficients c_{u,v} with one
/// fixed pair (wt u, wt v) across the given components. On such elements the
/// truncated singular values settle quickly in N; on generic elements they
/// creep up towards a continuous spectrum.
std::vector<FunElem> bihomogeneous_samples(const QuantumGroup& G, const std::vector<Weight>& lambdas, int count,
                                           std::uint64_t seed);

/// Throws DomainError if a word is not reduced. Words of different Weyl
/// elements are accepted and serve as a negative control.
WordIndependenceReport reduced_word_independence(const RepEngine& E, const std::vector<int>& word1,
                                                 const std::vector<int>& word2, const std::vector<FunElem>& samples,
                                                 int N, double tolerance = 1e-6);

/// Bit k is set iff the holomorphic coordinate (b_k)_Lambda has interior norm > 1e-8.
std::vector<bool> plucker_vanishing_pattern(const RepEngine& E, const std::vector<int>& word, const Weight& Lambda,
                                            int N);

struct IrreducibilityReport {
  std::string claim;
  std::size_t cyclic_dim = 0;
  std::size_t cyclic_target = 0;
  std::size_t commutant_dim = 0;
  bool cyclic_pass = false;
  bool commutant_pass = false;
  bool pass = false;
};

IrreducibilityReport irreducibility_diagnostic(const RepEngine& E, const std::vector<int>& word,
                                               const std::vector<FunElem>& generators, int N, int margin,
                                               std::uint64_t seed);

struct NormReport {
  std::string claim;
  bool pass = true;
  double haar_norm = 0;
  std::vector<std::pair<int, double>> sup_estimates;  // (N, s_N)
};

/// s_N = max over all w in W (canonical words) and the sampled t of the interior operator norm.
NormReport sup_norm_vs_haar(const RepEngine& E, const FunElem& a, const std::vector<int>& Ns,
                            const std::vector<std::vector<cd>>& torus, double tolerance = 1e-8);

CheckReport restriction_identity_check(const RepEngine& E, const std::vector<FunElem>& invariant_samples,
                                       const rootsys::Subset& S, const std::vector<cd>& t, int N,
                                       double tolerance = 1e-9);

struct SsbClass {
  std::vector<int> word;
  std::vector<cd> t;
  std::vector<bool> pattern;
  std::vector<double> phases;  // one per fundamental weight off S
};

struct SsbReport {
  std::string claim;
  bool invariance_pass = false;
  double invariance_deviation = 0;
  bool separation_pass = false;
  std::vector<SsbClass> classes;
  bool pass = false;
};

/// Torus samples: `per_coordinate` roots of unity (shifted off 1) on each free coordinate.
std::vector<std::vector<cd>> torus_samples(int rank, const rootsys::Subset& S, int per_coordinate);

SsbReport verify_theorem_ss_b(const RepEngine& E, const rootsys::Subset& S, int N, int per_coordinate,
                              double tolerance = 1e-9);

}  // namespace qflag::repengine
