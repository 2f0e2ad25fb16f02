#pragma once

// Quantized flag manifold algebras inside C_q[U].
//
// Every algebra handled here is stable under the right regular action, so its
// lambda-piece has the form V(lambda)^* (x) R_lambda for a subspace R_lambda of
// V(lambda): the coefficient matrices C^lambda whose rows lie in R_lambda.
// A GradedSpan stores only the R_lambda, which keeps products cheap: the
// kappa-piece of A.B is spanned by the projections p_j(r (x) s).

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qflag/funalg.hpp"
#include "qflag/rational.hpp"
#include "qflag/rootsys.hpp"
#include "qflag/uqmod.hpp"

namespace qflag::flagalg {

using funalg::FunElem;
using rootsys::Subset;
using rootsys::Weight;
using uqmod::InvariantMode;
using uqmod::QuantumGroup;

struct FlagWeight {
  Weight Lambda;
  Subset S;
};

/// Checks m_i = 0 on S and m_i > 0 off S; throws ConfigError otherwise.
FlagWeight make_flag_weight(const rootsys::RootSystem& R, const Weight& Lambda, Subset S);

class GradedSpan {
 public:
  GradedSpan() = default;

  const std::map<Weight, RowSpace>& pieces() const { return pieces_; }
  const RowSpace* piece(const Weight& lambda) const;
  /// dim R_lambda (0 when absent).
  std::size_t row_dim(const Weight& lambda) const;
  /// dim V(lambda) * dim R_lambda.
  std::size_t rank(const QuantumGroup& G, const Weight& lambda) const;
  std::set<Weight> support() const;

  void insert_row(const Weight& lambda, const QVector& row);
  /// Adds the right-regular span of a: all rows of each component.
  void insert(const FunElem& a);
  void merge(const GradedSpan& other);

  bool contains(const FunElem& a) const;
  bool contains(const GradedSpan& other) const;
  /// Restriction to the given components.
  GradedSpan restrict_to(const std::set<Weight>& lambdas) const;

 private:
  std::map<Weight, RowSpace> pieces_;
};

GradedSpan unit_span(const QuantumGroup& G);
GradedSpan span_of(const std::vector<FunElem>& elements);
/// Span of all products a.b; with `targets`, only those components are formed.
GradedSpan product(const QuantumGroup& G, const GradedSpan& A, const GradedSpan& B,
                   const std::set<Weight>* targets = nullptr);

/// The element with a single nonzero row r at position u of component lambda.
FunElem row_element(const QuantumGroup& G, const Weight& lambda, std::size_t u, const QVector& r);

struct PluckerGenerators {
  std::vector<FunElem> holomorphic;      // f_Lambda, f over the dual weight basis
  std::vector<FunElem> antiholomorphic;  // their stars
};

PluckerGenerators plucker_generators(const QuantumGroup& G, const FlagWeight& fw);

/// Span of the products f_Lambda . g_Lambda^*, formed element by element.
GradedSpan a_lambda_degree1(const QuantumGroup& G, const FlagWeight& fw);

/// Rows of V(lambda) fixed by U_q(k_S) (mode KS) or U_q(k_S^0) (mode KS0).
RowSpace invariant_component(const QuantumGroup& G, const Weight& lambda, const Subset& S,
                             InvariantMode mode);

/// The subalgebra generated by the right-invariant span `generators` up to
/// products of d factors (the unit included). Lower degrees are formed in
/// full; the top degree only on `targets` when given.
GradedSpan generated_span(const QuantumGroup& G, const GradedSpan& generators, int d,
                          const std::set<Weight>* targets = nullptr);

/// Span of f_lambda . g_lambda^* for one lambda supported on the complement of S.
GradedSpan factorized_components(const QuantumGroup& G, const Subset& S, const Weight& lambda,
                                 const std::set<Weight>* targets = nullptr);

/// Highest weights of products of at most d factors taken from `factors`.
std::set<Weight> reachable_weights(const QuantumGroup& G, const std::vector<Weight>& factors, int d);

struct PieceRow {
  Weight lambda;
  Weight left_weight;  // empty unless the row is a left-weight slice
  std::size_t rank_generated = 0;
  std::size_t dim_invariant = 0;
  bool contained = true;
  std::string verdict;  // PASS, FAIL or UNREACHED
};

struct TheoremReport {
  std::string claim;
  std::vector<PieceRow> rows;
  /// Secondary comparison (the factorized span in the algthm report).
  std::string secondary_claim;
  std::vector<PieceRow> secondary_rows;
  bool pass = false;
  bool secondary_pass = true;
};

TheoremReport verify_theorem_algthm(const QuantumGroup& G, const FlagWeight& fw, int d);
TheoremReport verify_theorem_ss_a(const QuantumGroup& G, const Subset& S, int d);

struct A0Witness {
  Weight lambda;
  Weight left_weight;
  std::size_t multiplicity;  // dim of the invariant weight space
};

struct A0Report {
  std::string claim;
  std::string verdict;  // PROPER, NO-WITNESS or NOT-APPLICABLE
  Weight Lambda;
  std::vector<Weight> components_examined;
  std::vector<A0Witness> witnesses;
};

/// Compares left weights of C_q[U/K_S^0] pieces (components reachable within d
/// from the fundamental generators) against the lattice Z.Lambda spanned by the
/// left weights of the generators f_Lambda and g_Lambda^*.
A0Report check_a0_proper(const QuantumGroup& G, const FlagWeight& fw, int d = 2);

}  // namespace qflag::flagalg
