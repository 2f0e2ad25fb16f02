#pragma once

// Finite-dimensional U_q(g)-modules with exact generator actions.
//
// A GradedModule is a weight-graded vector space with E_i (= X_i^+) and
// F_i (= X_i^-) stored as block maps between weight spaces. K_i acts on the
// weight mu block by q_i^{mu_i}. Modules that carry an invariant form keep an
// orthogonal basis with the diagonal of the Gram matrix in `norms`.
//
// Hopf structure: Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^{-1} + 1(x)F,
// S(E) = -K^{-1}E, S(F) = -FK, E* = q_i^{-1} F K, F* = q_i K^{-1} E.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qflag/rational.hpp"
#include "qflag/rootsys.hpp"

namespace qflag::uqmod {

using rootsys::RootSystem;
using rootsys::Weight;

/// [n]_t = (t^n - t^{-n}) / (t - t^{-1}).
Rational qnumber(long n, const Rational& t);

/// Validates 0 < q < 1; throws ConfigError.
Rational check_q(const Rational& q);

struct Gen {
  enum Kind { E, F, K, Kinv };
  Kind kind;
  int index;  // 0-based simple root
};

/// Product g_1 g_2 ... g_n; acts on vectors with g_n first.
using Monomial = std::vector<Gen>;

std::string to_string(const Monomial& m);

struct BlockMap {
  std::size_t target = 0;  // block index of the image
  QMatrix m;               // rows: target block, cols: source block
};

class GradedModule {
 public:
  GradedModule() = default;
  GradedModule(const RootSystem& R, Rational q);

  int rank() const { return rank_; }
  const Rational& q() const { return q_; }
  const Rational& qi(int i) const { return qi_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& d() const { return d_; }
  const rootsys::IntMatrix& cartan() const { return cartan_; }

  std::size_t dim() const { return weight_of_.size(); }
  std::size_t num_blocks() const { return blocks_.size(); }
  const Weight& block_weight(std::size_t b) const { return blocks_[b].weight; }
  const std::vector<std::size_t>& block_indices(std::size_t b) const { return blocks_[b].indices; }
  std::optional<std::size_t> find_block(const Weight& mu) const;
  std::size_t block_of_index(std::size_t k) const { return block_of_index_[k]; }
  std::size_t local_index(std::size_t k) const { return local_index_[k]; }
  const Weight& weight(std::size_t k) const { return weight_of_[k]; }

  const std::optional<BlockMap>& raise(int i, std::size_t b) const { return raise_[idx(i)][b]; }
  const std::optional<BlockMap>& lower(int i, std::size_t b) const { return lower_[idx(i)][b]; }

  bool has_form() const { return !norms_.empty(); }
  const QVector& norms() const { return norms_; }

  /// K_i eigenvalue on the basis vector k.
  Rational k_eigenvalue(int i, std::size_t k) const;

  QVector apply(const Gen& g, const QVector& x) const;
  QVector apply(const Monomial& m, QVector x) const;
  QMatrix dense(const Gen& g) const;

  Rational inner(const QVector& x, const QVector& y) const;

  /// Weight multiplicities.
  std::map<Weight, std::size_t> character() const;

  // Construction interface used by the builders below. set_basis groups the
  // indices into weight blocks (first-appearance order) and clears the maps.
  void set_basis(std::vector<Weight> weights);
  void set_raise(int i, std::size_t b, BlockMap m) { raise_[idx(i)][b] = std::move(m); }
  void set_lower(int i, std::size_t b, BlockMap m) { lower_[idx(i)][b] = std::move(m); }
  void set_norms(QVector n) { norms_ = std::move(n); }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  struct Block {
    Weight weight;
    std::vector<std::size_t> indices;
  };

  int rank_ = 0;
  Rational q_;
  std::vector<Rational> qi_;
  std::vector<int> d_;
  rootsys::IntMatrix cartan_;

  std::vector<Weight> weight_of_;
  std::vector<Block> blocks_;
  std::map<Weight, std::size_t> block_lookup_;
  std::vector<std::size_t> block_of_index_;
  std::vector<std::size_t> local_index_;
  std::vector<std::vector<std::optional<BlockMap>>> raise_, lower_;
  QVector norms_;
};

/// One term of the recipe y_k = sum coeff * F_i y_parent.
struct RecipeTerm {
  int i;
  std::size_t parent;
  Rational coeff;
};

/// V(lambda) with an orthogonal weight basis; basis vector 0 is v_lambda,
/// vectors are ordered by depth (height of lambda - mu), then by F-word.
class IrreducibleModule : public GradedModule {
 public:
  const Weight& highest_weight() const { return lambda_; }
  const std::vector<RecipeTerm>& recipe(std::size_t k) const { return recipe_[k]; }
  /// F-word label (0-based indices, leftmost applied last) of basis vector k.
  const std::vector<int>& word(std::size_t k) const { return words_[k]; }

  friend IrreducibleModule build_irreducible(const RootSystem& R, const Rational& q,
                                             const Weight& lambda, std::size_t dim_cap);

 private:
  Weight lambda_;
  std::vector<std::vector<RecipeTerm>> recipe_;
  std::vector<std::vector<int>> words_;
};

constexpr std::size_t kDefaultDimCap = 200;

/// Throws DomainError for non-dominant lambda, OverflowError past dim_cap.
IrreducibleModule build_irreducible(const RootSystem& R, const Rational& q, const Weight& lambda,
                                    std::size_t dim_cap = kDefaultDimCap);

/// True iff <E_i x, y> = <x, q_i^{-1} F_i K_i y> and <F_i x, y> = <x, q_i K_i^{-1} E_i y>
/// on all basis pairs.
bool star_adjointness_check(const GradedModule& M);

/// Tensor product through Delta; basis index (a, b) -> a * dim(M2) + b.
GradedModule tensor(const GradedModule& M1, const GradedModule& M2);

/// Linear dual with (X.f)(v) = f(S(X).v); basis is the dual basis, weights negated.
/// The result carries no invariant form.
GradedModule dual(const GradedModule& M);

/// Images of the basis of V under the homomorphism sending v_lambda to x.
/// Returns a dim(M) x dim(V) matrix.
QMatrix embed(const GradedModule& M, const QVector& x, const IrreducibleModule& V);

struct HighestWeightVector {
  Weight weight;
  QVector vector;
};

/// Basis of the joint kernel of all E_i, per weight block; vectors within a
/// block are orthogonal when M has a form.
std::vector<HighestWeightVector> highest_weight_vectors(const GradedModule& M);
std::vector<HighestWeightVector> highest_weight_vectors(const GradedModule& M, const Weight& mu);

enum class InvariantMode { KS, KS0 };

/// Vectors v with X.v = eps(X) v for X in U_q(k_S) (mode KS) or U_q(k_S^0) (mode KS0).
std::vector<QVector> invariant_vectors(const GradedModule& M, const rootsys::Subset& S,
                                       InvariantMode mode);

struct Sl2String {
  int two_spin;                  // 2j
  std::vector<QVector> vectors;  // x, F_i x, ..., F_i^{2j} x
};

std::vector<Sl2String> sl2_strings(const GradedModule& M, int i);

/// One copy of V(kappa) inside M1 (x) M2.
struct Component {
  Weight kappa;
  QMatrix iota;  // dim(T) x dim V(kappa)
  Rational hw_norm;  // <iota v_kappa, iota v_kappa>_T
};

/// Star conjugation data for V(lambda): J maps V(lambda^*) onto V(lambda)^*.
struct DualData {
  Weight lambda_star;
  QMatrix J;
  QMatrix J_inv;
};

/// Shared context: root system, q, Weyl group and caches of modules and
/// decompositions. Thread-safe; cached objects are immutable once inserted.
class QuantumGroup {
 public:
  QuantumGroup(RootSystem R, Rational q, std::size_t dim_cap = kDefaultDimCap);

  const RootSystem& roots() const { return R_; }
  const rootsys::WeylGroup& weyl() const { return W_; }
  const Rational& q() const { return q_; }
  Rational qi(int i) const;
  std::size_t dim_cap() const { return dim_cap_; }

  const IrreducibleModule& irrep(const Weight& lambda) const;
  const GradedModule& tensor_module(const Weight& l1, const Weight& l2) const;
  /// Copies of V(kappa) in V(l1) (x) V(l2), mutually orthogonal.
  const std::vector<Component>& components(const Weight& l1, const Weight& l2,
                                           const Weight& kappa) const;
  /// Highest weights (with multiplicity) of V(l1) (x) V(l2).
  std::vector<Weight> tensor_highest_weights(const Weight& l1, const Weight& l2) const;
  const DualData& dual_data(const Weight& lambda) const;

  /// p(x) = (1/M) N_kappa^{-1} iota^T N_T x for x in the tensor module.
  QVector project(const Component& c, const Weight& l1, const Weight& l2, const QVector& x) const;

 private:
  RootSystem R_;
  rootsys::WeylGroup W_;
  Rational q_;
  std::size_t dim_cap_;

  mutable std::mutex mu_irrep_, mu_tensor_, mu_comp_, mu_dual_;
  mutable std::map<Weight, std::unique_ptr<IrreducibleModule>> irreps_;
  mutable std::map<std::pair<Weight, Weight>, std::unique_ptr<GradedModule>> tensors_;
  mutable std::map<std::tuple<Weight, Weight, Weight>, std::unique_ptr<std::vector<Component>>>
      components_;
  mutable std::map<Weight, std::unique_ptr<DualData>> duals_;
};

}  // namespace qflag::uqmod
