#pragma once

// Root systems, Weyl groups and parabolic quotients.
//
// Weights live in fundamental-weight coordinates. The simple root alpha_i is
// row i of the Cartan matrix a_ij = 2(alpha_i, alpha_j)/(alpha_j, alpha_j), so
// roots and weights share one integer lattice and (mu, alpha_j) = d_j mu_j.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qflag/rational.hpp"

namespace qflag::rootsys {

using Weight = std::vector<int>;
using IntMatrix = std::vector<std::vector<int>>;

enum class CartanType { A, B, C, G };

char type_letter(CartanType t);

struct RootSystem {
  CartanType type = CartanType::A;
  int rank = 0;
  IntMatrix cartan;                  // a_ij
  std::vector<int> d;                // d_i = (alpha_i, alpha_i)/2, short roots have d = 1
  std::vector<Weight> positive_roots;  // fundamental coordinates
  std::vector<Weight> positive_roots_simple;  // simple-root coordinates

  std::string label() const;  // "A2", "B2", ...

  Weight simple_root(int i) const { return cartan[static_cast<std::size_t>(i)]; }
  Weight fundamental_weight(int i) const;
  Weight zero() const { return Weight(static_cast<std::size_t>(rank), 0); }

  /// Coordinates of mu in the simple-root basis (rational in general).
  std::vector<Rational> root_coords(const Weight& mu) const;
  Rational form(const Weight& a, const Weight& b) const;
  /// (mu, alpha_i^vee) = mu_i.
  int coroot_pairing(const Weight& mu, int i) const { return mu[static_cast<std::size_t>(i)]; }

  Weight reflect(const Weight& mu, int i) const;
  bool is_dominant(const Weight& mu) const;
  /// mu <= lambda in the dominance order.
  bool dominance_leq(const Weight& mu, const Weight& lambda) const;
  bool is_root(const Weight& mu) const;
};

/// Supported: A1..A4, B2, C2, G2. Throws ConfigError otherwise.
RootSystem build_root_system(char type, int rank);
RootSystem build_root_system(const std::string& label);

Weight add(const Weight& a, const Weight& b);
Weight sub(const Weight& a, const Weight& b);
Weight scale(const Weight& a, int k);
Weight negate(const Weight& a);
std::string to_string(const Weight& w);

struct WeylElement {
  std::vector<int> word;  // canonical reduced word, 0-based indices
  IntMatrix action;       // matrix on fundamental-weight coordinates
  int length() const { return static_cast<int>(word.size()); }
};

bool operator==(const WeylElement& a, const WeylElement& b);

/// The full Weyl group with canonical words and a multiplication table by lookup.
class WeylGroup {
 public:
  explicit WeylGroup(const RootSystem& R);

  const RootSystem& roots() const { return R_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<WeylElement>& elements() const { return elements_; }
  const WeylElement& operator[](std::size_t k) const { return elements_[k]; }

  std::size_t identity() const { return 0; }
  std::size_t longest() const { return elements_.size() - 1; }
  std::size_t index_of(const IntMatrix& action) const;
  std::size_t from_word(const std::vector<int>& word) const;
  std::size_t multiply(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  std::size_t simple(int i) const { return simple_[static_cast<std::size_t>(i)]; }

  /// Number of positive roots sent to negative roots.
  int inversion_count(std::size_t a) const;
  Weight act(std::size_t a, const Weight& mu) const;
  bool is_reduced(const std::vector<int>& word) const;
  std::vector<std::vector<int>> reduced_words(std::size_t a) const;

  /// -w0 lambda.
  Weight dual_weight(const Weight& lambda) const;

 private:
  RootSystem R_;
  std::vector<WeylElement> elements_;
  std::map<IntMatrix, std::size_t> index_;
  std::vector<std::size_t> simple_;
};

using Subset = std::vector<int>;  // sorted 0-based indices

/// Validates and normalizes S (sorted, unique, within range); throws ConfigError.
Subset normalize_subset(const RootSystem& R, Subset S);
Subset complement(const RootSystem& R, const Subset& S);
bool contains(const Subset& S, int i);

/// {w : l(w s_i) > l(w) for all i in S}, ordered by (length, word).
std::vector<std::size_t> minimal_coset_reps(const WeylGroup& W, const Subset& S);
/// Elements of the parabolic subgroup W_S.
std::vector<std::size_t> parabolic_subgroup(const WeylGroup& W, const Subset& S);

struct CosetFactorization {
  std::size_t u;  // in W^S
  std::size_t v;  // in W_S
};

CosetFactorization coset_factorize(const WeylGroup& W, std::size_t w, const Subset& S);

struct SchubertCell {
  std::size_t element;
  std::vector<int> word;
  int length;
};

std::vector<SchubertCell> schubert_cells(const WeylGroup& W, const Subset& S);

struct PoissonDescriptor {
  Subset S;
  std::vector<Weight> roots_S;  // positive roots in the span of S (simple-root coordinates)
  std::vector<std::string> generators_kS;
  std::vector<std::string> generators_kS0;
  int center_dim = 0;
  std::string statement;
};

PoissonDescriptor poisson_subgroup_descriptor(const RootSystem& R, const Subset& S);

}  // namespace qflag::rootsys
