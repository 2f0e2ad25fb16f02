#pragma once

// Exact rational matrices and row reduction.
//
// Everything in the exact layer of qflag is built on mpq_class. Matrices are
// dense row-major; the products skip zero entries, which is where most of the
// time goes for the block-sparse operators used by the module code.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qflag {

using Rational = mpq_class;
using QVector = std::vector<Rational>;

/// Integer power of a rational, negative exponents allowed.
Rational pow(const Rational& base, long exponent);

/// Parses "p/r" or "p" into a canonical rational; throws std::invalid_argument.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& value);

bool is_zero(const QVector& v);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);

  static QMatrix identity(std::size_t n);
  static QMatrix column(const QVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  QVector row(std::size_t r) const;
  QVector col(std::size_t c) const;
  void set_col(std::size_t c, const QVector& v);

  bool is_zero() const;
  QMatrix transpose() const;

  /// y = M x, skipping zero entries of M.
  QVector apply(const QVector& x) const;
  /// y = M^T x.
  QVector apply_transpose(const QVector& x) const;

  QMatrix& operator+=(const QMatrix& other);
  QMatrix& operator-=(const QMatrix& other);
  QMatrix& operator*=(const Rational& s);

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
  friend QMatrix operator*(QMatrix a, const Rational& s) { return a *= s; }
  friend QMatrix operator*(const Rational& s, QMatrix a) { return a *= s; }
  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QMatrix kron(const QMatrix& a, const QMatrix& b);
QMatrix hstack(const QMatrix& a, const QMatrix& b);
QMatrix vstack(const QMatrix& a, const QMatrix& b);

struct RowEchelon {
  QMatrix reduced;                  // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination; the first nonzero entry of a column is the pivot,
/// so the output is reproducible for a given input.
RowEchelon rref(QMatrix m);

std::size_t rank(const QMatrix& m);

/// Basis of {x : M x = 0}, returned as the columns of a cols(M) x k matrix.
QMatrix nullspace(const QMatrix& m);

/// Some solution X of A X = B, or nullopt when the system is inconsistent.
std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b);

/// Inverse of a square matrix; throws std::domain_error when singular.
QMatrix inverse(const QMatrix& m);

/// Incrementally maintained row space in echelon form.
///
/// Rows are kept sorted by pivot column with unit pivots, so insertion and
/// membership are a single forward reduction pass.
class RowSpace {
 public:
  RowSpace() = default;
  explicit RowSpace(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t dim() const { return rows_.size(); }

  /// Returns true when v was independent of the current rows.
  bool insert(const QVector& v);
  bool contains(const QVector& v) const;
  /// Absorbs the rows of another space of the same width.
  void merge(const RowSpace& other);

  const std::vector<QVector>& rows() const { return rows_; }
  QMatrix basis() const;

 private:
  QVector reduce(QVector v) const;

  std::size_t width_ = 0;
  std::vector<QVector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace qflag
