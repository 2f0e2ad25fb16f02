#include "qflag/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace qflag {

Rational pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return Rational(1) / pow(base, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational parse_rational(const std::string& text) {
  Rational out;
  if (text.empty() || out.set_str(text, 10) != 0)
    throw std::invalid_argument("not a rational number: '" + text + "'");
  if (out.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) { return value.get_str(); }

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::column(const QVector& v) {
  QMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

QVector QMatrix::row(std::size_t r) const {
  return QVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

QVector QMatrix::col(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void QMatrix::set_col(std::size_t c, const QVector& v) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(r, c) != 0) t(c, r) = (*this)(r, c);
  return t;
}

QVector QMatrix::apply(const QVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("QMatrix::apply: size mismatch");
  QVector y(rows_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (x[c] == 0) continue;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Rational& m = (*this)(r, c);
      if (m != 0) y[r] += m * x[c];
    }
  }
  return y;
}

QVector QMatrix::apply_transpose(const QVector& x) const {
  if (x.size() != rows_) throw std::invalid_argument("QMatrix::apply_transpose: size mismatch");
  QVector y(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (x[r] == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c) {
      const Rational& m = (*this)(r, c);
      if (m != 0) y[c] += m * x[r];
    }
  }
  return y;
}

QMatrix& QMatrix::operator+=(const QMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("QMatrix +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (other.data_[i] != 0) data_[i] += other.data_[i];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("QMatrix -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (other.data_[i] != 0) data_[i] -= other.data_[i];
  return *this;
}

QMatrix& QMatrix::operator*=(const Rational& s) {
  if (s == 1) return *this;
  for (auto& x : data_)
    if (x != 0) x *= s;
  return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("QMatrix *: shape mismatch");
  QMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Rational& bkj = b(k, j);
        if (bkj != 0) out(i, j) += aik * bkj;
      }
    }
  return out;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

QMatrix kron(const QMatrix& a, const QMatrix& b) {
  QMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rational& aij = a(i, j);
      if (aij == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (b(k, l) != 0) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

QMatrix hstack(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  QMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

QMatrix vstack(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
  QMatrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + r, c) = b(r, c);
  return out;
}

RowEchelon rref(QMatrix m) {
  RowEchelon out;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t p = lead;
    while (p < rows && m(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != lead)
      for (std::size_t k = 0; k < cols; ++k) std::swap(m(p, k), m(lead, k));
    const Rational inv = 1 / m(lead, c);
    for (std::size_t k = c; k < cols; ++k)
      if (m(lead, k) != 0) m(lead, k) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || m(r, c) == 0) continue;
      const Rational f = m(r, c);
      for (std::size_t k = c; k < cols; ++k)
        if (m(lead, k) != 0) m(r, k) -= f * m(lead, k);
    }
    out.pivots.push_back(c);
    ++lead;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const QMatrix& m) {
  RowSpace space(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) space.insert(m.row(r));
  return space.dim();
}

QMatrix nullspace(const QMatrix& m) {
  const RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMatrix basis(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    basis(f, k) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      if (e.reduced(r, f) != 0) basis(e.pivots[r], k) = -e.reduced(r, f);
  }
  return basis;
}

std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  const RowEchelon e = rref(hstack(a, b));
  QMatrix x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    const std::size_t p = e.pivots[r];
    if (p >= a.cols()) return std::nullopt;
    for (std::size_t c = 0; c < b.cols(); ++c) x(p, c) = e.reduced(r, a.cols() + c);
  }
  return x;
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::domain_error("inverse: matrix not square");
  const std::size_t n = m.rows();
  const RowEchelon e = rref(hstack(m, QMatrix::identity(n)));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
    throw std::domain_error("inverse: matrix is singular");
  QMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

QVector RowSpace::reduce(QVector v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t p = pivots_[k];
    if (v[p] == 0) continue;
    const Rational f = v[p];
    const QVector& row = rows_[k];
    for (std::size_t c = p; c < width_; ++c)
      if (row[c] != 0) v[c] -= f * row[c];
  }
  return v;
}

bool RowSpace::insert(const QVector& v) {
  if (v.size() != width_) throw std::invalid_argument("RowSpace::insert: width mismatch");
  QVector r = reduce(v);
  std::size_t p = 0;
  while (p < width_ && r[p] == 0) ++p;
  if (p == width_) return false;
  const Rational inv = 1 / r[p];
  for (std::size_t c = p; c < width_; ++c)
    if (r[c] != 0) r[c] *= inv;
  auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  const auto pos = it - pivots_.begin();
  pivots_.insert(it, p);
  rows_.insert(rows_.begin() + pos, std::move(r));
  return true;
}

bool RowSpace::contains(const QVector& v) const {
  if (v.size() != width_) throw std::invalid_argument("RowSpace::contains: width mismatch");
  return is_zero(reduce(v));
}

void RowSpace::merge(const RowSpace& other) {
  for (const auto& r : other.rows_) insert(r);
}

QMatrix RowSpace::basis() const {
  QMatrix m(rows_.size(), width_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t c = 0; c < width_; ++c) m(r, c) = rows_[r][c];
  return m;
}

}  // namespace qflag
