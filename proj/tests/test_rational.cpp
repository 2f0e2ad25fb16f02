#include <catch_amalgamated.hpp>

#include <random>

#include "qflag/rational.hpp"

using qflag::QMatrix;
using qflag::QVector;
using qflag::Rational;

namespace {

QMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int range, int zero_pct) {
  std::uniform_int_distribution<int> val(-range, range), pct(0, 99);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (pct(rng) >= zero_pct) {
        m(i, j) = Rational(val(rng), 1 + std::abs(val(rng)));
        m(i, j).canonicalize();
      }
  return m;
}

}  // namespace

TEST_CASE("rational parsing and powers", "[rational]") {
  CHECK(qflag::parse_rational("1/2") == Rational(1, 2));
  CHECK(qflag::parse_rational("6/4") == Rational(3, 2));
  CHECK(qflag::parse_rational("-3") == Rational(-3));
  CHECK_THROWS_AS(qflag::parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(qflag::parse_rational(""), std::invalid_argument);
  CHECK(qflag::pow(Rational(1, 2), 3) == Rational(1, 8));
  CHECK(qflag::pow(Rational(2, 3), -2) == Rational(9, 4));
  CHECK(qflag::pow(Rational(5), 0) == 1);
}

TEST_CASE("rank-nullity on random matrices", "[rational]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = 1 + trial % 6, c = 1 + (trial * 5) % 7;
    QMatrix m = random_matrix(rng, r, c, 3, 40);
    const QMatrix k = qflag::nullspace(m);
    CHECK(qflag::rank(m) + k.cols() == c);
    CHECK((m * k).is_zero());
    CHECK(qflag::rank(m) == qflag::rref(m).pivots.size());
  }
}

TEST_CASE("inverse and solve", "[rational]") {
  std::mt19937 rng(11);
  int inverted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    QMatrix m = random_matrix(rng, 4, 4, 4, 10);
    if (qflag::rank(m) < 4) {
      CHECK_THROWS_AS(qflag::inverse(m), std::domain_error);
      continue;
    }
    ++inverted;
    CHECK(m * qflag::inverse(m) == QMatrix::identity(4));
    QMatrix b = random_matrix(rng, 4, 2, 5, 0);
    auto x = qflag::solve(m, b);
    REQUIRE(x);
    CHECK(m * *x == b);
  }
  CHECK(inverted > 10);
  QMatrix a(2, 1);
  a(0, 0) = 1;
  a(1, 0) = 1;
  QMatrix b(2, 1);
  b(0, 0) = 1;
  b(1, 0) = 2;
  CHECK_FALSE(qflag::solve(a, b).has_value());
}

TEST_CASE("row space insertion agrees with rank", "[rational]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    QMatrix m = random_matrix(rng, 6, 5, 2, 50);
    qflag::RowSpace s(5);
    for (std::size_t r = 0; r < m.rows(); ++r) s.insert(m.row(r));
    CHECK(s.dim() == qflag::rank(m));
    for (std::size_t r = 0; r < m.rows(); ++r) CHECK(s.contains(m.row(r)));
  }
}

TEST_CASE("kronecker product mixed-product rule", "[rational]") {
  std::mt19937 rng(5);
  QMatrix a = random_matrix(rng, 2, 3, 3, 0), b = random_matrix(rng, 3, 2, 3, 0);
  QMatrix c = random_matrix(rng, 3, 2, 3, 0), d = random_matrix(rng, 2, 2, 3, 0);
  CHECK(qflag::kron(a, b) * qflag::kron(c, d) == qflag::kron(a * c, b * d));
}
