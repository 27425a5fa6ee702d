#include "doctest.h"

#include "hsiproj/error.hpp"
#include "hsiproj/linalg.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace hsiproj;
using namespace hsiproj::linalg;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

}  // namespace

TEST_CASE("sym_eig_desc on a diagonal matrix") {
  const EigenSystem es = sym_eig_desc(diag({3, 1}));
  CHECK(es.values[0] == doctest::Approx(3));
  CHECK(es.values[1] == doctest::Approx(1));
  CHECK(es.vectors(0, 0) == doctest::Approx(1));
  CHECK(es.vectors(1, 1) == doctest::Approx(1));
}

TEST_CASE("sym_eig_desc on the 2x2 swap matrix") {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const EigenSystem es = sym_eig_desc(a);
  CHECK(es.values[0] == doctest::Approx(1));
  CHECK(es.values[1] == doctest::Approx(-1));
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(es.vectors(0, 0)) == doctest::Approx(h));
  CHECK(std::abs(es.vectors(1, 0)) == doctest::Approx(h));
  CHECK(es.vectors(0, 0) * es.vectors(1, 0) > 0);
  CHECK(es.vectors(0, 1) * es.vectors(1, 1) < 0);
}

TEST_CASE("sym_eig_desc on the identity") {
  const EigenSystem es = sym_eig_desc(Matrix::Identity(5, 5));
  for (int i = 0; i < 5; ++i) CHECK(es.values[i] == doctest::Approx(1));
  CHECK((es.vectors.transpose() * es.vectors - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sign convention makes the largest-magnitude entry positive") {
  std::mt19937_64 rng(11);
  const EigenSystem es = sym_eig_desc(oracle::random_symmetric(rng, 6));
  for (int j = 0; j < 6; ++j) {
    Eigen::Index idx;
    es.vectors.col(j).cwiseAbs().maxCoeff(&idx);
    CHECK(es.vectors(idx, j) > 0);
  }
}

TEST_CASE("sym_eig_desc errors") {
  CHECK_THROWS_AS(sym_eig_desc(Matrix::Zero(2, 3)), Error);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    sym_eig_desc(bad);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
  try {
    sym_eig_desc(Matrix::Zero(3, 2));
    FAIL("expected NotSquare");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSquare);
  }
}

TEST_CASE("gen_eig_desc examples") {
  SUBCASE("identity B reduces to the standard problem") {
    const EigenSystem es = gen_eig_desc(diag({2, 1}), Matrix::Identity(2, 2), 0.0);
    CHECK(es.values[0] == doctest::Approx(2));
    CHECK(es.values[1] == doctest::Approx(1));
  }
  SUBCASE("diagonal pencil gives ratios of diagonals") {
    const EigenSystem es = gen_eig_desc(diag({1, 4}), diag({1, 4}), 0.0);
    CHECK(es.values[0] == doctest::Approx(1));
    CHECK(es.values[1] == doctest::Approx(1));
  }
  SUBCASE("ridge regularizes a singular B") {
    // B' = diag(0, 1) + 1e-6 * (1/2) I, so the top eigenvalue is 1 / 5e-7 = 2e6.
    const EigenSystem es = gen_eig_desc(diag({1, 0}), diag({0, 1}), 1e-6);
    CHECK(std::isfinite(es.values[0]));
    CHECK(es.values[0] == doctest::Approx(2e6).epsilon(1e-9));
    CHECK(std::abs(es.vectors(1, 0)) < 1e-12);
    CHECK(es.values[1] == doctest::Approx(0.0));
  }
  SUBCASE("singular B without ridge is rejected") {
    try {
      gen_eig_desc(diag({1, 0}), diag({0, 1}), 0.0);
      FAIL("expected SingularB");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularB);
    }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(gen_eig_desc(Matrix::Identity(2, 2), Matrix::Identity(3, 3), 0.0), Error);
  }
}

TEST_CASE("gen_eig_desc with B = I agrees with sym_eig_desc") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = oracle::random_symmetric(rng, 1 + t % 8);
    const EigenSystem s = sym_eig_desc(a);
    const EigenSystem g = gen_eig_desc(a, Matrix::Identity(a.rows(), a.rows()), 0.0);
    CHECK((s.values - g.values).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("eigen reconstruction rebuilds a random symmetric 6x6 matrix") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_symmetric(rng, 6);
    const EigenSystem es = sym_eig_desc(a);
    Matrix rebuilt = Matrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i) rebuilt += es.values[i] * es.vectors.col(i) * es.vectors.col(i).transpose();
    CHECK((rebuilt - a).norm() <= 1e-6);
  }
}

TEST_CASE("least_squares examples") {
  std::mt19937_64 rng(3);
  SUBCASE("identity design returns B") {
    const Matrix b = oracle::random_matrix(rng, 3, 2);
    CHECK((least_squares(Matrix::Identity(3, 3), b) - b).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("constant regressor gives the mean") {
    Matrix a(2, 1), b(2, 1);
    a << 1, 1;
    b << 1, 3;
    CHECK(least_squares(a, b)(0, 0) == doctest::Approx(2));
  }
  SUBCASE("projection onto the first two coordinates") {
    Matrix a(3, 2), b(3, 1);
    a << 1, 0, 0, 1, 0, 0;
    b << 1, 2, 5;
    const Matrix c = least_squares(a, b);
    CHECK(c(0, 0) == doctest::Approx(1));
    CHECK(c(1, 0) == doctest::Approx(2));
    CHECK((b - a * c).norm() == doctest::Approx(5));
  }
  SUBCASE("duplicate columns are rank deficient") {
    Matrix a(3, 2);
    a << 1, 1, 2, 2, 3, 3;
    try {
      least_squares(a, Matrix::Ones(3, 1));
      FAIL("expected RankDeficient");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RankDeficient);
    }
    // The minimum-norm variant splits the weight evenly between the copies.
    Matrix b(3, 1);
    b << 2, 4, 6;
    const Matrix c = least_squares_min_norm(a, b);
    CHECK(c(0, 0) == doctest::Approx(1));
    CHECK(c(1, 0) == doctest::Approx(1));
  }
  SUBCASE("row mismatch") {
    CHECK_THROWS_AS(least_squares(Matrix::Identity(3, 3), Matrix::Ones(2, 1)), Error);
  }
}

TEST_CASE("least_squares residual is orthogonal to the column space") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(1, 10);
  for (int t = 0; t < 100; ++t) {
    const int cols = dim(rng);
    const int rows = cols + dim(rng);
    const Matrix a = oracle::random_matrix(rng, rows, cols);
    const Matrix b = oracle::random_matrix(rng, rows, 1 + t % 3);
    const Matrix c = least_squares(a, b);
    const double tol = 1e-8 * a.norm() * b.norm();
    CHECK((a.transpose() * (b - a * c)).cwiseAbs().maxCoeff() <= tol);
    CHECK((c - oracle::normal_equations(a, b)).cwiseAbs().maxCoeff() <= 1e-6 * (1 + c.norm()));
  }
}
