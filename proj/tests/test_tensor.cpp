#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tenmet/tensor.hpp"

using namespace tenmet;

TEST_SUITE("tensor") {

TEST_CASE("scalar product of all-ones tensors counts the entries") {
  const DenseTensor a({2, 3}, std::vector<double>(6, 1.0));
  CHECK(scalar_product(a, a) == doctest::Approx(6.0));
}

TEST_CASE("scalar product against a zero tensor vanishes") {
  std::mt19937_64 rng(1);
  const DenseTensor a = oracles::random_tensor({3, 2, 2}, rng);
  const DenseTensor z({3, 2, 2});
  CHECK(scalar_product(a, z) == 0.0);
}

TEST_CASE("scalar product matches the flat multi-index oracle and is symmetric") {
  std::mt19937_64 rng(2);
  const DenseTensor a = oracles::random_tensor({2, 2, 2}, rng);
  const DenseTensor b = oracles::random_tensor({2, 2, 2}, rng);
  CHECK(scalar_product(a, b) == doctest::Approx(oracles::naive_scalar_product(a, b)));
  CHECK(scalar_product(a, b) == scalar_product(b, a));
}

TEST_CASE("scalar product rejects mismatched shapes") {
  const DenseTensor a({2, 3});
  const DenseTensor b({3, 2});
  CHECK_THROWS_AS(scalar_product(a, b), DimensionMismatch);
}

TEST_CASE("frobenius norm closed forms") {
  const DenseTensor ones({2, 3}, std::vector<double>(6, 1.0));
  CHECK(frobenius_norm(ones) == doctest::Approx(std::sqrt(6.0)));
  CHECK(frobenius_norm(DenseTensor({4, 2})) == 0.0);
}

TEST_CASE("frobenius norm squares back to the scalar product") {
  std::mt19937_64 rng(3);
  const DenseTensor a = oracles::random_tensor({3, 4, 2}, rng);
  const double n = frobenius_norm(a);
  CHECK(n * n == doctest::Approx(scalar_product(a, a)).epsilon(1e-12));
  CHECK(n * n == doctest::Approx(oracles::naive_scalar_product(a, a)).epsilon(1e-12));
}

TEST_CASE("mode product with the identity is the identity map") {
  std::mt19937_64 rng(4);
  const DenseTensor a = oracles::random_tensor({3, 4, 2}, rng);
  for (Index mode = 1; mode <= 3; ++mode) {
    const Matrix eye = Matrix::Identity(a.dim(mode), a.dim(mode));
    CHECK(mode_product(a, eye, mode) == a);
  }
}

TEST_CASE("mode product with a ones row computes row sums") {
  const DenseTensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  const Matrix ones = Matrix::Ones(1, 3);
  const DenseTensor out = mode_product(a, ones, 2);
  REQUIRE(out.dims() == std::vector<Index>{2, 1});
  CHECK(out.at({0, 0}) == doctest::Approx(6.0));
  CHECK(out.at({1, 0}) == doctest::Approx(15.0));
}

TEST_CASE("mode products along distinct modes commute and match the oracle") {
  std::mt19937_64 rng(5);
  const DenseTensor a = oracles::random_tensor({3, 3, 3}, rng);
  const Matrix u1 = oracles::random_matrix(2, 3, rng);
  const Matrix u2 = oracles::random_matrix(2, 3, rng);

  const DenseTensor first_then_second = mode_product(mode_product(a, u1, 1), u2, 2);
  const DenseTensor second_then_first = mode_product(mode_product(a, u2, 2), u1, 1);
  const DenseTensor reference =
      oracles::naive_mode_product(oracles::naive_mode_product(a, u1, 1), u2, 2);

  REQUIRE(first_then_second.dims() == second_then_first.dims());
  for (Index i = 0; i < first_then_second.size(); ++i) {
    CHECK(first_then_second[i] ==
          doctest::Approx(second_then_first[i]).epsilon(1e-12));
    CHECK(first_then_second[i] == doctest::Approx(reference[i]).epsilon(1e-12));
  }
}

TEST_CASE("mode product validates its arguments") {
  const DenseTensor a({2, 3});
  CHECK_THROWS_AS(mode_product(a, Matrix::Identity(3, 3), 0), ModeOutOfRange);
  CHECK_THROWS_AS(mode_product(a, Matrix::Identity(3, 3), 3), ModeOutOfRange);
  CHECK_THROWS_AS(mode_product(a, Matrix::Identity(2, 2), 2), DimensionMismatch);
}

TEST_CASE("matrix unfoldings are the matrix and its transpose") {
  const DenseTensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  const Matrix m1 = unfold(a, 1);
  const Matrix m2 = unfold(a, 2);
  REQUIRE(m1.rows() == 2);
  REQUIRE(m2.rows() == 3);
  CHECK((m1 - m2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m1(0, 0) == 1.0);
  CHECK(m1(1, 2) == 6.0);
}

TEST_CASE("unfold matches the column index formula on every mode") {
  std::mt19937_64 rng(6);
  const DenseTensor a = oracles::random_tensor({2, 3, 4}, rng);
  for (Index mode = 1; mode <= 3; ++mode) {
    const Matrix got = unfold(a, mode);
    const Matrix want = oracles::naive_unfold(a, mode);
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    CHECK((got - want).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(unfold(a, 4), ModeOutOfRange);
}

TEST_CASE("fold inverts unfold bitwise on every mode") {
  std::mt19937_64 rng(7);
  const DenseTensor a = oracles::random_tensor({2, 3, 4}, rng);
  for (Index mode = 1; mode <= 3; ++mode)
    CHECK(fold(unfold(a, mode), mode, a.dims()) == a);
}

TEST_CASE("fold handles the degenerate 1 x N shape") {
  Matrix row(1, 4);
  row << 1, 2, 3, 4;
  const DenseTensor t = fold(row, 1, {1, 4});
  CHECK(t == DenseTensor({1, 4}, {1, 2, 3, 4}));
}

TEST_CASE("fold round-trips 50 random tensors at mode 2") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseTensor a = oracles::random_tensor({3, 2, 3}, rng);
    CHECK(fold(unfold(a, 2), 2, a.dims()) == a);
  }
}

TEST_CASE("fold rejects inconsistent shapes") {
  CHECK_THROWS_AS(fold(Matrix::Zero(2, 3), 1, {2, 4}), ShapeInconsistent);
  CHECK_THROWS_AS(fold(Matrix::Zero(2, 3), 5, {2, 3}), ShapeInconsistent);
}

TEST_CASE("multilinear rank of trivial constructions") {
  CHECK(multilinear_rank(DenseTensor({3, 3, 3}), 1e-10) ==
        std::vector<Index>{0, 0, 0});

  // Outer product of three vectors has unit rank in every mode.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> u(3), v(4), w(5);
  for (auto& x : u) x = gauss(rng);
  for (auto& x : v) x = gauss(rng);
  for (auto& x : w) x = gauss(rng);
  DenseTensor outer({3, 4, 5});
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j)
      for (Index k = 0; k < 5; ++k)
        outer.at({i, j, k}) = u[static_cast<std::size_t>(i)] *
                              v[static_cast<std::size_t>(j)] *
                              w[static_cast<std::size_t>(k)];
  CHECK(multilinear_rank(outer, 1e-10) == std::vector<Index>{1, 1, 1});
}

TEST_CASE("multilinear rank of a sum of two random rank-one tensors") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rank_one = [&] {
    std::vector<double> u(4), v(4), w(4);
    for (auto& x : u) x = gauss(rng);
    for (auto& x : v) x = gauss(rng);
    for (auto& x : w) x = gauss(rng);
    DenseTensor t({4, 4, 4});
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        for (Index k = 0; k < 4; ++k)
          t.at({i, j, k}) = u[static_cast<std::size_t>(i)] *
                            v[static_cast<std::size_t>(j)] *
                            w[static_cast<std::size_t>(k)];
    return t;
  };
  const DenseTensor sum = rank_one() + rank_one();
  CHECK(multilinear_rank(sum, 1e-10) == std::vector<Index>{2, 2, 2});
}

TEST_CASE("unfolding commutes with the mode product in norm") {
  std::mt19937_64 rng(11);
  const DenseTensor a = oracles::random_tensor({3, 4, 2}, rng);
  for (Index mode = 1; mode <= 3; ++mode) {
    const Matrix u = oracles::random_matrix(2, a.dim(mode), rng);
    const double lhs = frobenius_norm(mode_product(a, u, mode));
    const double rhs = Matrix(u * unfold(a, mode)).norm();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("unfold and fold round-trip exactly through order 4") {
  std::mt19937_64 rng(12);
  const std::vector<std::vector<Index>> shapes = {
      {5}, {3, 4}, {2, 3, 4}, {2, 3, 2, 4}};
  for (const auto& shape : shapes) {
    const DenseTensor a = oracles::random_tensor(shape, rng);
    for (Index mode = 1; mode <= a.order(); ++mode)
      CHECK(fold(unfold(a, mode), mode, shape) == a);
  }
}

TEST_CASE("tensor constructors validate dimensions") {
  CHECK_THROWS_AS(DenseTensor(std::vector<Index>{}), BadDims);
  CHECK_THROWS_AS(DenseTensor({2, 0}), BadDims);
  CHECK_THROWS_AS(DenseTensor({2, 2}, {1.0, 2.0}), BadDims);
}

}  // TEST_SUITE
