#include <catch2/catch_amalgamated.hpp>

#include "qecsa/linalg.hpp"
#include "qecsa/rng.hpp"
#include "test_support.hpp"

using namespace qecsa;
using qecsa::testing::det_oracle;
using qecsa::testing::random_invertible;
using qecsa::testing::random_matrix;

TEST_CASE("matmul", "[linalg]") {
    const FieldSpec f5(5);
    Rng rng(11);

    SECTION("identity is neutral") {
        const Mat x = random_matrix(f5, 3, 4, rng);
        CHECK(Mat::identity(f5, 3) * x == x);
    }

    SECTION("hand-computed product mod 5") {
        const Mat a = Mat::from_rows(f5, {{1, 2}, {3, 4}});
        const Mat b = Mat::from_rows(f5, {{0}, {1}});
        CHECK(a * b == Mat::from_rows(f5, {{2}, {4}}));
    }

    SECTION("zero matrix annihilates") {
        const Mat x = random_matrix(f5, 4, 3, rng);
        CHECK((Mat(f5, 2, 4) * x).is_zero());
    }

    SECTION("dimension mismatch is an error") {
        CHECK_THROWS_AS(Mat(f5, 2, 3) * Mat(f5, 2, 3),
                        std::invalid_argument);
    }
}

TEST_CASE("rank", "[linalg]") {
    const FieldSpec f5(5);
    CHECK(rank(Mat::identity(f5, 4)) == 4);
    CHECK(rank(Mat(f5, 3, 5)) == 0);

    SECTION("Vandermonde on distinct nodes has full rank") {
        Mat v(f5, 4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                v(i, j) = f5.element(i).pow(j);
        CHECK(rank(v) == 4);
        CHECK(det_oracle(v) != f5.zero()); // independent determinant route
    }

    SECTION("rank equals rank of transpose") {
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const Mat m = random_matrix(f5, 3 + rng.below(4),
                                        3 + rng.below(4), rng);
            CHECK(rank(m) == rank(transpose(m)));
        }
    }
}

TEST_CASE("inverse and solve", "[linalg]") {
    const FieldSpec f13(13);
    Rng rng(7);

    SECTION("random invertible matrices round-trip") {
        for (int trial = 0; trial < 25; ++trial) {
            const std::size_t n = 1 + rng.below(6);
            const Mat a = random_invertible(f13, n, rng);
            const Mat ainv = inverse(a);
            CHECK(a * ainv == Mat::identity(f13, n));
            CHECK(ainv * a == Mat::identity(f13, n));
        }
    }

    SECTION("singular matrix reports attained rank") {
        const Mat s = Mat::from_rows(f13, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
        CHECK(!try_inverse(s).has_value());
        try {
            inverse(s);
            FAIL("expected SingularMatrixError");
        } catch (const SingularMatrixError& err) {
            CHECK(err.rank_attained() == 2);
        }
    }

    SECTION("solve returns the exact solution") {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 2 + rng.below(5);
            const Mat a = random_invertible(f13, n, rng);
            const Mat b = random_matrix(f13, n, 1 + rng.below(3), rng);
            CHECK(a * solve(a, b) == b);
        }
        const Mat s = Mat::from_rows(f13, {{1, 1}, {2, 2}});
        CHECK_THROWS_AS(solve(s, Mat(f13, 2, 1)), SingularMatrixError);
    }
}

TEST_CASE("submatrix selection", "[linalg]") {
    const FieldSpec f7(7);
    const Mat m = Mat::from_rows(f7, {{0, 1, 2}, {3, 4, 5}, {6, 0, 1}});
    CHECK(submatrix(m, {2, 0}, {1}) == Mat::from_rows(f7, {{0}, {1}}));
    CHECK(take_rows(m, {1}) == Mat::from_rows(f7, {{3, 4, 5}}));
    CHECK(take_cols(m, {2, 2}) == Mat::from_rows(f7, {{2, 2}, {5, 5}, {1, 1}}));
    CHECK_THROWS_AS(submatrix(m, {3}, {0}), std::out_of_range);
    CHECK_THROWS_AS(submatrix(m, {0}, {5}), std::out_of_range);
}

TEST_CASE("stacking and diagonals", "[linalg]") {
    const FieldSpec f7(7);
    const Mat a = Mat::from_rows(f7, {{1, 2}});
    const Mat b = Mat::from_rows(f7, {{3}});
    CHECK(hstack({a, b}) == Mat::from_rows(f7, {{1, 2, 3}}));
    CHECK(vstack({a, Mat::from_rows(f7, {{4, 5}})}) ==
          Mat::from_rows(f7, {{1, 2}, {4, 5}}));
    CHECK(block_diag({a, b}) == Mat::from_rows(f7, {{1, 2, 0}, {0, 0, 3}}));
    CHECK(diag({f7.element(2), f7.element(3)}) ==
          Mat::from_rows(f7, {{2, 0}, {0, 3}}));
    CHECK_THROWS_AS(hstack({a, Mat(f7, 2, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(vstack({a, b}), std::invalid_argument);

    SECTION("rank is additive across diagonal blocks") {
        Rng rng(21);
        for (int trial = 0; trial < 10; ++trial) {
            const Mat x = random_matrix(f7, 2 + rng.below(3),
                                        2 + rng.below(3), rng);
            const Mat y = random_matrix(f7, 2 + rng.below(3),
                                        2 + rng.below(3), rng);
            CHECK(rank(block_diag({x, y})) == rank(x) + rank(y));
        }
    }

    SECTION("zero-width blocks are allowed") {
        const Mat empty(f7, 1, 0);
        CHECK(hstack({empty, a, empty}) == a);
        const Mat padded = block_diag({Mat(f7, 2, 0), b});
        CHECK(padded.rows() == 3);
        CHECK(padded.cols() == 1);
        CHECK(padded(2, 0) == f7.element(3));
    }
}

TEST_CASE("matrix-vector apply", "[linalg]") {
    const FieldSpec f5(5);
    const Mat m = Mat::from_rows(f5, {{1, 2}, {3, 4}});
    const std::vector<Fe> x{f5.element(1), f5.element(1)};
    const std::vector<Fe> y = matvec(m, x);
    REQUIRE(y.size() == 2);
    CHECK(y[0] == f5.element(3));
    CHECK(y[1] == f5.element(2));
    CHECK_THROWS_AS(matvec(m, std::vector<Fe>{f5.one()}),
                    std::invalid_argument);
}
