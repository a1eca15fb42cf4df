#include <catch2/catch_amalgamated.hpp>

#include "qecsa/codes.hpp"
#include "test_support.hpp"

using namespace qecsa;
using qecsa::testing::det_oracle;

namespace {

std::vector<Fe> elems(const FieldSpec& f,
                      std::initializer_list<std::uint64_t> vals) {
    std::vector<Fe> out;
    for (auto v : vals) out.push_back(f.element(v));
    return out;
}

} // namespace

TEST_CASE("code points", "[codes]") {
    const FieldSpec f5(5);

    SECTION("default layout") {
        const CodePoints pts = default_code_points(f5, 4, 1);
        CHECK(pts.alpha == elems(f5, {0, 1, 2, 3}));
        CHECK(pts.f == elems(f5, {4}));
    }

    SECTION("q must fit N+L distinct values") {
        CHECK_THROWS_AS(default_code_points(f5, 4, 2), std::invalid_argument);
        CHECK_THROWS_AS(CodePoints(elems(f5, {0, 1, 2}), elems(f5, {2})),
                        std::invalid_argument);
    }

    SECTION("truncation keeps a prefix of the poles") {
        const FieldSpec f11(11);
        const CodePoints pts = default_code_points(f11, 4, 3);
        CHECK(pts.truncated(2).f == elems(f11, {4, 5}));
        CHECK_THROWS_AS(pts.truncated(4), std::invalid_argument);
    }
}

TEST_CASE("csa matrix", "[codes]") {
    const FieldSpec f5(5);
    const CodePoints pts(elems(f5, {0, 1, 2, 3}), elems(f5, {4}));

    SECTION("worked F5 instance") {
        const Mat m = csa_matrix(pts, 2);
        REQUIRE(m.rows() == 4);
        REQUIRE(m.cols() == 3);
        CHECK(m.col(0) == elems(f5, {4, 2, 3, 1})); // 1/(4 - alpha_n)
        CHECK(take_cols(m, {1, 2}) ==
              Mat::from_rows(f5, {{1, 0}, {1, 1}, {1, 2}, {1, 3}}));
    }

    SECTION("degenerate blocks") {
        const CodePoints no_poles(elems(f5, {0, 1, 2, 3}), {});
        const Mat vdm_only = csa_matrix(no_poles, 3);
        CHECK(vdm_only.cols() == 3);
        CHECK(vdm_only(2, 2) == f5.element(4)); // 2^2 mod 5
        const Mat cauchy_only = csa_matrix(pts, 0);
        CHECK(cauchy_only.cols() == 1);
        CHECK(cauchy_only.col(0) == elems(f5, {4, 2, 3, 1}));
    }
}

TEST_CASE("grs matrix", "[codes]") {
    const FieldSpec f5(5);
    const std::vector<Fe> alpha = elems(f5, {0, 1, 2, 3});

    SECTION("all-ones multipliers give a plain Vandermonde") {
        const Mat m = grs_matrix(alpha, elems(f5, {1, 1, 1, 1}), 3);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(m(i, j) == f5.element(i).pow(j));
    }

    SECTION("worked F5 dual block") {
        const Mat m = grs_matrix(alpha, elems(f5, {4, 3, 2, 1}), 2);
        CHECK(m == Mat::from_rows(f5, {{4, 0}, {3, 3}, {2, 4}, {1, 3}}));
    }

    SECTION("single column equals the multipliers") {
        const std::vector<Fe> beta = elems(f5, {2, 3, 4, 1});
        CHECK(grs_matrix(alpha, beta, 1).col(0) == beta);
    }

    SECTION("zero multipliers are rejected") {
        CHECK_THROWS_AS(grs_matrix(alpha, elems(f5, {1, 0, 1, 1}), 2),
                        std::invalid_argument);
    }
}

TEST_CASE("qcsa matrix", "[codes]") {
    const FieldSpec f5(5);
    const CodePoints pts(elems(f5, {0, 1, 2, 3}), elems(f5, {4}));
    const std::vector<Fe> v = elems(f5, {4, 3, 2, 1});

    SECTION("all-ones scaling is the CSA matrix itself") {
        CHECK(qcsa_matrix(pts, elems(f5, {1, 1, 1, 1}), 2) ==
              csa_matrix(pts, 2));
    }

    SECTION("worked F5 second instance") {
        const Mat m = qcsa_matrix(pts, v, 2);
        // scaled Cauchy column v_n / (4 - alpha_n) collapses to all ones
        CHECK(m.col(0) == elems(f5, {1, 1, 1, 1}));
        CHECK(take_cols(m, {1, 2}) ==
              Mat::from_rows(f5, {{4, 0}, {3, 3}, {2, 4}, {1, 3}}));
    }

    SECTION("each row is the scaled CSA row") {
        const Mat plain = csa_matrix(pts, 2);
        const Mat scaled = qcsa_matrix(pts, v, 2);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(scaled(i, j) == v[i] * plain(i, j));
    }

    SECTION("submatrix-then-scale equals scale-then-submatrix") {
        const std::vector<std::size_t> rows_sel{0, 2, 3};
        const Mat a = take_rows(qcsa_matrix(pts, v, 2), rows_sel);
        const Mat b = diag({v[0], v[2], v[3]}) *
                      take_rows(csa_matrix(pts, 2), rows_sel);
        CHECK(a == b);
    }
}

TEST_CASE("dual multipliers", "[codes]") {
    const FieldSpec f5(5);
    const std::vector<Fe> alpha = elems(f5, {0, 1, 2, 3});
    const std::vector<Fe> ones = elems(f5, {1, 1, 1, 1});

    SECTION("worked F5 values") {
        CHECK(dual_multipliers(alpha, ones) == elems(f5, {4, 3, 2, 1}));
    }

    SECTION("single point: v = 1/u") {
        CHECK(dual_multipliers(elems(f5, {2}), elems(f5, {3})) ==
              elems(f5, {2}));
    }

    SECTION("duality power sums vanish below degree N-1") {
        // direct modular summation oracle
        const std::vector<Fe> v = dual_multipliers(alpha, ones);
        for (std::size_t m = 0; m < 4; ++m) {
            Fe sum = f5.zero();
            for (std::size_t n = 0; n < 4; ++n)
                sum += ones[n] * v[n] * alpha[n].pow(m);
            if (m <= 2)
                CHECK(sum == f5.zero());
            else
                CHECK(sum == f5.one());
        }
    }

    SECTION("power sums vanish for random point sets") {
        for (std::uint64_t q : {7ull, 11ull, 13ull}) {
            const FieldSpec f(q);
            Rng rng(q);
            for (int trial = 0; trial < 10; ++trial) {
                const std::size_t n = 2 + rng.below(q > 7 ? 6 : 4);
                // random distinct alphas via partial shuffle of 0..q-1
                std::vector<std::uint64_t> all(q);
                for (std::uint64_t i = 0; i < q; ++i) all[i] = i;
                std::vector<Fe> a, u;
                for (std::size_t i = 0; i < n; ++i) {
                    std::swap(all[i], all[i + rng.below(q - i)]);
                    a.push_back(f.element(all[i]));
                    u.push_back(rng.nonzero_element(f));
                }
                const std::vector<Fe> v = dual_multipliers(a, u);
                for (std::size_t m = 0; m + 1 < n; ++m) {
                    Fe sum = f.zero();
                    for (std::size_t i = 0; i < n; ++i)
                        sum += u[i] * v[i] * a[i].pow(m);
                    CHECK(sum == f.zero());
                }
            }
        }
    }

    SECTION("GRS prefix orthogonality") {
        const std::vector<Fe> v = dual_multipliers(alpha, ones);
        const Mat left = grs_matrix(alpha, ones, 2);  // ceil(4/2)
        const Mat right = grs_matrix(alpha, v, 2);    // floor(4/2)
        CHECK((transpose(left) * right).is_zero());
    }

    SECTION("zero multipliers rejected") {
        CHECK_THROWS_AS(dual_multipliers(alpha, elems(f5, {1, 1, 0, 1})),
                        std::invalid_argument);
    }
}

TEST_CASE("erasure MDS check", "[codes]") {
    const FieldSpec f5(5);
    const CodePoints pts(elems(f5, {0, 1, 2, 3}), elems(f5, {4}));

    SECTION("the worked F5 answer matrix tolerates one erasure") {
        const MdsReport rep = check_mds_erasure(csa_matrix(pts, 2), 1);
        CHECK(rep.ok);
        CHECK(rep.mode == CheckMode::exhaustive);
        CHECK(rep.checked == 4); // C(4,3)
    }

    SECTION("agrees with a determinant oracle over all subsets") {
        const Mat m = qcsa_matrix(pts, elems(f5, {4, 3, 2, 1}), 2);
        bool oracle_ok = true;
        for_each_combination(4, 3, [&](const std::vector<std::size_t>& rows_sel) {
            if (det_oracle(take_rows(m, rows_sel)) == f5.zero())
                oracle_ok = false;
        });
        CHECK(check_mds_erasure(m, 1).ok == oracle_ok);
        CHECK(oracle_ok);
    }

    SECTION("a repeated row defeats the property, with a witness") {
        Mat m = csa_matrix(pts, 2);
        for (std::size_t j = 0; j < m.cols(); ++j) m(1, j) = m(0, j);
        const MdsReport rep = check_mds_erasure(m, 1);
        CHECK(!rep.ok);
        REQUIRE(rep.witness_rows.size() == 3);
        CHECK(rep.witness_rows[0] == 0);
        CHECK(rep.witness_rows[1] == 1);
    }

    SECTION("QCSA matrices are MDS for every valid split") {
        const FieldSpec f11(11);
        for (std::size_t n = 2; n <= 5; ++n)
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t l = 0; l + e <= n && n + l <= 11; ++l) {
                    const std::size_t vdm = n - e - l;
                    const CodePoints p = default_code_points(f11, n, l);
                    const auto u = std::vector<Fe>(n, f11.one());
                    const auto v = dual_multipliers(p.alpha, u);
                    CHECK(check_mds_erasure(qcsa_matrix(p, u, vdm), e).ok);
                    CHECK(check_mds_erasure(qcsa_matrix(p, v, vdm), e).ok);
                }
    }

    SECTION("column count must match the erasure budget") {
        CHECK_THROWS_AS(check_mds_erasure(csa_matrix(pts, 2), 2),
                        std::invalid_argument);
    }

    SECTION("large matrices fall back to sampling") {
        const FieldSpec f37(37);
        const CodePoints p = default_code_points(f37, 20, 2);
        const Mat m = csa_matrix(p, 16); // 20 rows, 18 cols -> e = 2
        MdsOptions opts;
        opts.max_exhaustive_n = 16;
        opts.sample_trials = 50;
        const MdsReport rep = check_mds_erasure(m, 2, opts);
        CHECK(rep.mode == CheckMode::sampled);
        CHECK(rep.checked == 50);
        CHECK(rep.ok);
    }
}
