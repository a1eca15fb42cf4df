#include <catch2/catch_amalgamated.hpp>

#include "qecsa/verify.hpp"

using namespace qecsa;

namespace {

SchemeParams f5_params(std::size_t k = 2) {
    return plan_scheme(4, k, 1, 1, 1, FieldSpec(5));
}

VerifyOptions quick_opts() {
    VerifyOptions opts;
    opts.noise_seeds = 3;
    return opts;
}

} // namespace

TEST_CASE("correctness suite", "[verify]") {
    SECTION("passes on the F5 instance") {
        const VerifyReport r = verify_correctness(f5_params(), quick_opts());
        CHECK(r.pass);
        CHECK(r.witnesses.empty());
        // 2 thetas x (empty set + 4 singletons x 25 deltas) x 3 seeds
        CHECK(r.enumerated == 2 * (1 + 4 * 25) * 3);
        CHECK(r.info["rate_matches_planner"] == true);
    }

    SECTION("passes with no erasure budget") {
        const SchemeParams p = plan_scheme(4, 2, 1, 1, 0, FieldSpec(7));
        CHECK(verify_correctness(p, quick_opts()).pass);
    }

    SECTION("passes on a classical plan") {
        const SchemeParams p = plan_scheme(10, 2, 1, 1, 6, FieldSpec(13));
        VerifyOptions opts = quick_opts();
        opts.noise_seeds = 2;
        CHECK(verify_correctness(p, opts).pass);
    }

    SECTION("negative control: a corrupted basis column is caught") {
        VerifyOptions opts = quick_opts();
        opts.tamper_box_basis = true;
        const VerifyReport r = verify_correctness(f5_params(), opts);
        CHECK(!r.pass);
        REQUIRE(!r.witnesses.empty());
        // witnesses carry replay data
        const auto& w = r.witnesses.front();
        CHECK(w.contains("theta"));
        CHECK(w.contains("seed"));
        CHECK(w.contains("deltas"));
    }
}

TEST_CASE("x-security suite", "[verify]") {
    SECTION("exhaustive histograms match for K=1 and K=2") {
        for (std::size_t k : {1u, 2u}) {
            const VerifyReport r = verify_x_security(
                f5_params(k), VerifyMode::exhaustive, quick_opts());
            CHECK(r.pass);
            CHECK(r.mode == VerifyMode::exhaustive);
            CHECK(r.enumerated > 0);
        }
    }

    SECTION("negative control: removing the noise leaks the store") {
        VerifyOptions opts = quick_opts();
        opts.strip_noise = true;
        const VerifyReport r =
            verify_x_security(f5_params(), VerifyMode::exhaustive, opts);
        CHECK(!r.pass);
    }

    SECTION("rank condition scales to X=2") {
        const SchemeParams p = plan_scheme(6, 2, 2, 1, 1, FieldSpec(11));
        const VerifyReport r =
            verify_x_security(p, VerifyMode::rank_condition, quick_opts());
        CHECK(r.pass);
        CHECK(r.enumerated == 15 * (2 + 2)); // C(6,2) x blocks
    }

    SECTION("sampled mode is refused") {
        CHECK_THROWS_AS(
            verify_x_security(f5_params(), VerifyMode::sampled, quick_opts()),
            std::invalid_argument);
    }

    SECTION("oversized exhaustive enumerations are refused") {
        const SchemeParams p = plan_scheme(6, 3, 2, 1, 1, FieldSpec(11));
        VerifyOptions opts = quick_opts();
        opts.enum_cap = 1000;
        CHECK_THROWS_AS(verify_x_security(p, VerifyMode::exhaustive, opts),
                        EnumerationCapExceeded);
    }
}

TEST_CASE("t-privacy suite", "[verify]") {
    SECTION("exhaustive query histograms are theta-independent") {
        const VerifyReport r = verify_t_privacy(
            f5_params(), VerifyMode::exhaustive, quick_opts());
        CHECK(r.pass);
    }

    SECTION("negative control: noiseless queries reveal theta") {
        VerifyOptions opts = quick_opts();
        opts.strip_noise = true;
        const VerifyReport r =
            verify_t_privacy(f5_params(), VerifyMode::exhaustive, opts);
        CHECK(!r.pass);
    }

    SECTION("rank condition on the F5 instance") {
        const VerifyReport r = verify_t_privacy(
            f5_params(), VerifyMode::rank_condition, quick_opts());
        CHECK(r.pass);
    }
}

TEST_CASE("lemma1 suite", "[verify]") {
    const SchemeParams p = f5_params();

    SECTION("worked F5 erasure of server 3") {
        const VerifyReport r = verify_lemma1(p, {2});
        CHECK(r.pass);
        CHECK(r.info["min_swt_left"] == 2);  // = E + 1
        CHECK(r.info["max_swt_right"] == 1); // = E
        CHECK(r.info["rank_gh"] == 8);
    }

    SECTION("every single erasure set passes") {
        for (std::size_t n = 0; n < 4; ++n)
            CHECK(verify_lemma1(p, {n}).pass);
    }

    SECTION("negative control: duplicated basis column breaks the rank") {
        GhPair gh = build_gh(p, {2});
        for (std::size_t r = 0; r < gh.h.rows(); ++r)
            gh.h(r, 3) = gh.h(r, 2);
        const VerifyReport rep = verify_lemma1(p, gh);
        CHECK(!rep.pass);
        CHECK(rep.info["rank_gh"] == 7);
    }

    SECTION("E=0 instance checks only span and rank") {
        const SchemeParams p0 = plan_scheme(4, 2, 1, 1, 0, FieldSpec(7));
        const VerifyReport r = verify_lemma1(p0, {});
        CHECK(r.pass);
        CHECK(!r.info.contains("max_swt_right"));
    }
}

TEST_CASE("duality suite", "[verify]") {
    const SchemeParams p = f5_params();
    CHECK(verify_duality(p.points.alpha, p.mult.u).pass);

    Rng rng(23);
    for (std::uint64_t q : {7ull, 11ull, 13ull}) {
        const FieldSpec f(q);
        std::vector<Fe> alpha, u;
        for (std::size_t i = 0; i < 5; ++i) {
            alpha.push_back(f.element(i));
            u.push_back(rng.nonzero_element(f));
        }
        CHECK(verify_duality(alpha, u).pass);
    }
}

TEST_CASE("rate table suite", "[verify]") {
    SECTION("golden cases") {
        const VerifyReport r =
            verify_rate_table({{4, 1, 1, 1, Rational(1, 2)},
                               {10, 2, 2, 1, Rational(4, 5)},
                               {10, 2, 1, 6, Rational(1, 10)},
                               {5, 1, 1, 1, Rational(3, 5)}});
        CHECK(r.pass);
    }

    SECTION("wrong expectations are caught") {
        const VerifyReport r =
            verify_rate_table({{4, 1, 1, 1, Rational(2, 3)}});
        CHECK(!r.pass);
    }

    SECTION("planner agrees with the closed form everywhere") {
        const VerifyReport r = verify_rate_sweep(10);
        CHECK(r.pass);
        CHECK(r.enumerated > 100);
    }
}

TEST_CASE("reports are deterministic and serializable", "[verify]") {
    const VerifyReport a = verify_correctness(f5_params(), quick_opts());
    const VerifyReport b = verify_correctness(f5_params(), quick_opts());
    const nlohmann::json ja = a, jb = b;
    CHECK(ja.dump() == jb.dump());
    CHECK(ja["suite"] == "correctness");
    CHECK(ja["pass"] == true);
    CHECK(ja.contains("enumerated"));
    CHECK(ja.contains("witnesses"));
}
