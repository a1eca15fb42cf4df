#include <catch2/catch_amalgamated.hpp>

#include "qecsa/json_io.hpp"

using namespace qecsa;
using nlohmann::json;

TEST_CASE("scalar and matrix forms", "[serialize]") {
    const FieldSpec f5(5);
    CHECK(json(f5.element(3)) == json(3));
    CHECK(json(Mat::from_rows(f5, {{1, 2}, {3, 4}})) ==
          json::parse("[[1,2],[3,4]]"));
    const json r = Rational(2, 4);
    CHECK(r["num"] == 1);
    CHECK(r["den"] == 2);
    CHECK(r["text"] == "1/2");
}

TEST_CASE("scheme parameters", "[serialize]") {
    const SchemeParams p = plan_scheme(4, 2, 1, 1, 1, FieldSpec(5));
    const json j = p;
    CHECK(j["N"] == 4);
    CHECK(j["K"] == 2);
    CHECK(j["q"] == 5);
    CHECK(j["regime"] == "R1");
    CHECK(j["alpha"] == json::parse("[0,1,2,3]"));
    CHECK(j["f"] == json::parse("[4]"));
    CHECK(j["u"] == json::parse("[1,1,1,1]"));
    CHECK(j["v"] == json::parse("[4,3,2,1]"));
    CHECK(j["per_instance"].size() == 2);
    CHECK(j["per_instance"][0]["l_symbols"] == 1);
    CHECK(j["rate"]["text"] == "1/2");
}

TEST_CASE("transcripts", "[serialize]") {
    const SchemeParams p = plan_scheme(4, 2, 1, 1, 1, FieldSpec(5));
    const std::vector<std::pair<Fe, Fe>> deltas{
        {p.field.element(4), p.field.element(1)}};
    const Transcript t = run_end_to_end(p, 1, 9, {2}, deltas);
    const json j = t;

    SECTION("indices are 1-based on the wire") {
        CHECK(j["theta"] == 2);
        CHECK(j["erasures"]["actual"] == json::parse("[3]"));
        CHECK(j["erasures"]["declared"] == json::parse("[3]"));
    }

    SECTION("field elements appear as decimal integers") {
        CHECK(j["deltas"]["delta1"] == json::parse("[4]"));
        CHECK(j["deltas"]["delta2"] == json::parse("[1]"));
        CHECK(j["box_input"].size() == 8);
        CHECK(j["box_output"].size() == 4);
        for (const auto& v : j["box_input"]) CHECK(v.is_number_unsigned());
    }

    SECTION("decoded payload round-trips the store") {
        CHECK(j["decoded"]["w"][0][0] == t.messages.w[1][0][0].value());
        CHECK(j["decoded"]["delta1"] == json::parse("[4]"));
        CHECK(j["download_qudits"] == 4);
        CHECK(j["rate"]["text"] == "1/2");
    }

    SECTION("identical runs dump byte-identical JSON") {
        const Transcript again = run_end_to_end(p, 1, 9, {2}, deltas);
        CHECK(json(again).dump() == j.dump());
    }

    SECTION("shares and queries are recorded per server") {
        CHECK(j["shares"].size() == 4);
        CHECK(j["queries"].size() == 4);
        CHECK(j["answers"].size() == 2);
        CHECK(j["answers"][0].size() == 4);
    }
}

TEST_CASE("mds reports", "[serialize]") {
    const FieldSpec f5(5);
    const CodePoints pts = default_code_points(f5, 4, 1);
    const json j = check_mds_erasure(csa_matrix(pts, 2), 1);
    CHECK(j["ok"] == true);
    CHECK(j["mode"] == "exhaustive");
    CHECK(j["checked"] == 4);
    CHECK(j["witness_rows"].empty());
}
