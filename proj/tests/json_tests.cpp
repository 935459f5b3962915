#include <catch2/catch_amalgamated.hpp>

#include "pathcond/json_io.hpp"
#include "support/corpus.hpp"

using namespace pathcond;

TEST_CASE("algebra JSON round-trips") {
    for (const Algebra& a : {corpus::z2_maltsev(), corpus::lattice2(), corpus::median3()}) {
        Algebra back = algebra_from_json(algebra_to_json(a));
        CHECK(back.size() == a.size());
        CHECK(back.name() == a.name());
        REQUIRE(back.operation_count() == a.operation_count());
        for (int i = 0; i < a.operation_count(); ++i) {
            CHECK(back.operation(i).name == a.operation(i).name);
            CHECK(back.operation(i).table == a.operation(i).table);
        }
    }
}

TEST_CASE("algebra JSON rejects malformed documents") {
    CHECK_THROWS_AS(algebra_from_json(Json::parse(R"({"size": 2})")), Error);
    CHECK_THROWS_AS(algebra_from_json(Json::parse(R"({"size": "two", "operations": []})")), Error);
    CHECK_THROWS_AS(
        algebra_from_json(Json::parse(
            R"({"size": 2, "operations": [{"name": "f", "arity": 2, "table": [0,0,0]}]})")),
        Error);
    // Unknown fields are tolerated.
    Algebra a = algebra_from_json(Json::parse(
        R"({"size": 2, "future": true, "operations": [{"name": "f", "arity": 1, "table": [0,1]}]})"));
    CHECK(a.size() == 2);
}

TEST_CASE("testing instances round-trip, dashed labels as null") {
    TestingInstance inst =
        TestingInstance::all_ones(parse_path("Fs Bd"), {0, 1, 0}, {1, 0, 1}, {1, 0}, {0, 0});
    Json j = instance_to_json(inst);
    CHECK(j["c"][0].is_array());
    CHECK(j["c"][1].is_null());  // dashed edge carries no label
    TestingInstance back = instance_from_json(j);
    CHECK(back.path == inst.path);
    CHECK(back.a == inst.a);
    CHECK(back.b == inst.b);
    CHECK(back.c == inst.c);
    CHECK(back.d == inst.d);
}

TEST_CASE("witness JSON lists the term strings") {
    WitnessTerms w;
    w.s = {TermExpr::variable("x"), TermExpr::variable("y")};
    w.t = {parse_term("m(x,y,z)")};
    Json j = witness_to_json(w);
    CHECK(j["s"] == Json::array({"x", "y"}));
    CHECK(j["t"] == Json::array({"m(x,y,z)"}));
}
