#include <catch2/catch_amalgamated.hpp>

#include "brentforge/brent.hpp"
#include "brentforge/maple.hpp"
#include "helpers.hpp"

using namespace brentforge;

TEST_CASE("laderman listing ingests to a verified rank-23 scheme") {
    auto s = ingest_maple_listing(testutil::slurp(testutil::data_path("laderman.maple")),
                                  "laderman");
    CHECK(s.dims == Dims{3, 3, 3});
    CHECK(s.rank == 23);
    CHECK(verify(s, 0).ok());
}

TEST_CASE("new 23-product listing ingests to a verified scheme") {
    auto s = ingest_maple_listing(testutil::slurp(testutil::data_path("courtois23.maple")),
                                  "courtois23");
    CHECK(s.dims == Dims{3, 3, 3});
    CHECK(s.rank == 23);
    CHECK(verify(s, 0).ok());
}

TEST_CASE("C coefficients come from the expand lines, transposed") {
    // first expand line covers output entry (1,1): -P06+P14+P19-...
    auto s = ingest_maple_listing(testutil::slurp(testutil::data_path("laderman.maple")),
                                  "laderman");
    CHECK(s.C[5](0, 0) == -1);
    CHECK(s.C[13](0, 0) == 1);
    CHECK(s.C[18](0, 0) == 1);
    // P06 := (a_1_1) * (-b_1_1)
    CHECK(s.A[5](0, 0) == 1);
    CHECK(s.A[5].nonzero_count() == 1);
    CHECK(s.B[5](0, 0) == -1);
    CHECK(s.B[5].nonzero_count() == 1);
}

TEST_CASE("export then ingest is the identity") {
    for (const char* name : {"strassen.scheme", "laderman.scheme", "courtois23.scheme"}) {
        auto s = testutil::load_scheme(name);
        auto exp = export_maple_listing(s);
        CHECK(exp.warnings.empty());
        auto back = ingest_maple_listing(exp.text, s.name);
        CHECK(back == s);
    }
}

TEST_CASE("strassen export has 7 product lines and 4 expand lines") {
    auto exp = export_maple_listing(testutil::load_scheme("strassen.scheme"));
    int products = 0, expands = 0;
    std::istringstream in(exp.text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("P", 0) == 0) ++products;
        if (line.rfind("expand(", 0) == 0) ++expands;
    }
    CHECK(products == 7);
    CHECK(expands == 4);
}

TEST_CASE("degenerate product exports as (0) with a warning and re-ingests") {
    auto s = naive_scheme(2, 2, 2);
    s.A[2] = Matrix<Int>(2, 2);  // zero left factor
    auto exp = export_maple_listing(s);
    REQUIRE(exp.warnings.size() == 1);
    CHECK(exp.text.find(":= (0) *") != std::string::npos);
    auto back = ingest_maple_listing(exp.text);
    CHECK(back.A[2].is_zero());
    CHECK(back == s);
}

TEST_CASE("coefficients beyond units survive the round trip") {
    auto s = naive_scheme(2, 2, 2);
    s.A[0](0, 0) = 3;
    s.C[1](0, 0) = -2;
    auto exp = export_maple_listing(s);
    CHECK(exp.text.find("3*a_1_1") != std::string::npos);
    CHECK(ingest_maple_listing(exp.text) == s);
}

TEST_CASE("ingest rejects malformed listings") {
    // duplicate product index
    CHECK_THROWS_AS(ingest_maple_listing("P1 := (a_1_1) * (b_1_1);\n"
                                         "P1 := (a_1_1) * (b_1_1);\n"
                                         "expand(P1-a_1_1*b_1_1);\n"),
                    MapleError);
    // referenced but never defined
    CHECK_THROWS_AS(ingest_maple_listing("P1 := (a_1_1) * (b_1_1);\n"
                                         "expand(P2-a_1_1*b_1_1);\n"),
                    MapleError);
    // missing expand line for an output entry
    CHECK_THROWS_AS(ingest_maple_listing("P1 := (a_1_1) * (b_1_1+b_1_2);\n"
                                         "expand(P1-a_1_1*b_1_1);\n"),
                    MapleError);
    // unparseable term
    CHECK_THROWS_AS(ingest_maple_listing("P1 := (a_1_1+q_2_2) * (b_1_1);\n"
                                         "expand(P1-a_1_1*b_1_1);\n"),
                    MapleError);
    // b-term in the left factor
    CHECK_THROWS_AS(ingest_maple_listing("P1 := (b_1_1) * (b_1_1);\n"
                                         "expand(P1-a_1_1*b_1_1);\n"),
                    MapleError);
}

TEST_CASE("expand statements may span lines") {
    const char* text =
        "P1 := (a_1_1) * (b_1_1);\n"
        "expand(P1-\n"
        "a_1_1*b_1_1);\n";
    auto s = ingest_maple_listing(text);
    CHECK(s.rank == 1);
    CHECK(s.C[0](0, 0) == 1);
}
