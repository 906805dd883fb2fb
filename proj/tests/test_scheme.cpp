#include <catch2/catch_amalgamated.hpp>

#include "brentforge/scheme.hpp"
#include "helpers.hpp"

#include <random>

using namespace brentforge;

TEST_CASE("naive scheme shapes and rank") {
    auto s = naive_scheme(3, 3, 3);
    CHECK(s.rank == 27);
    CHECK(s.A.size() == 27);
    auto one = naive_scheme(1, 1, 1);
    CHECK(one.rank == 1);
    CHECK(one.A[0](0, 0) == 1);
    CHECK(one.B[0](0, 0) == 1);
    CHECK(one.C[0](0, 0) == 1);
    CHECK(naive_scheme(2, 2, 2).rank == 8);
    CHECK(naive_scheme(2, 3, 4).rank == 24);
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = testutil::random_valid_scheme(rng);
        auto text = serialize_scheme(s);
        auto back = parse_scheme(text);
        CHECK(back == s);
        // canonical form is a fixed point
        CHECK(serialize_scheme(back) == text);
    }
}

TEST_CASE("parse accepts comments and blank lines, reserializes canonically") {
    std::string text =
        "# a scheme with noise\n"
        "scheme tiny\n"
        "\n"
        "dims 1 1 1\n"
        "rank 1\n"
        "domain integers\n"
        "# product follows\n"
        "product 1\n"
        "1\n"
        "*\n"
        "1\n"
        "=>\n"
        "1\n";
    auto s = parse_scheme(text);
    CHECK(s.name == "tiny");
    CHECK(s.rank == 1);
    auto canon = serialize_scheme(s);
    CHECK(parse_scheme(canon) == s);
    CHECK(serialize_scheme(parse_scheme(canon)) == canon);
}

TEST_CASE("shipped scheme files parse") {
    for (const char* name : {"strassen.scheme", "laderman.scheme", "courtois23.scheme",
                             "naive222.scheme", "naive333.scheme"}) {
        auto s = testutil::load_scheme(name);
        CHECK(s.rank >= 1);
        CHECK(s.domain == Domain::Integers);
    }
    CHECK(testutil::load_scheme("strassen.scheme").rank == 7);
    CHECK(testutil::load_scheme("laderman.scheme").rank == 23);
    CHECK(testutil::load_scheme("courtois23.scheme").rank == 23);
}

TEST_CASE("declared rank must match the number of product blocks") {
    auto s = naive_scheme(2, 2, 2);  // rank 8
    auto text = serialize_scheme(s);
    auto pos = text.find("rank 8");
    REQUIRE(pos != std::string::npos);
    std::string fewer = text;
    fewer.replace(pos, 6, "rank 7");
    CHECK_THROWS_AS(parse_scheme(fewer), ParseError);
    try {
        parse_scheme(fewer);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("more product blocks") != std::string::npos);
    }
}

TEST_CASE("parser reports line numbers on syntax errors") {
    try {
        parse_scheme("scheme x\ndims 1 1 1\nrank 1\ndomain nonsense\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    try {
        parse_scheme("scheme x\ndims 1 1 1\nrank 1\ndomain mod2\nproduct 1\n7\n*\n1\n=>\n1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        // entry 7 is outside mod2
        CHECK(std::string(e.what()).find("domain") != std::string::npos);
    }
}

TEST_CASE("mod2 serialization emits only 0 and 1") {
    auto s = reduce_scheme(testutil::load_scheme("strassen.scheme"), 2);
    auto text = serialize_scheme(s);
    for (char c : text)
        if (c == '-') FAIL("negative entry in mod2 output");
    CHECK(text.find("domain mod2") != std::string::npos);
    CHECK(parse_scheme(text) == s);
}

TEST_CASE("scheme invariants are enforced") {
    auto s = naive_scheme(2, 2, 2);
    SECTION("wrong matrix count") {
        s.A.pop_back();
        CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    }
    SECTION("wrong shape") {
        s.B[0] = Matrix<Int>(3, 3);
        CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    }
    SECTION("entry outside mod2 domain") {
        s.domain = Domain::Mod2;
        s.A[0](0, 0) = 2;
        CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    }
}

TEST_CASE("degenerate products are flagged") {
    auto s = naive_scheme(2, 2, 2);
    CHECK(s.degenerate_products().empty());
    s.A[2] = Matrix<Int>(2, 2);
    auto flagged = s.degenerate_products();
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == 3);
}

TEST_CASE("reduce_scheme maps entries into the target ring") {
    auto s = testutil::load_scheme("laderman.scheme");
    auto m2 = reduce_scheme(s, 2);
    CHECK(m2.domain == Domain::Mod2);
    m2.validate();
    auto m4 = reduce_scheme(s, 4);
    CHECK(m4.domain == Domain::Mod4);
    m4.validate();
    // -1 becomes 1 mod 2 and 3 mod 4
    bool saw3 = false;
    for (const auto& mat : m4.A)
        for (int r = 0; r < mat.rows(); ++r)
            for (int c = 0; c < mat.cols(); ++c)
                if (mat(r, c) == 3) saw3 = true;
    CHECK(saw3);
}
