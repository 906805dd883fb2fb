#include <catch2/catch_amalgamated.hpp>

#include "brentforge/rank.hpp"
#include "helpers.hpp"

#include <random>

using namespace brentforge;

TEST_CASE("bareiss rank agrees with the minor-enumeration oracle") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 4);
        int cols = 1 + static_cast<int>(rng() % 4);
        auto m = testutil::random_matrix(rng, rows, cols, 3);
        CHECK(bareiss_rank(m) == testutil::minor_rank(m));
    }
}

TEST_CASE("bareiss determinant on known matrices") {
    Matrix<Int> id(3, 3);
    for (int i = 0; i < 3; ++i) id(i, i) = 1;
    CHECK(bareiss_determinant(id) == 1);
    Matrix<Int> m(2, 2);
    m(0, 0) = 2; m(0, 1) = 3; m(1, 0) = 1; m(1, 1) = 4;
    CHECK(bareiss_determinant(m) == 5);
    Matrix<Int> sing(2, 2);
    sing(0, 0) = 1; sing(0, 1) = 2; sing(1, 0) = 2; sing(1, 1) = 4;
    CHECK(bareiss_determinant(sing) == 0);
    // row swap path
    Matrix<Int> sw(2, 2);
    sw(0, 1) = 1; sw(1, 0) = 1;
    CHECK(bareiss_determinant(sw) == -1);
}

TEST_CASE("gf2 rank is rank of the mod-2 reduction") {
    Matrix<Int> m(2, 2);
    m(0, 0) = 1; m(0, 1) = 1;
    m(1, 0) = -1; m(1, 1) = 1;  // integer rank 2, but mod 2 the rows coincide
    CHECK(bareiss_rank(m) == 2);
    CHECK(gf2_rank(m) == 1);
    Matrix<Int> two(2, 2);
    two(0, 0) = 2;  // vanishes mod 2
    CHECK(gf2_rank(two) == 0);
}

TEST_CASE("laderman has exactly six rank-3 matrices in the known products") {
    auto p = rank_profile(testutil::load_scheme("laderman.scheme"));
    CHECK(p.max_rank == 3);
    std::vector<std::pair<Side, int>> expected{{Side::A, 1}, {Side::B, 3},  {Side::C, 6},
                                               {Side::A, 10}, {Side::B, 11}, {Side::C, 14}};
    CHECK(p.max_positions == expected);
}

TEST_CASE("courtois23 has exactly two rank-3 matrices, both on the A side") {
    auto p = rank_profile(testutil::load_scheme("courtois23.scheme"));
    CHECK(p.max_rank == 3);
    std::vector<std::pair<Side, int>> expected{{Side::A, 18}, {Side::A, 20}};
    CHECK(p.max_positions == expected);
    CHECK(p.counts().at(3) == 2);
}

TEST_CASE("naive 3x3x3 profile is eighty-one rank-1 matrices") {
    auto p = rank_profile(naive_scheme(3, 3, 3));
    CHECK(p.sorted_ranks.size() == 81);
    CHECK(p.counts().size() == 1);
    CHECK(p.counts().at(1) == 81);
}

TEST_CASE("mod2 schemes are profiled over the two-element field") {
    auto s = reduce_scheme(testutil::load_scheme("laderman.scheme"), 2);
    auto p = rank_profile(s);
    CHECK(p.domain == Domain::Mod2);
    CHECK(p.sorted_ranks.size() == 69);
    CHECK_THROWS_AS(rank_profile(reduce_scheme(testutil::load_scheme("laderman.scheme"), 4)),
                    std::invalid_argument);
}

TEST_CASE("inequivalence certificate distinguishes laderman from courtois23") {
    auto cert = inequivalence_certificate(testutil::load_scheme("laderman.scheme"),
                                          testutil::load_scheme("courtois23.scheme"));
    CHECK(cert.distinct);
    CHECK(cert.witness == "rank-3 count 6 vs 2");
    CHECK(render_certificate(cert) == "DISTINCT: rank-3 count 6 vs 2");
}

TEST_CASE("identical schemes are inconclusive") {
    auto s = testutil::load_scheme("strassen.scheme");
    auto cert = inequivalence_certificate(s, s);
    CHECK(!cert.distinct);
    CHECK(render_certificate(cert) == "INCONCLUSIVE: rank profiles match");
}

TEST_CASE("certificate preconditions") {
    auto lad = testutil::load_scheme("laderman.scheme");
    auto st = testutil::load_scheme("strassen.scheme");
    CHECK_THROWS_AS(inequivalence_certificate(lad, st), std::invalid_argument);
    CHECK_THROWS_AS(inequivalence_certificate(lad, naive_scheme(3, 3, 3)),
                    std::invalid_argument);  // rank mismatch
}

TEST_CASE("rank table renders per-side counts") {
    auto text = render_rank_table(rank_profile(testutil::load_scheme("courtois23.scheme")));
    CHECK(text.find("max rank 3 at: A(18) A(20)") != std::string::npos);
}
