#include <catch2/catch_amalgamated.hpp>

#include "brentforge/recmul.hpp"
#include "helpers.hpp"

#include <random>

using namespace brentforge;

TEST_CASE("one level on the identity") {
    auto lad = testutil::load_scheme("laderman.scheme");
    Matrix<Int> id(3, 3);
    for (int i = 0; i < 3; ++i) id(i, i) = 1;
    OpCountReport ops;
    auto z = multiply_one_level(lad, id, id, &ops);
    CHECK(z == id);
    CHECK(ops.mults == 23);
}

TEST_CASE("one level equals the naive product on random inputs") {
    std::mt19937_64 rng(101);
    for (const char* name : {"strassen.scheme", "laderman.scheme", "courtois23.scheme"}) {
        auto s = testutil::load_scheme(name);
        for (int trial = 0; trial < 30; ++trial) {
            auto x = testutil::random_matrix(rng, s.dims.n, s.dims.m, 50);
            auto y = testutil::random_matrix(rng, s.dims.m, s.dims.p, 50);
            REQUIRE(multiply_one_level(s, x, y) == naive_product(x, y));
        }
    }
}

TEST_CASE("one level works for rectangular schemes") {
    std::mt19937_64 rng(55);
    auto s = naive_scheme(2, 3, 4);
    auto x = testutil::random_matrix(rng, 2, 3, 9);
    auto y = testutil::random_matrix(rng, 3, 4, 9);
    OpCountReport ops;
    CHECK(multiply_one_level(s, x, y, &ops) == naive_product(x, y));
    CHECK(ops.mults == 24);
}

TEST_CASE("recursive multiplication matches the oracle with exact counts") {
    std::mt19937_64 rng(202);
    auto lad = testutil::load_scheme("laderman.scheme");

    SECTION("9x9 laderman threshold 1: 529 multiplications") {
        MultiplyPlan plan{lad, 1};
        auto x = testutil::random_matrix(rng, 9, 9, 20);
        auto y = testutil::random_matrix(rng, 9, 9, 20);
        OpCountReport ops;
        CHECK(multiply_recursive(plan, x, y, &ops) == naive_product(x, y));
        CHECK(ops.mults == 529);
        CHECK(ops.depth == 2);
    }
    SECTION("27x27 courtois23 threshold 3: 23^2 * 27 multiplications") {
        MultiplyPlan plan{testutil::load_scheme("courtois23.scheme"), 3};
        auto x = testutil::random_matrix(rng, 27, 27, 9);
        auto y = testutil::random_matrix(rng, 27, 27, 9);
        OpCountReport ops;
        CHECK(multiply_recursive(plan, x, y, &ops) == naive_product(x, y));
        CHECK(ops.mults == 23 * 23 * 27);
        CHECK(ops.depth == 2);
    }
    SECTION("8x8 strassen threshold 1: 343 multiplications") {
        MultiplyPlan plan{testutil::load_scheme("strassen.scheme"), 1};
        auto x = testutil::random_matrix(rng, 8, 8, 20);
        auto y = testutil::random_matrix(rng, 8, 8, 20);
        OpCountReport ops;
        CHECK(multiply_recursive(plan, x, y, &ops) == naive_product(x, y));
        CHECK(ops.mults == 343);
        CHECK(ops.depth == 3);
    }
}

TEST_CASE("padding handles sizes off the power grid and rectangles") {
    std::mt19937_64 rng(303);
    auto lad = testutil::load_scheme("laderman.scheme");
    MultiplyPlan plan{lad, 1};
    SECTION("10x10 under a base-3 scheme") {
        auto x = testutil::random_matrix(rng, 10, 10, 9);
        auto y = testutil::random_matrix(rng, 10, 10, 9);
        CHECK(multiply_recursive(plan, x, y) == naive_product(x, y));
    }
    SECTION("rectangular operands") {
        auto x = testutil::random_matrix(rng, 4, 7, 9);
        auto y = testutil::random_matrix(rng, 7, 5, 9);
        CHECK(multiply_recursive(plan, x, y) == naive_product(x, y));
    }
    SECTION("size 1") {
        Matrix<Int> x(1, 1), y(1, 1);
        x(0, 0) = 6;
        y(0, 0) = 7;
        OpCountReport ops;
        auto z = multiply_recursive(plan, x, y, &ops);
        CHECK(z(0, 0) == 42);
        CHECK(ops.mults == 1);
    }
}

TEST_CASE("analytic counts equal instrumented counts") {
    std::mt19937_64 rng(404);
    auto schemes = {testutil::load_scheme("strassen.scheme"),
                    testutil::load_scheme("laderman.scheme"), naive_scheme(2, 2, 2)};
    for (const auto& s : schemes) {
        for (int threshold : {1, 2, 3}) {
            MultiplyPlan plan{s, threshold};
            int base = s.dims.n;
            for (int size : {1, base, base * base}) {
                auto x = testutil::random_matrix(rng, size, size, 9);
                auto y = testutil::random_matrix(rng, size, size, 9);
                OpCountReport run;
                multiply_recursive(plan, x, y, &run);
                OpCountReport expected = count_operations(plan, size);
                CHECK(run.mults == expected.mults);
                CHECK(run.adds == expected.adds);
                CHECK(run.depth == expected.depth);
            }
        }
    }
}

TEST_CASE("count_operations matches the closed forms") {
    auto lad = testutil::load_scheme("laderman.scheme");
    CHECK(count_operations({lad, 1}, 3).mults == 23);
    CHECK(count_operations({lad, 1}, 9).mults == 529);
    CHECK(count_operations({lad, 1}, 27).mults == 12167);
    CHECK(count_operations({std::nullopt, 1}, 9).mults == 729);
    CHECK(count_operations({testutil::load_scheme("strassen.scheme"), 1}, 8).mults == 343);
}

TEST_CASE("float path agrees with the exact path on small inputs") {
    std::mt19937_64 rng(505);
    auto st = testutil::load_scheme("strassen.scheme");
    MultiplyPlan plan{st, 1};
    Matrix<Int> x = testutil::random_matrix(rng, 4, 4, 9);
    Matrix<Int> y = testutil::random_matrix(rng, 4, 4, 9);
    Matrix<double> xd(4, 4), yd(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            xd(r, c) = x(r, c).convert_to<double>();
            yd(r, c) = y(r, c).convert_to<double>();
        }
    auto z = multiply_recursive(plan, x, y);
    auto zd = multiply_recursive(plan, xd, yd);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(zd(r, c) == z(r, c).convert_to<double>());
}

TEST_CASE("bench validates its config and cross-checks plans") {
    auto st = testutil::load_scheme("strassen.scheme");
    BenchConfig cfg;
    cfg.plans = {{"naive", {std::nullopt, 1}}, {"strassen", {st, 1}}};
    cfg.sizes = {8};
    cfg.repetitions = 2;
    cfg.seed = 11;
    auto rep = bench(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].mults == 512);
    CHECK(rep.rows[1].mults == 343);

    cfg.repetitions = 0;
    CHECK_THROWS_AS(bench(cfg), std::invalid_argument);
    cfg.repetitions = 1;
    cfg.sizes = {};
    CHECK_THROWS_AS(bench(cfg), std::invalid_argument);
}

TEST_CASE("bench aborts with a witness when plans disagree") {
    auto broken = testutil::load_scheme("strassen.scheme");
    broken.C[0](0, 0) += 1;
    BenchConfig cfg;
    cfg.plans = {{"naive", {std::nullopt, 1}}, {"broken", {broken, 1}}};
    cfg.sizes = {4};
    cfg.repetitions = 1;
    CHECK_THROWS_AS(bench(cfg), BenchMismatch);
}

TEST_CASE("plan validation") {
    MultiplyPlan bad{naive_scheme(2, 3, 4), 1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    MultiplyPlan zero{std::nullopt, 0};
    CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}
