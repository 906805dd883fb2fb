#include <catch2/catch_amalgamated.hpp>

#include "brentforge/brent.hpp"
#include "helpers.hpp"

using namespace brentforge;

TEST_CASE("equation counts") {
    CHECK(enumerate_brent_equations({3, 3, 3}).size() == 729);
    CHECK(enumerate_brent_equations({2, 2, 2}).size() == 64);
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 3; ++m)
            for (int p = 1; p <= 3; ++p)
                CHECK(enumerate_brent_equations({n, m, p}).size() ==
                      static_cast<size_t>(n) * m * m * p * p * n);
}

TEST_CASE("exactly n*m*p equations have rhs 1") {
    auto eqs = enumerate_brent_equations({3, 3, 3});
    int ones = 0;
    for (const auto& e : eqs) {
        if (e.rhs) ++ones;
        CHECK(e.rhs == ((e.n2 == e.i && e.j == e.k && e.l == e.m2) ? 1 : 0));
    }
    CHECK(ones == 27);
}

TEST_CASE("residuals of exact schemes vanish") {
    auto lad = testutil::load_scheme("laderman.scheme");
    for (const auto& e : enumerate_brent_equations(lad.dims))
        REQUIRE(residual(lad, e, 0) == 0);
}

TEST_CASE("naive scheme satisfies the rhs-1 equations term by term") {
    auto s = naive_scheme(3, 3, 3);
    for (const auto& e : enumerate_brent_equations(s.dims))
        if (e.rhs) CHECK(residual(s, e, 0) == 0);
}

TEST_CASE("a single sign flip breaks verification and the product oracle") {
    auto lad = testutil::load_scheme("laderman.scheme");
    lad.A[0](0, 0) = -lad.A[0](0, 0);
    auto rep = verify(lad, 0);
    CHECK(!rep.ok());
    CHECK(rep.failures.size() > 0);
    auto check = random_product_check(lad, 100, 10, /*seed=*/7);
    CHECK(!check.pass);
    REQUIRE(check.witness.has_value());
    // the witness really is a counterexample
    CHECK(check.witness->via_scheme != check.witness->via_naive);
    CHECK(naive_product(check.witness->x, check.witness->y) == check.witness->via_naive);
}

TEST_CASE("verify over the integers implies verify mod 2 and mod 4") {
    for (const char* name : {"strassen.scheme", "laderman.scheme", "courtois23.scheme",
                             "naive222.scheme", "naive333.scheme"}) {
        auto s = testutil::load_scheme(name);
        REQUIRE(verify(s, 0).ok());
        CHECK(verify(s, 2).ok());
        CHECK(verify(s, 4).ok());
        CHECK(verify(reduce_scheme(s, 2), 2).ok());
        CHECK(verify(reduce_scheme(s, 4), 4).ok());
    }
}

TEST_CASE("all-zero scheme fails exactly the rhs-1 equations") {
    BilinearScheme s;
    s.name = "zero";
    s.dims = {3, 3, 3};
    s.rank = 23;
    s.domain = Domain::Integers;
    s.A.assign(23, Matrix<Int>(3, 3));
    s.B.assign(23, Matrix<Int>(3, 3));
    s.C.assign(23, Matrix<Int>(3, 3));
    auto rep = verify(s, 0);
    CHECK(rep.total_equations == 729);
    CHECK(rep.failures.size() == 27);
    for (const auto& [e, r] : rep.failures) {
        CHECK(e.rhs == 1);
        CHECK(r == -1);
    }
}

TEST_CASE("random product check passes for exact schemes") {
    auto check = random_product_check(testutil::load_scheme("laderman.scheme"), 100, 10, 42);
    CHECK(check.pass);
    CHECK(check.trials == 100);
    CHECK(random_product_check(naive_scheme(2, 3, 4), 100, 8, 1).pass);
}

TEST_CASE("random product check is deterministic for a fixed seed") {
    auto s = testutil::load_scheme("strassen.scheme");
    s.C[3](0, 0) += 1;  // break it
    auto a = random_product_check(s, 50, 5, 99);
    auto b = random_product_check(s, 50, 5, 99);
    REQUIRE(!a.pass);
    REQUIRE(!b.pass);
    CHECK(a.trials == b.trials);
    CHECK(a.witness->x == b.witness->x);
}

TEST_CASE("residual rejects out-of-range equations and bad moduli") {
    auto s = naive_scheme(2, 2, 2);
    BrentEquation e{2, 0, 0, 0, 0, 0, 0};  // i out of range
    CHECK_THROWS_AS(residual(s, e, 0), std::invalid_argument);
    BrentEquation ok{0, 0, 0, 0, 0, 0, 1};
    CHECK_THROWS_AS(residual(s, ok, 3), std::invalid_argument);
}

TEST_CASE("verification report renders counts and failures") {
    auto s = naive_scheme(2, 2, 2);
    s.A[0](0, 0) = 0;
    auto rep = verify(s, 0);
    auto text = render_report_text(rep);
    CHECK(text.find("64 equations") != std::string::npos);
    CHECK(text.find("residual=") != std::string::npos);
}
