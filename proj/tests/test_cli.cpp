#include <catch2/catch_amalgamated.hpp>

#include "brentforge/brent.hpp"
#include "brentforge/rank.hpp"
#include "helpers.hpp"

#include "json.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef BRENTFORGE_CLI_PATH
#error "BRENTFORGE_CLI_PATH must be defined by the build"
#endif

using json = nlohmann::json;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::string& args) {
    static int counter = 0;
    std::string out_path = "/tmp/brentforge-test-out-" + std::to_string(counter);
    std::string err_path = "/tmp/brentforge-test-err-" + std::to_string(counter);
    ++counter;
    std::string cmd = std::string(BRENTFORGE_CLI_PATH) + " " + args + " >" + out_path + " 2>" +
                      err_path;
    int status = std::system(cmd.c_str());
    CliRun run;
    run.exit_code = WEXITSTATUS(status);
    run.out = testutil::slurp(out_path);
    run.err = testutil::slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return run;
}

std::string dp(const std::string& name) { return testutil::data_path(name); }

}  // namespace

TEST_CASE("cli verify on shipped schemes") {
    auto run = run_cli("verify " + dp("laderman.scheme"));
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("729 equations, 0 failures") != std::string::npos);

    auto mod2 = run_cli("verify --mod 2 " + dp("strassen.scheme"));
    CHECK(mod2.exit_code == 0);
    CHECK(mod2.out.find("64 equations, 0 failures") != std::string::npos);
}

TEST_CASE("cli verify fails with exit 1 on a broken scheme") {
    auto s = testutil::load_scheme("laderman.scheme");
    s.A[0](0, 0) = -s.A[0](0, 0);
    std::ofstream out("/tmp/broken.scheme");
    out << brentforge::serialize_scheme(s);
    out.close();
    auto run = run_cli("verify /tmp/broken.scheme");
    CHECK(run.exit_code == 1);
    CHECK(run.out.find(" failures") != std::string::npos);
}

TEST_CASE("cli rank prints the courtois23 table") {
    auto run = run_cli("rank " + dp("courtois23.scheme"));
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("max rank 3 at: A(18) A(20)") != std::string::npos);
}

TEST_CASE("cli compare reproduces the 6-vs-2 witness") {
    auto run = run_cli("compare " + dp("laderman.scheme") + " " + dp("courtois23.scheme"));
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("DISTINCT: rank-3 count 6 vs 2") != std::string::npos);
}

TEST_CASE("cli output matches the library rendering (thin adapter)") {
    auto run = run_cli("rank " + dp("laderman.scheme"));
    auto expected = brentforge::render_rank_table(
        brentforge::rank_profile(testutil::load_scheme("laderman.scheme")));
    CHECK(run.out == expected);
}

TEST_CASE("cli gen-equations counts match the library") {
    auto run = run_cli("gen-equations --dims 2,2,2");
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("# 64 equations") != std::string::npos);
}

TEST_CASE("cli encode/solve/decode/lift pipeline on rank 7") {
    auto enc = run_cli("encode --dims 2,2,2 --rank 7 --out /tmp/cli7.cnf --map /tmp/cli7.map");
    REQUIRE(enc.exit_code == 0);
    auto solve = run_cli("solve /tmp/cli7.cnf --seed 11 --timeout 120");
    REQUIRE(solve.exit_code == 0);
    CHECK(solve.out.find("s SATISFIABLE") != std::string::npos);
    std::ofstream model("/tmp/cli7.model");
    model << solve.out;
    model.close();
    auto decode = run_cli("decode --map /tmp/cli7.map --model /tmp/cli7.model --out /tmp/cli7.scheme");
    REQUIRE(decode.exit_code == 0);
    auto verify_run = run_cli("verify --mod 2 /tmp/cli7.scheme");
    CHECK(verify_run.exit_code == 0);
    CHECK(verify_run.out.find("0 failures") != std::string::npos);
    auto lift = run_cli("lift /tmp/cli7.scheme --out /tmp/cli7-lifted.scheme");
    if (lift.exit_code == 0) {
        auto final_verify = run_cli("verify /tmp/cli7-lifted.scheme");
        CHECK(final_verify.exit_code == 0);
    } else {
        // a mod-2 solution that does not lift is a legal outcome; the CLI
        // must say which way it failed
        CHECK(lift.out.find("lift failed") != std::string::npos);
    }
}

TEST_CASE("cli structured output is versioned json") {
    auto run = run_cli("--format structured verify " + dp("laderman.scheme"));
    REQUIRE(run.exit_code == 0);
    auto doc = json::parse(run.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["total_equations"] == 729);
    CHECK(doc["failure_count"] == 0);

    auto cmp = run_cli("--format structured compare " + dp("laderman.scheme") + " " +
                       dp("courtois23.scheme"));
    auto cdoc = json::parse(cmp.out);
    CHECK(cdoc["distinct"] == true);
    CHECK(cdoc["witness"] == "rank-3 count 6 vs 2");
}

TEST_CASE("cli transform keeps schemes valid") {
    auto run = run_cli("transform " + dp("laderman.scheme") +
                       " --random --seed 99 --out /tmp/cli-t.scheme");
    REQUIRE(run.exit_code == 0);
    CHECK(run_cli("verify /tmp/cli-t.scheme").exit_code == 0);

    auto cyc = run_cli("transform " + dp("strassen.scheme") + " --cyclic 1");
    CHECK(cyc.exit_code == 0);
    CHECK(cyc.out.find("scheme ") == 0);
}

TEST_CASE("cli multiply with counts") {
    std::ofstream x("/tmp/cli-x.mat");
    x << "1 0 0\n0 1 0\n0 0 1\n";
    x.close();
    std::ofstream y("/tmp/cli-y.mat");
    y << "5 6 7\n8 9 10\n11 12 13\n";
    y.close();
    auto run = run_cli("multiply /tmp/cli-x.mat /tmp/cli-y.mat --scheme " +
                       dp("courtois23.scheme") + " --count");
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("5 6 7") != std::string::npos);
    CHECK(run.err.find("mults 23") != std::string::npos);
}

TEST_CASE("cli maple round trip") {
    auto exp = run_cli("export-maple " + dp("laderman.scheme") + " --out /tmp/cli-lad.maple");
    REQUIRE(exp.exit_code == 0);
    auto ing = run_cli("ingest-maple /tmp/cli-lad.maple --name laderman --out /tmp/cli-lad.scheme");
    REQUIRE(ing.exit_code == 0);
    CHECK(testutil::slurp("/tmp/cli-lad.scheme") ==
          testutil::slurp(testutil::data_path("laderman.scheme")));
}

TEST_CASE("cli usage errors exit 2") {
    CHECK(run_cli("no-such-subcommand").exit_code == 2);
    CHECK(run_cli("verify /does/not/exist.scheme").exit_code == 2);
    CHECK(run_cli("verify").exit_code == 2);
    CHECK(run_cli("verify --mod 3 " + dp("strassen.scheme")).exit_code == 2);
    CHECK(run_cli("gen-equations --dims nonsense").exit_code == 2);
}

TEST_CASE("cli bench table lists every plan") {
    auto run = run_cli("bench --plan naive --plan " + dp("strassen.scheme") +
                       ":1 --sizes 8 --reps 1 --seed 2");
    REQUIRE(run.exit_code == 0);
    CHECK(run.out.find("naive") != std::string::npos);
    CHECK(run.out.find("strassen:1") != std::string::npos);
    CHECK(run.out.find("343") != std::string::npos);
    CHECK(run.out.find("512") != std::string::npos);
}

TEST_CASE("cli gen-naive emits a verified scheme") {
    auto run = run_cli("gen-naive --dims 3,3,3 --out /tmp/cli-naive.scheme");
    REQUIRE(run.exit_code == 0);
    CHECK(run_cli("verify /tmp/cli-naive.scheme").exit_code == 0);
    CHECK(testutil::slurp("/tmp/cli-naive.scheme") ==
          testutil::slurp(testutil::data_path("naive333.scheme")));
}
