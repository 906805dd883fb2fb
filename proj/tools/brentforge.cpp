// brentforge: verify, transform and compare bilinear matrix-multiplication
// schemes, encode the mod-2 Brent system to CNF, solve it, decode and lift
// solutions, and multiply matrices with verified schemes.
//
// Exit codes: 0 success, 1 domain failure (verification failed, UNSAT where a
// model was wanted, lift failed), 2 usage or input-format errors.

#include "brentforge/brent.hpp"
#include "brentforge/encode.hpp"
#include "brentforge/external.hpp"
#include "brentforge/lift.hpp"
#include "brentforge/maple.hpp"
#include "brentforge/rank.hpp"
#include "brentforge/recmul.hpp"
#include "brentforge/scheme.hpp"
#include "brentforge/solver.hpp"
#include "brentforge/transform.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace brentforge;

namespace {

constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kDomainFailure = 1, kUsageError = 2 };

class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

BilinearScheme load_scheme(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return parse_scheme(in);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

Matrix<Int> load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return parse_grid<Int>(in);
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        spill(out_path, text);
}

struct DimsOption {
    Dims dims;
};

Dims parse_dims(const std::string& s) {
    Dims d;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> d.n >> c1 >> d.m >> c2 >> d.p) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
        throw InputError("--dims expects n,m,p");
    d.validate();
    return d;
}

json scheme_summary(const BilinearScheme& s) {
    return json{{"name", s.name},
                {"dims", {s.dims.n, s.dims.m, s.dims.p}},
                {"rank", s.rank},
                {"domain", domain_name(s.domain)}};
}

json report_to_json(const VerificationReport& rep) {
    json failures = json::array();
    for (const auto& [e, r] : rep.failures) {
        std::ostringstream res;
        res << r;
        failures.push_back({{"i", e.i + 1},
                            {"j", e.j + 1},
                            {"k", e.k + 1},
                            {"l", e.l + 1},
                            {"m", e.m2 + 1},
                            {"n", e.n2 + 1},
                            {"rhs", e.rhs},
                            {"residual", res.str()}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"command", "verify"},
                {"dims", {rep.dims.n, rep.dims.m, rep.dims.p}},
                {"rank", rep.rank},
                {"modulus", rep.modulus},
                {"total_equations", rep.total_equations},
                {"failure_count", rep.failures.size()},
                {"failures", failures}};
}

json profile_to_json(const RankProfile& p) {
    json per_side = json::object();
    for (Side side : {Side::A, Side::B, Side::C}) {
        json counts = json::object();
        for (const auto& [r, c] : p.side_counts(side)) counts[std::to_string(r)] = c;
        per_side[std::string(1, side_letter(side))] = counts;
    }
    json maxpos = json::array();
    for (const auto& [side, q] : p.max_positions)
        maxpos.push_back({{"side", std::string(1, side_letter(side))}, {"product", q}});
    return json{{"domain", domain_name(p.domain)},
                {"ranks", p.sorted_ranks},
                {"per_side", per_side},
                {"max_rank", p.max_rank},
                {"max_rank_positions", maxpos}};
}

int cmd_verify(const std::string& path, int modulus, const std::string& format,
               size_t max_failures) {
    BilinearScheme s = load_scheme(path);
    VerificationReport rep = verify(s, modulus);
    if (format == "structured") {
        std::cout << report_to_json(rep).dump(2) << '\n';
    } else {
        std::cout << rep.total_equations << " equations, " << rep.failures.size()
                  << " failures\n";
        if (!rep.ok()) std::cout << render_report_text(rep, max_failures);
    }
    return rep.ok() ? kOk : kDomainFailure;
}

int cmd_gen_equations(const Dims& dims, const std::string& format) {
    auto eqs = enumerate_brent_equations(dims);
    if (format == "structured") {
        json arr = json::array();
        for (const auto& e : eqs)
            arr.push_back({{"i", e.i + 1},
                           {"j", e.j + 1},
                           {"k", e.k + 1},
                           {"l", e.l + 1},
                           {"m", e.m2 + 1},
                           {"n", e.n2 + 1},
                           {"rhs", e.rhs}});
        json out{{"schema_version", kSchemaVersion},
                 {"command", "gen-equations"},
                 {"dims", {dims.n, dims.m, dims.p}},
                 {"count", eqs.size()},
                 {"equations", arr}};
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << "# i j k l m n rhs\n";
        for (const auto& e : eqs)
            std::cout << e.i + 1 << ' ' << e.j + 1 << ' ' << e.k + 1 << ' ' << e.l + 1 << ' '
                      << e.m2 + 1 << ' ' << e.n2 + 1 << ' ' << e.rhs << '\n';
        std::cout << "# " << eqs.size() << " equations\n";
    }
    return kOk;
}

json varmap_to_json(const VarMap& vm) {
    return json{{"schema_version", kSchemaVersion},
                {"kind", "varmap"},
                {"dims", {vm.dims.n, vm.dims.m, vm.dims.p}},
                {"rank", vm.rank},
                {"primary_count", vm.primary_count},
                {"pair_base", vm.pair_base},
                {"pair_count", vm.pair_count},
                {"triple_base", vm.triple_base},
                {"triple_count", vm.triple_count},
                {"carry_base", vm.carry_base},
                {"carry_count", vm.carry_count},
                {"total_vars", vm.total_vars}};
}

VarMap varmap_from_json(const json& j) {
    if (!j.contains("kind") || j["kind"] != "varmap")
        throw InputError("not a varmap sidecar file");
    Dims dims{j.at("dims").at(0), j.at("dims").at(1), j.at("dims").at(2)};
    VarMap vm = make_varmap(dims, j.at("rank"));
    if (vm.total_vars != j.at("total_vars").get<int>() ||
        vm.primary_count != j.at("primary_count").get<int>())
        throw InputError("varmap sidecar is inconsistent with its dims/rank");
    return vm;
}

int cmd_encode(const Dims& dims, int rank, const std::string& out_path,
               const std::string& map_path, bool symmetry_breaking) {
    EncodeResult enc = encode_mod2(dims, rank, {.symmetry_breaking = symmetry_breaking});
    spill(out_path, to_dimacs(enc.cnf, varmap_comments(enc.vm)));
    if (!map_path.empty()) spill(map_path, varmap_to_json(enc.vm).dump(2) + "\n");
    std::cerr << "wrote " << out_path << ": " << enc.cnf.num_vars << " vars, "
              << enc.cnf.clauses.size() << " clauses (" << enc.vm.primary_count
              << " primary vars)\n";
    return kOk;
}

void print_model_dimacs(const SolveResult& res) {
    std::cout << "s " << solve_status_name(res.status) << '\n';
    if (res.status != SolveStatus::Sat) return;
    std::cout << 'v';
    int per_line = 0;
    for (int v = 1; v <= res.model.num_vars(); ++v) {
        std::cout << ' ' << (res.model.get(v) ? v : -v);
        if (++per_line == 32 && v != res.model.num_vars()) {
            std::cout << "\nv";
            per_line = 0;
        }
    }
    std::cout << " 0\n";
}

int cmd_solve(const std::string& cnf_path, std::vector<std::string> solvers, double timeout,
              std::uint64_t seed, std::int64_t conflict_limit, int decision_vars,
              const std::string& format) {
    std::ifstream in(cnf_path);
    if (!in) throw InputError("cannot open '" + cnf_path + "'");
    CnfFormula f;
    try {
        f = read_dimacs(in);
    } catch (const std::invalid_argument& e) {
        throw InputError(cnf_path + ": " + e.what());
    }

    if (solvers.empty()) {
        const char* env = std::getenv("BRENTFORGE_SOLVER");
        if (env && *env) solvers.push_back(env);
    }

    SolveResult res;
    std::string engine;
    if (solvers.empty()) {
        SolverConfig cfg;
        cfg.seed = seed;
        cfg.time_limit_s = timeout;
        cfg.conflict_limit = conflict_limit;
        cfg.decision_var_limit = decision_vars;
        res = solve_cnf(f, cfg);
        engine = "bundled";
    } else if (solvers.size() == 1) {
        res = run_external(f, solvers[0], timeout).result;
        engine = solvers[0];
    } else {
        PortfolioOutcome out = solve_portfolio(f, solvers, timeout);
        res = out.result;
        engine = out.winner.empty() ? "portfolio" : out.winner;
    }

    if (format == "structured") {
        json model = json::array();
        if (res.status == SolveStatus::Sat)
            for (int v = 1; v <= res.model.num_vars(); ++v)
                model.push_back(res.model.get(v) ? v : -v);
        json out{{"schema_version", kSchemaVersion},
                 {"command", "solve"},
                 {"engine", engine},
                 {"status", solve_status_name(res.status)},
                 {"model", model},
                 {"stats",
                  {{"decisions", res.stats.decisions},
                   {"conflicts", res.stats.conflicts},
                   {"propagations", res.stats.propagations},
                   {"restarts", res.stats.restarts},
                   {"wall_s", res.stats.wall_s}}}};
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << "c engine " << engine << '\n';
        print_model_dimacs(res);
        std::cerr << "c decisions " << res.stats.decisions << " conflicts " << res.stats.conflicts
                  << " propagations " << res.stats.propagations << " wall " << res.stats.wall_s
                  << "s\n";
    }
    return res.status == SolveStatus::Sat ? kOk : kDomainFailure;
}

int cmd_decode(const std::string& map_path, const std::string& model_path,
               const std::string& out_path, const std::string& name) {
    VarMap vm;
    try {
        vm = varmap_from_json(json::parse(slurp(map_path)));
    } catch (const json::exception& e) {
        throw InputError(map_path + ": " + e.what());
    }
    ParsedModelText parsed = parse_model_text(slurp(model_path));
    if (parsed.status == ModelTextStatus::Unsat)
        throw InputError(model_path + ": model file reports UNSATISFIABLE; nothing to decode");
    Assignment model = assignment_from_literals(parsed.literals, vm.total_vars);
    BilinearScheme s = decode_model(vm, model, name);
    emit_or_print(out_path, serialize_scheme(s));
    std::cerr << "decoded mod-2 scheme verified: dims " << s.dims.n << ',' << s.dims.m << ','
              << s.dims.p << " rank " << s.rank << '\n';
    return kOk;
}

int cmd_lift(const std::string& scheme_path, const std::string& out_path,
             const std::string& format) {
    BilinearScheme s = load_scheme(scheme_path);
    if (s.domain == Domain::Integers) {
        std::cerr << "note: integer scheme reduced mod 2 before lifting\n";
        s = reduce_scheme(s, 2);
    } else if (s.domain == Domain::Mod4) {
        throw InputError("lift expects a mod2 (or integer) scheme");
    }
    LiftResult res = lift_to_signed(s);
    if (format == "structured") {
        json out{{"schema_version", kSchemaVersion},
                 {"command", "lift"},
                 {"status", lift_status_name(res.status)},
                 {"detail", res.detail}};
        if (res.scheme) out["scheme"] = scheme_summary(*res.scheme);
        std::cout << out.dump(2) << '\n';
    }
    if (res.status != LiftStatus::Lifted) {
        if (format != "structured")
            std::cout << "lift failed (" << lift_status_name(res.status) << "): " << res.detail
                      << '\n';
        return kDomainFailure;
    }
    if (format != "structured") std::cout << "lift succeeded\n";
    emit_or_print(out_path, serialize_scheme(*res.scheme));
    return kOk;
}

int cmd_rank(const std::string& scheme_path, const std::string& format) {
    BilinearScheme s = load_scheme(scheme_path);
    RankProfile p = rank_profile(s);
    if (format == "structured") {
        json out = profile_to_json(p);
        out["schema_version"] = kSchemaVersion;
        out["command"] = "rank";
        out["scheme"] = scheme_summary(s);
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << render_rank_table(p);
    }
    return kOk;
}

int cmd_compare(const std::string& path1, const std::string& path2, const std::string& format) {
    BilinearScheme s1 = load_scheme(path1);
    BilinearScheme s2 = load_scheme(path2);
    InequivalenceCertificate cert = inequivalence_certificate(s1, s2);
    if (format == "structured") {
        json out{{"schema_version", kSchemaVersion},
                 {"command", "compare"},
                 {"left", scheme_summary(s1)},
                 {"right", scheme_summary(s2)},
                 {"distinct", cert.distinct},
                 {"witness", cert.witness},
                 {"left_profile", profile_to_json(cert.left)},
                 {"right_profile", profile_to_json(cert.right)}};
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << render_certificate(cert) << '\n';
    }
    return kOk;
}

Transformation transformation_from_flags(const BilinearScheme& s, bool random, std::uint64_t seed,
                                         int cyclic, bool transpose_reverse,
                                         const std::string& permute,
                                         const std::string& rescale,
                                         std::vector<std::string> sandwich_files) {
    int chosen = int(random) + int(cyclic > 0) + int(transpose_reverse) + int(!permute.empty()) +
                 int(!rescale.empty()) + int(!sandwich_files.empty());
    if (chosen != 1)
        throw InputError("pick exactly one of --random, --cyclic, --transpose-reverse, "
                         "--permute, --rescale, --sandwich");
    if (random) return random_transformation(s.dims, s.rank, seed);
    if (cyclic > 0) return CyclicShift{cyclic};
    if (transpose_reverse) return TransposeReverse{};
    if (!permute.empty()) {
        PermuteProducts p;
        std::istringstream in(permute);
        std::string tok;
        while (std::getline(in, tok, ',')) p.perm.push_back(std::stoi(tok) - 1);
        return p;
    }
    if (!rescale.empty()) {
        Rescale r;
        std::istringstream in(rescale);
        std::string triple;
        while (std::getline(in, triple, ',')) {
            std::istringstream ts(triple);
            std::array<int, 3> u{};
            char c1, c2;
            if (!(ts >> u[0] >> c1 >> u[1] >> c2 >> u[2]) || c1 != ':' || c2 != ':')
                throw InputError("--rescale expects a:b:c,a:b:c,...");
            r.units.push_back(u);
        }
        return r;
    }
    if (sandwich_files.size() != 3)
        throw InputError("--sandwich expects three grid files: U V W");
    return Sandwich{load_grid(sandwich_files[0]), load_grid(sandwich_files[1]),
                    load_grid(sandwich_files[2])};
}

int cmd_transform(const std::string& scheme_path, const std::string& out_path,
                  const Transformation& t) {
    BilinearScheme s = load_scheme(scheme_path);
    BilinearScheme out = brentforge::apply(t, s);
    std::cerr << "applied " << transformation_name(t) << '\n';
    emit_or_print(out_path, serialize_scheme(out));
    return kOk;
}

int cmd_multiply(const std::string& x_path, const std::string& y_path,
                 const std::string& scheme_path, int threshold, bool count,
                 const std::string& out_path, const std::string& format) {
    Matrix<Int> x = load_grid(x_path);
    Matrix<Int> y = load_grid(y_path);
    MultiplyPlan plan;
    if (!scheme_path.empty() && scheme_path != "naive") plan.scheme = load_scheme(scheme_path);
    plan.threshold = threshold;
    OpCountReport ops;
    Matrix<Int> z = multiply_recursive(plan, x, y, &ops);
    if (format == "structured") {
        std::ostringstream mults, adds;
        mults << ops.mults;
        adds << ops.adds;
        json out{{"schema_version", kSchemaVersion},
                 {"command", "multiply"},
                 {"rows", z.rows()},
                 {"cols", z.cols()},
                 {"result", to_grid(z)},
                 {"mults", mults.str()},
                 {"adds", adds.str()},
                 {"depth", ops.depth}};
        std::cout << out.dump(2) << '\n';
        return kOk;
    }
    emit_or_print(out_path, to_grid(z));
    if (count)
        std::cerr << "mults " << ops.mults << " adds " << ops.adds << " depth " << ops.depth
                  << '\n';
    return kOk;
}

int cmd_bench(const std::vector<std::string>& plan_specs, const std::vector<int>& sizes, int reps,
              std::uint64_t seed, int bound, const std::string& format) {
    BenchConfig cfg;
    cfg.sizes = sizes;
    cfg.repetitions = reps;
    cfg.seed = seed;
    cfg.entry_bound = bound;
    for (const std::string& spec : plan_specs) {
        BenchPlan bp;
        std::string path = spec;
        size_t colon = spec.rfind(':');
        if (colon != std::string::npos && colon > 1) {
            path = spec.substr(0, colon);
            bp.plan.threshold = std::stoi(spec.substr(colon + 1));
        }
        if (path == "naive") {
            bp.name = "naive";
        } else {
            bp.plan.scheme = load_scheme(path);
            bp.name = bp.plan.scheme->name + ":" + std::to_string(bp.plan.threshold);
        }
        cfg.plans.push_back(std::move(bp));
    }
    try {
        BenchReport rep = bench(cfg);
        if (format == "structured") {
            json rows = json::array();
            for (const auto& row : rep.rows) {
                std::ostringstream mults, adds;
                mults << row.mults;
                adds << row.adds;
                rows.push_back({{"plan", row.plan},
                                {"size", row.size},
                                {"mults", mults.str()},
                                {"adds", adds.str()},
                                {"best_ms", row.best_ms},
                                {"mean_ms", row.mean_ms}});
            }
            json out{{"schema_version", kSchemaVersion}, {"command", "bench"}, {"rows", rows}};
            std::cout << out.dump(2) << '\n';
        } else {
            std::cout << render_bench_table(rep);
        }
    } catch (const BenchMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainFailure;
    }
    return kOk;
}

int cmd_export_maple(const std::string& scheme_path, const std::string& out_path) {
    BilinearScheme s = load_scheme(scheme_path);
    MapleExport exp = export_maple_listing(s);
    for (const std::string& w : exp.warnings) std::cerr << "warning: " << w << '\n';
    emit_or_print(out_path, exp.text);
    return kOk;
}

int cmd_ingest_maple(const std::string& listing_path, const std::string& out_path,
                     const std::string& name) {
    BilinearScheme s;
    try {
        s = ingest_maple_listing(slurp(listing_path), name);
    } catch (const MapleError& e) {
        throw InputError(listing_path + ": " + e.what());
    }
    emit_or_print(out_path, serialize_scheme(s));
    std::cerr << "ingested: dims " << s.dims.n << ',' << s.dims.m << ',' << s.dims.p << " rank "
              << s.rank << '\n';
    return kOk;
}

int cmd_gen_naive(const Dims& dims, const std::string& out_path) {
    emit_or_print(out_path, serialize_scheme(naive_scheme(dims.n, dims.m, dims.p)));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilinear matrix-multiplication schemes: Brent verification, SAT encoding, "
                 "lifting, equivalence invariants, recursive multiplication"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check a scheme against the Brent equations");
    std::string verify_scheme;
    int verify_mod = 0;
    size_t verify_max_failures = 20;
    verify_cmd->add_option("scheme", verify_scheme, "scheme file")->required();
    verify_cmd->add_option("--mod", verify_mod, "modulus: 0 (integers), 2 or 4")
        ->check(CLI::IsMember({0, 2, 4}));
    verify_cmd->add_option("--max-failures", verify_max_failures, "failures to print");

    // gen-equations
    auto* geneq_cmd = app.add_subcommand("gen-equations", "enumerate the Brent equations");
    std::string geneq_dims;
    geneq_cmd->add_option("--dims", geneq_dims, "n,m,p")->required();

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "encode the mod-2 Brent system as DIMACS CNF");
    std::string encode_dims, encode_out, encode_map;
    int encode_rank = 0;
    bool encode_symbreak = false;
    encode_cmd->add_option("--dims", encode_dims, "n,m,p")->required();
    encode_cmd->add_option("--rank", encode_rank, "target rank r")->required();
    encode_cmd->add_option("--out", encode_out, "output CNF path")->required();
    encode_cmd->add_option("--map", encode_map, "variable-map sidecar path (JSON)");
    encode_cmd->add_flag("--symmetry-breaking", encode_symbreak,
                         "add heuristic symmetry-breaking constraints (may exclude solutions)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve a DIMACS CNF file");
    std::string solve_cnf_path;
    std::vector<std::string> solve_solvers;
    double solve_timeout = -1;
    std::uint64_t solve_seed = 0;
    std::int64_t solve_conflicts = -1;
    int solve_decision_vars = 0;
    solve_cmd->add_option("cnf", solve_cnf_path, "DIMACS file")->required();
    solve_cmd->add_option("--solver", solve_solvers,
                          "external solver command; repeat for a portfolio "
                          "(default: $BRENTFORGE_SOLVER, else the bundled CDCL)");
    solve_cmd->add_option("--timeout", solve_timeout, "time limit in seconds");
    solve_cmd->add_option("--seed", solve_seed, "bundled solver seed");
    solve_cmd->add_option("--conflict-limit", solve_conflicts, "bundled solver conflict limit");
    solve_cmd->add_option("--decision-vars", solve_decision_vars,
                          "prefer deciding on variables 1..N (bundled solver)");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "decode a SAT model into a mod-2 scheme");
    std::string decode_map, decode_model_path, decode_out, decode_name = "decoded";
    decode_cmd->add_option("--map", decode_map, "varmap sidecar from encode")->required();
    decode_cmd->add_option("--model", decode_model_path, "model file (v-lines or raw literals)")
        ->required();
    decode_cmd->add_option("--out", decode_out, "output scheme path (default stdout)");
    decode_cmd->add_option("--name", decode_name, "name for the decoded scheme");

    // lift
    auto* lift_cmd = app.add_subcommand("lift", "lift a mod-2 scheme to a signed integer scheme");
    std::string lift_scheme, lift_out;
    lift_cmd->add_option("scheme", lift_scheme, "scheme file (mod2, or integers to reduce)")
        ->required();
    lift_cmd->add_option("--out", lift_out, "output scheme path (default stdout)");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "rank profile of the coefficient matrices");
    std::string rank_scheme;
    rank_cmd->add_option("scheme", rank_scheme, "scheme file")->required();

    // transform
    auto* tr_cmd = app.add_subcommand("transform", "apply a solution-preserving transformation");
    std::string tr_scheme, tr_out, tr_permute, tr_rescale;
    std::vector<std::string> tr_sandwich;
    bool tr_random = false, tr_transpose = false;
    int tr_cyclic = 0;
    std::uint64_t tr_seed = 0;
    tr_cmd->add_option("scheme", tr_scheme, "scheme file")->required();
    tr_cmd->add_flag("--random", tr_random, "sample a random transformation (see --seed)");
    tr_cmd->add_option("--seed", tr_seed, "seed for --random");
    tr_cmd->add_option("--cyclic", tr_cyclic, "cyclic shift of the three families (1 or 2)");
    tr_cmd->add_flag("--transpose-reverse", tr_transpose, "transpose all and swap A with C");
    tr_cmd->add_option("--permute", tr_permute, "product permutation, e.g. 3,1,2");
    tr_cmd->add_option("--rescale", tr_rescale, "unit triples a:b:c,... (one per product)");
    tr_cmd->add_option("--sandwich", tr_sandwich, "three unimodular grid files U V W")
        ->expected(3);
    tr_cmd->add_option("--out", tr_out, "output scheme path (default stdout)");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "rank-profile inequivalence certificate");
    std::string cmp_s1, cmp_s2;
    cmp_cmd->add_option("scheme1", cmp_s1)->required();
    cmp_cmd->add_option("scheme2", cmp_s2)->required();

    // multiply
    auto* mul_cmd = app.add_subcommand("multiply", "multiply two integer matrices with a scheme");
    std::string mul_x, mul_y, mul_scheme, mul_out;
    int mul_threshold = 1;
    bool mul_count = false;
    mul_cmd->add_option("x", mul_x, "left matrix grid file")->required();
    mul_cmd->add_option("y", mul_y, "right matrix grid file")->required();
    mul_cmd->add_option("--scheme", mul_scheme, "scheme file, or 'naive' (default)");
    mul_cmd->add_option("--threshold", mul_threshold, "naive crossover side length");
    mul_cmd->add_flag("--count", mul_count, "print operation counts to stderr");
    mul_cmd->add_option("--out", mul_out, "output grid path (default stdout)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "cross-checked multiplication benchmark");
    std::vector<std::string> bench_plans;
    std::vector<int> bench_sizes;
    int bench_reps = 3, bench_bound = 9;
    std::uint64_t bench_seed = 0;
    bench_cmd->add_option("--plan", bench_plans, "'naive' or scheme-file[:threshold]; repeatable")
        ->required();
    bench_cmd->add_option("--sizes", bench_sizes, "matrix sizes")->required();
    bench_cmd->add_option("--reps", bench_reps, "timed repetitions per plan/size");
    bench_cmd->add_option("--seed", bench_seed, "input generator seed");
    bench_cmd->add_option("--bound", bench_bound, "entry magnitude bound");

    // export-maple / ingest-maple
    auto* exm_cmd = app.add_subcommand("export-maple", "write a scheme as a Maple listing");
    std::string exm_scheme, exm_out;
    exm_cmd->add_option("scheme", exm_scheme)->required();
    exm_cmd->add_option("--out", exm_out, "output path (default stdout)");

    auto* inm_cmd = app.add_subcommand("ingest-maple", "parse a Maple listing into a scheme");
    std::string inm_listing, inm_out, inm_name = "maple";
    inm_cmd->add_option("listing", inm_listing)->required();
    inm_cmd->add_option("--out", inm_out, "output scheme path (default stdout)");
    inm_cmd->add_option("--name", inm_name, "scheme name");

    // gen-naive
    auto* gn_cmd = app.add_subcommand("gen-naive", "emit the naive scheme for given dims");
    std::string gn_dims, gn_out;
    gn_cmd->add_option("--dims", gn_dims, "n,m,p")->required();
    gn_cmd->add_option("--out", gn_out, "output scheme path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*verify_cmd) return cmd_verify(verify_scheme, verify_mod, format, verify_max_failures);
        if (*geneq_cmd) return cmd_gen_equations(parse_dims(geneq_dims), format);
        if (*encode_cmd)
            return cmd_encode(parse_dims(encode_dims), encode_rank, encode_out, encode_map,
                              encode_symbreak);
        if (*solve_cmd)
            return cmd_solve(solve_cnf_path, solve_solvers, solve_timeout, solve_seed,
                             solve_conflicts, solve_decision_vars, format);
        if (*decode_cmd) return cmd_decode(decode_map, decode_model_path, decode_out, decode_name);
        if (*lift_cmd) return cmd_lift(lift_scheme, lift_out, format);
        if (*rank_cmd) return cmd_rank(rank_scheme, format);
        if (*tr_cmd) {
            BilinearScheme s = load_scheme(tr_scheme);
            Transformation t = transformation_from_flags(s, tr_random, tr_seed, tr_cyclic,
                                                         tr_transpose, tr_permute, tr_rescale,
                                                         tr_sandwich);
            return cmd_transform(tr_scheme, tr_out, t);
        }
        if (*cmp_cmd) return cmd_compare(cmp_s1, cmp_s2, format);
        if (*mul_cmd)
            return cmd_multiply(mul_x, mul_y, mul_scheme, mul_threshold, mul_count, mul_out,
                                format);
        if (*bench_cmd)
            return cmd_bench(bench_plans, bench_sizes, bench_reps, bench_seed, bench_bound,
                             format);
        if (*exm_cmd) return cmd_export_maple(exm_scheme, exm_out);
        if (*inm_cmd) return cmd_ingest_maple(inm_listing, inm_out, inm_name);
        if (*gn_cmd) return cmd_gen_naive(parse_dims(gn_dims), gn_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const MapleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const IncompleteModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainFailure;
    } catch (const ExternalSolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kDomainFailure;
    }
    return kUsageError;
}
