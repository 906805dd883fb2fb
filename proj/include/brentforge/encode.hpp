#pragma once

// CNF encoding of the mod-2 Brent system for dims (n,m,p) and target rank r.
//
// Variable layout (1-based, contiguous):
//   primary:  A entries (q-major, row-major), then B, then C  -- r*(nm+mp+pn)
//   pairs:    one shared AND p = a^q(i,j) & b^q(k,l) per (q,i,j,k,l); each
//             pair is reused by the n*p equations that fix the same (i,j,k,l)
//   triples:  t = pair & c^q(m2,n2), one per (equation, q)
//   carries:  r-1 per equation, chaining the XOR ladder
//
// Each equation constrains the XOR of its r triples to its right-hand side.
// A satisfying assignment's primary projection is exactly a mod-2 Brent
// solution of rank <= r.

#include "brentforge/brent.hpp"
#include "brentforge/cnf.hpp"
#include "brentforge/rank.hpp"
#include "brentforge/scheme.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

struct VarMap {
    Dims dims;
    int rank = 0;

    int a_base = 0, b_base = 0, c_base = 0;
    int primary_count = 0;
    int pair_base = 0, pair_count = 0;
    int triple_base = 0, triple_count = 0;
    int carry_base = 0, carry_count = 0;
    int extra_count = 0;  // UNSAT gadget for r = 0
    int total_vars = 0;
    long long equations = 0;

    int var(Side side, int q, int row, int col) const {
        switch (side) {
            case Side::A: return a_base + (q * dims.n + row) * dims.m + col;
            case Side::B: return b_base + (q * dims.m + row) * dims.p + col;
            case Side::C: return c_base + (q * dims.p + row) * dims.n + col;
        }
        throw std::logic_error("bad side");
    }

    struct PrimaryEntry {
        Side side;
        int q, row, col;  // 0-based
    };

    std::optional<PrimaryEntry> primary_of(int v) const {
        if (v < 1 || v > primary_count) return std::nullopt;
        if (v < b_base) {
            int off = v - a_base;
            return PrimaryEntry{Side::A, off / (dims.n * dims.m), (off / dims.m) % dims.n,
                                off % dims.m};
        }
        if (v < c_base) {
            int off = v - b_base;
            return PrimaryEntry{Side::B, off / (dims.m * dims.p), (off / dims.p) % dims.m,
                                off % dims.p};
        }
        int off = v - c_base;
        return PrimaryEntry{Side::C, off / (dims.p * dims.n), (off / dims.n) % dims.p,
                            off % dims.n};
    }

    int pair_var(int q, int i, int j, int k, int l) const {
        return pair_base + (((q * dims.n + i) * dims.m + j) * dims.m + k) * dims.p + l;
    }
    int triple_var(long long eq, int q) const {
        return triple_base + static_cast<int>(eq * rank + q);
    }
    int carry_var(long long eq, int idx) const {
        return carry_base + static_cast<int>(eq * (rank - 1) + idx);
    }
};

inline VarMap make_varmap(const Dims& dims, int rank) {
    dims.validate();
    if (rank < 0) throw std::invalid_argument("rank must be >= 0");
    VarMap vm;
    vm.dims = dims;
    vm.rank = rank;
    vm.equations = brent_equation_count(dims);
    int a_count = rank * dims.n * dims.m;
    int b_count = rank * dims.m * dims.p;
    int c_count = rank * dims.p * dims.n;
    vm.a_base = 1;
    vm.b_base = vm.a_base + a_count;
    vm.c_base = vm.b_base + b_count;
    vm.primary_count = a_count + b_count + c_count;
    vm.pair_base = vm.primary_count + 1;
    vm.pair_count = rank * dims.n * dims.m * dims.m * dims.p;
    vm.triple_base = vm.pair_base + vm.pair_count;
    vm.triple_count = static_cast<int>(vm.equations) * rank;
    vm.carry_base = vm.triple_base + vm.triple_count;
    vm.carry_count = rank >= 2 ? static_cast<int>(vm.equations) * (rank - 1) : 0;
    vm.extra_count = rank == 0 ? 1 : 0;
    vm.total_vars = vm.primary_count + vm.pair_count + vm.triple_count + vm.carry_count +
                    vm.extra_count;
    return vm;
}

struct EncodeOptions {
    bool symmetry_breaking = false;  // heuristic, opt-in: may exclude solutions
};

struct EncodeResult {
    CnfFormula cnf;
    VarMap vm;
};

namespace detail {

// vec(q) <=lex vec(q+1) over the concatenated primary bits of two adjacent
// products, with prefix-equality chain variables.
inline void add_lex_order(CnfFormula& f, const std::vector<int>& xs, const std::vector<int>& ys) {
    if (xs.size() != ys.size() || xs.empty()) throw std::logic_error("lex vectors mismatch");
    f.add_clause({-xs[0], ys[0]});
    int eq_prev = 0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        int eq = f.new_var();  // eq <-> (prefix equal through position i)
        if (eq_prev == 0) {
            f.add_clause({-eq, -xs[i], ys[i]});
            f.add_clause({-eq, xs[i], -ys[i]});
            f.add_clause({eq, xs[i], ys[i]});
            f.add_clause({eq, -xs[i], -ys[i]});
        } else {
            f.add_clause({-eq, eq_prev});
            f.add_clause({-eq, -xs[i], ys[i]});
            f.add_clause({-eq, xs[i], -ys[i]});
            f.add_clause({eq, -eq_prev, xs[i], ys[i]});
            f.add_clause({eq, -eq_prev, -xs[i], -ys[i]});
        }
        f.add_clause({-eq, -xs[i + 1], ys[i + 1]});
        eq_prev = eq;
    }
}

}  // namespace detail

inline EncodeResult encode_mod2(const Dims& dims, int rank, const EncodeOptions& opt = {}) {
    VarMap vm = make_varmap(dims, rank);
    CnfFormula f;
    f.num_vars = vm.total_vars;

    if (rank == 0) {
        // No products: equations with rhs 1 are unsatisfiable.
        bool any_rhs1 = false;
        for (const BrentEquation& e : enumerate_brent_equations(dims))
            if (e.rhs) {
                any_rhs1 = true;
                break;
            }
        if (any_rhs1) {
            int z = vm.primary_count + 1;  // the single extra var
            f.add_clause({z});
            f.add_clause({-z});
        }
        return {std::move(f), vm};
    }

    // Pair AND definitions, shared across equations.
    for (int q = 0; q < rank; ++q)
        for (int i = 0; i < dims.n; ++i)
            for (int j = 0; j < dims.m; ++j)
                for (int k = 0; k < dims.m; ++k)
                    for (int l = 0; l < dims.p; ++l) {
                        int a = vm.var(Side::A, q, i, j);
                        int b = vm.var(Side::B, q, k, l);
                        int p = vm.pair_var(q, i, j, k, l);
                        f.add_clause({-p, a});
                        f.add_clause({-p, b});
                        f.add_clause({p, -a, -b});
                    }

    // Triple ANDs and one parity ladder per equation.
    const auto equations = enumerate_brent_equations(dims);
    for (long long ei = 0; ei < static_cast<long long>(equations.size()); ++ei) {
        const BrentEquation& e = equations[ei];
        for (int q = 0; q < rank; ++q) {
            int p = vm.pair_var(q, e.i, e.j, e.k, e.l);
            int c = vm.var(Side::C, q, e.m2, e.n2);
            int t = vm.triple_var(ei, q);
            f.add_clause({-t, p});
            f.add_clause({-t, c});
            f.add_clause({t, -p, -c});
        }
        int acc = vm.triple_var(ei, 0);
        for (int q = 1; q < rank; ++q) {
            int carry = vm.carry_var(ei, q - 1);
            add_xor_link(f, acc, vm.triple_var(ei, q), carry);
            acc = carry;
        }
        f.add_clause({e.rhs ? acc : -acc});
    }

    if (opt.symmetry_breaking) {
        // Fix product 1's A matrix to the elementary e_{1,1} and order the
        // remaining products lexicographically. Heuristic: sound for the
        // shipped schemes, not guaranteed in general.
        for (int i = 0; i < dims.n; ++i)
            for (int j = 0; j < dims.m; ++j)
                f.add_clause({(i == 0 && j == 0 ? 1 : -1) * vm.var(Side::A, 0, i, j)});
        auto product_bits = [&](int q) {
            std::vector<int> bits;
            for (int i = 0; i < dims.n; ++i)
                for (int j = 0; j < dims.m; ++j) bits.push_back(vm.var(Side::A, q, i, j));
            for (int k = 0; k < dims.m; ++k)
                for (int l = 0; l < dims.p; ++l) bits.push_back(vm.var(Side::B, q, k, l));
            for (int m2 = 0; m2 < dims.p; ++m2)
                for (int n2 = 0; n2 < dims.n; ++n2) bits.push_back(vm.var(Side::C, q, m2, n2));
            return bits;
        };
        for (int q = 1; q + 1 < rank; ++q)
            detail::add_lex_order(f, product_bits(q), product_bits(q + 1));
    }

    return {std::move(f), vm};
}

// DIMACS comment block describing the primary variables.
inline std::vector<std::string> varmap_comments(const VarMap& vm) {
    std::vector<std::string> out;
    std::ostringstream head;
    head << "brentforge mod2 encoding dims " << vm.dims.n << ' ' << vm.dims.m << ' ' << vm.dims.p
         << " rank " << vm.rank;
    out.push_back(head.str());
    for (Side side : {Side::A, Side::B, Side::C}) {
        int rows = side == Side::A ? vm.dims.n : (side == Side::B ? vm.dims.m : vm.dims.p);
        int cols = side == Side::A ? vm.dims.m : (side == Side::B ? vm.dims.p : vm.dims.n);
        for (int q = 0; q < vm.rank; ++q)
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) {
                    std::ostringstream line;
                    line << "map " << side_letter(side) << ' ' << q + 1 << ' ' << r + 1 << ' '
                         << c + 1 << " -> " << vm.var(side, q, r, c);
                    out.push_back(line.str());
                }
    }
    return out;
}

// Extends a mod-2 scheme to a total assignment: primaries from the entries,
// auxiliaries forced by their definitions. Satisfies the base encoding iff
// the scheme solves the mod-2 Brent system.
inline Assignment assignment_from_scheme(const VarMap& vm, const BilinearScheme& s) {
    s.validate();
    if (s.domain != Domain::Mod2)
        throw std::invalid_argument("assignment_from_scheme needs a mod2 scheme");
    if (s.dims != vm.dims || s.rank != vm.rank)
        throw std::invalid_argument("scheme dims/rank do not match the variable map");

    Assignment a(vm.total_vars);
    for (int q = 0; q < vm.rank; ++q) {
        for (int i = 0; i < vm.dims.n; ++i)
            for (int j = 0; j < vm.dims.m; ++j)
                a.set(vm.var(Side::A, q, i, j), s.A[q](i, j) == 1);
        for (int k = 0; k < vm.dims.m; ++k)
            for (int l = 0; l < vm.dims.p; ++l)
                a.set(vm.var(Side::B, q, k, l), s.B[q](k, l) == 1);
        for (int m2 = 0; m2 < vm.dims.p; ++m2)
            for (int n2 = 0; n2 < vm.dims.n; ++n2)
                a.set(vm.var(Side::C, q, m2, n2), s.C[q](m2, n2) == 1);
    }
    for (int q = 0; q < vm.rank; ++q)
        for (int i = 0; i < vm.dims.n; ++i)
            for (int j = 0; j < vm.dims.m; ++j)
                for (int k = 0; k < vm.dims.m; ++k)
                    for (int l = 0; l < vm.dims.p; ++l)
                        a.set(vm.pair_var(q, i, j, k, l),
                              s.A[q](i, j) == 1 && s.B[q](k, l) == 1);

    const auto equations = enumerate_brent_equations(vm.dims);
    for (long long ei = 0; ei < static_cast<long long>(equations.size()); ++ei) {
        const BrentEquation& e = equations[ei];
        bool parity = false;
        for (int q = 0; q < vm.rank; ++q) {
            bool t = s.A[q](e.i, e.j) == 1 && s.B[q](e.k, e.l) == 1 && s.C[q](e.m2, e.n2) == 1;
            a.set(vm.triple_var(ei, q), t);
            parity ^= t;
            if (q >= 1) a.set(vm.carry_var(ei, q - 1), parity);
        }
    }
    return a;
}

class IncompleteModelError : public std::runtime_error {
public:
    explicit IncompleteModelError(const std::string& msg) : std::runtime_error(msg) {}
};

class EncoderSoundnessError : public std::logic_error {
public:
    explicit EncoderSoundnessError(const std::string& msg) : std::logic_error(msg) {}
};

// Reads the primary variables back into a mod-2 scheme. The decoded scheme is
// re-verified against the Brent equations; a failure there means the encoding
// and the verifier disagree, which is a bug, not a data error.
inline BilinearScheme decode_model(const VarMap& vm, const Assignment& model,
                                   const std::string& name = "decoded") {
    BilinearScheme s;
    s.name = name;
    s.dims = vm.dims;
    s.rank = vm.rank;
    s.domain = Domain::Mod2;
    s.A.assign(vm.rank, Matrix<Int>(vm.dims.n, vm.dims.m));
    s.B.assign(vm.rank, Matrix<Int>(vm.dims.m, vm.dims.p));
    s.C.assign(vm.rank, Matrix<Int>(vm.dims.p, vm.dims.n));

    for (int v = 1; v <= vm.primary_count; ++v) {
        if (v >= static_cast<int>(model.value.size()) || !model.assigned(v))
            throw IncompleteModelError("model does not assign primary variable " +
                                       std::to_string(v));
        auto entry = vm.primary_of(v);
        Int bit = model.get(v) ? 1 : 0;
        switch (entry->side) {
            case Side::A: s.A[entry->q](entry->row, entry->col) = bit; break;
            case Side::B: s.B[entry->q](entry->row, entry->col) = bit; break;
            case Side::C: s.C[entry->q](entry->row, entry->col) = bit; break;
        }
    }

    VerificationReport rep = verify(s, 2);
    if (!rep.ok())
        throw EncoderSoundnessError("decoded scheme fails mod-2 verification (" +
                                    std::to_string(rep.failures.size()) + " failures)");
    return s;
}

}  // namespace brentforge
