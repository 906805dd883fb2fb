#pragma once

// Lifting a mod-2 Brent solution to mod 4, then reading the result as a
// signed integer scheme.
//
// Write each mod-4 coefficient as x0 + 2*x1 with x0 fixed by the mod-2
// solution. Expanding one Brent product mod 4 and cancelling the low bits
// leaves, per equation,
//     (S - rhs)/2 + sum_q (a1*b0*c0 + a0*b1*c0 + a0*b0*c1)  ==  0   (mod 2)
// where S = sum_q a0*b0*c0 over the integers. S == rhs (mod 2) because the
// input solves the system mod 2, so the constant is well defined. The high
// bits form one GF(2) linear system, one row per Brent equation.
//
// A mod-4 solution with entries {0,1,3} reinterprets as {0,1,-1}; entry 2 has
// no signed unit reading and is reported as a failure, as is a lifted scheme
// that does not verify over the integers.

#include "brentforge/brent.hpp"
#include "brentforge/cnf.hpp"
#include "brentforge/encode.hpp"
#include "brentforge/gf2.hpp"
#include "brentforge/scheme.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

// High-bit unknowns use the VarMap primary layout shifted to 0-based.
inline Gf2LinearSystem build_lift_system(const BilinearScheme& s0) {
    s0.validate();
    if (s0.domain != Domain::Mod2)
        throw std::invalid_argument("build_lift_system needs a mod2 scheme");
    if (!verify(s0, 2).ok())
        throw std::invalid_argument("build_lift_system input fails mod-2 verification");

    VarMap vm = make_varmap(s0.dims, s0.rank);
    Gf2LinearSystem sys;
    sys.num_unknowns = vm.primary_count;

    for (const BrentEquation& e : enumerate_brent_equations(s0.dims)) {
        Gf2LinearSystem::Row row;
        long long low_sum = 0;
        std::vector<int> support;
        for (int q = 0; q < s0.rank; ++q) {
            int a0 = s0.A[q](e.i, e.j) == 1;
            int b0 = s0.B[q](e.k, e.l) == 1;
            int c0 = s0.C[q](e.m2, e.n2) == 1;
            low_sum += a0 * b0 * c0;
            if (b0 && c0) support.push_back(vm.var(Side::A, q, e.i, e.j) - 1);
            if (a0 && c0) support.push_back(vm.var(Side::B, q, e.k, e.l) - 1);
            if (a0 && b0) support.push_back(vm.var(Side::C, q, e.m2, e.n2) - 1);
        }
        row.constant = static_cast<int>(((low_sum - e.rhs) / 2) & 1);
        std::sort(support.begin(), support.end());
        row.support = std::move(support);
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

inline BilinearScheme reconstruct_mod4(const BilinearScheme& s0,
                                       const std::vector<std::uint8_t>& high_bits) {
    VarMap vm = make_varmap(s0.dims, s0.rank);
    if (static_cast<int>(high_bits.size()) != vm.primary_count)
        throw std::invalid_argument("high-bit vector size does not match scheme");
    BilinearScheme m4 = s0;
    m4.domain = Domain::Mod4;
    m4.name = s0.name + "+lift4";
    for (int v = 1; v <= vm.primary_count; ++v) {
        if (!high_bits[v - 1]) continue;
        auto entry = vm.primary_of(v);
        switch (entry->side) {
            case Side::A: m4.A[entry->q](entry->row, entry->col) += 2; break;
            case Side::B: m4.B[entry->q](entry->row, entry->col) += 2; break;
            case Side::C: m4.C[entry->q](entry->row, entry->col) += 2; break;
        }
    }
    return m4;
}

enum class LiftStatus {
    Lifted,              // integer scheme produced and verified
    Infeasible,          // no mod-4 extension of this mod-2 solution
    UnitlessEntry,       // mod-4 solution found but some entry is 2
    IntegerCheckFailed,  // signed reading exists but fails over the integers
};

inline const char* lift_status_name(LiftStatus s) {
    switch (s) {
        case LiftStatus::Lifted: return "lifted";
        case LiftStatus::Infeasible: return "infeasible";
        case LiftStatus::UnitlessEntry: return "unitless-entry";
        case LiftStatus::IntegerCheckFailed: return "integer-check-failed";
    }
    return "?";
}

struct LiftResult {
    LiftStatus status = LiftStatus::Infeasible;
    std::optional<BilinearScheme> scheme;  // integers, when status == Lifted
    std::optional<BilinearScheme> mod4;    // whenever the system was solvable
    std::vector<std::uint8_t> high_bits;
    std::string detail;
};

inline LiftResult lift_to_signed(const BilinearScheme& s0) {
    LiftResult res;
    Gf2LinearSystem sys = build_lift_system(s0);
    Gf2Result solved = solve_gf2(sys);
    if (const auto* inf = std::get_if<Gf2Infeasible>(&solved)) {
        res.status = LiftStatus::Infeasible;
        std::ostringstream d;
        d << "inconsistent combination of " << inf->witness_rows.size() << " equations:";
        for (size_t i = 0; i < inf->witness_rows.size() && i < 8; ++i)
            d << ' ' << inf->witness_rows[i];
        res.detail = d.str();
        return res;
    }

    res.high_bits = std::get<Gf2Solution>(solved).values;
    BilinearScheme m4 = reconstruct_mod4(s0, res.high_bits);
    if (!verify(m4, 4).ok())
        throw std::logic_error("lifted mod-4 scheme fails verification; lift system is wrong");
    res.mod4 = m4;

    BilinearScheme signed_scheme = m4;
    signed_scheme.domain = Domain::Integers;
    signed_scheme.name = s0.name + "+lift";
    for (auto* side : {&signed_scheme.A, &signed_scheme.B, &signed_scheme.C})
        for (size_t q = 0; q < side->size(); ++q) {
            Matrix<Int>& mat = (*side)[q];
            for (int r = 0; r < mat.rows(); ++r)
                for (int c = 0; c < mat.cols(); ++c) {
                    if (mat(r, c) == 2) {
                        res.status = LiftStatus::UnitlessEntry;
                        std::ostringstream d;
                        d << "entry 2 at "
                          << (side == &signed_scheme.A ? 'A' : side == &signed_scheme.B ? 'B' : 'C')
                          << '(' << q + 1 << ")[" << r + 1 << ',' << c + 1
                          << "]: no signed unit interpretation";
                        res.detail = d.str();
                        return res;
                    }
                    if (mat(r, c) == 3) mat(r, c) = -1;
                }
        }

    VerificationReport rep = verify(signed_scheme, 0);
    if (!rep.ok()) {
        res.status = LiftStatus::IntegerCheckFailed;
        res.detail = "signed interpretation fails " + std::to_string(rep.failures.size()) +
                     " of " + std::to_string(rep.total_equations) + " integer Brent equations";
        return res;
    }
    res.status = LiftStatus::Lifted;
    res.scheme = std::move(signed_scheme);
    return res;
}

// The same linear system as CNF, mirroring the encode-and-solve route; the
// two paths must agree on feasibility. Unknown i maps to variable i+1.
inline CnfFormula lift_system_to_cnf(const Gf2LinearSystem& sys) {
    sys.validate();
    CnfFormula f;
    f.num_vars = sys.num_unknowns;
    for (const auto& row : sys.rows) {
        std::vector<int> lits;
        lits.reserve(row.support.size());
        for (int u : row.support) lits.push_back(u + 1);
        add_xor_constraint(f, lits, row.constant);
    }
    return f;
}

}  // namespace brentforge
