#pragma once

// Dense GF(2) linear systems and Gauss-Jordan elimination. Solutions set all
// free unknowns to 0, so the output is deterministic; infeasibility comes
// with the exact set of input rows whose XOR is the contradiction 0 = 1.

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace brentforge {

struct Gf2LinearSystem {
    int num_unknowns = 0;
    struct Row {
        std::vector<int> support;  // 0-based unknown indices, strictly increasing
        int constant = 0;          // 0 or 1
    };
    std::vector<Row> rows;

    void validate() const {
        if (num_unknowns < 0) throw std::invalid_argument("negative unknown count");
        for (const Row& r : rows) {
            int prev = -1;
            for (int u : r.support) {
                if (u < 0 || u >= num_unknowns)
                    throw std::invalid_argument("row references unknown out of range");
                if (u <= prev) throw std::invalid_argument("row support must be strictly increasing");
                prev = u;
            }
            if (r.constant != 0 && r.constant != 1)
                throw std::invalid_argument("row constant must be 0 or 1");
        }
    }
};

struct Gf2Solution {
    std::vector<std::uint8_t> values;  // one bit per unknown
};

struct Gf2Infeasible {
    std::vector<int> witness_rows;  // input rows XOR-ing to an empty support with constant 1
};

using Gf2Result = std::variant<Gf2Solution, Gf2Infeasible>;

namespace gf2_detail {

struct BitRow {
    std::vector<std::uint64_t> bits;
    std::vector<std::uint64_t> provenance;
    int constant = 0;

    void flip(int idx) { bits[idx >> 6] ^= std::uint64_t(1) << (idx & 63); }
    bool test(int idx) const { return (bits[idx >> 6] >> (idx & 63)) & 1; }
    bool empty_support() const {
        for (std::uint64_t w : bits)
            if (w) return false;
        return true;
    }
    void xor_in(const BitRow& o) {
        for (size_t i = 0; i < bits.size(); ++i) bits[i] ^= o.bits[i];
        for (size_t i = 0; i < provenance.size(); ++i) provenance[i] ^= o.provenance[i];
        constant ^= o.constant;
    }
};

}  // namespace gf2_detail

inline Gf2Result solve_gf2(const Gf2LinearSystem& sys) {
    sys.validate();
    const int unknowns = sys.num_unknowns;
    const int nrows = static_cast<int>(sys.rows.size());
    const size_t words = (static_cast<size_t>(unknowns) + 63) / 64;
    const size_t prov_words = (static_cast<size_t>(nrows) + 63) / 64;

    std::vector<gf2_detail::BitRow> work(nrows);
    for (int r = 0; r < nrows; ++r) {
        work[r].bits.assign(words, 0);
        work[r].provenance.assign(prov_words, 0);
        for (int u : sys.rows[r].support) work[r].flip(u);
        work[r].provenance[r >> 6] |= std::uint64_t(1) << (r & 63);
        work[r].constant = sys.rows[r].constant;
    }

    std::vector<int> pivot_row_of(unknowns, -1);
    std::vector<bool> used(nrows, false);
    for (int col = 0; col < unknowns; ++col) {
        int pivot = -1;
        for (int r = 0; r < nrows; ++r)
            if (!used[r] && work[r].test(col)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        used[pivot] = true;
        pivot_row_of[col] = pivot;
        for (int r = 0; r < nrows; ++r)
            if (r != pivot && work[r].test(col)) work[r].xor_in(work[pivot]);
    }

    for (int r = 0; r < nrows; ++r)
        if (!used[r] && work[r].constant == 1 && work[r].empty_support()) {
            Gf2Infeasible inf;
            for (int i = 0; i < nrows; ++i)
                if ((work[r].provenance[i >> 6] >> (i & 63)) & 1) inf.witness_rows.push_back(i);
            return inf;
        }

    Gf2Solution sol;
    sol.values.assign(unknowns, 0);
    for (int col = 0; col < unknowns; ++col)
        if (pivot_row_of[col] >= 0) sol.values[col] = static_cast<std::uint8_t>(
            work[pivot_row_of[col]].constant);

    // Substitute back into the original rows before returning.
    for (const auto& row : sys.rows) {
        int acc = row.constant;
        for (int u : row.support) acc ^= sol.values[u];
        if (acc != 0) throw std::logic_error("gf2 solution failed substitution check");
    }
    return sol;
}

}  // namespace brentforge
