#pragma once

// Exact matrix ranks and the rank-distribution invariant. The multiset of
// ranks of the 3r coefficient matrices is preserved by every
// solution-preserving transformation, so differing profiles certify that two
// schemes are inequivalent; matching profiles prove nothing.

#include "brentforge/matrix.hpp"
#include "brentforge/scheme.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

// Bareiss fraction-free elimination; every division is exact.
inline int bareiss_rank(const Matrix<Int>& input) {
    Matrix<Int> m = input;
    const int rows = m.rows(), cols = m.cols();
    Int prev = 1;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < cols; ++c) std::swap(m(pivot, c), m(rank, c));
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c)
                m(r, c) = (m(rank, col) * m(r, c) - m(r, col) * m(rank, c)) / prev;
            m(r, col) = 0;
        }
        prev = m(rank, col);
        ++rank;
    }
    return rank;
}

inline Int bareiss_determinant(const Matrix<Int>& input) {
    if (input.rows() != input.cols())
        throw std::invalid_argument("determinant of non-square matrix");
    const int n = input.rows();
    if (n == 0) return 1;
    Matrix<Int> m = input;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int pivot = -1;
            for (int r = k + 1; r < n; ++r)
                if (m(r, k) != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(m(pivot, c), m(k, c));
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c)
                m(r, c) = (m(k, k) * m(r, c) - m(r, k) * m(k, c)) / prev;
            m(r, k) = 0;
        }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

inline int gf2_rank(const Matrix<Int>& input) {
    const int rows = input.rows(), cols = input.cols();
    if (cols > 64) throw std::invalid_argument("gf2_rank supports up to 64 columns");
    std::vector<std::uint64_t> bits(rows, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (mod_reduce(input(r, c), 2) == 1) bits[r] |= std::uint64_t(1) << c;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        std::uint64_t mask = std::uint64_t(1) << col;
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (bits[r] & mask) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(bits[pivot], bits[rank]);
        for (int r = 0; r < rows; ++r)
            if (r != rank && (bits[r] & mask)) bits[r] ^= bits[rank];
        ++rank;
    }
    return rank;
}

enum class Side { A, B, C };

inline char side_letter(Side s) {
    switch (s) {
        case Side::A: return 'A';
        case Side::B: return 'B';
        case Side::C: return 'C';
    }
    return '?';
}

struct RankProfile {
    Domain domain = Domain::Integers;
    Dims dims;
    int rank_r = 0;                             // number of products
    std::array<std::vector<int>, 3> side_ranks; // per side, indexed by product
    std::vector<int> sorted_ranks;              // the invariant multiset, size 3r
    int max_rank = 0;
    std::vector<std::pair<Side, int>> max_positions;  // (side, product 1-based)

    std::map<int, int> counts() const {
        std::map<int, int> c;
        for (int r : sorted_ranks) ++c[r];
        return c;
    }
    std::map<int, int> side_counts(Side s) const {
        std::map<int, int> c;
        for (int r : side_ranks[static_cast<int>(s)]) ++c[r];
        return c;
    }
};

inline RankProfile rank_profile(const BilinearScheme& s) {
    s.validate();
    if (s.domain == Domain::Mod4)
        throw std::invalid_argument("rank profile is defined for integer and mod2 schemes only");
    auto rank_of = [&](const Matrix<Int>& m) {
        return s.domain == Domain::Mod2 ? gf2_rank(m) : bareiss_rank(m);
    };

    RankProfile p;
    p.domain = s.domain;
    p.dims = s.dims;
    p.rank_r = s.rank;
    const std::array<const std::vector<Matrix<Int>>*, 3> sides{&s.A, &s.B, &s.C};
    for (int si = 0; si < 3; ++si)
        for (int q = 0; q < s.rank; ++q) {
            int r = rank_of((*sides[si])[q]);
            p.side_ranks[si].push_back(r);
            p.sorted_ranks.push_back(r);
        }
    std::sort(p.sorted_ranks.begin(), p.sorted_ranks.end());
    p.max_rank = p.sorted_ranks.empty() ? 0 : p.sorted_ranks.back();
    for (int q = 0; q < s.rank; ++q)
        for (int si = 0; si < 3; ++si)
            if (p.side_ranks[si][q] == p.max_rank)
                p.max_positions.emplace_back(static_cast<Side>(si), q + 1);
    return p;
}

inline std::string render_rank_table(const RankProfile& p) {
    std::ostringstream out;
    out << "rank profile (" << domain_name(p.domain) << ", " << 3 * p.rank_r << " matrices)\n";
    out << "rank    A    B    C  total\n";
    auto all = p.counts();
    for (const auto& [r, total] : all) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%4d %4d %4d %4d %6d", r,
                      p.side_counts(Side::A).count(r) ? p.side_counts(Side::A).at(r) : 0,
                      p.side_counts(Side::B).count(r) ? p.side_counts(Side::B).at(r) : 0,
                      p.side_counts(Side::C).count(r) ? p.side_counts(Side::C).at(r) : 0, total);
        out << buf << '\n';
    }
    out << "max rank " << p.max_rank << " at:";
    for (const auto& [side, q] : p.max_positions)
        out << ' ' << side_letter(side) << '(' << q << ')';
    out << '\n';
    return out.str();
}

// ============================================================
// Inequivalence certificates. Distinct profiles are a proof; equal profiles
// are reported as inconclusive, never as equivalence.
// ============================================================

struct InequivalenceCertificate {
    bool distinct = false;
    std::string witness;  // human-readable, stable wording
    RankProfile left, right;
};

inline InequivalenceCertificate inequivalence_certificate(const BilinearScheme& s1,
                                                          const BilinearScheme& s2) {
    if (s1.dims != s2.dims)
        throw std::invalid_argument("inequivalence_certificate: dims mismatch");
    if (s1.rank != s2.rank)
        throw std::invalid_argument("inequivalence_certificate: rank mismatch");
    if (s1.domain != s2.domain)
        throw std::invalid_argument("inequivalence_certificate: coefficient domains differ");

    InequivalenceCertificate cert;
    cert.left = rank_profile(s1);
    cert.right = rank_profile(s2);
    cert.distinct = cert.left.sorted_ranks != cert.right.sorted_ranks;
    if (cert.distinct) {
        auto c1 = cert.left.counts(), c2 = cert.right.counts();
        // highest rank whose multiplicities differ
        int witness_rank = -1;
        for (const auto& [r, cnt] : c1)
            if (!c2.count(r) || c2.at(r) != cnt) witness_rank = std::max(witness_rank, r);
        for (const auto& [r, cnt] : c2)
            if (!c1.count(r) || c1.at(r) != cnt) witness_rank = std::max(witness_rank, r);
        int n1 = c1.count(witness_rank) ? c1.at(witness_rank) : 0;
        int n2 = c2.count(witness_rank) ? c2.at(witness_rank) : 0;
        std::ostringstream w;
        w << "rank-" << witness_rank << " count " << n1 << " vs " << n2;
        cert.witness = w.str();
    }
    return cert;
}

inline std::string render_certificate(const InequivalenceCertificate& cert) {
    if (cert.distinct) return "DISTINCT: " + cert.witness;
    return "INCONCLUSIVE: rank profiles match";
}

}  // namespace brentforge
