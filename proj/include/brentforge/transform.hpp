#pragma once

// The five solution-preserving transformations: product permutation, cyclic
// shift of the three coefficient families, transpose-reverse, unit rescaling,
// and sandwiching by unimodular matrices. Sandwich matrices are restricted to
// determinant +/-1 so schemes stay integral and ranks stay exact.

#include "brentforge/brent.hpp"
#include "brentforge/matrix.hpp"
#include "brentforge/scheme.hpp"
#include "brentforge/rank.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace brentforge {

struct PermuteProducts {
    std::vector<int> perm;  // 0-based; new product q is old product perm[q]
};

struct CyclicShift {
    int shift = 1;  // 1: (A,B,C) -> (B,C,A); 2: -> (C,A,B)
};

struct TransposeReverse {};

struct Rescale {
    std::vector<std::array<int, 3>> units;  // per product (a,b,c), each +/-1, a*b*c = 1
};

struct Sandwich {
    Matrix<Int> u, v, w;  // n*n, m*m, p*p, unimodular
};

using Transformation = std::variant<PermuteProducts, CyclicShift, TransposeReverse, Rescale, Sandwich>;

inline std::string transformation_name(const Transformation& t) {
    struct V {
        std::string operator()(const PermuteProducts&) const { return "permute-products"; }
        std::string operator()(const CyclicShift& c) const {
            return "cyclic-shift(" + std::to_string(c.shift) + ")";
        }
        std::string operator()(const TransposeReverse&) const { return "transpose-reverse"; }
        std::string operator()(const Rescale&) const { return "rescale"; }
        std::string operator()(const Sandwich&) const { return "sandwich"; }
    };
    return std::visit(V{}, t);
}

// Integer inverse via the adjugate; requires det = +/-1.
inline Matrix<Int> unimodular_inverse(const Matrix<Int>& m) {
    const int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("sandwich matrix must be square");
    Int det = bareiss_determinant(m);
    if (det != 1 && det != -1)
        throw std::invalid_argument("sandwich matrix is not unimodular (det != +/-1)");
    Matrix<Int> inv(n, n);
    if (n == 1) {
        inv(0, 0) = det;  // 1/det == det for units
        return inv;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Matrix<Int> minor(n - 1, n - 1);
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(mr, mc++) = m(r, c);
                }
                ++mr;
            }
            Int cof = bareiss_determinant(minor);
            if ((i + j) % 2) cof = -cof;
            inv(i, j) = det == 1 ? cof : Int(-cof);
        }
    return inv;
}

inline BilinearScheme apply(const Transformation& t, const BilinearScheme& s) {
    s.validate();
    if (s.domain != Domain::Integers)
        throw std::invalid_argument("transformations operate on integer schemes");

    BilinearScheme out = s;
    out.name = s.name + "+" + transformation_name(t);

    if (const auto* perm = std::get_if<PermuteProducts>(&t)) {
        if (static_cast<int>(perm->perm.size()) != s.rank)
            throw std::invalid_argument("permutation size does not match rank");
        std::vector<bool> hit(s.rank, false);
        for (int v : perm->perm) {
            if (v < 0 || v >= s.rank || hit[v])
                throw std::invalid_argument("not a permutation of the product indices");
            hit[v] = true;
        }
        for (int q = 0; q < s.rank; ++q) {
            out.A[q] = s.A[perm->perm[q]];
            out.B[q] = s.B[perm->perm[q]];
            out.C[q] = s.C[perm->perm[q]];
        }
    } else if (const auto* cyc = std::get_if<CyclicShift>(&t)) {
        if (cyc->shift != 1 && cyc->shift != 2)
            throw std::invalid_argument("cyclic shift must be 1 or 2");
        if (!s.dims.square())
            throw std::invalid_argument("cyclic shift needs square dims");
        for (int step = 0; step < cyc->shift; ++step) {
            auto a = out.A;
            out.A = out.B;
            out.B = out.C;
            out.C = a;
        }
    } else if (std::get_if<TransposeReverse>(&t)) {
        if (!s.dims.square())
            throw std::invalid_argument("transpose-reverse needs square dims");
        for (int q = 0; q < s.rank; ++q) {
            out.A[q] = s.C[q].transposed();
            out.B[q] = s.B[q].transposed();
            out.C[q] = s.A[q].transposed();
        }
    } else if (const auto* rs = std::get_if<Rescale>(&t)) {
        if (static_cast<int>(rs->units.size()) != s.rank)
            throw std::invalid_argument("rescale needs one unit triple per product");
        for (int q = 0; q < s.rank; ++q) {
            const auto& [a, b, c] = rs->units[q];
            if ((a != 1 && a != -1) || (b != 1 && b != -1) || (c != 1 && c != -1))
                throw std::invalid_argument("rescale units must be +/-1");
            if (a * b * c != 1)
                throw std::invalid_argument("rescale triple must multiply to 1");
            out.A[q] = Int(a) * s.A[q];
            out.B[q] = Int(b) * s.B[q];
            out.C[q] = Int(c) * s.C[q];
        }
    } else if (const auto* sw = std::get_if<Sandwich>(&t)) {
        const Dims& d = s.dims;
        if (sw->u.rows() != d.n || sw->u.cols() != d.n || sw->v.rows() != d.m ||
            sw->v.cols() != d.m || sw->w.rows() != d.p || sw->w.cols() != d.p)
            throw std::invalid_argument("sandwich matrix shapes must be n*n, m*m, p*p");
        Matrix<Int> u_inv = unimodular_inverse(sw->u);
        Matrix<Int> v_inv = unimodular_inverse(sw->v);
        Matrix<Int> w_inv = unimodular_inverse(sw->w);
        for (int q = 0; q < s.rank; ++q) {
            out.A[q] = naive_product(naive_product(sw->u, s.A[q]), v_inv);
            out.B[q] = naive_product(naive_product(sw->v, s.B[q]), w_inv);
            out.C[q] = naive_product(naive_product(sw->w, s.C[q]), u_inv);
        }
    }

#ifndef NDEBUG
    assert(!verify(s, 0).ok() || verify(out, 0).ok());
#endif
    return out;
}

// ============================================================
// Seeded generator for property tests: uniform over the applicable variants;
// sandwich matrices are products of random elementary row operations, so they
// are unimodular by construction.
// ============================================================

namespace detail {

// rng() % n is used instead of std::uniform_int_distribution so the sampled
// sequence does not depend on the standard library implementation.
inline int bounded(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % n); }

inline Matrix<Int> random_unimodular(std::mt19937_64& rng, int n) {
    Matrix<Int> u(n, n);
    for (int i = 0; i < n; ++i) u(i, i) = 1;
    int ops = 3 * n + 2;
    for (int t = 0; t < ops; ++t) {
        switch (bounded(rng, 3)) {
            case 0: {  // negate a row
                int i = bounded(rng, n);
                for (int c = 0; c < n; ++c) u(i, c) = -u(i, c);
                break;
            }
            case 1: {  // swap two rows
                if (n < 2) break;
                int i = bounded(rng, n), j = bounded(rng, n - 1);
                if (j >= i) ++j;
                for (int c = 0; c < n; ++c) std::swap(u(i, c), u(j, c));
                break;
            }
            default: {  // add a small multiple of one row to another
                if (n < 2) break;
                int i = bounded(rng, n), j = bounded(rng, n - 1);
                if (j >= i) ++j;
                int mult = bounded(rng, 2) ? 1 : -1;
                if (bounded(rng, 3) == 0) mult *= 2;
                for (int c = 0; c < n; ++c) u(i, c) += Int(mult) * u(j, c);
                break;
            }
        }
    }
    return u;
}

}  // namespace detail

inline Transformation random_transformation(const Dims& dims, int rank, std::uint64_t seed) {
    dims.validate();
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    std::mt19937_64 rng(seed);
    int variants = dims.square() ? 5 : 3;
    switch (detail::bounded(rng, variants)) {
        case 0: {
            PermuteProducts p;
            p.perm.resize(rank);
            for (int i = 0; i < rank; ++i) p.perm[i] = i;
            for (int i = rank - 1; i > 0; --i)
                std::swap(p.perm[i], p.perm[detail::bounded(rng, i + 1)]);
            return p;
        }
        case 1: {
            Rescale r;
            for (int q = 0; q < rank; ++q) {
                int a = detail::bounded(rng, 2) ? 1 : -1;
                int b = detail::bounded(rng, 2) ? 1 : -1;
                r.units.push_back({a, b, a * b});
            }
            return r;
        }
        case 2: {
            Sandwich sw;
            sw.u = detail::random_unimodular(rng, dims.n);
            sw.v = detail::random_unimodular(rng, dims.m);
            sw.w = detail::random_unimodular(rng, dims.p);
            return sw;
        }
        case 3:
            return CyclicShift{1 + detail::bounded(rng, 2)};
        default:
            return TransposeReverse{};
    }
}

}  // namespace brentforge
