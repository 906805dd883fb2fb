#pragma once

// The Brent equations for dims (n, m, p): for all index tuples
// (i, j, k, l, m2, n2),
//     sum_q A[q](i,j) * B[q](k,l) * C[q](m2,n2) = [n2==i][j==k][l==m2],
// n*m*m*p*p*n cubic equations in all. A scheme is exact over a ring iff every
// residual vanishes there. Everything here is exact integer arithmetic.

#include "brentforge/matrix.hpp"
#include "brentforge/recmul.hpp"
#include "brentforge/scheme.hpp"

#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

struct BrentEquation {
    // 0-based; i,n2 in [0,n), j,k in [0,m), l,m2 in [0,p)
    int i, j, k, l, m2, n2;
    int rhs;

    bool operator==(const BrentEquation& o) const {
        return i == o.i && j == o.j && k == o.k && l == o.l && m2 == o.m2 && n2 == o.n2;
    }
};

inline int brent_rhs(int i, int j, int k, int l, int m2, int n2) {
    return (n2 == i && j == k && l == m2) ? 1 : 0;
}

inline long long brent_equation_count(const Dims& d) {
    return 1LL * d.n * d.m * d.m * d.p * d.p * d.n;
}

// Fixed lexicographic order of (i, j, k, l, m2, n2).
inline std::vector<BrentEquation> enumerate_brent_equations(const Dims& d) {
    d.validate();
    std::vector<BrentEquation> eqs;
    eqs.reserve(static_cast<size_t>(brent_equation_count(d)));
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.m; ++j)
            for (int k = 0; k < d.m; ++k)
                for (int l = 0; l < d.p; ++l)
                    for (int m2 = 0; m2 < d.p; ++m2)
                        for (int n2 = 0; n2 < d.n; ++n2)
                            eqs.push_back({i, j, k, l, m2, n2, brent_rhs(i, j, k, l, m2, n2)});
    return eqs;
}

inline void check_modulus(int modulus) {
    if (modulus != 0 && modulus != 2 && modulus != 4)
        throw std::invalid_argument("modulus must be 0 (integers), 2 or 4");
}

inline Int residual(const BilinearScheme& s, const BrentEquation& e, int modulus) {
    check_modulus(modulus);
    const Dims& d = s.dims;
    if (e.i < 0 || e.i >= d.n || e.n2 < 0 || e.n2 >= d.n || e.j < 0 || e.j >= d.m ||
        e.k < 0 || e.k >= d.m || e.l < 0 || e.l >= d.p || e.m2 < 0 || e.m2 >= d.p)
        throw std::invalid_argument("residual: equation indices out of range for scheme dims");

    Int sum = 0;
    for (int q = 0; q < s.rank; ++q) {
        const Int& a = s.A[q](e.i, e.j);
        if (a == 0) continue;
        const Int& b = s.B[q](e.k, e.l);
        if (b == 0) continue;
        sum += a * b * s.C[q](e.m2, e.n2);
    }
    sum -= e.rhs;
    if (modulus != 0) sum = mod_reduce(sum, modulus);
    return sum;
}

struct VerificationReport {
    Dims dims;
    int rank = 0;
    int modulus = 0;
    long long total_equations = 0;
    std::vector<std::pair<BrentEquation, Int>> failures;  // in enumeration order

    bool ok() const { return failures.empty(); }
};

inline VerificationReport verify(const BilinearScheme& s, int modulus) {
    check_modulus(modulus);
    s.validate();
    VerificationReport rep;
    rep.dims = s.dims;
    rep.rank = s.rank;
    rep.modulus = modulus;
    rep.total_equations = brent_equation_count(s.dims);
    for (const BrentEquation& e : enumerate_brent_equations(s.dims)) {
        Int r = residual(s, e, modulus);
        if (r != 0) rep.failures.emplace_back(e, r);
    }
    return rep;
}

inline std::string render_report_text(const VerificationReport& rep, size_t max_failures = 20) {
    std::ostringstream out;
    out << "dims " << rep.dims.n << 'x' << rep.dims.m << 'x' << rep.dims.p << " rank " << rep.rank
        << " modulus " << rep.modulus << ": " << rep.total_equations << " equations, "
        << rep.failures.size() << " failures\n";
    size_t shown = 0;
    for (const auto& [e, r] : rep.failures) {
        if (shown++ == max_failures) {
            out << "  ... " << (rep.failures.size() - max_failures) << " more\n";
            break;
        }
        out << "  i=" << e.i + 1 << " j=" << e.j + 1 << " k=" << e.k + 1 << " l=" << e.l + 1
            << " m=" << e.m2 + 1 << " n=" << e.n2 + 1 << " rhs=" << e.rhs << " residual=" << r
            << '\n';
    }
    return out.str();
}

// ============================================================
// Randomized product oracle: multiply concrete integer matrices through the
// scheme (one level) and through the plain triple loop; any disagreement is a
// counterexample. Independent of the equation sweep above.
// ============================================================

struct ProductCheckWitness {
    Matrix<Int> x, y, via_scheme, via_naive;
};

struct ProductCheckResult {
    bool pass = false;
    int trials = 0;
    std::optional<ProductCheckWitness> witness;
};

inline ProductCheckResult random_product_check(const BilinearScheme& s, int trials, int bound,
                                               std::uint64_t seed = 0) {
    s.validate();
    if (s.domain != Domain::Integers)
        throw std::invalid_argument("random_product_check needs an integer scheme");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (bound < 1) throw std::invalid_argument("entry bound must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-bound, bound);
    ProductCheckResult res;
    for (int t = 0; t < trials; ++t) {
        Matrix<Int> x(s.dims.n, s.dims.m), y(s.dims.m, s.dims.p);
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < x.cols(); ++c) x(r, c) = dist(rng);
        for (int r = 0; r < y.rows(); ++r)
            for (int c = 0; c < y.cols(); ++c) y(r, c) = dist(rng);

        Matrix<Int> via_scheme = multiply_one_level(s, x, y);
        Matrix<Int> via_naive = naive_product(x, y);
        res.trials = t + 1;
        if (via_scheme != via_naive) {
            res.pass = false;
            res.witness = ProductCheckWitness{std::move(x), std::move(y), std::move(via_scheme),
                                              std::move(via_naive)};
            return res;
        }
    }
    res.pass = true;
    return res;
}

}  // namespace brentforge
