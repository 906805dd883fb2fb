#pragma once

// Shared fixtures and independent oracles for the test suite.

#include "brentforge/matrix.hpp"
#include "brentforge/scheme.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef BRENTFORGE_DATA_DIR
#error "BRENTFORGE_DATA_DIR must be defined by the build"
#endif

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(BRENTFORGE_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline brentforge::BilinearScheme load_scheme(const std::string& name) {
    std::ifstream in(data_path(name));
    REQUIRE(in.good());
    return brentforge::parse_scheme(in);
}

// Independent rank oracle: the largest k with a non-vanishing k*k minor,
// by exhaustive enumeration. Only usable for small matrices.
inline brentforge::Int minor_det(const brentforge::Matrix<brentforge::Int>& m,
                                 const std::vector<int>& rows, const std::vector<int>& cols) {
    using brentforge::Int;
    size_t k = rows.size();
    if (k == 1) return m(rows[0], cols[0]);
    Int det = 0;
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (size_t c = 0; c < k; ++c) {
        std::vector<int> sub_cols;
        for (size_t i = 0; i < k; ++i)
            if (i != c) sub_cols.push_back(cols[i]);
        Int term = m(rows[0], cols[c]) * minor_det(m, sub_rows, sub_cols);
        det += (c % 2 == 0) ? term : -term;
    }
    return det;
}

inline int minor_rank(const brentforge::Matrix<brentforge::Int>& m) {
    int maxk = std::min(m.rows(), m.cols());
    for (int k = maxk; k >= 1; --k) {
        // all k-subsets of rows and columns
        std::vector<int> rows(k), cols(k);
        std::vector<int> rsel(k);
        for (int i = 0; i < k; ++i) rsel[i] = i;
        while (true) {
            std::vector<int> csel(k);
            for (int i = 0; i < k; ++i) csel[i] = i;
            while (true) {
                if (minor_det(m, rsel, csel) != 0) return k;
                int i = k - 1;
                while (i >= 0 && csel[i] == m.cols() - k + i) --i;
                if (i < 0) break;
                ++csel[i];
                for (int j = i + 1; j < k; ++j) csel[j] = csel[j - 1] + 1;
            }
            int i = k - 1;
            while (i >= 0 && rsel[i] == m.rows() - k + i) --i;
            if (i < 0) break;
            ++rsel[i];
            for (int j = i + 1; j < k; ++j) rsel[j] = rsel[j - 1] + 1;
        }
    }
    return 0;
}

inline brentforge::Matrix<brentforge::Int> random_matrix(std::mt19937_64& rng, int rows, int cols,
                                                         int bound) {
    brentforge::Matrix<brentforge::Int> m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = static_cast<long long>(rng() % (2 * bound + 1)) - bound;
    return m;
}

// Random but structurally valid scheme (it need not solve the Brent system);
// used for serialization round-trip properties.
inline brentforge::BilinearScheme random_valid_scheme(std::mt19937_64& rng) {
    using namespace brentforge;
    Dims d{1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3),
           1 + static_cast<int>(rng() % 3)};
    int rank = 1 + static_cast<int>(rng() % 6);
    int which = static_cast<int>(rng() % 3);
    Domain dom = which == 0 ? Domain::Integers : (which == 1 ? Domain::Mod2 : Domain::Mod4);
    BilinearScheme s;
    s.name = "fuzz" + std::to_string(rng() % 1000);
    s.dims = d;
    s.rank = rank;
    s.domain = dom;
    auto entry = [&]() -> Int {
        switch (dom) {
            case Domain::Integers: return static_cast<long long>(rng() % 21) - 10;
            case Domain::Mod2: return static_cast<long long>(rng() % 2);
            case Domain::Mod4: return static_cast<long long>(rng() % 4);
        }
        return 0;
    };
    for (int q = 0; q < rank; ++q) {
        Matrix<Int> a(d.n, d.m), b(d.m, d.p), c(d.p, d.n);
        for (int i = 0; i < d.n; ++i)
            for (int j = 0; j < d.m; ++j) a(i, j) = entry();
        for (int i = 0; i < d.m; ++i)
            for (int j = 0; j < d.p; ++j) b(i, j) = entry();
        for (int i = 0; i < d.p; ++i)
            for (int j = 0; j < d.n; ++j) c(i, j) = entry();
        s.A.push_back(a);
        s.B.push_back(b);
        s.C.push_back(c);
    }
    return s;
}

}  // namespace testutil
