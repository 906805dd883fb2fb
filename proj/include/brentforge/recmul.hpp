#pragma once

// Applying a scheme to concrete matrices: one level, or recursively with
// zero-padding to a power of the base size and a naive crossover threshold.
// Scalar multiplications are counted at recursion leaves only; additions are
// counted separately. Counts use exact integers (23^k outgrows 64 bits fast).

#include "brentforge/matrix.hpp"
#include "brentforge/scheme.hpp"

#include <chrono>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

struct OpCountReport {
    Int mults = 0;
    Int adds = 0;
    int depth = 0;  // scheme recursion levels above the naive base case
};

template <typename T>
T coeff_cast(const Int& c) {
    return static_cast<T>(c);
}
template <>
inline double coeff_cast<double>(const Int& c) {
    return c.convert_to<double>();
}

// One application of the scheme: r products of linear combinations.
// X is n*m, Y is m*p; Z(u,v) = sum_q C[q](v,u) * P_q.
template <typename T>
Matrix<T> multiply_one_level(const BilinearScheme& s, const Matrix<T>& x, const Matrix<T>& y,
                             OpCountReport* count = nullptr) {
    const Dims& d = s.dims;
    if (x.rows() != d.n || x.cols() != d.m || y.rows() != d.m || y.cols() != d.p)
        throw std::invalid_argument("multiply_one_level: operand shapes do not match scheme dims");

    std::vector<T> products(s.rank, T(0));
    for (int q = 0; q < s.rank; ++q) {
        T left(0), right(0);
        int terms = 0;
        for (int i = 0; i < d.n; ++i)
            for (int j = 0; j < d.m; ++j)
                if (s.A[q](i, j) != 0) {
                    left += coeff_cast<T>(s.A[q](i, j)) * x(i, j);
                    if (count && terms++) count->adds += 1;
                }
        terms = 0;
        for (int k = 0; k < d.m; ++k)
            for (int l = 0; l < d.p; ++l)
                if (s.B[q](k, l) != 0) {
                    right += coeff_cast<T>(s.B[q](k, l)) * y(k, l);
                    if (count && terms++) count->adds += 1;
                }
        products[q] = left * right;
        if (count) count->mults += 1;
    }

    Matrix<T> z(d.n, d.p);
    for (int u = 0; u < d.n; ++u)
        for (int v = 0; v < d.p; ++v) {
            int terms = 0;
            for (int q = 0; q < s.rank; ++q)
                if (s.C[q](v, u) != 0) {
                    z(u, v) += coeff_cast<T>(s.C[q](v, u)) * products[q];
                    if (count && terms++) count->adds += 1;
                }
        }
    return z;
}

// A recursion plan. No scheme means the plain cubic loop (the "naive plan").
struct MultiplyPlan {
    std::optional<BilinearScheme> scheme;
    int threshold = 1;

    void validate() const {
        if (threshold < 1) throw std::invalid_argument("plan threshold must be >= 1");
        if (scheme) {
            scheme->validate();
            if (!scheme->dims.square())
                throw std::invalid_argument("recursive plans need a square base scheme");
        }
    }
    int base() const { return scheme ? scheme->dims.n : 1; }
};

namespace detail {

// Full cubic base case. Zero entries are not skipped: the instrumented count
// must equal the analytic s^3 regardless of input data.
template <typename T>
Matrix<T> naive_counted(const Matrix<T>& x, const Matrix<T>& y, OpCountReport* count) {
    Matrix<T> z(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) {
            T acc = x(i, 0) * y(0, j);
            for (int k = 1; k < x.cols(); ++k)
                acc += x(i, k) * y(k, j);
            z(i, j) = std::move(acc);
        }
    if (count) {
        count->mults += Int(x.rows()) * x.cols() * y.cols();
        count->adds += Int(x.rows()) * (x.cols() - 1) * y.cols();
    }
    return z;
}

template <typename T>
Matrix<T> block_of(const Matrix<T>& m, int br, int bc, int sub) {
    Matrix<T> b(sub, sub);
    for (int r = 0; r < sub; ++r)
        for (int c = 0; c < sub; ++c)
            b(r, c) = m(br * sub + r, bc * sub + c);
    return b;
}

template <typename T>
void accumulate_scaled(Matrix<T>& acc, const Int& coeff, const Matrix<T>& m) {
    const T c = coeff_cast<T>(coeff);
    for (int r = 0; r < m.rows(); ++r)
        for (int cidx = 0; cidx < m.cols(); ++cidx)
            acc(r, cidx) += c * m(r, cidx);
}

template <typename T>
Matrix<T> recurse(const BilinearScheme& s, const Matrix<T>& x, const Matrix<T>& y, int size,
                  int threshold, OpCountReport* count, int depth) {
    if (size <= threshold) return naive_counted(x, y, count);

    const int b = s.dims.n;
    const int sub = size / b;
    if (count && depth + 1 > count->depth) count->depth = depth + 1;

    std::vector<Matrix<T>> products;
    products.reserve(s.rank);
    for (int q = 0; q < s.rank; ++q) {
        Matrix<T> left(sub, sub), right(sub, sub);
        int terms = 0;
        for (int i = 0; i < b; ++i)
            for (int j = 0; j < b; ++j)
                if (s.A[q](i, j) != 0) {
                    accumulate_scaled(left, s.A[q](i, j), block_of(x, i, j, sub));
                    if (count && terms++) count->adds += Int(sub) * sub;
                }
        terms = 0;
        for (int k = 0; k < b; ++k)
            for (int l = 0; l < b; ++l)
                if (s.B[q](k, l) != 0) {
                    accumulate_scaled(right, s.B[q](k, l), block_of(y, k, l, sub));
                    if (count && terms++) count->adds += Int(sub) * sub;
                }
        products.push_back(recurse(s, left, right, sub, threshold, count, depth + 1));
    }

    Matrix<T> z(size, size);
    for (int u = 0; u < b; ++u)
        for (int v = 0; v < b; ++v) {
            Matrix<T> acc(sub, sub);
            int terms = 0;
            for (int q = 0; q < s.rank; ++q)
                if (s.C[q](v, u) != 0) {
                    accumulate_scaled(acc, s.C[q](v, u), products[q]);
                    if (count && terms++) count->adds += Int(sub) * sub;
                }
            for (int r = 0; r < sub; ++r)
                for (int c = 0; c < sub; ++c)
                    z(u * sub + r, v * sub + c) = std::move(acc(r, c));
        }
    return z;
}

inline int padded_size(int base, int needed) {
    int size = 1;
    while (size < needed) {
        if (size > (1 << 28) / base)
            throw std::invalid_argument("matrix too large to pad");
        size *= base;
    }
    return size;
}

}  // namespace detail

template <typename T>
Matrix<T> multiply_recursive(const MultiplyPlan& plan, const Matrix<T>& x, const Matrix<T>& y,
                             OpCountReport* count = nullptr) {
    plan.validate();
    if (x.cols() != y.rows())
        throw std::invalid_argument("multiply_recursive: inner dimensions differ");
    if (x.rows() < 1 || x.cols() < 1 || y.cols() < 1)
        throw std::invalid_argument("multiply_recursive: empty operand");

    if (!plan.scheme) return detail::naive_counted(x, y, count);

    const int b = plan.scheme->dims.n;
    int needed = std::max({x.rows(), x.cols(), y.cols()});
    int size = detail::padded_size(b, needed);
    if (size <= plan.threshold) return detail::naive_counted(x, y, count);

    Matrix<T> xp(size, size), yp(size, size);
    for (int r = 0; r < x.rows(); ++r)
        for (int c = 0; c < x.cols(); ++c) xp(r, c) = x(r, c);
    for (int r = 0; r < y.rows(); ++r)
        for (int c = 0; c < y.cols(); ++c) yp(r, c) = y(r, c);

    Matrix<T> zp = detail::recurse(*plan.scheme, xp, yp, size, plan.threshold, count, 0);

    Matrix<T> z(x.rows(), y.cols());
    for (int r = 0; r < z.rows(); ++r)
        for (int c = 0; c < z.cols(); ++c) z(r, c) = std::move(zp(r, c));
    return z;
}

// Analytic operation counts; mirrors the executor's recursion exactly, so an
// instrumented run must agree term for term.
inline OpCountReport count_operations(const MultiplyPlan& plan, int size) {
    plan.validate();
    if (size < 1) throw std::invalid_argument("count_operations: size must be >= 1");

    OpCountReport rep;
    auto cube_counts = [](int s) {
        OpCountReport r;
        r.mults = Int(s) * s * s;
        r.adds = Int(s) * s * (s - 1);
        return r;
    };
    if (!plan.scheme) return cube_counts(size);

    const BilinearScheme& s = *plan.scheme;
    const int b = s.dims.n;
    int padded = detail::padded_size(b, size);
    if (padded <= plan.threshold) return cube_counts(padded);

    Int comb_terms = 0;
    for (int q = 0; q < s.rank; ++q) {
        comb_terms += std::max(s.A[q].nonzero_count() - 1, 0);
        comb_terms += std::max(s.B[q].nonzero_count() - 1, 0);
    }
    for (int u = 0; u < b; ++u)
        for (int v = 0; v < b; ++v) {
            int terms = 0;
            for (int q = 0; q < s.rank; ++q)
                if (s.C[q](v, u) != 0) ++terms;
            comb_terms += std::max(terms - 1, 0);
        }

    // mults(sz) = r * mults(sz/b) until sz <= threshold, where the cubic
    // base contributes sz^3; adds pick up comb_terms * (sz/b)^2 per level.
    std::vector<int> levels;
    int sz = padded;
    while (sz > plan.threshold) {
        levels.push_back(sz);
        sz /= b;
    }
    OpCountReport base = cube_counts(sz);
    rep.mults = base.mults;
    rep.adds = base.adds;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        int sub = *it / b;
        rep.mults *= s.rank;
        rep.adds = rep.adds * s.rank + comb_terms * Int(sub) * sub;
    }
    rep.depth = static_cast<int>(levels.size());
    return rep;
}

// ============================================================
// Benchmark harness. All plans in a run must agree exactly on the integer
// path before any timing is reported.
// ============================================================

struct BenchPlan {
    std::string name;
    MultiplyPlan plan;
};

struct BenchConfig {
    std::vector<BenchPlan> plans;
    std::vector<int> sizes;
    int repetitions = 1;
    std::uint64_t seed = 0;
    int entry_bound = 9;
};

struct BenchRow {
    std::string plan;
    int size = 0;
    Int mults;
    Int adds;
    double best_ms = 0.0;
    double mean_ms = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

class BenchMismatch : public std::runtime_error {
public:
    explicit BenchMismatch(const std::string& what) : std::runtime_error(what) {}
};

inline BenchReport bench(const BenchConfig& cfg) {
    if (cfg.plans.empty()) throw std::invalid_argument("bench: no plans given");
    if (cfg.sizes.empty()) throw std::invalid_argument("bench: no sizes given");
    if (cfg.repetitions < 1) throw std::invalid_argument("bench: repetitions must be >= 1");
    if (cfg.entry_bound < 1) throw std::invalid_argument("bench: entry bound must be >= 1");
    for (const auto& bp : cfg.plans) bp.plan.validate();
    for (int size : cfg.sizes)
        if (size < 1) throw std::invalid_argument("bench: sizes must be >= 1");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> dist(-cfg.entry_bound, cfg.entry_bound);

    BenchReport report;
    for (int size : cfg.sizes) {
        Matrix<Int> x(size, size), y(size, size);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                x(r, c) = dist(rng);
                y(r, c) = dist(rng);
            }

        std::vector<Matrix<Int>> results;
        std::vector<OpCountReport> counts(cfg.plans.size());
        for (size_t pi = 0; pi < cfg.plans.size(); ++pi)
            results.push_back(multiply_recursive(cfg.plans[pi].plan, x, y, &counts[pi]));
        for (size_t pi = 1; pi < results.size(); ++pi)
            if (results[pi] != results[0]) {
                std::ostringstream msg;
                msg << "bench: plans '" << cfg.plans[0].name << "' and '" << cfg.plans[pi].name
                    << "' disagree at size " << size;
                for (int r = 0; r < size; ++r)
                    for (int c = 0; c < size; ++c)
                        if (results[0](r, c) != results[pi](r, c)) {
                            msg << ": entry (" << (r + 1) << "," << (c + 1) << ") "
                                << results[0](r, c) << " vs " << results[pi](r, c);
                            throw BenchMismatch(msg.str());
                        }
                throw BenchMismatch(msg.str());
            }

        for (size_t pi = 0; pi < cfg.plans.size(); ++pi) {
            BenchRow row;
            row.plan = cfg.plans[pi].name;
            row.size = size;
            row.mults = counts[pi].mults;
            row.adds = counts[pi].adds;
            double total = 0.0, best = -1.0;
            for (int rep = 0; rep < cfg.repetitions; ++rep) {
                auto t0 = std::chrono::steady_clock::now();
                Matrix<Int> z = multiply_recursive(cfg.plans[pi].plan, x, y);
                auto t1 = std::chrono::steady_clock::now();
                if (z != results[pi]) throw BenchMismatch("bench: nondeterministic result");
                double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                total += ms;
                if (best < 0 || ms < best) best = ms;
            }
            row.best_ms = best;
            row.mean_ms = total / cfg.repetitions;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

inline std::string render_bench_table(const BenchReport& rep) {
    std::ostringstream out;
    out << "plan                 size       mults        adds     best_ms     mean_ms\n";
    for (const auto& row : rep.rows) {
        std::ostringstream m1, m2;
        m1 << row.mults;
        m2 << row.adds;
        out << row.plan;
        for (size_t i = row.plan.size(); i < 20; ++i) out << ' ';
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%5d %11s %11s %11.3f %11.3f", row.size,
                      m1.str().c_str(), m2.str().c_str(), row.best_ms, row.mean_ms);
        out << ' ' << buf << '\n';
    }
    return out.str();
}

}  // namespace brentforge
