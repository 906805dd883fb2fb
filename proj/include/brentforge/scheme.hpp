#pragma once

// Bilinear matrix-multiplication schemes: the (A, B, C) coefficient triple,
// the canonical line-oriented file format, and the naive scheme constructor.
//
// Convention used throughout: a scheme of dims (n, m, p) multiplies an n*m
// matrix X by an m*p matrix Y via r products
//     P_q = (sum_ij A[q](i,j) X(i,j)) * (sum_kl B[q](k,l) Y(k,l))
// and C[q] is a p*n matrix indexed (output column, output row):
//     Z(u,v) = sum_q C[q](v,u) P_q.

#include "brentforge/matrix.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

struct Dims {
    int n = 0;  // rows of the left operand
    int m = 0;  // inner dimension
    int p = 0;  // columns of the right operand

    bool operator==(const Dims& o) const { return n == o.n && m == o.m && p == o.p; }
    bool operator!=(const Dims& o) const { return !(*this == o); }
    bool square() const { return n == m && m == p; }

    void validate() const {
        if (n < 1 || m < 1 || p < 1)
            throw std::invalid_argument("dims must be positive");
    }
};

enum class Domain { Integers, Mod2, Mod4 };

inline std::string domain_name(Domain d) {
    switch (d) {
        case Domain::Integers: return "integers";
        case Domain::Mod2: return "mod2";
        case Domain::Mod4: return "mod4";
    }
    return "?";
}

inline std::optional<Domain> domain_from_name(const std::string& s) {
    if (s == "integers") return Domain::Integers;
    if (s == "mod2") return Domain::Mod2;
    if (s == "mod4") return Domain::Mod4;
    return std::nullopt;
}

inline bool entry_in_domain(const Int& v, Domain d) {
    switch (d) {
        case Domain::Integers: return true;
        case Domain::Mod2: return v == 0 || v == 1;
        case Domain::Mod4: return v >= 0 && v <= 3;
    }
    return false;
}

struct BilinearScheme {
    std::string name;
    Dims dims;
    int rank = 0;
    Domain domain = Domain::Integers;
    std::vector<Matrix<Int>> A;  // r matrices, n*m
    std::vector<Matrix<Int>> B;  // r matrices, m*p
    std::vector<Matrix<Int>> C;  // r matrices, p*n

    bool operator==(const BilinearScheme& o) const {
        return dims == o.dims && rank == o.rank && domain == o.domain &&
               A == o.A && B == o.B && C == o.C;
    }
    bool operator!=(const BilinearScheme& o) const { return !(*this == o); }

    void validate() const {
        dims.validate();
        if (rank < 1) throw std::invalid_argument("scheme rank must be >= 1");
        if (static_cast<int>(A.size()) != rank || static_cast<int>(B.size()) != rank ||
            static_cast<int>(C.size()) != rank)
            throw std::invalid_argument("scheme must hold exactly rank matrices per side");
        for (int q = 0; q < rank; ++q) {
            if (A[q].rows() != dims.n || A[q].cols() != dims.m)
                throw std::invalid_argument("A matrix " + std::to_string(q + 1) + " has wrong shape");
            if (B[q].rows() != dims.m || B[q].cols() != dims.p)
                throw std::invalid_argument("B matrix " + std::to_string(q + 1) + " has wrong shape");
            if (C[q].rows() != dims.p || C[q].cols() != dims.n)
                throw std::invalid_argument("C matrix " + std::to_string(q + 1) + " has wrong shape");
        }
        for (int q = 0; q < rank; ++q)
            for (const auto* side : {&A[q], &B[q], &C[q]})
                for (int r = 0; r < side->rows(); ++r)
                    for (int c = 0; c < side->cols(); ++c)
                        if (!entry_in_domain((*side)(r, c), domain))
                            throw std::invalid_argument(
                                "entry outside declared domain " + domain_name(domain) +
                                " in product " + std::to_string(q + 1));
    }

    // All-zero A, B or C matrices are legal but worth surfacing; search output
    // and hand-edited files may contain them.
    std::vector<int> degenerate_products() const {
        std::vector<int> out;
        for (int q = 0; q < rank; ++q)
            if (A[q].is_zero() || B[q].is_zero() || C[q].is_zero())
                out.push_back(q + 1);
        return out;
    }
};

// The q-th product of the naive algorithm picks one (i,j,l) each: X(i,j)*Y(j,l)
// contributing to Z(i,l).
inline BilinearScheme naive_scheme(int n, int m, int p) {
    Dims dims{n, m, p};
    dims.validate();
    BilinearScheme s;
    s.name = "naive" + std::to_string(n) + std::to_string(m) + std::to_string(p);
    s.dims = dims;
    s.rank = n * m * p;
    s.domain = Domain::Integers;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < p; ++l) {
                Matrix<Int> a(n, m), b(m, p), c(p, n);
                a(i, j) = 1;
                b(j, l) = 1;
                c(l, i) = 1;
                s.A.push_back(std::move(a));
                s.B.push_back(std::move(b));
                s.C.push_back(std::move(c));
            }
    return s;
}

inline Int mod_reduce(const Int& v, int k) {
    Int r = v % k;
    if (r < 0) r += k;
    return r;
}

// Entrywise reduction; tags the result with the matching domain.
inline BilinearScheme reduce_scheme(const BilinearScheme& s, int k) {
    if (k != 2 && k != 4) throw std::invalid_argument("reduce_scheme: modulus must be 2 or 4");
    BilinearScheme r = s;
    r.domain = (k == 2) ? Domain::Mod2 : Domain::Mod4;
    for (auto* side : {&r.A, &r.B, &r.C})
        for (auto& mat : *side)
            for (int i = 0; i < mat.rows(); ++i)
                for (int j = 0; j < mat.cols(); ++j)
                    mat(i, j) = mod_reduce(mat(i, j), k);
    return r;
}

// ============================================================
// Canonical scheme file format
//
//   scheme <name>
//   dims <n> <m> <p>
//   rank <r>
//   domain <integers|mod2|mod4>
//   product <q>            (q = 1..r, ascending)
//   <n rows of m entries>  (A)
//   *
//   <m rows of p entries>  (B)
//   =>
//   <p rows of n entries>  (C)
//
// '#' starts a comment line. The serializer emits exactly this shape with
// single spaces and no trailing whitespace, so files are byte-stable.
// ============================================================

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int column = 0)
        : std::runtime_error("line " + std::to_string(line) +
                             (column ? ":" + std::to_string(column) : "") + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

namespace detail {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty, non-comment line; returns false at end of input.
    bool next(std::string& out) {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            size_t first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            if (line[first] == '#') continue;
            out = line;
            return true;
        }
        return false;
    }

    int lineno() const { return lineno_; }

private:
    std::istream& in_;
    int lineno_ = 0;
};

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline Int parse_int_token(const std::string& tok, int lineno) {
    size_t pos = 0;
    if (tok[pos] == '+' || tok[pos] == '-') ++pos;
    if (pos == tok.size()) throw ParseError("expected integer, got '" + tok + "'", lineno);
    for (; pos < tok.size(); ++pos)
        if (!std::isdigit(static_cast<unsigned char>(tok[pos])))
            throw ParseError("expected integer, got '" + tok + "'", lineno);
    return Int(tok);
}

inline Matrix<Int> parse_matrix_block(LineReader& rd, int rows, int cols, const char* side, int q) {
    Matrix<Int> m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        std::string line;
        if (!rd.next(line))
            throw ParseError(std::string("unexpected end of file inside ") + side +
                             " block of product " + std::to_string(q), rd.lineno() + 1);
        auto toks = split_ws(line);
        if (static_cast<int>(toks.size()) != cols)
            throw ParseError(std::string("expected ") + std::to_string(cols) + " entries in " +
                             side + " row, got " + std::to_string(toks.size()), rd.lineno());
        for (int c = 0; c < cols; ++c) m(r, c) = parse_int_token(toks[c], rd.lineno());
    }
    return m;
}

}  // namespace detail

inline BilinearScheme parse_scheme(std::istream& in) {
    detail::LineReader rd(in);
    std::string line;
    auto expect_line = [&](const char* what) {
        if (!rd.next(line)) throw ParseError(std::string("expected ") + what, rd.lineno() + 1);
        return detail::split_ws(line);
    };

    auto header = expect_line("'scheme <name>'");
    if (header.size() != 2 || header[0] != "scheme")
        throw ParseError("expected 'scheme <name>'", rd.lineno());
    BilinearScheme s;
    s.name = header[1];

    auto dims = expect_line("'dims <n> <m> <p>'");
    if (dims.size() != 4 || dims[0] != "dims")
        throw ParseError("expected 'dims <n> <m> <p>'", rd.lineno());
    s.dims.n = static_cast<int>(detail::parse_int_token(dims[1], rd.lineno()));
    s.dims.m = static_cast<int>(detail::parse_int_token(dims[2], rd.lineno()));
    s.dims.p = static_cast<int>(detail::parse_int_token(dims[3], rd.lineno()));
    if (s.dims.n < 1 || s.dims.m < 1 || s.dims.p < 1)
        throw ParseError("dims must be positive", rd.lineno());

    auto rank = expect_line("'rank <r>'");
    if (rank.size() != 2 || rank[0] != "rank")
        throw ParseError("expected 'rank <r>'", rd.lineno());
    s.rank = static_cast<int>(detail::parse_int_token(rank[1], rd.lineno()));
    if (s.rank < 1) throw ParseError("rank must be >= 1", rd.lineno());

    auto dom = expect_line("'domain <integers|mod2|mod4>'");
    if (dom.size() != 2 || dom[0] != "domain")
        throw ParseError("expected 'domain <integers|mod2|mod4>'", rd.lineno());
    auto d = domain_from_name(dom[1]);
    if (!d) throw ParseError("unknown domain '" + dom[1] + "'", rd.lineno());
    s.domain = *d;

    for (int q = 1; q <= s.rank; ++q) {
        auto prod = expect_line("'product <q>'");
        if (prod.size() != 2 || prod[0] != "product")
            throw ParseError("expected 'product " + std::to_string(q) + "'", rd.lineno());
        int got = static_cast<int>(detail::parse_int_token(prod[1], rd.lineno()));
        if (got != q)
            throw ParseError("products must appear in order; expected " + std::to_string(q) +
                             ", got " + std::to_string(got), rd.lineno());

        s.A.push_back(detail::parse_matrix_block(rd, s.dims.n, s.dims.m, "A", q));
        if (!rd.next(line) || detail::split_ws(line) != std::vector<std::string>{"*"})
            throw ParseError("expected '*' between A and B blocks", rd.lineno());
        s.B.push_back(detail::parse_matrix_block(rd, s.dims.m, s.dims.p, "B", q));
        if (!rd.next(line) || detail::split_ws(line) != std::vector<std::string>{"=>"})
            throw ParseError("expected '=>' between B and C blocks", rd.lineno());
        s.C.push_back(detail::parse_matrix_block(rd, s.dims.p, s.dims.n, "C", q));
    }

    if (rd.next(line)) {
        auto toks = detail::split_ws(line);
        if (toks.size() == 2 && toks[0] == "product")
            throw ParseError("more product blocks than declared rank " + std::to_string(s.rank),
                             rd.lineno());
        throw ParseError("unexpected trailing content '" + line + "'", rd.lineno());
    }

    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), rd.lineno());
    }
    return s;
}

inline BilinearScheme parse_scheme(const std::string& text) {
    std::istringstream in(text);
    return parse_scheme(in);
}

inline std::string serialize_scheme(const BilinearScheme& s) {
    s.validate();
    std::ostringstream out;
    out << "scheme " << (s.name.empty() ? "unnamed" : s.name) << '\n';
    out << "dims " << s.dims.n << ' ' << s.dims.m << ' ' << s.dims.p << '\n';
    out << "rank " << s.rank << '\n';
    out << "domain " << domain_name(s.domain) << '\n';
    auto emit = [&out](const Matrix<Int>& m) {
        for (int r = 0; r < m.rows(); ++r) {
            for (int c = 0; c < m.cols(); ++c) {
                if (c) out << ' ';
                out << m(r, c);
            }
            out << '\n';
        }
    };
    for (int q = 0; q < s.rank; ++q) {
        out << "product " << (q + 1) << '\n';
        emit(s.A[q]);
        out << "*\n";
        emit(s.B[q]);
        out << "=>\n";
        emit(s.C[q]);
    }
    return out.str();
}

}  // namespace brentforge
