#pragma once

// Maple-style listings of bilinear schemes:
//
//   P01 := (a_1_1-a_1_2+2*a_2_1) * (-b_2_2);
//   ...
//   expand(-P06+P14+P19-a_1_1*b_1_1-a_1_2*b_2_1-a_1_3*b_3_1);
//
// One product line per multiplication; one expand line per output entry (u,v),
// whose subtracted a_u_w*b_w_v monomials identify the entry and whose signed
// P coefficients populate C[q](v,u). Statements may span lines; they end at ';'.

#include "brentforge/matrix.hpp"
#include "brentforge/scheme.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

class MapleError : public std::runtime_error {
public:
    explicit MapleError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace maple_detail {

struct Monomial {
    Int coeff = 1;
    // at most one of each; 1-based indices as written
    bool has_a = false, has_b = false, has_p = false;
    int a1 = 0, a2 = 0, b1 = 0, b2 = 0, pidx = 0;
    bool is_zero = false;
};

inline std::string strip_ws(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

inline int parse_number(const std::string& s, size_t& pos) {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw MapleError("expected digits at '" + s.substr(start, 8) + "'");
    return std::stoi(s.substr(start, pos - start));
}

// Parses one factor at pos: an integer literal, a_i_j, b_k_l, or Pq.
inline void parse_factor(const std::string& s, size_t& pos, Monomial& m) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
        int v = parse_number(s, pos);
        m.coeff *= v;
        if (v == 0) m.is_zero = true;
        return;
    }
    if (c == 'a' || c == 'b') {
        if (pos + 1 >= s.size() || s[pos + 1] != '_')
            throw MapleError("unparseable term near '" + s.substr(pos, 8) + "'");
        pos += 2;
        int first = parse_number(s, pos);
        if (pos >= s.size() || s[pos] != '_')
            throw MapleError("expected '_' in coefficient name near position " + std::to_string(pos));
        ++pos;
        int second = parse_number(s, pos);
        if (first < 1 || second < 1) throw MapleError("coefficient indices must be >= 1");
        if (c == 'a') {
            if (m.has_a) throw MapleError("term with two a-factors");
            m.has_a = true;
            m.a1 = first;
            m.a2 = second;
        } else {
            if (m.has_b) throw MapleError("term with two b-factors");
            m.has_b = true;
            m.b1 = first;
            m.b2 = second;
        }
        return;
    }
    if (c == 'P') {
        ++pos;
        int idx = parse_number(s, pos);
        if (m.has_p) throw MapleError("term with two product references");
        m.has_p = true;
        m.pidx = idx;
        return;
    }
    throw MapleError("unparseable term near '" + s.substr(pos, 8) + "'");
}

// Parses a whitespace-free signed sum of monomials.
inline std::vector<Monomial> parse_sum(const std::string& s) {
    std::vector<Monomial> terms;
    size_t pos = 0;
    if (s.empty()) throw MapleError("empty expression");
    while (pos < s.size()) {
        Monomial m;
        if (s[pos] == '+') {
            ++pos;
        } else if (s[pos] == '-') {
            m.coeff = -1;
            ++pos;
        } else if (!terms.empty()) {
            throw MapleError("expected sign between terms near '" + s.substr(pos, 8) + "'");
        }
        if (pos >= s.size()) throw MapleError("dangling sign at end of expression");
        parse_factor(s, pos, m);
        while (pos < s.size() && s[pos] == '*') {
            ++pos;
            if (pos >= s.size()) throw MapleError("dangling '*' at end of expression");
            parse_factor(s, pos, m);
        }
        terms.push_back(m);
    }
    return terms;
}

struct ProductDef {
    int index = 0;
    std::vector<Monomial> left, right;
};

struct ExpandDef {
    std::vector<Monomial> terms;
};

}  // namespace maple_detail

inline BilinearScheme ingest_maple_listing(const std::string& text,
                                           const std::string& name = "maple") {
    using namespace maple_detail;

    // Statements end at ';'. Comment lines starting '#' are dropped first.
    std::string body;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            size_t first = line.find_first_not_of(" \t\r");
            if (first != std::string::npos && line[first] == '#') continue;
            body += line;
            body += '\n';
        }
    }

    std::map<int, ProductDef> products;
    std::vector<ExpandDef> expands;

    size_t start = 0;
    while (true) {
        size_t semi = body.find(';', start);
        if (semi == std::string::npos) {
            if (!strip_ws(body.substr(start)).empty())
                throw MapleError("trailing content without ';': '" +
                                 body.substr(start, 40) + "'");
            break;
        }
        std::string stmt = strip_ws(body.substr(start, semi - start));
        start = semi + 1;
        if (stmt.empty()) continue;

        if (stmt.rfind("expand(", 0) == 0) {
            if (stmt.back() != ')') throw MapleError("expand statement missing ')'");
            ExpandDef e;
            e.terms = parse_sum(stmt.substr(7, stmt.size() - 8));
            expands.push_back(std::move(e));
            continue;
        }
        if (stmt[0] == 'P') {
            size_t pos = 1;
            int idx = parse_number(stmt, pos);
            if (stmt.compare(pos, 2, ":=") != 0)
                throw MapleError("expected ':=' in definition of P" + std::to_string(idx));
            pos += 2;
            // (left)*(right)
            if (pos >= stmt.size() || stmt[pos] != '(')
                throw MapleError("expected '(' after ':=' in P" + std::to_string(idx));
            size_t close = stmt.find(')', pos);
            if (close == std::string::npos) throw MapleError("unbalanced '(' in P" + std::to_string(idx));
            std::string left = stmt.substr(pos + 1, close - pos - 1);
            pos = close + 1;
            if (pos >= stmt.size() || stmt[pos] != '*')
                throw MapleError("expected '*' between factors of P" + std::to_string(idx));
            ++pos;
            if (pos >= stmt.size() || stmt[pos] != '(' || stmt.back() != ')')
                throw MapleError("expected '(' ... ')' as right factor of P" + std::to_string(idx));
            std::string right = stmt.substr(pos + 1, stmt.size() - pos - 2);

            ProductDef def;
            def.index = idx;
            def.left = parse_sum(left);
            def.right = parse_sum(right);
            for (const Monomial& t : def.left)
                if (!t.is_zero && (!t.has_a || t.has_b || t.has_p))
                    throw MapleError("left factor of P" + std::to_string(idx) +
                                     " must be a sum of a_i_j terms");
            for (const Monomial& t : def.right)
                if (!t.is_zero && (!t.has_b || t.has_a || t.has_p))
                    throw MapleError("right factor of P" + std::to_string(idx) +
                                     " must be a sum of b_k_l terms");
            if (idx < 1) throw MapleError("product index must be >= 1");
            if (!products.emplace(idx, std::move(def)).second)
                throw MapleError("duplicate product index P" + std::to_string(idx));
            continue;
        }
        throw MapleError("unrecognized statement '" + stmt.substr(0, 40) + "'");
    }

    if (products.empty()) throw MapleError("no product definitions found");
    int rank = static_cast<int>(products.size());
    for (int q = 1; q <= rank; ++q)
        if (!products.count(q))
            throw MapleError("product indices must be contiguous; missing P" + std::to_string(q));

    // Dims from the largest indices in use.
    int n = 0, m = 0, p = 0;
    auto see_a = [&](const Monomial& t) { n = std::max(n, t.a1); m = std::max(m, t.a2); };
    auto see_b = [&](const Monomial& t) { m = std::max(m, t.b1); p = std::max(p, t.b2); };
    for (const auto& [idx, def] : products) {
        for (const Monomial& t : def.left)
            if (t.has_a) see_a(t);
        for (const Monomial& t : def.right)
            if (t.has_b) see_b(t);
    }
    for (const ExpandDef& e : expands)
        for (const Monomial& t : e.terms) {
            if (t.has_a) see_a(t);
            if (t.has_b) see_b(t);
        }
    if (n < 1 || m < 1 || p < 1) throw MapleError("could not infer dims from listing");

    BilinearScheme s;
    s.name = name;
    s.dims = {n, m, p};
    s.rank = rank;
    s.domain = Domain::Integers;
    s.A.assign(rank, Matrix<Int>(n, m));
    s.B.assign(rank, Matrix<Int>(m, p));
    s.C.assign(rank, Matrix<Int>(p, n));

    for (const auto& [idx, def] : products) {
        for (const Monomial& t : def.left)
            if (!t.is_zero) s.A[idx - 1](t.a1 - 1, t.a2 - 1) += t.coeff;
        for (const Monomial& t : def.right)
            if (!t.is_zero) s.B[idx - 1](t.b1 - 1, t.b2 - 1) += t.coeff;
    }

    // Each expand statement covers one output entry: the subtracted
    // a_u_w*b_w_v monomials pin (u,v) and must run over every inner index w.
    std::set<std::pair<int, int>> covered;
    for (const ExpandDef& e : expands) {
        int u = 0, v = 0;
        std::set<int> inner;
        std::vector<std::pair<int, Int>> pterms;
        for (const Monomial& t : e.terms) {
            if (t.has_p) {
                if (t.has_a || t.has_b)
                    throw MapleError("expand term mixes P with a/b factors");
                if (t.pidx > rank)
                    throw MapleError("P" + std::to_string(t.pidx) + " referenced but never defined");
                pterms.emplace_back(t.pidx, t.coeff);
                continue;
            }
            if (!(t.has_a && t.has_b))
                throw MapleError("expand term must be a P reference or an a*b product");
            if (t.coeff != -1)
                throw MapleError("expected subtracted unit a*b terms in expand statement");
            if (t.a2 != t.b1)
                throw MapleError("a*b term with mismatched inner index in expand statement");
            if (u == 0) {
                u = t.a1;
                v = t.b2;
            } else if (u != t.a1 || v != t.b2) {
                throw MapleError("expand statement mixes output entries (" + std::to_string(u) +
                                 "," + std::to_string(v) + ") and (" + std::to_string(t.a1) + "," +
                                 std::to_string(t.b2) + ")");
            }
            inner.insert(t.a2);
        }
        if (u == 0) throw MapleError("expand statement has no a*b terms to identify its entry");
        if (static_cast<int>(inner.size()) != m)
            throw MapleError("expand statement for entry (" + std::to_string(u) + "," +
                             std::to_string(v) + ") does not cover all inner indices");
        if (!covered.insert({u, v}).second)
            throw MapleError("duplicate expand statement for entry (" + std::to_string(u) + "," +
                             std::to_string(v) + ")");
        for (const auto& [pidx, coeff] : pterms)
            s.C[pidx - 1](v - 1, u - 1) += coeff;
    }
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= p; ++v)
            if (!covered.count({u, v}))
                throw MapleError("no expand statement for output entry (" + std::to_string(u) +
                                 "," + std::to_string(v) + ")");

    s.validate();
    return s;
}

struct MapleExport {
    std::string text;
    std::vector<std::string> warnings;
};

inline MapleExport export_maple_listing(const BilinearScheme& s) {
    s.validate();
    if (s.domain != Domain::Integers)
        throw std::invalid_argument("export_maple_listing needs an integer scheme");

    MapleExport out;
    int width = std::max(2, static_cast<int>(std::to_string(s.rank).size()));
    auto pname = [&](int q) {
        std::string digits = std::to_string(q);
        return "P" + std::string(width - digits.size(), '0') + digits;
    };
    auto term = [](std::ostringstream& os, const Int& coeff, const std::string& sym, bool first) {
        if (coeff > 0)
            os << (first ? "" : "+");
        else
            os << '-';
        Int mag = coeff < 0 ? Int(-coeff) : coeff;
        if (mag != 1) os << mag << '*';
        os << sym;
    };

    std::ostringstream text;
    for (int q = 0; q < s.rank; ++q) {
        std::ostringstream left, right;
        bool first = true;
        for (int i = 0; i < s.dims.n; ++i)
            for (int j = 0; j < s.dims.m; ++j)
                if (s.A[q](i, j) != 0) {
                    term(left, s.A[q](i, j),
                         "a_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), first);
                    first = false;
                }
        if (first) left << '0';
        first = true;
        for (int k = 0; k < s.dims.m; ++k)
            for (int l = 0; l < s.dims.p; ++l)
                if (s.B[q](k, l) != 0) {
                    term(right, s.B[q](k, l),
                         "b_" + std::to_string(k + 1) + "_" + std::to_string(l + 1), first);
                    first = false;
                }
        if (first) right << '0';
        text << pname(q + 1) << " := (" << left.str() << ") * (" << right.str() << ");\n";
    }
    for (int d : s.degenerate_products())
        out.warnings.push_back("product " + pname(d) + " has an all-zero coefficient matrix");

    for (int u = 0; u < s.dims.n; ++u)
        for (int v = 0; v < s.dims.p; ++v) {
            std::ostringstream line;
            bool first = true;
            for (int q = 0; q < s.rank; ++q)
                if (s.C[q](v, u) != 0) {
                    term(line, s.C[q](v, u), pname(q + 1), first);
                    first = false;
                }
            for (int w = 0; w < s.dims.m; ++w)
                line << "-a_" << (u + 1) << '_' << (w + 1) << "*b_" << (w + 1) << '_' << (v + 1);
            text << "expand(" << line.str() << ");\n";
        }

    out.text = text.str();
    return out;
}

}  // namespace brentforge
