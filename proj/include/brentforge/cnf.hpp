#pragma once

// CNF formulas, DIMACS I/O, and model text parsing. Variables are 1-based,
// literals are DIMACS-style signed integers.

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    int new_var() { return ++num_vars; }

    void add_clause(std::vector<int> lits) {
        if (lits.empty()) throw std::invalid_argument("empty clause");
        for (int lit : lits) {
            if (lit == 0) throw std::invalid_argument("zero literal in clause");
            if (std::abs(lit) > num_vars)
                throw std::invalid_argument("literal references unknown variable");
            for (int other : lits)
                if (other == -lit) throw std::invalid_argument("clause contains x and -x");
        }
        clauses.push_back(std::move(lits));
    }
};

// Truth values per variable, indexed 1..num_vars; -1 = unassigned.
struct Assignment {
    std::vector<std::int8_t> value;  // index 0 unused

    explicit Assignment(int num_vars = 0) : value(static_cast<size_t>(num_vars) + 1, -1) {}

    int num_vars() const { return static_cast<int>(value.size()) - 1; }
    bool assigned(int var) const { return value[var] >= 0; }
    bool get(int var) const { return value[var] == 1; }
    void set(int var, bool v) { value[var] = v ? 1 : 0; }

    bool satisfies_literal(int lit) const {
        int var = std::abs(lit);
        if (var >= static_cast<int>(value.size()) || value[var] < 0) return false;
        return (lit > 0) == (value[var] == 1);
    }
};

inline bool clause_satisfied(const std::vector<int>& clause, const Assignment& a) {
    for (int lit : clause)
        if (a.satisfies_literal(lit)) return true;
    return false;
}

// Indices of clauses the assignment does not satisfy.
inline std::vector<size_t> violated_clauses(const CnfFormula& f, const Assignment& a) {
    std::vector<size_t> out;
    for (size_t i = 0; i < f.clauses.size(); ++i)
        if (!clause_satisfied(f.clauses[i], a)) out.push_back(i);
    return out;
}

// Four clauses forcing c = x XOR y (equivalently x+y+c = 0 over GF(2)).
inline void add_xor_link(CnfFormula& f, int x, int y, int c) {
    f.add_clause({-c, x, y});
    f.add_clause({-c, -x, -y});
    f.add_clause({c, -x, y});
    f.add_clause({c, x, -y});
}

// Constrains XOR of lits to equal parity, introducing fresh carry variables.
inline void add_xor_constraint(CnfFormula& f, const std::vector<int>& lits, int parity) {
    if (lits.empty()) {
        if (parity) {  // 0 = 1: unsatisfiable
            int z = f.new_var();
            f.add_clause({z});
            f.add_clause({-z});
        }
        return;
    }
    int acc = lits[0];
    for (size_t i = 1; i < lits.size(); ++i) {
        int carry = f.new_var();
        add_xor_link(f, acc, lits[i], carry);
        acc = carry;
    }
    f.add_clause({parity ? acc : -acc});
}

inline void write_dimacs(const CnfFormula& f, std::ostream& out,
                         const std::vector<std::string>& comments = {}) {
    for (const std::string& c : comments) out << "c " << c << '\n';
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& clause : f.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
}

inline std::string to_dimacs(const CnfFormula& f, const std::vector<std::string>& comments = {}) {
    std::ostringstream out;
    write_dimacs(f, out, comments);
    return out.str();
}

inline CnfFormula read_dimacs(std::istream& in) {
    CnfFormula f;
    std::string line;
    bool have_header = false;
    long long declared_clauses = -1;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 'p') {
            std::istringstream hs(line);
            std::string p, fmt;
            long long nv = 0;
            if (!(hs >> p >> fmt >> nv >> declared_clauses) || fmt != "cnf")
                throw std::invalid_argument("malformed DIMACS header: " + line);
            f.num_vars = static_cast<int>(nv);
            have_header = true;
            continue;
        }
        if (line[0] == '%') break;  // some benchmark files end with '%'
        std::istringstream ls(line);
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (!have_header) throw std::invalid_argument("clause before DIMACS header");
                f.add_clause(current);
                current.clear();
            } else {
                current.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!have_header) throw std::invalid_argument("missing DIMACS header");
    if (!current.empty()) throw std::invalid_argument("unterminated clause at end of DIMACS file");
    if (declared_clauses >= 0 && declared_clauses != static_cast<long long>(f.clauses.size()))
        throw std::invalid_argument("DIMACS clause count mismatch");
    return f;
}

inline CnfFormula read_dimacs(const std::string& text) {
    std::istringstream in(text);
    return read_dimacs(in);
}

// ============================================================
// Model text: SAT-competition style ("s SATISFIABLE" + "v 1 -2 ... 0") or a
// raw whitespace-separated literal list, 0-terminated.
// ============================================================

enum class ModelTextStatus { Sat, Unsat, Unknown };

struct ParsedModelText {
    ModelTextStatus status = ModelTextStatus::Unknown;
    std::vector<int> literals;
    bool saw_terminator = false;
};

inline ParsedModelText parse_model_text(std::istream& in) {
    ParsedModelText out;
    std::string line;
    bool saw_values = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char tag = line[0];
        if (tag == 'c') continue;
        if (tag == 's') {
            if (line.find("UNSATISFIABLE") != std::string::npos)
                out.status = ModelTextStatus::Unsat;
            else if (line.find("SATISFIABLE") != std::string::npos)
                out.status = ModelTextStatus::Sat;
            continue;
        }
        std::string payload = line;
        if (tag == 'v') payload = line.substr(1);
        std::istringstream ls(payload);
        long long lit;
        while (ls >> lit) {
            saw_values = true;
            if (lit == 0) {
                out.saw_terminator = true;
            } else {
                out.literals.push_back(static_cast<int>(lit));
            }
        }
    }
    if (out.status == ModelTextStatus::Unknown && saw_values) out.status = ModelTextStatus::Sat;
    return out;
}

inline ParsedModelText parse_model_text(const std::string& text) {
    std::istringstream in(text);
    return parse_model_text(in);
}

inline Assignment assignment_from_literals(const std::vector<int>& lits, int num_vars) {
    Assignment a(num_vars);
    for (int lit : lits) {
        int var = std::abs(lit);
        if (var < 1 || var > num_vars)
            throw std::invalid_argument("model literal out of range: " + std::to_string(lit));
        a.set(var, lit > 0);
    }
    return a;
}

}  // namespace brentforge
