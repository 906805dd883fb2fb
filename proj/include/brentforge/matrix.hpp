#pragma once

// Dense row-major matrices over an exact element type, plus the naive
// triple-loop product used as the independent oracle everywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brentforge {

using Int = boost::multiprecision::cpp_int;

template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("matrix dimensions must be non-negative");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const T& v : data_)
            if (v != 0) return false;
        return true;
    }

    int nonzero_count() const {
        int n = 0;
        for (const T& v : data_)
            if (v != 0) ++n;
        return n;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const T& s, Matrix m) {
        for (T& v : m.data_) v *= s;
        return m;
    }

    Matrix negated() const {
        Matrix m(*this);
        for (T& v : m.data_) v = -v;
        return m;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    int rows_, cols_;
    std::vector<T> data_;
};

// Naive triple-loop product. Kept free of any scheme machinery: this is the
// reference implementation the rest of the library is checked against.
template <typename T>
Matrix<T> naive_product(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.cols() != y.rows())
        throw std::invalid_argument("naive_product: inner dimensions differ");
    Matrix<T> z(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            const T& xv = x(i, k);
            if (xv == 0) continue;
            for (int j = 0; j < y.cols(); ++j)
                z(i, j) += xv * y(k, j);
        }
    return z;
}

template <typename T>
std::string to_grid(const Matrix<T>& m) {
    std::ostringstream out;
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << m(r, c);
        }
        out << '\n';
    }
    return out.str();
}

// Parses a whitespace-separated integer grid; column count inferred from the
// first non-empty line, every later line must match it.
template <typename T = Int>
Matrix<T> parse_grid(std::istream& in) {
    std::vector<std::vector<T>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<T> row;
        T v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw std::invalid_argument("grid: non-integer token in row " +
                                                   std::to_string(rows.size() + 1));
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("grid: ragged row " + std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("grid: empty input");
    Matrix<T> m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            m(r, c) = rows[r][c];
    return m;
}

template <typename T = Int>
Matrix<T> parse_grid(const std::string& text) {
    std::istringstream in(text);
    return parse_grid<T>(in);
}

}  // namespace brentforge
