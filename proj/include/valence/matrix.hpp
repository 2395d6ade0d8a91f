#pragma once

#include <algorithm>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "valence/int.hpp"

namespace valence {

using IntVec = std::vector<Int>;

// Dense matrix of arbitrary-precision integers, row major.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<Int>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            require(row.size() == cols_, "IntMatrix: ragged initializer");
            for (const auto& v : row) data_.push_back(v);
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVec col(std::size_t j) const {
        IntVec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    void set_col(std::size_t j, const IntVec& v) {
        require(v.size() == rows_, "set_col: size mismatch");
        for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
    }

    // col[dst] += k * col[src]
    void add_col(std::size_t dst, std::size_t src, const Int& k) {
        if (k == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) at(i, dst) += k * at(i, src);
    }

    void negate_col(std::size_t j) {
        for (std::size_t i = 0; i < rows_; ++i) at(i, j) = -at(i, j);
    }

    void append_col(const IntVec& v) {
        require(v.size() == rows_ || rows_ == 0, "append_col: size mismatch");
        if (rows_ == 0) rows_ = v.size();
        IntMatrix out(rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
            out.at(i, cols_) = v[i];
        }
        *this = std::move(out);
    }

    Int norm() const {
        Int m = 0;
        for (const auto& v : data_) m = std::max(m, abs_int(v));
        return m;
    }

    IntVec mul(const IntVec& x) const {
        require(x.size() == cols_, "mul: size mismatch");
        IntVec y(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (at(i, j) != 0) y[i] += at(i, j) * x[j];
        return y;
    }

    IntMatrix mul(const IntMatrix& other) const {
        require(cols_ == other.rows_, "mul: dimension mismatch");
        IntMatrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < other.cols_; ++j)
                    if (other.at(k, j) != 0) out.at(i, j) += a * other.at(k, j);
            }
        return out;
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out.at(i, i) = 1;
        return out;
    }

    static IntMatrix from_cols(std::size_t rows, const std::vector<IntVec>& cols) {
        IntMatrix out(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            require(cols[j].size() == rows, "from_cols: size mismatch");
            for (std::size_t i = 0; i < rows; ++i) out.at(i, j) = cols[j][i];
        }
        return out;
    }

    bool operator==(const IntMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> data_;
};

// Text format: first line "rows cols", then entries row-major.
inline IntMatrix read_matrix(std::istream& in) {
    std::size_t r = 0, c = 0;
    if (!(in >> r >> c)) throw std::invalid_argument("matrix: missing dimensions");
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            std::string tok;
            if (!(in >> tok)) throw std::invalid_argument("matrix: missing entry");
            m.at(i, j) = Int(tok);
        }
    return m;
}

inline void write_matrix(std::ostream& out, const IntMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            out << (j ? " " : "") << m.at(i, j);
        out << '\n';
    }
}

inline std::string vec_to_string(const IntVec& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << ')';
    return os.str();
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
    require(a.size() == b.size(), "vec_add: size mismatch");
    IntVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
    require(a.size() == b.size(), "vec_sub: size mismatch");
    IntVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline IntVec vec_neg(const IntVec& a) {
    IntVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
    return out;
}

inline bool vec_is_zero(const IntVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; });
}

}  // namespace valence
