#pragma once

// Small dense integer matrices and exact linear algebra over Q. Sizes here
// are tiny (rank <= 8, n <= 36 unknowns), so everything is plain Gaussian
// elimination on Rationals.

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kltwist/rational.hpp"

namespace kltwist {

using IntVector = std::vector<long long>;

inline long long dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pairing of vectors of different dimension");
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline IntVector operator+(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sum of vectors of different dimension");
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IntVector operator-(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("difference of vectors of different dimension");
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline IntVector operator-(const IntVector& a) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline IntVector scaled(const IntVector& a, long long c) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline std::string to_string(const IntVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

class IntMatrix {
   public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    long long& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    long long operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<long long>& data() const { return data_; }

    IntVector row(std::size_t i) const { return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)); }

    IntVector apply(const IntVector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
        IntVector r(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        IntMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const long long x = a(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
            }
        return r;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator<(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
        return a.data_ < b.data_;
    }

   private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<long long> data_;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

inline RationalMatrix to_rational(const IntMatrix& m) {
    RationalMatrix r(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = Rational(static_cast<long>(m(i, j)));
    return r;
}

/// Row-reduces in place; returns the rank.
inline std::size_t row_reduce(RationalMatrix& a) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && is_zero(a[pivot][c])) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        const Rational inv = 1 / a[rank][c];
        for (std::size_t j = c; j < cols; ++j) a[rank][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || is_zero(a[i][c])) continue;
            const Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline std::size_t rank(const IntMatrix& m) {
    auto r = to_rational(m);
    return row_reduce(r);
}

inline Rational determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    auto a = to_rational(m);
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && is_zero(a[pivot][c])) ++pivot;
        if (pivot == n) return 0;
        if (pivot != c) {
            std::swap(a[pivot], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (is_zero(a[i][c])) continue;
            const Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

/// Exact inverse over Q, or nullopt for a singular matrix.
inline std::optional<RationalMatrix> inverse(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(static_cast<long>(m(i, j)));
        a[i][n + i] = 1;
    }
    if (n > 0) {
        // Reducing only the left block: rank must be n there.
        RationalMatrix work = a;
        const std::size_t r = row_reduce(work);
        if (r < n) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i)
            if (is_zero(work[i][i])) return std::nullopt;
        RationalMatrix out(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i][j] = work[i][n + j];
        return out;
    }
    return RationalMatrix{};
}

/// Solves A x = b over Q (A given column-wise as a list of vectors); nullopt if inconsistent.
inline std::optional<std::vector<Rational>> solve(const RationalMatrix& a_rows, const std::vector<Rational>& b) {
    const std::size_t rows = a_rows.size();
    if (rows != b.size()) throw std::invalid_argument("solve: dimension mismatch");
    if (rows == 0) return std::vector<Rational>{};
    const std::size_t cols = a_rows[0].size();
    RationalMatrix aug = a_rows;
    for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    row_reduce(aug);
    std::vector<Rational> x(cols);
    for (const auto& row : aug) {
        std::size_t lead = 0;
        while (lead < cols && is_zero(row[lead])) ++lead;
        if (lead == cols) {
            if (!is_zero(row[cols])) return std::nullopt;
            continue;
        }
        x[lead] = row[cols];
    }
    return x;
}

}  // namespace kltwist
