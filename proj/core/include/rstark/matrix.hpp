#pragma once

#include "rstark/numeric.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rstark {

// Dense row-major matrix. Rows are the lattice generators everywhere in this library.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }
    void set_row(std::size_t i, const std::vector<T>& v) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }
    void append_row(const std::vector<T>& v) {
        if (rows_ == 0 && cols_ == 0) cols_ = v.size();
        if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
        data_.insert(data_.end(), v.begin(), v.end());
        ++rows_;
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix submatrix_rows(std::size_t begin, std::size_t end) const {
        Matrix s(end - begin, cols_);
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < cols_; ++j) s(i - begin, j) = (*this)(i, j);
        return s;
    }

    Matrix select_cols(const std::vector<std::size_t>& cols) const {
        Matrix s(rows_, cols.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(i, cols[j]);
        return s;
    }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }
    Matrix operator+(const Matrix& o) const {
        Matrix s = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
        return s;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix s = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
        return s;
    }
    Matrix scaled(const T& c) const {
        Matrix s = *this;
        for (auto& x : s.data_) x *= c;
        return s;
    }

    // row vector times this matrix
    std::vector<T> left_apply(const std::vector<T>& v) const {
        std::vector<T> out(cols_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (v[i] == 0) continue;
            for (std::size_t j = 0; j < cols_; ++j) out[j] += v[i] * (*this)(i, j);
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

    const std::vector<T>& raw() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using RealMatrix = Matrix<Real>;

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
    Matrix<To> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = To(m(i, j));
    return out;
}

RealMatrix to_real(const RatMatrix& m);

// ---- exact rational linear algebra ----

struct RowEchelon {
    RatMatrix reduced;                 // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;   // pivot column of each row
};
RowEchelon rref(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);
Rational determinant(RatMatrix m);
RatMatrix inverse(const RatMatrix& m);
// X with X * a = b (rows of b in the row space of a); throws if inconsistent
RatMatrix solve_left(const RatMatrix& a, const RatMatrix& b);
// basis of {x : x * m = 0} (left kernel), rows
RatMatrix left_kernel(const RatMatrix& m);

// ---- integer normal forms ----

struct HermiteForm {
    IntMatrix basis;      // nonzero rows of the row-style HNF, positive pivots, reduced above pivots
    IntMatrix transform;  // unimodular U with U * A = [basis; 0]
    std::vector<std::size_t> pivots;
};
HermiteForm hermite_form(const IntMatrix& a, bool with_transform = false);

struct SmithForm {
    std::vector<Integer> diagonal; // nonzero invariant factors d1 | d2 | ...
    IntMatrix u;                   // U * A * V = D
    IntMatrix v;
    IntMatrix v_inverse;
};
SmithForm smith_form(const IntMatrix& a);

// basis (rows) of {x in Z^rows : x * m = 0}
IntMatrix integer_left_kernel(const IntMatrix& m);

// common denominator scaling: returns (d, d*m) with d*m integral
std::pair<Integer, IntMatrix> clear_denominators(const RatMatrix& m);

// ---- numeric dense routines (matrices are small) ----

Real determinant(RealMatrix m);
// orthonormal basis (rows) of the row space of m together with the numerical rank
struct OrthonormalFrame {
    RealMatrix q;
    std::vector<Real> singular_values;
};
OrthonormalFrame row_space_frame(const RealMatrix& m, const Real& rel_tol);
std::vector<Real> singular_values(const RealMatrix& m);
// least squares x minimizing |x * a - b| for a single row b
std::vector<Real> least_squares_left(const RealMatrix& a, const std::vector<Real>& b);

} // namespace rstark
