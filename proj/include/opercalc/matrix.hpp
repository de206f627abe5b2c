/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPERCALC_MATRIX_HPP
#define OPERCALC_MATRIX_HPP

#include <utility>
#include <vector>

#include "series.hpp"

namespace opercalc {

/// Dense matrix over an exact coefficient ring (Rational, RationalFunction,
/// TruncatedSeries). Row-major storage; elimination-style algorithms live in
/// the free functions below and require a field.
template <class T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    Matrix(int rows, int cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (static_cast<int>(a_.size()) != rows * cols)
            fail(Errc::MalformedInput, "matrix entry count mismatch");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const T& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.a_) x = -x;
        return r;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        require_same_shape(a, b);
        Matrix r = a;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] + b.a_[i];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        require_same_shape(a, b);
        Matrix r = a;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] - b.a_[i];
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) fail(Errc::MalformedInput, "matrix product shape mismatch");
        if (a.cols_ == 0) fail(Errc::MalformedInput, "matrix product over an empty dimension");
        Matrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) {
                T acc = a.at(i, 0) * b.at(0, j);
                for (int k = 1; k < a.cols_; ++k) acc = acc + a.at(i, k) * b.at(k, j);
                r.at(i, j) = std::move(acc);
            }
        return r;
    }

    friend Matrix operator*(const T& s, const Matrix& m) {
        Matrix r = m;
        for (auto& x : r.a_) x = s * x;
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix block(int i0, int j0, int nrows, int ncols) const {
        Matrix r(nrows, ncols);
        for (int i = 0; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j) r.at(i, j) = at(i0 + i, j0 + j);
        return r;
    }

    void set_block(int i0, int j0, const Matrix& b) {
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) at(i0 + i, j0 + j) = b.at(i, j);
    }

    /// Horizontal concatenation [*this | b].
    Matrix hcat(const Matrix& b) const {
        if (rows_ != b.rows_) fail(Errc::MalformedInput, "hcat row mismatch");
        Matrix r(rows_, cols_ + b.cols_);
        r.set_block(0, 0, *this);
        r.set_block(0, cols_, b);
        return r;
    }

    Matrix column(int j) const { return block(0, j, rows_, 1); }

    template <class F>
    auto map(F f) const -> Matrix<decltype(f(std::declval<T>()))> {
        Matrix<decltype(f(std::declval<T>()))> r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = f(at(i, j));
        return r;
    }

  private:
    static void require_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            fail(Errc::MalformedInput, "matrix shape mismatch");
    }

    int rows_, cols_;
    std::vector<T> a_;
};

using RfMatrix = Matrix<RationalFunction>;
using QMatrix = Matrix<Rational>;
using SeriesMatrix = Matrix<TruncatedSeries>;

template <class T>
Matrix<T> operator*(const Rational& s, const Matrix<T>& m) {
    return m.map([&](const T& x) { return s * x; });
}

/// Kronecker product a (x) b (used for tensor-product frames).
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    return r;
}

template <class T>
Matrix<T> entrywise_derivative(const Matrix<T>& m) {
    return m.map([](const T& x) { return x.derivative(); });
}

// ---- field elimination (T must support exact division) ----

/// In-place reduced row echelon form. Returns the pivot column list.
template <class T>
std::vector<int> rref(Matrix<T>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!m.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        T inv = T(1) / m.at(row, col);
        for (int j = col; j < m.cols(); ++j) m.at(row, j) = inv * m.at(row, j);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            T f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class T>
int rank(Matrix<T> m) {
    return static_cast<int>(rref(m).size());
}

/// Basis of the right kernel, returned as columns.
template <class T>
Matrix<T> kernel_basis(Matrix<T> m) {
    int n = m.cols();
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
    Matrix<T> k(n, n - static_cast<int>(pivots.size()));
    int col = 0;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[static_cast<size_t>(f)]) continue;
        k.at(f, col) = T(1);
        for (size_t r = 0; r < pivots.size(); ++r) k.at(pivots[r], col) = -m.at(static_cast<int>(r), f);
        ++col;
    }
    return k;
}

template <class T>
T determinant(Matrix<T> m) {
    if (m.rows() != m.cols()) fail(Errc::MalformedInput, "determinant of a non-square matrix");
    T det(1);
    int n = m.rows();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (!m.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) return T(0);
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            det = -det;
        }
        det = det * m.at(col, col);
        T inv = T(1) / m.at(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (m.at(i, col).is_zero()) continue;
            T f = inv * m.at(i, col);
            for (int j = col; j < n; ++j) m.at(i, j) = m.at(i, j) - f * m.at(col, j);
        }
    }
    return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
    if (m.rows() != m.cols()) fail(Errc::MalformedInput, "inverse of a non-square matrix");
    int n = m.rows();
    Matrix<T> aug = m.hcat(Matrix<T>::identity(n));
    std::vector<int> piv = rref(aug);
    if (static_cast<int>(piv.size()) != n || piv.back() != n - 1)
        fail(Errc::NonInvertibleStep, "matrix is singular");
    return aug.block(0, n, n, n);
}

/// True when the column spans of a and b coincide (exact rank comparison).
template <class T>
bool same_column_span(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) return false;
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return false;
    return rank(a.hcat(b)) == ra;
}

/// True when span(a) is contained in span(b).
template <class T>
bool span_contained(const Matrix<T>& a, const Matrix<T>& b) {
    return rank(b.hcat(a)) == rank(b);
}

// ---- series matrices ----

inline SeriesMatrix expand_at(const RfMatrix& m, const Rational& z0, int order) {
    return m.map([&](const RationalFunction& f) { return expand_at(f, z0, order); });
}

inline QMatrix series_coefficient(const SeriesMatrix& m, int k) {
    return m.map([&](const TruncatedSeries& s) { return s.coeff(k); });
}

inline SeriesMatrix from_constant(const QMatrix& m, const Rational& base, int order) {
    return m.map([&](const Rational& v) { return TruncatedSeries::constant(v, base, order); });
}

/// Inverse of a series matrix whose value at the base point is invertible:
/// invert the constant term exactly, then run the Neumann iteration on the
/// nilpotent remainder up to the truncation order.
inline SeriesMatrix series_inverse(const SeriesMatrix& m) {
    if (m.rows() != m.cols()) fail(Errc::MalformedInput, "inverse of a non-square matrix");
    int order = m.at(0, 0).order();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) order = std::min(order, m.at(i, j).order());
    QMatrix c0 = series_coefficient(m, 0);
    if (rank(c0) != m.rows()) fail(Errc::NonInvertibleStep, "series matrix value is singular");
    SeriesMatrix c0inv = from_constant(inverse(c0), m.at(0, 0).base(), order);
    SeriesMatrix n = c0inv * m - from_constant(QMatrix::identity(m.rows()), m.at(0, 0).base(), order);
    SeriesMatrix acc = from_constant(QMatrix::identity(m.rows()), m.at(0, 0).base(), order);
    SeriesMatrix pw = acc;
    for (int k = 1; k <= order; ++k) {
        pw = pw * n;
        if (k % 2 == 1) acc = acc - pw;
        else acc = acc + pw;
    }
    return acc * c0inv;
}

/// Characteristic polynomial coefficients of a square matrix over a field of
/// characteristic zero (Faddeev–LeVerrier). Returns c_0..c_n ascending with
/// det(xI - M) = sum c_k x^k, c_n = 1.
template <class T>
std::vector<T> char_poly(const Matrix<T>& m) {
    if (m.rows() != m.cols()) fail(Errc::MalformedInput, "char poly of a non-square matrix");
    int n = m.rows();
    std::vector<T> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = T(1);
    Matrix<T> mk(n, n); // zero
    auto trace = [&](const Matrix<T>& x) {
        T t(0);
        for (int i = 0; i < n; ++i) t = t + x.at(i, i);
        return t;
    };
    for (int k = 1; k <= n; ++k) {
        Matrix<T> shift(n, n);
        for (int i = 0; i < n; ++i) shift.at(i, i) = c[static_cast<size_t>(n - k + 1)];
        mk = m * (mk + shift);
        c[static_cast<size_t>(n - k)] = T(-1) * (T(1) / T(k)) * trace(mk);
    }
    return c;
}

} // namespace opercalc

#endif
