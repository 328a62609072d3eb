#ifndef TMOTIVE_MATRIX_HPP
#define TMOTIVE_MATRIX_HPP

#include <functional>
#include <utility>
#include <vector>

#include "tate.hpp"

namespace tmotive {

// Cheap structural zero tests used to skip work in products.
inline bool structurally_zero(const RamSeries& x) { return x.is_zero() && x.exact(); }
inline bool structurally_zero(const TatePoly& x) { return x.is_polynomial() && x.coeffs().empty(); }
inline bool structurally_zero(const ExactCoef& x) { return x.is_zero(); }
inline bool structurally_zero(const KtPoly& x) { return x.is_zero(); }
inline bool structurally_zero(const RatFunc& x) { return x.is_zero(); }
inline bool structurally_zero(const Fq& x) { return x.is_zero(); }

/**
 * Dense row-major matrix over a commutative ring. Entry types need a zero
 * value with the right context, so every matrix keeps a prototype zero.
 */
template <class T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& zero)
        : rows_(rows), cols_(cols), data_(rows * cols, zero), zero_(zero) {}

    static Matrix identity(std::size_t n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const T& zero() const noexcept { return zero_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw PreconditionViolated("matrix shape mismatch in product");
        Matrix r(a.rows_, b.cols_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                T s = a.zero_;
                bool any = false;
                for (std::size_t k = 0; k < a.cols_; ++k) {
                    if (structurally_zero(a(i, k)) || structurally_zero(b(k, j))) continue;
                    if (!any) {
                        s = a(i, k) * b(k, j);
                        any = true;
                    } else {
                        s = s + a(i, k) * b(k, j);
                    }
                }
                r(i, j) = std::move(s);
            }
        return r;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) { return a.zip(b, [](const T& x, const T& y) { return x + y; }); }
    friend Matrix operator-(const Matrix& a, const Matrix& b) { return a.zip(b, [](const T& x, const T& y) { return x - y; }); }

    template <class F>
    auto map(F f) const {
        using U = decltype(f(zero_));
        Matrix<U> r(rows_, cols_, f(zero_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix r(nr, nc, zero_);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    template <class Pred>
    bool all_of(Pred p) const {
        for (const auto& x : data_)
            if (!p(x)) return false;
        return true;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
    T zero_{};

    template <class Op>
    Matrix zip(const Matrix& b, Op op) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw PreconditionViolated("matrix shape mismatch");
        Matrix r(rows_, cols_, zero_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = op(data_[i], b.data_[i]);
        return r;
    }
};

/**
 * The d-matrix d_{t,n+1}[M]: block (i, i+k) holds the k-th hyperderivative of M,
 * blocks below the diagonal vanish. deriv(x, k) supplies the k-th derivative.
 */
template <class T, class Deriv>
Matrix<T> dmatrix(const Matrix<T>& base, std::size_t n, Deriv deriv) {
    std::size_t r = base.rows(), c = base.cols();
    Matrix<T> out(r * (n + 1), c * (n + 1), base.zero());
    for (std::size_t k = 0; k <= n; ++k) {
        Matrix<T> dk = k == 0 ? base : base.map([&](const T& x) { return deriv(x, k); });
        for (std::size_t i = 0; i + k <= n; ++i) out.set_block(i * r, (i + k) * c, dk);
    }
    return out;
}

// Determinant by cofactor expansion; intended for the small ranks used here.
template <class T>
T determinant(const Matrix<T>& m) {
    std::size_t n = m.rows();
    if (n != m.cols()) throw PreconditionViolated("determinant of a non-square matrix");
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    T det = m.zero();
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
        if (structurally_zero(m(0, j))) continue;
        Matrix<T> minor(n - 1, n - 1, m.zero());
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = m(i, k);
        T term = m(0, j) * determinant(minor);
        if (!any) {
            det = j % 2 == 0 ? term : m.zero() - term;
            any = true;
        } else {
            det = j % 2 == 0 ? det + term : det - term;
        }
    }
    return det;
}

// Adjugate by cofactors, for small matrices.
template <class T>
Matrix<T> adjugate(const Matrix<T>& m) {
    std::size_t n = m.rows();
    Matrix<T> adj(n, n, m.zero());
    if (n == 1) {
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix<T> minor(n - 1, n - 1, m.zero());
            for (std::size_t a = 0, ra = 0; a < n; ++a) {
                if (a == i) continue;
                for (std::size_t b = 0, cb = 0; b < n; ++b)
                    if (b != j) minor(ra, cb++) = m(a, b);
                ++ra;
            }
            T c = determinant(minor);
            adj(j, i) = (i + j) % 2 == 0 ? c : m.zero() - c;
        }
    return adj;
}

// Inverse over a field-like entry type (supports /, is_zero()).
template <class T>
Matrix<T> inverse_field(const Matrix<T>& m, const T& one) {
    std::size_t n = m.rows();
    if (n != m.cols()) throw PreconditionViolated("inverse of a non-square matrix");
    Matrix<T> a = m, inv = Matrix<T>::identity(n, m.zero(), one);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t i = col; i < n; ++i)
            if (!a(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) throw DivisionByZeroWithinPrecision("singular matrix");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        T pinv = one / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) = a(col, j) * pinv;
            inv(col, j) = inv(col, j) * pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col).is_zero()) continue;
            T f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = a(i, j) - f * a(col, j);
                inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

/**
 * Inverse of a matrix of t-power series. Small matrices go through the
 * adjugate with a unit-determinant check; larger ones through Gauss-Jordan
 * with pivots whose constant t-coefficient is a unit.
 */
inline Matrix<TatePoly> inverse_tate(const Matrix<TatePoly>& m, long t_cap, long series_cap) {
    std::size_t n = m.rows();
    if (n <= 3) {
        TatePoly d = determinant(m);
        TatePoly di = d.inverse(t_cap, series_cap);
        Matrix<TatePoly> adj = n == 1 ? Matrix<TatePoly>(1, 1, m.zero()) : adjugate(m);
        if (n == 1) adj(0, 0) = TatePoly::constant(RamSeries::constant(m(0, 0).field(), m(0, 0).ram(), 1));
        return adj.map([&](const TatePoly& x) { return x * di; });
    }
    const TatePoly& z = m.zero();
    TatePoly one = TatePoly::constant(RamSeries::constant(m(0, 0).field(), m(0, 0).ram(), 1));
    Matrix<TatePoly> a = m, inv = Matrix<TatePoly>::identity(n, z, one);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t i = col; i < n; ++i)
            if (!a(i, col).coeffs().empty() && !a(i, col).coeffs()[0].is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) throw DivisionByZeroWithinPrecision("matrix is not invertible over the power series ring");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        TatePoly pinv = a(col, col).inverse(t_cap, series_cap);
        for (std::size_t j = 0; j < n; ++j) {
            if (!structurally_zero(a(col, j))) a(col, j) = a(col, j) * pinv;
            if (!structurally_zero(inv(col, j))) inv(col, j) = inv(col, j) * pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || structurally_zero(a(i, col))) continue;
            TatePoly f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                if (!structurally_zero(a(col, j))) a(i, j) = a(i, j) - f * a(col, j);
                if (!structurally_zero(inv(col, j))) inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace tmotive

#endif
