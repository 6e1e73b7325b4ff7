#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "rdstc/errors.hpp"
#include "rdstc/rng.hpp"

namespace rdstc {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major. The single carrier type for channels,
/// codewords, filters and bounds inputs; column vectors are n x 1 matrices.
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cdouble(0.0, 0.0)) {}

    /// Row-major initializer, e.g. ComplexMatrix(2, 2, {a, b, c, d}).
    ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cdouble> entries)
        : rows_(rows), cols_(cols), data_(entries) {
        if (data_.size() != rows * cols) {
            throw DimensionError("initializer size does not match matrix shape");
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    /// Flat row-major access, handy for vectors.
    cdouble& operator[](std::size_t i) { return data_[i]; }
    const cdouble& operator[](std::size_t i) const { return data_[i]; }

    bool is_finite() const {
        for (const cdouble& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    ComplexMatrix& operator*=(cdouble s) {
        for (cdouble& z : data_) z *= s;
        return *this;
    }

  private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionError("matrix shapes differ");
        }
    }

    std::size_t rows_, cols_;
    std::vector<cdouble> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(cdouble s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, cdouble s) { return a *= s; }

/// Standard complex matrix product.
inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions differ");
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

/// Conjugate transpose.
inline ComplexMatrix hermitian(const ComplexMatrix& a) {
    ComplexMatrix h(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            h(j, i) = std::conj(a(i, j));
        }
    }
    return h;
}

inline ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::conj(a[i]);
    return c;
}

inline cdouble trace(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("trace: matrix not square");
    cdouble t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

/// sqrt(Tr(A^H A)); zero iff A is all-zero.
inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i]);
    return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

/// Block-diagonal assembly, zeros elsewhere. Requires at least one block.
inline ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks) {
    if (blocks.empty()) throw DimensionError("block_diag: no blocks given");
    std::size_t rows = 0, cols = 0;
    for (const ComplexMatrix& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    ComplexMatrix out(rows, cols);
    std::size_t r0 = 0, c0 = 0;
    for (const ComplexMatrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(r0 + i, c0 + j) = b(i, j);
            }
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    return out;
}

/// Matrix with i.i.d. CN(0, variance) entries, reproducible from the stream.
inline ComplexMatrix complex_gaussian_matrix(std::size_t rows, std::size_t cols, double variance,
                                             RngStream& rng) {
    ComplexMatrix m(rows, cols);
    if (variance == 0.0) return m;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.next_cgauss(variance);
    return m;
}

} // namespace rdstc
