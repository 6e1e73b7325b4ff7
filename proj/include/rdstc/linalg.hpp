#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rdstc/errors.hpp"
#include "rdstc/matrix.hpp"

namespace rdstc {

/// Count of Hermitian solves performed process-wide. Exposed so tests can
/// assert that hot adaptation paths never fall back to a matrix inversion.
inline std::atomic<std::uint64_t>& linalg_solve_count() {
    static std::atomic<std::uint64_t> count{0};
    return count;
}

/// Solves A X = B for Hermitian positive definite A via Cholesky.
/// `diagonal_loading` is added to the diagonal before factoring; pass a small
/// positive value to regularize nearly singular correlation matrices.
inline ComplexMatrix solve_hermitian(const ComplexMatrix& a, const ComplexMatrix& b,
                                     double diagonal_loading = 0.0) {
    if (a.rows() != a.cols()) throw DimensionError("solve_hermitian: matrix not square");
    if (a.rows() != b.rows()) throw DimensionError("solve_hermitian: rhs row count differs");
    linalg_solve_count().fetch_add(1, std::memory_order_relaxed);

    const std::size_t n = a.rows();
    ComplexMatrix l(n, n);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)) + diagonal_loading);
    const double pivot_tol = std::max(1e-300, max_diag * static_cast<double>(n) * 1e-15);

    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real() + diagonal_loading;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > pivot_tol)) {
            throw SingularMatrixError("solve_hermitian: matrix not positive definite", d);
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cdouble s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }

    // Forward substitution L Y = B, then backward L^H X = Y.
    ComplexMatrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            cdouble s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cdouble s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x(k, c);
            x(ii, c) = s / l(ii, ii);
        }
    }
    return x;
}

/// Eigen-decomposition of a Hermitian matrix.
/// `eigenvalues` are sorted descending; the columns of `eigenvectors` are the
/// matching unit-norm eigenvectors, so A == V diag(lambda) V^H.
struct HermitianEigenResult {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Cyclic Jacobi eigensolver for Hermitian inputs. Inputs asymmetric beyond
/// 1e-10 relative Frobenius error are rejected.
inline HermitianEigenResult hermitian_eig(const ComplexMatrix& input) {
    if (input.rows() != input.cols()) throw DimensionError("hermitian_eig: matrix not square");
    const std::size_t n = input.rows();

    const double scale = frobenius_norm(input);
    const double asym = frobenius_norm(input - hermitian(input));
    if (asym > 1e-10 * std::max(scale, 1e-30)) {
        throw NonHermitianError("hermitian_eig: input is not Hermitian");
    }

    // Symmetrize to kill representational drift, then rotate.
    ComplexMatrix a = input;
    a += hermitian(input);
    a *= cdouble(0.5, 0.0);
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double off_tol = std::max(scale, 1e-300) * 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(a(p, q));
        }
        if (std::sqrt(off) <= off_tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cdouble apq = a(p, q);
                const double g = std::abs(apq);
                if (g <= off_tol / static_cast<double>(n)) continue;

                const cdouble phase = apq / g; // e^{j phi}
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = -sign / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cdouble sp = s * phase;             // s e^{j phi}
                const cdouble spc = s * std::conj(phase); // s e^{-j phi}

                // A <- J^H A J with the rotation acting on rows/cols p,q.
                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + spc * akq;
                    a(k, q) = -sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + sp * aqk;
                    a(q, k) = -spc * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + spc * vkq;
                    v(k, q) = -sp * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return diag[i] > diag[j]; });

    HermitianEigenResult res;
    res.eigenvalues.resize(n);
    res.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        res.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, j) = v(i, order[j]);
    }
    return res;
}

/// Variant for Gram-matrix inputs: eigenvalues in [-1e-10, 0) are clamped to
/// zero, anything more negative signals a non-Gram input and is rejected.
inline HermitianEigenResult hermitian_eig_psd(const ComplexMatrix& input) {
    HermitianEigenResult res = hermitian_eig(input);
    for (double& lambda : res.eigenvalues) {
        if (lambda < 0.0) {
            if (lambda < -1e-10) {
                throw NotPsdError("hermitian_eig_psd: eigenvalue below PSD tolerance");
            }
            lambda = 0.0;
        }
    }
    return res;
}

} // namespace rdstc
