#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rdstc/channel.hpp"
#include "rdstc/errors.hpp"
#include "rdstc/linalg.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/rng.hpp"

namespace rdstc {

/// The N x N relay-side randomization together with its block-diagonal
/// NT x NT expansion (T identical blocks, one per codeword slot).
struct RandomizedMatrix {
    ComplexMatrix r;
    ComplexMatrix r_eq;
};

/// T identical diagonal copies of R.
inline ComplexMatrix expand_block_diag(const ComplexMatrix& r, std::size_t t) {
    if (r.rows() != r.cols()) throw DimensionError("expand_block_diag: R must be square");
    return block_diag(std::vector<ComplexMatrix>(t, r));
}

inline RandomizedMatrix make_randomized(ComplexMatrix r, std::size_t t) {
    RandomizedMatrix rm;
    rm.r_eq = expand_block_diag(r, t);
    rm.r = std::move(r);
    return rm;
}

enum class RandomizedInit { identity, phase_diagonal, random_unitary, gaussian };

/// Initial randomization ensembles. identity / phase_diagonal / random_unitary
/// all satisfy ||R||_F^2 = N; the gaussian ensemble draws i.i.d. CN(0,1)
/// entries and is left unnormalized, matching the unconstrained use of R
/// throughout (no power renormalization is ever applied to R).
inline RandomizedMatrix init_randomized(const SystemDims& dims, RngStream& rng, RandomizedInit kind) {
    const std::size_t n = dims.n_antennas;
    ComplexMatrix r(n, n);
    switch (kind) {
        case RandomizedInit::identity:
            r = ComplexMatrix::identity(n);
            break;
        case RandomizedInit::phase_diagonal:
            for (std::size_t i = 0; i < n; ++i) {
                const double theta = 6.283185307179586476925287 * rng.next_unit();
                r(i, i) = cdouble(std::cos(theta), std::sin(theta));
            }
            break;
        case RandomizedInit::random_unitary: {
            // QR of a Gaussian matrix by modified Gram-Schmidt; the R factor's
            // diagonal comes out real positive, so Q is Haar distributed.
            ComplexMatrix z = complex_gaussian_matrix(n, n, 1.0, rng);
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < j; ++k) {
                    cdouble proj = 0.0;
                    for (std::size_t i = 0; i < n; ++i) proj += std::conj(z(i, k)) * z(i, j);
                    for (std::size_t i = 0; i < n; ++i) z(i, j) -= proj * z(i, k);
                }
                double nrm = 0.0;
                for (std::size_t i = 0; i < n; ++i) nrm += std::norm(z(i, j));
                nrm = std::sqrt(nrm);
                for (std::size_t i = 0; i < n; ++i) z(i, j) /= nrm;
            }
            r = z;
            break;
        }
        case RandomizedInit::gaussian:
            r = complex_gaussian_matrix(n, n, 1.0, rng);
            break;
    }
    return make_randomized(std::move(r), dims.codeword_slots);
}

/// Closed-form MMSE randomization given the receive filter W (NT x N) and the
/// combined channel C (NT x N):
///   R = (W^H E[r~ r~^H] W)^{-1} E[s r~^H] W
/// with r~ = C s + C n_SR, so E[r~ r~^H] = (sigma_s^2 + sigma^2) C C^H and
/// E[s r~^H] = sigma_s^2 C^H. The bracket is N x N, so the result is already
/// the N x N block and only needs expansion.
inline RandomizedMatrix mmse_randomized_closed_form(const ComplexMatrix& w, const ComplexMatrix& c,
                                                    const NoiseModel& noise, double sigma_s2 = 1.0,
                                                    double diagonal_loading = 1e-10) {
    if (w.rows() != c.rows() || w.cols() != c.cols()) {
        throw DimensionError("mmse_randomized_closed_form: W and C must both be NT x N");
    }
    const std::size_t n = c.cols();
    if (c.rows() % n != 0) throw DimensionError("mmse_randomized_closed_form: NT not a multiple of N");
    const std::size_t t = c.rows() / n;

    const ComplexMatrix whc = hermitian(w) * c; // N x N
    ComplexMatrix bracket = whc * hermitian(whc);
    bracket *= cdouble(sigma_s2 + noise.sigma2, 0.0);
    const ComplexMatrix rhs = hermitian(whc) * cdouble(sigma_s2, 0.0);
    ComplexMatrix r = solve_hermitian(bracket, rhs, diagonal_loading);
    return make_randomized(std::move(r), t);
}

/// Stochastic-gradient state for the adaptive randomization.
struct ArmoState {
    RandomizedMatrix r;
    double mu = 0.01;
    long iteration = 0;
    double last_error_norm = 0.0;
};

/// Instantaneous gradient of ||s - W^H(R_eq C s + n)||^2 with respect to R*,
/// under the tied-block parameterization R_eq = blkdiag(R, ..., R):
/// the full NT x NT gradient is -(W e)(C s)^H and the tied gradient is the
/// sum of its T diagonal N x N blocks. The block *average* is returned (the
/// factor T folds into the step size); callers stepping along -gradient get
/// guaranteed instantaneous descent for small steps.
/// W must cover the relay rows only (NT x N), matching C.
inline ComplexMatrix armo_gradient(const ComplexMatrix& e, const ComplexMatrix& s,
                                   const ComplexMatrix& c, const ComplexMatrix& w) {
    const std::size_t n = s.rows();
    if (e.rows() != n || e.cols() != 1 || s.cols() != 1) {
        throw DimensionError("armo_gradient: e and s must be N x 1");
    }
    if (c.rows() != w.rows() || c.cols() != n || w.cols() != n || c.rows() % n != 0) {
        throw DimensionError("armo_gradient: W and C must be NT x N");
    }
    const std::size_t t = c.rows() / n;

    const ComplexMatrix we = w * e; // NT x 1
    const ComplexMatrix cs = c * s; // NT x 1
    ComplexMatrix grad(n, n);
    const double inv_t = 1.0 / static_cast<double>(t);
    for (std::size_t blk = 0; blk < t; ++blk) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                grad(i, j) -= inv_t * we(blk * n + i, 0) * std::conj(cs(blk * n + j, 0));
            }
        }
    }
    return grad;
}

namespace detail {

inline void finish_armo_step(ArmoState& state, const ComplexMatrix& e, ComplexMatrix r_new,
                             std::size_t t) {
    if (!r_new.is_finite()) {
        throw DivergenceError("armo_step: update produced a non-finite matrix", state.iteration + 1);
    }
    state.r = make_randomized(std::move(r_new), t);
    state.iteration += 1;
    state.last_error_norm = frobenius_norm(e);
}

} // namespace detail

/// Plain stochastic-gradient update R <- R + mu * (e s^H-style positive term),
/// i.e. one step against armo_gradient. The step involves no matrix solve.
inline ArmoState armo_step(ArmoState state, const ComplexMatrix& e, const ComplexMatrix& s,
                           const ComplexMatrix& c, const ComplexMatrix& w) {
    const std::size_t t = c.rows() / std::max<std::size_t>(s.rows(), 1);
    const ComplexMatrix grad = armo_gradient(e, s, c, w);
    ComplexMatrix r_new = state.r.r - cdouble(state.mu, 0.0) * grad;
    detail::finish_armo_step(state, e, r_new, t);
    return state;
}

/// Line-search variant: steps along the same direction but scales it by the
/// exact minimizer of the sampled quadratic cost, relaxed by mu in (0, 1].
/// Stable for ill-conditioned draws where a fixed mu would diverge; still
/// solve-free (one scalar division).
inline ArmoState armo_step_normalized(ArmoState state, const ComplexMatrix& e, const ComplexMatrix& s,
                                      const ComplexMatrix& c, const ComplexMatrix& w) {
    const std::size_t n = s.rows();
    const std::size_t t = c.rows() / std::max<std::size_t>(n, 1);
    const ComplexMatrix direction = cdouble(-1.0, 0.0) * armo_gradient(e, s, c, w);

    // q = W^H blkdiag(direction) C s; optimal step is Re<q,e>/||q||^2.
    const ComplexMatrix cs = c * s;
    ComplexMatrix dcs(c.rows(), 1);
    for (std::size_t blk = 0; blk < t; ++blk) {
        for (std::size_t i = 0; i < n; ++i) {
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += direction(i, j) * cs(blk * n + j, 0);
            dcs(blk * n + i, 0) = acc;
        }
    }
    const ComplexMatrix q = hermitian(w) * dcs;
    double qq = 0.0;
    cdouble qe = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) {
        qq += std::norm(q(i, 0));
        qe += std::conj(q(i, 0)) * e(i, 0);
    }
    ComplexMatrix r_new = state.r.r;
    if (qq > 1e-300) {
        const double alpha = state.mu * qe.real() / qq;
        r_new += cdouble(alpha, 0.0) * direction;
    }
    detail::finish_armo_step(state, e, r_new, t);
    return state;
}

/// Idealized error-free, delay-free feedback: the relay receives exactly the
/// matrix the destination computed. Kept as a seam where feedback error or
/// delay models would plug in.
inline RandomizedMatrix feedback_to_relay(const RandomizedMatrix& r) { return r; }

} // namespace rdstc
