#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "rdstc/errors.hpp"
#include "rdstc/linalg.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/modulation.hpp"
#include "rdstc/stc.hpp"

namespace rdstc {

/// Which effective-noise covariance the filter assumes for the relay rows:
/// `paper_white` uses the row-uniform sigma^2 (1 + sum ||R_eq G_eq A||_F^2),
/// `exact_colored` uses sigma^2 (I + sum X X^H).
enum class NoiseCov { paper_white, exact_colored };

/// Joint linear MMSE receive filter W solving autocorr W = crosscorr,
/// with the correlation matrices it was built from.
struct MmseFilter {
    ComplexMatrix w;
    ComplexMatrix autocorr;
    ComplexMatrix crosscorr;
};

/// E[r r^H] = sigma_s^2 D D^H + noise covariance, E[r s^H] = sigma_s^2 D,
/// computed from perfect channel knowledge.
inline std::pair<ComplexMatrix, ComplexMatrix> analytic_correlations(
    const EquivalentModel& model, NoiseCov mode = NoiseCov::paper_white) {
    ComplexMatrix autocorr = model.d_d * hermitian(model.d_d);
    autocorr *= cdouble(model.sigma_s2, 0.0);
    if (mode == NoiseCov::paper_white) {
        for (std::size_t i = 0; i < model.stack_rows(); ++i) {
            autocorr(i, i) += model.row_noise_variance[i];
        }
    } else {
        autocorr += exact_noise_covariance(model);
    }
    ComplexMatrix crosscorr = model.d_d;
    crosscorr *= cdouble(model.sigma_s2, 0.0);
    return {std::move(autocorr), std::move(crosscorr)};
}

/// Sample-average estimator behind the same interface: feeds on (r, s) pairs
/// from a caller-supplied generator, e.g. simulated noisy receptions.
inline std::pair<ComplexMatrix, ComplexMatrix> sample_correlations(
    std::size_t n_samples, const std::function<std::pair<ComplexMatrix, ComplexMatrix>()>& draw) {
    if (n_samples == 0) throw DimensionError("sample_correlations: need at least one sample");
    auto [r0, s0] = draw();
    ComplexMatrix autocorr = r0 * hermitian(r0);
    ComplexMatrix crosscorr = r0 * hermitian(s0);
    for (std::size_t i = 1; i < n_samples; ++i) {
        auto [r, s] = draw();
        autocorr += r * hermitian(r);
        crosscorr += r * hermitian(s);
    }
    const cdouble inv(1.0 / static_cast<double>(n_samples), 0.0);
    autocorr *= inv;
    crosscorr *= inv;
    return {std::move(autocorr), std::move(crosscorr)};
}

/// W = autocorr^{-1} crosscorr via a regularized Hermitian solve.
inline MmseFilter mmse_filter(ComplexMatrix autocorr, ComplexMatrix crosscorr,
                              double diagonal_loading = 1e-10) {
    MmseFilter f;
    f.w = solve_hermitian(autocorr, crosscorr, diagonal_loading);
    f.autocorr = std::move(autocorr);
    f.crosscorr = std::move(crosscorr);
    return f;
}

/// Filter output and hard decisions; the error vector e = s - W^H r is only
/// produced in training mode, when the pilot s is supplied.
struct Detection {
    ComplexMatrix estimates;
    BitVector bits;
    std::optional<ComplexMatrix> error;
};

inline Detection filter_and_detect(const MmseFilter& filter, const ComplexMatrix& r,
                                   const ComplexMatrix* pilot = nullptr) {
    if (r.rows() != filter.w.rows() || r.cols() != 1) {
        throw DimensionError("filter_and_detect: received vector height mismatch");
    }
    Detection det;
    det.estimates = hermitian(filter.w) * r;
    det.bits = qpsk_demodulate(det.estimates);
    if (pilot != nullptr) {
        det.error = *pilot - det.estimates;
    }
    return det;
}

} // namespace rdstc
