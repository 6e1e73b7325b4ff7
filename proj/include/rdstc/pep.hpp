#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "rdstc/channel.hpp"
#include "rdstc/errors.hpp"
#include "rdstc/linalg.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/modulation.hpp"
#include "rdstc/randomized.hpp"
#include "rdstc/receiver.hpp"
#include "rdstc/stc.hpp"

namespace rdstc {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x) { return 0.5 * std::erfc(x * 0.7071067811865475244); }

/// Chernoff-style bound Q(x) <= (1/2) e^{-x^2/2}, valid for x >= 0.
inline double q_upper_bound(double x) {
    if (x < 0.0) throw DimensionError("q_upper_bound: bound requires x >= 0");
    return 0.5 * std::exp(-0.5 * x * x);
}

/// Inputs of one pairwise-error evaluation: two distinct codeword symbol
/// vectors, the total channel H = G_eq F, the equivalent randomization and
/// the received SNR.
struct PepInputs {
    ComplexMatrix s1;
    ComplexMatrix s2;
    ComplexMatrix h_total; // NT x N
    ComplexMatrix r_eq;    // NT x NT
    double gamma = 1.0;

    void validate() const {
        if (s1.rows() != s2.rows() || s1.cols() != 1 || s2.cols() != 1) {
            throw DimensionError("PepInputs: codewords must be equal-length column vectors");
        }
        if (frobenius_norm(s1 - s2) == 0.0) {
            throw DimensionError("PepInputs: codewords must be distinct");
        }
        if (h_total.cols() != s1.rows() || r_eq.rows() != r_eq.cols() || r_eq.cols() != h_total.rows()) {
            throw DimensionError("PepInputs: channel / randomization shapes inconsistent");
        }
        if (gamma < 0.0) throw DimensionError("PepInputs: gamma must be nonnegative");
    }
};

/// Conditional pairwise error probability
/// Q( sqrt(gamma/2) ||R_eq H (s1 - s2)||_F ).
inline double pep_exact_conditional(const PepInputs& in) {
    in.validate();
    const double arg = std::sqrt(in.gamma / 2.0) * frobenius_norm(in.r_eq * (in.h_total * (in.s1 - in.s2)));
    return q_function(arg);
}

namespace detail {

/// Exponent sum over both eigensystems:
///   Lambda_s, U from (s1-s2)(s1-s2)^H and Lambda_R, V from (R H U)^H (R H U);
/// sum_{m,n} lambda_R,m lambda_s,n |V(n,m)|^2 equals ||R H (s1-s2)||_F^2.
inline double pep_eigen_exponent_sum(const PepInputs& in) {
    const ComplexMatrix delta = in.s1 - in.s2;
    const HermitianEigenResult es = hermitian_eig_psd(delta * hermitian(delta));
    const ComplexMatrix m = in.r_eq * in.h_total * es.eigenvectors;
    const HermitianEigenResult er = hermitian_eig_psd(hermitian(m) * m);

    const std::size_t n = delta.rows();
    double sum = 0.0;
    for (std::size_t mm = 0; mm < n; ++mm) {
        for (std::size_t nn = 0; nn < n; ++nn) {
            sum += er.eigenvalues[mm] * es.eigenvalues[nn] * std::norm(er.eigenvectors(nn, mm));
        }
    }
    return sum;
}

} // namespace detail

/// Upper bound on the pairwise error probability of the randomized scheme:
/// (1/2) exp( -(gamma/4) sum_{m,n} lambda_R,m lambda_s,n |xi_{n,m}|^2 ).
inline double pep_upper_bound_randomized(const PepInputs& in) {
    in.validate();
    return 0.5 * std::exp(-0.25 * in.gamma * detail::pep_eigen_exponent_sum(in));
}

/// Traditional (unrandomized) space-time coding bound: the same expression
/// evaluated at R_eq = I, so the two coincide exactly when R_eq is identity.
inline double pep_upper_bound_traditional(PepInputs in) {
    in.r_eq = ComplexMatrix::identity(in.h_total.rows());
    return pep_upper_bound_randomized(in);
}

using PepEvaluator = std::function<double(const ComplexMatrix& s1, const ComplexMatrix& s2)>;

/// Union bound over a codebook: the sum of pairwise terms from the first
/// (reference) codeword to every other, capped at 1 for reporting.
inline double union_bound(const std::vector<ComplexMatrix>& codebook, const PepEvaluator& pep) {
    if (codebook.size() < 2) throw DimensionError("union_bound: need at least two codewords");
    double sum = 0.0;
    for (std::size_t i = 1; i < codebook.size(); ++i) {
        sum += pep(codebook[0], codebook[i]);
    }
    return std::min(sum, 1.0);
}

/// All 4^N QPSK symbol vectors of length N; the first entry is the all-zero
/// bit pattern, which serves as the union-bound reference codeword.
inline std::vector<ComplexMatrix> qpsk_codebook(std::size_t n_symbols) {
    const std::size_t count = std::size_t{1} << (2 * n_symbols);
    std::vector<ComplexMatrix> codebook;
    codebook.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        BitVector bits(2 * n_symbols);
        for (std::size_t b = 0; b < bits.size(); ++b) {
            bits[b] = static_cast<std::uint8_t>((idx >> (bits.size() - 1 - b)) & 1u);
        }
        codebook.push_back(qpsk_modulate(bits));
    }
    return codebook;
}

enum class BoundRandomization { mmse_closed_form, phase_diagonal };

/// One point of a channel-averaged bound curve; traditional and randomized
/// cases share the same channel draws.
struct BoundCurvePoint {
    double snr_db = 0.0;
    double traditional = 0.0;
    double randomized = 0.0;
    std::size_t channel_draws = 0;
};

/// Channel-averaged union bounds for the analysis scenario (relay path only).
/// Per draw, the effective SNR folds the AF gain and the amplified-noise
/// factor of the evaluated scheme into gamma:
///   gamma_eff = sigma_s^2 a^2 / ( sigma^2 (1 + ||R_eq G_eq A||_F^2) ),
/// which makes Q(sqrt(gamma_eff/2) ||R_eq H delta||) the exact conditional
/// pairwise error of the white-noise model at that draw. The randomized case
/// uses the closed-form MMSE matrix refined by two filter/matrix alternations
/// (or a drawn phase-diagonal matrix, for reporting).
inline std::vector<BoundCurvePoint> average_bound_curve(
    const SystemDims& dims, const std::vector<double>& snr_grid_db, std::size_t n_channel_draws,
    std::uint64_t seed, BoundRandomization kind = BoundRandomization::mmse_closed_form) {
    if (n_channel_draws == 0) throw ConfigError("average_bound_curve: need at least one channel draw");
    SystemDims bound_dims = dims;
    bound_dims.direct_link = false; // analysis scenario ignores the direct link
    bound_dims.validate();

    const std::vector<ComplexMatrix> codebook = qpsk_codebook(bound_dims.n_antennas);
    std::vector<BoundCurvePoint> curve;
    curve.reserve(snr_grid_db.size());

    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
        const double snr_db = snr_grid_db[si];
        const NoiseModel noise{1.0 / snr_to_gamma(snr_db)};
        const AmplifyGain gain = amplify_gain(noise, 1.0, bound_dims.n_antennas);

        BoundCurvePoint point;
        point.snr_db = snr_db;
        point.channel_draws = n_channel_draws;

        for (std::size_t draw = 0; draw < n_channel_draws; ++draw) {
            RngStream rng = RngStream::derive(seed, {0xB0B0ull, si, draw});
            const ChannelSet cs = draw_channel_set(bound_dims, rng);

            const std::size_t nt = bound_dims.n_antennas * bound_dims.codeword_slots;
            const RandomizedMatrix identity_r =
                make_randomized(ComplexMatrix::identity(bound_dims.n_antennas), bound_dims.codeword_slots);
            std::vector<RandomizedMatrix> r_ident(bound_dims.n_relays, identity_r);
            const EquivalentModel base = assemble_full_model(cs, r_ident, gain, bound_dims, noise);
            const ComplexMatrix h_pep = base.relays[0].stc.g_eq * cs.f[0];

            // Traditional case: R_eq = I.
            {
                const double x2 = frobenius_norm(base.relays[0].x);
                const double gamma_eff = gain.scalar_gain * gain.scalar_gain /
                                         (noise.sigma2 * (1.0 + x2 * x2));
                PepInputs in{codebook[0], codebook[1], h_pep, ComplexMatrix::identity(nt), gamma_eff};
                point.traditional += union_bound(codebook, [&](const ComplexMatrix& a, const ComplexMatrix& b) {
                    in.s1 = a;
                    in.s2 = b;
                    return pep_upper_bound_randomized(in);
                });
            }

            // Randomized case.
            RandomizedMatrix r_opt = identity_r;
            if (kind == BoundRandomization::mmse_closed_form) {
                std::vector<RandomizedMatrix> current(bound_dims.n_relays, identity_r);
                for (int iter = 0; iter < 3; ++iter) {
                    const EquivalentModel model = assemble_full_model(cs, current, gain, bound_dims, noise);
                    auto [auto_c, cross_c] = analytic_correlations(model);
                    const MmseFilter filter = mmse_filter(std::move(auto_c), std::move(cross_c));
                    current.assign(bound_dims.n_relays,
                                   mmse_randomized_closed_form(filter.w, model.relays[0].c, noise));
                }
                r_opt = current[0];
            } else {
                r_opt = init_randomized(bound_dims, rng, RandomizedInit::phase_diagonal);
            }
            {
                std::vector<RandomizedMatrix> r_used(bound_dims.n_relays, r_opt);
                const EquivalentModel model = assemble_full_model(cs, r_used, gain, bound_dims, noise);
                const double x2 = frobenius_norm(model.relays[0].x);
                const double gamma_eff = gain.scalar_gain * gain.scalar_gain /
                                         (noise.sigma2 * (1.0 + x2 * x2));
                PepInputs in{codebook[0], codebook[1], h_pep, r_opt.r_eq, gamma_eff};
                point.randomized += union_bound(codebook, [&](const ComplexMatrix& a, const ComplexMatrix& b) {
                    in.s1 = a;
                    in.s2 = b;
                    return pep_upper_bound_randomized(in);
                });
            }
        }
        point.traditional /= static_cast<double>(n_channel_draws);
        point.randomized /= static_cast<double>(n_channel_draws);
        curve.push_back(point);
    }
    return curve;
}

} // namespace rdstc
