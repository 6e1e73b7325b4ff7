#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rdstc/channel.hpp"
#include "rdstc/errors.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/randomized.hpp"

namespace rdstc {

/// Fixed amplify-and-forward gain A = a I applied at each relay.
struct AmplifyGain {
    double scalar_gain = 1.0;
    ComplexMatrix gain_matrix;
};

/// a = sqrt(P / (P + sigma^2)), the fixed-gain AF normalization: a relay
/// antenna receiving signal power P plus noise retransmits at most P.
inline AmplifyGain amplify_gain(const NoiseModel& noise, double symbol_power, std::size_t n_antennas) {
    if (!(symbol_power > 0.0)) throw ConfigError("amplify_gain: symbol power must be positive");
    AmplifyGain g;
    g.scalar_gain = std::sqrt(symbol_power / (symbol_power + noise.sigma2));
    g.gain_matrix = ComplexMatrix::identity(n_antennas);
    g.gain_matrix *= cdouble(g.scalar_gain, 0.0);
    return g;
}

/// N x T space-time codeword; columns are time slots.
struct StcCodeword {
    ComplexMatrix m;
};

/// Alamouti codeword M = [[s1, -s2*], [s2, s1*]] for a length-2 input.
inline StcCodeword alamouti_encode(const ComplexMatrix& s_tilde) {
    if (s_tilde.rows() != 2 || s_tilde.cols() != 1) {
        throw DimensionError("alamouti_encode: input must be a length-2 column vector");
    }
    StcCodeword cw;
    cw.m = ComplexMatrix(2, 2);
    cw.m(0, 0) = s_tilde(0, 0);
    cw.m(1, 0) = s_tilde(1, 0);
    cw.m(0, 1) = -std::conj(s_tilde(1, 0));
    cw.m(1, 1) = std::conj(s_tilde(0, 0));
    return cw;
}

enum class StcScheme { alamouti };

/// Equivalent vectorized channel of a space-time scheme behind channel G:
/// applying `conj_mask` to the slot-stacked received matrix vec(G M(s))
/// yields g_eq * s exactly. The mask records which stacked rows were
/// conjugated so noise bookkeeping stays auditable.
struct EquivalentStc {
    ComplexMatrix g_eq;                 // NT x N
    std::vector<std::uint8_t> conj_mask; // length NT
};

/// Stacks the columns of an N x T received matrix into an NT x 1 vector,
/// conjugating the rows flagged by the mask.
inline ComplexMatrix masked_stack(const ComplexMatrix& received, const std::vector<std::uint8_t>& conj_mask) {
    if (conj_mask.size() != received.size()) {
        throw DimensionError("masked_stack: mask length must equal entry count");
    }
    ComplexMatrix out(received.size(), 1);
    std::size_t row = 0;
    for (std::size_t t = 0; t < received.cols(); ++t) {
        for (std::size_t i = 0; i < received.rows(); ++i, ++row) {
            out(row, 0) = conj_mask[row] ? std::conj(received(i, t)) : received(i, t);
        }
    }
    return out;
}

inline EquivalentStc build_equivalent_channel(const ComplexMatrix& g, StcScheme scheme) {
    if (scheme != StcScheme::alamouti) throw DimensionError("build_equivalent_channel: unsupported scheme");
    if (g.rows() != 2 || g.cols() != 2) {
        throw DimensionError("build_equivalent_channel: Alamouti needs a 2x2 channel");
    }
    // Slot 1 passes G through; slot 2 is conjugated, turning G M(s) columns
    // into [G; conj(G) J] s with J = [[0,-1],[1,0]].
    EquivalentStc eq;
    eq.g_eq = ComplexMatrix(4, 2);
    eq.g_eq(0, 0) = g(0, 0);
    eq.g_eq(0, 1) = g(0, 1);
    eq.g_eq(1, 0) = g(1, 0);
    eq.g_eq(1, 1) = g(1, 1);
    eq.g_eq(2, 0) = std::conj(g(0, 1));
    eq.g_eq(2, 1) = -std::conj(g(0, 0));
    eq.g_eq(3, 0) = std::conj(g(1, 1));
    eq.g_eq(3, 1) = -std::conj(g(1, 0));
    eq.conj_mask = {0, 0, 1, 1};
    return eq;
}

/// One relay's contribution to the vectorized model.
struct RelayPath {
    EquivalentStc stc;   // g_eq and conjugation mask
    ComplexMatrix c;     // g_eq * A * F        (NT x N)
    ComplexMatrix r_eq_c; // R_eq * c            (NT x N), the signal block
    ComplexMatrix x;     // R_eq * g_eq * A     (NT x N), relay-noise propagation
};

/// Vectorized two-hop model: r = d_d * s + effective noise, with the direct
/// block (when present) stacked above the summed relay blocks.
struct EquivalentModel {
    SystemDims dims;
    double sigma2 = 1.0;
    double sigma_s2 = 1.0;
    std::vector<RelayPath> relays;
    ComplexMatrix d_d;                   // stack height x N
    std::vector<std::uint8_t> conj_mask; // relay-block rows
    std::vector<double> row_noise_variance; // white model, per stacked row
    std::size_t direct_rows = 0;
    std::size_t relay_rows = 0;

    std::size_t stack_rows() const { return direct_rows + relay_rows; }
};

/// Builds the model of one block from its channel set, the per-relay
/// randomized matrices and the AF gain. Relay rows record the white-noise
/// variance sigma^2 (1 + sum_k ||R_eq G_eq A||_F^2); direct rows sigma^2.
inline EquivalentModel assemble_full_model(const ChannelSet& cs,
                                           const std::vector<RandomizedMatrix>& randomized,
                                           const AmplifyGain& gain, const SystemDims& dims,
                                           const NoiseModel& noise) {
    dims.validate();
    const std::size_t n = dims.n_antennas;
    const std::size_t nt = n * dims.codeword_slots;
    if (cs.f.size() != dims.n_relays || cs.g.size() != dims.n_relays) {
        throw DimensionError("assemble_full_model: channel set relay count mismatch");
    }
    if (randomized.size() != dims.n_relays) {
        throw DimensionError("assemble_full_model: one randomized matrix per relay required");
    }

    EquivalentModel model;
    model.dims = dims;
    model.sigma2 = noise.sigma2;
    model.direct_rows = dims.direct_link ? n : 0;
    model.relay_rows = dims.n_relays > 0 ? nt : 0;
    model.d_d = ComplexMatrix(model.stack_rows(), n);

    if (dims.direct_link) {
        if (cs.h.rows() != n || cs.h.cols() != n) {
            throw DimensionError("assemble_full_model: direct channel must be N x N");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) model.d_d(i, j) = cs.h(i, j);
        }
    }

    double amplified_noise_gain = 0.0; // sum_k ||R_eq G_eq A||_F^2
    for (std::size_t k = 0; k < dims.n_relays; ++k) {
        RelayPath path;
        path.stc = build_equivalent_channel(cs.g[k], StcScheme::alamouti);
        if (randomized[k].r_eq.rows() != nt) {
            throw DimensionError("assemble_full_model: randomized matrix expansion is not NT x NT");
        }
        path.c = path.stc.g_eq * gain.gain_matrix * cs.f[k];
        path.r_eq_c = randomized[k].r_eq * path.c;
        path.x = randomized[k].r_eq * path.stc.g_eq * gain.gain_matrix;
        amplified_noise_gain += frobenius_norm(path.x) * frobenius_norm(path.x);

        for (std::size_t i = 0; i < nt; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                model.d_d(model.direct_rows + i, j) += path.r_eq_c(i, j);
            }
        }
        if (k == 0) model.conj_mask = path.stc.conj_mask;
        model.relays.push_back(std::move(path));
    }

    model.row_noise_variance.assign(model.stack_rows(), noise.sigma2);
    for (std::size_t i = 0; i < model.relay_rows; ++i) {
        model.row_noise_variance[model.direct_rows + i] = noise.sigma2 * (1.0 + amplified_noise_gain);
    }
    return model;
}

/// Exact covariance of the stacked effective noise:
/// block-diag(sigma^2 I_N, sigma^2 (I_NT + sum_k X_k X_k^H)).
inline ComplexMatrix exact_noise_covariance(const EquivalentModel& model) {
    const std::size_t rows = model.stack_rows();
    ComplexMatrix cov(rows, rows);
    for (std::size_t i = 0; i < model.direct_rows; ++i) cov(i, i) = model.sigma2;
    for (std::size_t i = 0; i < model.relay_rows; ++i) cov(model.direct_rows + i, model.direct_rows + i) = model.sigma2;
    for (const RelayPath& path : model.relays) {
        const ComplexMatrix xxh = path.x * hermitian(path.x);
        for (std::size_t i = 0; i < model.relay_rows; ++i) {
            for (std::size_t j = 0; j < model.relay_rows; ++j) {
                cov(model.direct_rows + i, model.direct_rows + j) += model.sigma2 * xxh(i, j);
            }
        }
    }
    return cov;
}

/// Noise-free relay-block observation computed through the slot-level chain:
/// amplify, Alamouti-encode, pass each slot through G, stack under the
/// conjugation mask, then apply the per-slot randomization blocks.
inline ComplexMatrix relay_block_noise_free(const ChannelSet& cs,
                                            const std::vector<RandomizedMatrix>& randomized,
                                            const AmplifyGain& gain, const SystemDims& dims,
                                            const ComplexMatrix& s) {
    const std::size_t n = dims.n_antennas;
    const std::size_t nt = n * dims.codeword_slots;
    ComplexMatrix u(nt, 1);
    for (std::size_t k = 0; k < dims.n_relays; ++k) {
        const ComplexMatrix s_tilde = gain.gain_matrix * (cs.f[k] * s);
        const StcCodeword cw = alamouti_encode(s_tilde);
        ComplexMatrix received(n, dims.codeword_slots);
        for (std::size_t t = 0; t < dims.codeword_slots; ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                cdouble y = 0.0;
                for (std::size_t j = 0; j < n; ++j) y += cs.g[k](i, j) * cw.m(j, t);
                received(i, t) = y;
            }
        }
        const EquivalentStc eq = build_equivalent_channel(cs.g[k], StcScheme::alamouti);
        u += randomized[k].r_eq * masked_stack(received, eq.conj_mask);
    }
    return u;
}

/// Full noise-free received stack (direct block on top when enabled);
/// must agree with d_d * s to floating-point accuracy.
inline ComplexMatrix noise_free_received(const ChannelSet& cs,
                                         const std::vector<RandomizedMatrix>& randomized,
                                         const AmplifyGain& gain, const SystemDims& dims,
                                         const ComplexMatrix& s) {
    const std::size_t n = dims.n_antennas;
    const std::size_t nt = n * dims.codeword_slots;
    const std::size_t direct_rows = dims.direct_link ? n : 0;
    ComplexMatrix r(direct_rows + nt, 1);
    if (dims.direct_link) {
        const ComplexMatrix top = cs.h * s;
        for (std::size_t i = 0; i < n; ++i) r(i, 0) = top(i, 0);
    }
    const ComplexMatrix u = relay_block_noise_free(cs, randomized, gain, dims, s);
    for (std::size_t i = 0; i < nt; ++i) r(direct_rows + i, 0) = u(i, 0);
    return r;
}

} // namespace rdstc
