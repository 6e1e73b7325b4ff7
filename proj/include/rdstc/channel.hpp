#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rdstc/errors.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/rng.hpp"

namespace rdstc {

/// Topology of the two-hop network: N antennas everywhere, n_r relays, a
/// T-slot space-time codeword, and an optional source-destination link.
struct SystemDims {
    std::size_t n_antennas = 2;
    std::size_t n_relays = 1;
    std::size_t codeword_slots = 2;
    bool direct_link = false;

    void validate() const {
        if (n_antennas == 0 || codeword_slots == 0) {
            throw ConfigError("antennas and codeword slots must be positive");
        }
        if (n_relays == 0 && !direct_link) {
            throw ConfigError("no signal path: zero relays and no direct link");
        }
    }
};

/// Per-link complex noise power; the same sigma^2 applies to every link.
struct NoiseModel {
    double sigma2 = 1.0;
};

/// One quasi-static fading realization: all link matrices of one block.
/// Entries are i.i.d. CN(0, 1) (Rayleigh magnitudes) and stay fixed for every
/// symbol of the block.
struct ChannelSet {
    std::vector<ComplexMatrix> f; // source -> relay k, N x N
    ComplexMatrix h;              // source -> destination, N x N
    std::vector<ComplexMatrix> g; // relay k -> destination, N x N
    long block_index = 0;
};

inline ChannelSet draw_channel_set(const SystemDims& dims, RngStream& rng) {
    const std::size_t n = dims.n_antennas;
    ChannelSet cs;
    cs.f.reserve(dims.n_relays);
    cs.g.reserve(dims.n_relays);
    for (std::size_t k = 0; k < dims.n_relays; ++k) {
        cs.f.push_back(complex_gaussian_matrix(n, n, 1.0, rng));
    }
    cs.h = complex_gaussian_matrix(n, n, 1.0, rng);
    for (std::size_t k = 0; k < dims.n_relays; ++k) {
        cs.g.push_back(complex_gaussian_matrix(n, n, 1.0, rng));
    }
    return cs;
}

/// AWGN column vector with per-entry variance noise.sigma2.
inline ComplexMatrix draw_noise(std::size_t rows, const NoiseModel& noise, RngStream& rng) {
    return complex_gaussian_matrix(rows, 1, noise.sigma2, rng);
}

/// Linear SNR from decibels: gamma = 10^(dB/10).
inline double snr_to_gamma(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

} // namespace rdstc
