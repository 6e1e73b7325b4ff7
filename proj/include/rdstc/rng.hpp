#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace rdstc {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based pseudo-random stream (splitmix64 core, explicit Box-Muller
/// for Gaussians). All draws are pure functions of the stream state, so any
/// substream reproduces the same values regardless of thread or call order.
/// std::normal_distribution is deliberately avoided: its sequence is
/// implementation-defined, which would break bit-identical reruns.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    /// Derives an independent substream from a master seed and a tag path,
    /// e.g. derive(master, {point, block, packet, link_tag}).
    static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = detail::mix64(master + 0x9E3779B97F4A7C15ull);
        for (std::uint64_t tag : path) {
            h = detail::mix64(h ^ (0x9E3779B97F4A7C15ull * (tag + 0x632BE59BD9B4E019ull)));
        }
        return RngStream(h);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return detail::mix64(state_);
    }

    /// Uniform on (0, 1]; never zero, so it is safe under log().
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * (1.0 / 9007199254740992.0);
    }

    /// Real N(0, variance).
    double next_gauss(double variance) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1) * variance) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Circularly symmetric complex Gaussian CN(0, variance):
    /// real and imaginary parts i.i.d. N(0, variance/2).
    std::complex<double> next_cgauss(double variance) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-std::log(u1) * variance);
        const double phi = 6.283185307179586476925287 * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    std::uint64_t state_;
};

} // namespace rdstc
