#pragma once

#include <cstdint>
#include <vector>

#include "rdstc/errors.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/rng.hpp"

namespace rdstc {

using BitVector = std::vector<std::uint8_t>;

/// Gray-mapped QPSK with unit symbol energy. Symbol n consumes bit pair
/// (bits[2n], bits[2n+1]) = (b0, b1):
///   imag = +1/sqrt(2) if b0 == 0, else -1/sqrt(2)
///   real = +1/sqrt(2) if b1 == 0, else -1/sqrt(2)
/// so 00 -> (+1+j)/sqrt(2), 01 -> (-1+j)/sqrt(2),
///    11 -> (-1-j)/sqrt(2), 10 -> (+1-j)/sqrt(2).
inline ComplexMatrix qpsk_modulate(const BitVector& bits) {
    if (bits.size() % 2 != 0) throw DimensionError("qpsk_modulate: odd bit count");
    const double amp = 0.7071067811865475244; // 1/sqrt(2)
    ComplexMatrix s(bits.size() / 2, 1);
    for (std::size_t n = 0; n < s.rows(); ++n) {
        const double im = bits[2 * n] ? -amp : amp;
        const double re = bits[2 * n + 1] ? -amp : amp;
        s(n, 0) = cdouble(re, im);
    }
    return s;
}

/// Per-symbol minimum-distance slicing, inverse of the Gray map above.
/// Points exactly on an axis resolve to bit 0 for that axis.
inline BitVector qpsk_demodulate(const ComplexMatrix& estimates) {
    BitVector bits(2 * estimates.size());
    for (std::size_t n = 0; n < estimates.size(); ++n) {
        bits[2 * n] = estimates[n].imag() < 0.0 ? 1 : 0;
        bits[2 * n + 1] = estimates[n].real() < 0.0 ? 1 : 0;
    }
    return bits;
}

inline BitVector random_bits(std::size_t count, RngStream& rng) {
    BitVector bits(count);
    for (std::size_t i = 0; i < count; ++i) bits[i] = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    return bits;
}

inline std::size_t count_bit_errors(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw DimensionError("count_bit_errors: lengths differ");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
    return errors;
}

} // namespace rdstc
