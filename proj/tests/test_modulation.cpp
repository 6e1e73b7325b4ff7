#include <catch_amalgamated.hpp>

#include "rdstc/modulation.hpp"

using namespace rdstc;

namespace {
const double amp = 0.7071067811865475244;
}

TEST_CASE("gray map anchor points") {
    CHECK(std::abs(qpsk_modulate({0, 0})(0, 0) - cdouble(amp, amp)) < 1e-15);
    CHECK(std::abs(qpsk_modulate({1, 1})(0, 0) - cdouble(-amp, -amp)) < 1e-15);
    CHECK(std::abs(qpsk_modulate({0, 1})(0, 0) - cdouble(-amp, amp)) < 1e-15);
    CHECK(std::abs(qpsk_modulate({1, 0})(0, 0) - cdouble(amp, -amp)) < 1e-15);
}

TEST_CASE("unit symbol energy") {
    for (std::uint8_t b0 : {0, 1}) {
        for (std::uint8_t b1 : {0, 1}) {
            CHECK(std::abs(qpsk_modulate({b0, b1})(0, 0)) == Catch::Approx(1.0));
        }
    }
}

TEST_CASE("demodulation round trip") {
    for (std::uint8_t b0 : {0, 1}) {
        for (std::uint8_t b1 : {0, 1}) {
            const BitVector bits{b0, b1};
            CHECK(qpsk_demodulate(qpsk_modulate(bits)) == bits);
        }
    }
}

TEST_CASE("nearest-point slicing") {
    ComplexMatrix est(1, 1, {cdouble(0.9 * amp, 0.8 * amp)});
    CHECK(qpsk_demodulate(est) == BitVector{0, 0});
}

TEST_CASE("axis ties resolve to bit 0") {
    ComplexMatrix on_axis(1, 1, {cdouble(0.0, 0.5)});
    CHECK(qpsk_demodulate(on_axis) == BitVector{0, 0});
    ComplexMatrix other(1, 1, {cdouble(-0.5, 0.0)});
    CHECK(qpsk_demodulate(other) == BitVector{0, 1});
}

TEST_CASE("odd bit count rejected") {
    CHECK_THROWS_AS(qpsk_modulate({0, 1, 0}), DimensionError);
}

TEST_CASE("vectors modulate symbol-wise") {
    const BitVector bits{0, 0, 1, 1};
    const ComplexMatrix s = qpsk_modulate(bits);
    REQUIRE(s.rows() == 2);
    CHECK(std::abs(s(0, 0) - cdouble(amp, amp)) < 1e-15);
    CHECK(std::abs(s(1, 0) - cdouble(-amp, -amp)) < 1e-15);
    CHECK(qpsk_demodulate(s) == bits);
}
