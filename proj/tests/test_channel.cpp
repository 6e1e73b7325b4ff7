#include <catch_amalgamated.hpp>

#include "rdstc/channel.hpp"

using namespace rdstc;

TEST_CASE("channel set shapes and determinism") {
    const SystemDims dims{2, 1, 2, true};
    RngStream rng(5);
    const ChannelSet cs = draw_channel_set(dims, rng);
    REQUIRE(cs.f.size() == 1);
    REQUIRE(cs.g.size() == 1);
    CHECK(cs.f[0].rows() == 2);
    CHECK(cs.f[0].cols() == 2);
    CHECK(cs.h.rows() == 2);
    CHECK(cs.g[0].cols() == 2);

    RngStream r1(9), r2(9);
    const ChannelSet a = draw_channel_set(dims, r1);
    const ChannelSet b = draw_channel_set(dims, r2);
    CHECK(max_abs(a.h - b.h) == 0.0);
    CHECK(max_abs(a.f[0] - b.f[0]) == 0.0);
    CHECK(max_abs(a.g[0] - b.g[0]) == 0.0);
}

TEST_CASE("consecutive channel sets are uncorrelated") {
    const SystemDims dims{2, 1, 2, true};
    RngStream rng(77);
    const std::size_t blocks = 10000;
    // Empirical cross-correlation between the same entry of consecutive draws.
    cdouble cross = 0.0;
    double power = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
        const ChannelSet a = draw_channel_set(dims, rng);
        const ChannelSet b = draw_channel_set(dims, rng);
        cross += a.h(0, 0) * std::conj(b.h(0, 0));
        power += std::norm(a.h(0, 0));
    }
    CHECK(std::abs(cross) / power < 0.05);
}

TEST_CASE("channel entry variance per complex dimension") {
    const SystemDims dims{2, 1, 2, true};
    RngStream rng(123);
    double re_var = 0.0, im_var = 0.0;
    const std::size_t blocks = 25000; // 4 entries each -> 1e5 samples
    for (std::size_t i = 0; i < blocks; ++i) {
        const ChannelSet cs = draw_channel_set(dims, rng);
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                re_var += cs.h(r, c).real() * cs.h(r, c).real();
                im_var += cs.h(r, c).imag() * cs.h(r, c).imag();
            }
        }
    }
    re_var /= static_cast<double>(4 * blocks);
    im_var /= static_cast<double>(4 * blocks);
    CHECK(re_var == Catch::Approx(0.5).epsilon(0.03));
    CHECK(im_var == Catch::Approx(0.5).epsilon(0.03));
}

TEST_CASE("noise draws match the requested variance") {
    const NoiseModel noise{0.7};
    RngStream rng(55);
    double var = 0.0;
    cdouble mean = 0.0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix v = draw_noise(1, noise, rng);
        var += std::norm(v(0, 0));
        mean += v(0, 0);
    }
    var /= static_cast<double>(n);
    mean /= static_cast<double>(n);
    CHECK(var == Catch::Approx(0.7).epsilon(0.03));
    CHECK(std::abs(mean) < 0.02);

    const ComplexMatrix empty = draw_noise(0, noise, rng);
    CHECK(empty.rows() == 0);
}

TEST_CASE("snr conversion") {
    CHECK(snr_to_gamma(0.0) == Catch::Approx(1.0));
    CHECK(snr_to_gamma(10.0) == Catch::Approx(10.0));
    CHECK(std::abs(snr_to_gamma(3.0) - 1.9953) < 1e-4);
}

TEST_CASE("dims validation") {
    SystemDims no_path{2, 0, 2, false};
    CHECK_THROWS_AS(no_path.validate(), ConfigError);
    SystemDims ok{2, 0, 2, true};
    CHECK_NOTHROW(ok.validate());
}
