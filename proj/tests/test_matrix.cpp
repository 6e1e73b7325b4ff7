#include <catch_amalgamated.hpp>

#include <complex>

#include "rdstc/matrix.hpp"

using namespace rdstc;

namespace {
const cdouble j_unit(0.0, 1.0);

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    RngStream rng(seed);
    return complex_gaussian_matrix(r, c, 1.0, rng);
}
} // namespace

TEST_CASE("matmul basics") {
    const ComplexMatrix a(2, 2, {cdouble(1, 1), cdouble(2, 0), cdouble(0, -1), cdouble(3, 2)});
    CHECK(max_abs(matmul(ComplexMatrix::identity(2), a) - a) == 0.0);

    const ComplexMatrix swap(2, 2, {0.0, 1.0, 1.0, 0.0});
    const ComplexMatrix swapped = matmul(swap, a);
    CHECK(swapped(0, 0) == a(1, 0));
    CHECK(swapped(0, 1) == a(1, 1));
    CHECK(swapped(1, 0) == a(0, 0));
    CHECK(swapped(1, 1) == a(0, 1));

    const ComplexMatrix jm(1, 1, {j_unit});
    CHECK(std::abs(matmul(jm, jm)(0, 0) - cdouble(-1.0, 0.0)) < 1e-15);

    CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 2)), DimensionError);
}

TEST_CASE("hermitian transpose") {
    const ComplexMatrix a(1, 1, {cdouble(1, 1)});
    CHECK(hermitian(a)(0, 0) == cdouble(1, -1));

    ComplexMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 5.0;
    CHECK(max_abs(hermitian(d) - d) == 0.0);

    const ComplexMatrix wide = random_matrix(2, 3, 11);
    const ComplexMatrix h = hermitian(wide);
    REQUIRE(h.rows() == 3);
    REQUIRE(h.cols() == 2);
    CHECK(max_abs(hermitian(h) - wide) == 0.0);
}

TEST_CASE("frobenius norm") {
    CHECK(frobenius_norm(ComplexMatrix::identity(2)) == Catch::Approx(std::sqrt(2.0)));
    CHECK(frobenius_norm(ComplexMatrix(3, 3)) == 0.0);
    const ComplexMatrix m(2, 2, {3.0, 4.0, 0.0, 0.0});
    CHECK(frobenius_norm(m) == Catch::Approx(5.0));
}

TEST_CASE("norm identity against traces") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const ComplexMatrix a = random_matrix(3, 4, seed);
        const double f2 = frobenius_norm(a) * frobenius_norm(a);
        const double t1 = trace(matmul(hermitian(a), a)).real();
        const double t2 = trace(matmul(a, hermitian(a))).real();
        CHECK(std::abs(f2 - t1) <= 1e-10 * f2);
        CHECK(std::abs(f2 - t2) <= 1e-10 * f2);
    }
}

TEST_CASE("hermitian reverses products") {
    const ComplexMatrix a = random_matrix(3, 2, 5);
    const ComplexMatrix b = random_matrix(2, 4, 6);
    const ComplexMatrix lhs = hermitian(matmul(a, b));
    const ComplexMatrix rhs = matmul(hermitian(b), hermitian(a));
    CHECK(max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("block_diag assembly") {
    const std::vector<ComplexMatrix> eyes{ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
    CHECK(max_abs(block_diag(eyes) - ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix single(1, 1, {cdouble(2, 0)});
    CHECK(block_diag({single})(0, 0) == cdouble(2, 0));

    const ComplexMatrix a = random_matrix(2, 2, 7);
    const ComplexMatrix b = random_matrix(3, 3, 8);
    const ComplexMatrix big = block_diag({a, b});
    REQUIRE(big.rows() == 5);
    REQUIRE(big.cols() == 5);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t jj = 2; jj < 5; ++jj) {
            CHECK(big(i, jj) == cdouble(0, 0));
            CHECK(big(jj, i) == cdouble(0, 0));
        }
    }
    CHECK(big(0, 0) == a(0, 0));
    CHECK(big(4, 4) == b(2, 2));

    CHECK_THROWS_AS(block_diag({}), DimensionError);
}

TEST_CASE("complex gaussian draws") {
    RngStream rng(99);
    CHECK(max_abs(complex_gaussian_matrix(3, 3, 0.0, rng)) == 0.0);

    RngStream a(42), b(42);
    const ComplexMatrix ma = complex_gaussian_matrix(4, 4, 1.0, a);
    const ComplexMatrix mb = complex_gaussian_matrix(4, 4, 1.0, b);
    CHECK(max_abs(ma - mb) == 0.0);

    // Sample statistics over 1e5 draws.
    RngStream s(2024);
    const std::size_t n = 100000;
    cdouble mean = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cdouble z = s.next_cgauss(1.0);
        mean += z;
        var += std::norm(z);
    }
    mean /= static_cast<double>(n);
    var /= static_cast<double>(n);
    CHECK(std::abs(mean) < 0.02);
    CHECK(var > 0.97);
    CHECK(var < 1.03);
}
