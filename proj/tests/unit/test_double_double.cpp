#include <doctest.h>

#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cascade/double_double.hpp"
#include "cascade/linalg.hpp"

using cascade::DoubleDouble;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big(DoubleDouble x) { return Big(x.hi()) + Big(x.lo()); }

double rel(DoubleDouble x, const Big& ref) {
    if (ref == 0) return static_cast<double>(abs(big(x)));
    return static_cast<double>(abs((big(x) - ref) / ref));
}

}  // namespace

TEST_CASE("two_sum and two_prod are exact") {
    const auto s = DoubleDouble::two_sum(1.0, 1e-20);
    CHECK(s.hi() == 1.0);
    CHECK(s.lo() == 1e-20);
    const double a = 1.0 + std::ldexp(1.0, -30);
    const auto p = DoubleDouble::two_prod(a, a);
    CHECK(big(p) == Big(a) * Big(a));
}

TEST_CASE("arithmetic against a 50-digit oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const DoubleDouble x = DoubleDouble(u(rng)) + DoubleDouble(u(rng) * 1e-17);
        const DoubleDouble y = DoubleDouble(u(rng)) + DoubleDouble(u(rng) * 1e-17);
        const Big bx = big(x), by = big(y);
        CHECK(rel(x + y, bx + by) < 1e-30 * (1.0 + static_cast<double>(abs(bx) + abs(by)) / static_cast<double>(abs(bx + by))));
        CHECK(rel(x * y, bx * by) < 1e-30);
        CHECK(rel(x / y, bx / by) < 1e-30);
    }
}

TEST_CASE("elementary functions against a 50-digit oracle") {
    for (double v : {-30.0, -2.5, -0.3, 1e-5, 0.7, 3.0, 40.0}) {
        const DoubleDouble x(v);
        CHECK(rel(exp(x), boost::multiprecision::exp(Big(v))) < 1e-30);
        CHECK(rel(sin(x), boost::multiprecision::sin(Big(v))) < 1e-29);
        CHECK(rel(cos(x), boost::multiprecision::cos(Big(v))) < 1e-29);
    }
    for (double v : {1e-12, 1e-4, 0.2, -0.4, 2.0}) {
        CHECK(rel(expm1(DoubleDouble(v)), boost::multiprecision::expm1(Big(v))) < 1e-30);
    }
    for (double v : {2.0, 1e-8, 12345.678}) {
        CHECK(rel(sqrt(DoubleDouble(v)), boost::multiprecision::sqrt(Big(v))) < 1e-31);
    }
    CHECK(rel(cascade::dd_constants::pi, boost::math::constants::pi<Big>()) < 1e-32);
}

TEST_CASE("embedded LU solves a Hilbert-like system beyond double precision") {
    // H_ij = 1 / (i + j + 1), n = 10, condition ~ 1e13.
    const int n = 10;
    cascade::CMatrix<DoubleDouble> A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = cascade::Cx<DoubleDouble>(DoubleDouble(1.0) / DoubleDouble(i + j + 1.0));
    std::vector<cascade::Cx<DoubleDouble>> x(n);
    for (int i = 0; i < n; ++i) x[i] = {DoubleDouble(1.0), DoubleDouble(i % 2 ? -1.0 : 0.5)};
    const auto b = cascade::matvec(A, x);
    cascade::EmbeddedLU<DoubleDouble> lu(A);
    const auto y = lu.solve(b);
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs((y[i] - x[i]).to_std()));
    CHECK(err < 1e-15);
}

TEST_CASE("singular matrix is reported") {
    cascade::CMatrix<double> A(2);
    A(0, 0) = 1.0;
    A(0, 1) = 2.0;
    A(1, 0) = 2.0;
    A(1, 1) = 4.0;
    cascade::EmbeddedLU<double> lu(A);
    CHECK(lu.singular());
    CHECK_THROWS_AS(lu.solve({1.0, 1.0}), cascade::IllConditioned);
}
