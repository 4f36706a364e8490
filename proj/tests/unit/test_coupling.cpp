#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"
#include "oracles.hpp"

using namespace cascade;
using oracle::Big;
using std::numbers::pi;

namespace {

// beta0 int_a^b sin(n pi s / L) sinh(lambda s) ds in 50 digits; lambda = 0 gives the s-weighted branch.
Big gamma_oracle(double L, double c, double beta0, double a, double b, long n) {
    const Big bpi = boost::math::constants::pi<Big>();
    const Big k = Big(n) * bpi / Big(L);
    const Big lam = Big(c) - k * k;
    if (abs(lam) < 1e-10) return Big(beta0) * oracle::big_integral([&](const Big& s) { return sin(k * s) * s; }, Big(a), Big(b), 32);
    return Big(beta0) * oracle::big_integral([&](const Big& s) { return sin(k * s) * sinh(lam * s); }, Big(a), Big(b), 32);
}

SystemParams wh(double L, double c) {
    SystemParams p;
    p.length_L = L;
    p.reaction_c = c;
    return p;
}

}  // namespace

TEST_CASE("indicator closed form and quadrature agree with a 50-digit oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double L = 0.5 + 1.5 * u(rng);
        const double c = 6.0 * u(rng) - 1.0;
        double a = L * u(rng), b = L * u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-3) b = std::min(L, a + 0.1);
        const long n = 1 + static_cast<long>(4 * u(rng));
        const double beta0 = 0.5 + u(rng);
        const auto p = wh(L, c);
        const double ref = static_cast<double>(gamma_oracle(L, c, beta0, a, b, n));
        const auto closed = gamma_indicator_closed(p, a, b, beta0, n);
        const auto quad = gamma_quadrature(p, CouplingProfile::indicator(beta0, a, b), n);
        const double scale = std::exp(closed.log_scale);
        CAPTURE(L);
        CAPTURE(c);
        CAPTURE(n);
        CHECK(std::abs(closed.value.to_complex().real() - ref) <= 1e-11 * scale);
        CHECK(std::abs(quad.value.to_complex().real() - ref) <= 1e-10 * scale);
        CHECK(closed.method == GammaMethod::ClosedFormIndicator);
    }
}

TEST_CASE("constant profile closed form") {
    for (double c : {0.0, 3.0, -2.0})
        for (long n : {1L, 2L, 5L}) {
            const auto p = wh(1.0, c);
            const auto g = gamma_constant_closed(p, 1.5, n);
            const double ref = static_cast<double>(gamma_oracle(1.0, c, 1.5, 0.0, 1.0, n));
            CHECK(oracle::rel_err(g.value.to_complex(), ref) < 1e-11);
            CHECK(gamma_coefficient(p, CouplingProfile::constant(1.5), n).method == GammaMethod::ClosedFormConstant);
        }
}

TEST_CASE("resonant gamma takes the s-weighted form") {
    const auto p = wh(1.0, 4.0 * pi * pi);
    // int_0^1 sin(2 pi s) s ds = -1 / (2 pi)
    CHECK(gamma_constant_closed(p, 1.0, 2).value.to_complex().real() == doctest::Approx(-1.0 / (2.0 * pi)).epsilon(1e-13));
    const double ref = static_cast<double>(gamma_oracle(1.0, 4.0 * pi * pi, 1.0, 0.2, 0.7, 2));
    CHECK(gamma_indicator_closed(p, 0.2, 0.7, 1.0, 2).value.to_complex().real() == doctest::Approx(ref).epsilon(1e-12));
    CHECK(gamma_quadrature(p, CouplingProfile::indicator(1.0, 0.2, 0.7), 2).value.to_complex().real() ==
          doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("piecewise constant profiles sum indicator pieces") {
    const auto p = wh(1.0, 1.0);
    const auto pw = CouplingProfile::piecewise({{0.0, 0.3, 1.0}, {0.3, 0.7, -2.0}, {0.7, 1.0, 0.5}});
    for (long n : {1L, 2L, 3L}) {
        const double ref = static_cast<double>(gamma_oracle(1.0, 1.0, 1.0, 0.0, 0.3, n) + gamma_oracle(1.0, 1.0, -2.0, 0.3, 0.7, n) +
                                               gamma_oracle(1.0, 1.0, 0.5, 0.7, 1.0, n));
        CHECK(oracle::rel_err(gamma_coefficient(p, pw, n).value.to_complex(), ref) < 1e-10);
    }
}

TEST_CASE("gamma_2 vanishes for the indicator of [0, b] near b = 0.586 when c = 50") {
    const auto p = wh(1.0, 50.0);
    // Independent root of the 50-digit integral.
    auto f = [](double b) { return static_cast<double>(gamma_oracle(1.0, 50.0, 1.0, 0.0, b, 2)); };
    std::uintmax_t iters = 100;
    const auto br = boost::math::tools::toms748_solve(f, 0.55, 0.62, boost::math::tools::eps_tolerance<double>(50), iters);
    const double b_star = 0.5 * (br.first + br.second);
    CHECK(b_star == doctest::Approx(0.5856783494663615).epsilon(1e-12));

    ScanLattice lat;
    lat.a_values = {0.0};
    for (int i = 0; i <= 200; ++i) lat.b_values.push_back(i / 200.0);
    const auto scan = gamma_zero_scan(p, 1.0, lat, 2, 1e-13);
    CHECK(scan.sign_changes(2) == 1);
    REQUIRE(scan.sign_changes(2) == 1);
    const auto z = *std::find_if(scan.zeros.begin(), scan.zeros.end(), [](const ZeroPoint& q) { return q.n == 2; });
    CHECK(z.along == 'b');
    CHECK(std::abs(z.b - b_star) < 1e-12);

    const auto g = gamma_indicator_closed(p, 0.0, z.b, 1.0, 2);
    CHECK(g.vanishing());
    const auto obs = obs_coefficient(p, CouplingProfile::indicator(1.0, 0.0, z.b), ModeId::parabolic(2));
    CHECK(obs.vanishing);
}

TEST_CASE("zero scan with a zero coupling is degenerate") {
    ScanLattice lat{{0.0, 0.5}, {0.5, 1.0}};
    const auto scan = gamma_zero_scan(wh(1.0, 0.0), 0.0, lat, 3, 1e-10);
    CHECK(scan.degenerate);
    CHECK(scan.zeros.empty());
    CHECK_THROWS_AS(gamma_zero_scan(wh(1.0, 0.0), 1.0, ScanLattice{{0.0}, {1.5}}, 1, 1e-10), DomainError);
}

TEST_CASE("heat-wave coupling integral against composite Simpson") {
    for (double c : {0.0, 2.0}) {
        SystemParams p = wh(1.3, c);
        p.variant = Variant::HeatWave;
        const double L = p.length_L;
        const auto ramp = CouplingProfile::sampled({0.0, L}, {L, 0.0});
        for (long m : {-7L, -1L, 0L, 3L, 10L}) {
            const auto g = gamma_hw_scaled(p, ramp, m);
            const double w = hyperbolic_eigenvalue(p, m).imag();
            const auto rho = g.root;
            CHECK(std::abs(rho * rho - (std::conj(hyperbolic_eigenvalue(p, m)) - c)) < 1e-12 * (1.0 + std::abs(rho * rho)));
            CHECK(rho.real() >= 0.0);
            auto f = [&](double s) {
                return (L - s) * std::complex<double>(0.0, std::sin(w * s)) * std::sinh(rho * s) * std::exp(-rho * L);
            };
            const auto ref = oracle::simpson(f, 0.0, L, 200000);
            CAPTURE(m);
            CHECK(std::abs(g.scaled_value - ref) <= 1e-10 * g.l1);
        }
    }
}

TEST_CASE("observation coefficients") {
    SystemParams p = wh(2.0, 0.0);
    for (long m : {-2L, -1L, 0L, 1L})
        CHECK(std::abs(obs_coefficient(p, CouplingProfile::constant(1.0), ModeId::hyperbolic(m)).value.to_complex()) ==
              doctest::Approx(1.0 / std::sqrt(2.0)));
    p.variant = Variant::HeatWave;
    const auto b3 = obs_coefficient(p, CouplingProfile::constant(1.0), ModeId::parabolic(3)).value.to_complex();
    CHECK(b3.real() == doctest::Approx(std::sqrt(2.0 / 2.0) * 3.0 * pi / 2.0));
}

TEST_CASE("heat-wave exponent fit for smooth profiles") {
    SystemParams p = wh(1.0, 0.0);
    p.variant = Variant::HeatWave;
    const auto one = gamma_hw_exponent_fit(p, CouplingProfile::constant(1.0), 16, 256, 2, 16);
    CHECK(one.p == doctest::Approx(3.0).epsilon(0.1));
    CHECK_FALSE(one.super_polynomial);
    const auto ramp = gamma_hw_exponent_fit(p, CouplingProfile::sampled({0.0, 1.0}, {1.0, 0.0}), 16, 256, 2, 16);
    CHECK(ramp.p == doctest::Approx(4.0).epsilon(0.1));
    CHECK_THROWS_AS(gamma_hw_exponent_fit(p, CouplingProfile::constant(1.0), 16, 100), InsufficientRange);
}

TEST_CASE("least squares recovers an exact line") {
    const auto f = least_squares({1.0, 2.0, 3.0, 4.0}, {1.5, 3.5, 5.5, 7.5});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(-0.5));
    CHECK(f.residual < 1e-14);
    CHECK_THROWS_AS(least_squares({1.0}, {1.0}), InsufficientRange);
}
