#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"
#include "cascade/spaces.hpp"
#include "oracles.hpp"

using namespace cascade;
using oracle::Big;
using std::numbers::pi;

namespace {

SystemParams params(double L, double c, double T, Variant v = Variant::WaveHeat) {
    SystemParams p;
    p.length_L = L;
    p.reaction_c = c;
    p.horizon_T = T;
    p.variant = v;
    return p;
}

}  // namespace

TEST_CASE("wave-heat weights follow 4 log n - 2 log|gamma_n| + nu n^2") {
    const auto p = params(1.2, 0.5, 2.5);
    const auto beta = CouplingProfile::indicator(1.0, 0.1, 0.9);
    Truncation tr{4, 2, false};
    const auto V = build_weights(p, beta, SpaceTag::V, tr);
    const auto V0 = build_weights(p, beta, SpaceTag::V0, tr);
    const Big bpi = boost::math::constants::pi<Big>();
    for (long n = 1; n <= 4; ++n) {
        const Big k = Big(n) * bpi / Big(1.2);
        const Big lam = Big(0.5) - k * k;
        const Big g = oracle::big_integral([&](const Big& s) { return sin(k * s) * sinh(lam * s); }, Big(0.1), Big(0.9), 32);
        const double lg = static_cast<double>(log(abs(g)));
        const double dn = static_cast<double>(n);
        const double nu = 2.0 * pi * pi * (1.0 + 2.5 / 1.2) / 1.2;
        const double nu0 = 2.0 * pi * pi / 1.2;
        CHECK(V.parabolic_log_weights.at(n) == doctest::Approx(4.0 * std::log(dn) - 2.0 * lg + nu * dn * dn).epsilon(1e-11));
        CHECK(V0.parabolic_log_weights.at(n) == doctest::Approx(4.0 * std::log(dn) - 2.0 * lg + nu0 * dn * dn).epsilon(1e-11));
    }
    for (long m = -2; m <= 2; ++m) CHECK(V.hyperbolic_log_weights.at(m) == 0.0);
    CHECK(V.nu_or_sigma == doctest::Approx(nu_value(p, false)));
}

TEST_CASE("heat-wave parabolic weights") {
    const auto p = params(1.0, 0.0, 3.0, Variant::HeatWave);
    Truncation tr{3, 1, false};
    const auto w = build_weights(p, CouplingProfile::constant(1.0), SpaceTag::VHW, tr);
    const double sigma = 2.0 * pi * pi * 3.0;
    for (long n = 1; n <= 3; ++n) CHECK(w.parabolic_log_weights.at(n) == doctest::Approx(sigma * n * n - 2.0 * std::log(double(n))));
    const auto g = gamma_hw_scaled(p, CouplingProfile::constant(1.0), 1);
    CHECK(w.hyperbolic_log_weights.at(1) == doctest::Approx(std::sqrt(2.0 * pi) - 2.0 * g.log_abs(1.0)));
}

TEST_CASE("duality is exact in log space and the embedding chain holds") {
    for (auto v : {Variant::WaveHeat, Variant::HeatWave}) {
        const auto p = params(1.0, 1.0, 2.5, v);
        const auto beta = CouplingProfile::indicator(2.0, 0.2, 0.95);
        Truncation tr{6, 8, true};
        for (auto tag : {SpaceTag::V, SpaceTag::V0, SpaceTag::VHW, SpaceTag::V0HW}) {
            const auto w = build_weights(p, beta, tag, tr);
            const auto wp = build_weights(p, beta, dual_of(tag), tr);
            const auto d = dual_weights(w);
            CHECK(d.space_tag == dual_of(tag));
            for (const auto& [n, x] : w.parabolic_log_weights) {
                CHECK(x + wp.parabolic_log_weights.at(n) == 0.0);
                CHECK(d.parabolic_log_weights.at(n) == wp.parabolic_log_weights.at(n));
            }
            for (const auto& [m, x] : w.hyperbolic_log_weights) CHECK(x + wp.hyperbolic_log_weights.at(m) == 0.0);
        }
        const auto rep = check_embedding_chain(p, beta, tr);
        CHECK(rep.duality_ok);
        CHECK(rep.max_duality_error == 0.0);
        CHECK(rep.chain_ok);
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("space tags round trip") {
    for (auto t : {SpaceTag::V, SpaceTag::Vprime, SpaceTag::V0, SpaceTag::V0prime, SpaceTag::VHW, SpaceTag::VHWprime,
                   SpaceTag::V0HW, SpaceTag::V0HWprime}) {
        CHECK(parse_space_tag(to_string(t)) == t);
        CHECK(dual_of(dual_of(t)) == t);
        CHECK(is_dual_tag(t) != is_dual_tag(dual_of(t)));
    }
    CHECK_THROWS_AS(parse_space_tag("W"), ConfigError);
}

TEST_CASE("weighted norm") {
    WeightSequence w;
    w.parabolic_log_weights = {{1, std::log(4.0)}, {2, 1000.0}};
    w.hyperbolic_log_weights = {{0, 0.0}};
    ModalVector v;
    v.parabolic_coeffs[1] = {3.0, 0.0};
    v.hyperbolic_coeffs[0] = {0.0, 2.0};
    // sqrt(4 * 9 + 4)
    auto n = weighted_norm(v, w);
    REQUIRE(n.linear.has_value());
    CHECK(*n.linear == doctest::Approx(std::sqrt(40.0)));
    v.parabolic_coeffs[2] = {1.0, 0.0};
    n = weighted_norm(v, w);
    CHECK_FALSE(n.linear.has_value());
    CHECK(n.log_value == doctest::Approx(500.0));
    CHECK(weighted_norm(ModalVector{}, w).log_value == -std::numeric_limits<double>::infinity());
    v.hyperbolic_coeffs[5] = 1.0;
    CHECK_THROWS_AS(weighted_norm(v, w), DomainError);
}

TEST_CASE("the V and V' norms pair by Cauchy-Schwarz with equality on the Riesz map") {
    const auto p = params(1.0, 0.0, 2.5);
    Truncation tr{3, 2, false};
    const auto V = build_weights(p, CouplingProfile::constant(1.0), SpaceTag::V, tr);
    const auto Vp = dual_weights(V);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        ModalVector u, v;
        std::complex<double> pairing = 0.0;
        for (long n = 1; n <= 3; ++n) {
            u.parabolic_coeffs[n] = {g(rng), g(rng)};
            v.parabolic_coeffs[n] = {g(rng), g(rng)};
            pairing += u.parabolic_coeffs[n] * std::conj(v.parabolic_coeffs[n]);
        }
        const double lhs = std::log(std::abs(pairing));
        CHECK(lhs <= weighted_norm(u, V).log_value + weighted_norm(v, Vp).log_value + 1e-12);
        // v = W u attains the bound.
        ModalVector r;
        std::complex<double> pr = 0.0;
        for (long n = 1; n <= 3; ++n) {
            r.parabolic_coeffs[n] = std::exp(V.parabolic_log_weights.at(n)) * u.parabolic_coeffs[n];
            pr += u.parabolic_coeffs[n] * std::conj(r.parabolic_coeffs[n]);
        }
        CHECK(std::log(std::abs(pr)) == doctest::Approx(weighted_norm(u, V).log_value + weighted_norm(r, Vp).log_value).epsilon(1e-13));
    }
}

TEST_CASE("Sobolev slopes of the weights") {
    SUBCASE("wave-heat V0 with b = L grows like n^10") {
        const auto p = params(1.0, 0.0, 2.5);
        Truncation tr{60, 0, false};
        const auto w = build_weights(p, CouplingProfile::constant(1.0), SpaceTag::V0, tr);
        const auto s = sobolev_slope(w, IndexFamily::Parabolic, 5, 60);
        CHECK_FALSE(s.exponential);
        CHECK(s.slope == doctest::Approx(10.0).epsilon(0.05));
        // V itself carries an extra exp(2 pi^2 T n^2 / L^2).
        const auto wv = build_weights(p, CouplingProfile::constant(1.0), SpaceTag::V, tr);
        CHECK(sobolev_slope(wv, IndexFamily::Parabolic, 5, 60).exponential);
    }
    SUBCASE("heat-wave hyperbolic weights") {
        auto p = params(1.0, 0.0, 2.5, Variant::HeatWave);
        Truncation tr{1, 160, false};
        const auto w = build_weights(p, CouplingProfile::constant(1.0), SpaceTag::VHW, tr);
        CHECK(sobolev_slope(w, IndexFamily::Hyperbolic, 16, 160).slope == doctest::Approx(3.0).epsilon(0.1));
    }
    SUBCASE("range too short") {
        WeightSequence w;
        CHECK_THROWS_AS(sobolev_slope(w, IndexFamily::Parabolic, 5, 20), InsufficientRange);
    }
}

TEST_CASE("indicator weights against their large-n asymptote") {
    const auto p = params(1.0, 1.0, 2.5);
    const auto rows = wn_asymptotic_compare(p, 0.1, 0.7, 1.0, 10, 20, false);
    for (const auto& r : rows) CHECK(std::abs(r.log_ratio) < 10.0 / (r.n * r.n) + 1e-9);
}

TEST_CASE("vanishing coupling is surfaced by the weights") {
    const auto p = params(1.0, 50.0, 2.5);
    CHECK_THROWS_AS(build_weights(p, CouplingProfile::indicator(1.0, 0.0, 0.5856783494663615), SpaceTag::V, Truncation{3, 1, false}),
                    VanishingCoupling);
}
