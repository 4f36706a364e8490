// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "../unit/oracles.hpp"
#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"
#include "cascade/gramian.hpp"
#include "cascade/hum.hpp"
#include "cascade/spaces.hpp"
#include "cascade/spectral_core.hpp"

using namespace cascade;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

SystemParams params(double L, double c, double T, Variant v = Variant::WaveHeat) {
    SystemParams p;
    p.length_L = L;
    p.reaction_c = c;
    p.horizon_T = T;
    p.variant = v;
    return p;
}

// |x - y| / |y| computed on log-magnitudes, so it survives values far outside double range.
double scaled_rel_err(const ScaledComplex& x, const ScaledComplex& y) {
    if (y.is_zero()) return x.is_zero() ? 0.0 : INFINITY;
    return std::exp((x - y).log_magnitude() - y.log_magnitude());
}

double vanishing_b_c50 = NAN;

Outcome figure_one() {
    const auto p = params(1.0, 50.0, 2.5);
    ScanLattice lat;
    lat.a_values = {0.0};
    for (int i = 0; i <= 200; ++i) lat.b_values.push_back(i / 200.0);
    const auto scan = gamma_zero_scan(p, 1.7, lat, 2, 1e-13);
    const int changes = scan.sign_changes(2);
    double b = NAN;
    for (const auto& z : scan.zeros)
        if (z.n == 2) b = z.b;
    vanishing_b_c50 = b;
    return {changes == 1 && std::abs(b - 0.586) <= 0.005,
            "sign changes " + std::to_string(changes) + ", b = " + fmt("%.12f", b)};
}

Outcome closed_vs_quadrature() {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_ind = 0.0, worst_const = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double L = 0.5 + 1.5 * u(rng);
        const auto p = params(L, 6.0 * u(rng) - 1.0, 2.5);
        double a = L * u(rng), b = L * u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-3) b = std::min(L, a + 0.1);
        const long n = 1 + static_cast<long>(15 * u(rng));
        const double beta0 = 0.5 + u(rng);
        const auto closed = gamma_indicator_closed(p, a, b, beta0, n);
        const auto quad = gamma_quadrature(p, CouplingProfile::indicator(beta0, a, b), n);
        worst_ind = std::max(worst_ind, scaled_rel_err(quad.value, closed.value));
        const auto cc = gamma_constant_closed(p, beta0, n);
        const auto cq = gamma_quadrature(p, CouplingProfile::sampled({0.0, L}, {beta0, beta0}), n);
        worst_const = std::max(worst_const, scaled_rel_err(cq.value, cc.value));
    }
    return {worst_ind <= 1e-8 && worst_const <= 1e-8,
            "max rel err indicator " + fmt("%.2e", worst_ind) + ", constant " + fmt("%.2e", worst_const)};
}

Outcome psi_asymptote() {
    bool ok = true;
    std::string d;
    const auto beta = CouplingProfile::constant(1.0);
    for (double c : {0.0, 1.0})
        for (long n : {10L, 15L, 20L}) {
            const auto p = params(1.0, c, 2.5);
            const double L = p.length_L, dn = static_cast<double>(n);
            const auto exact = adjoint_wave_trace_eval(p, beta, n, L);
            const auto g = gamma_coefficient(p, beta, n).value;
            const double log_pref = 1.5 * std::log(2.0 * L) + c * L - 2.0 * std::log(pi) - 2.0 * std::log(dn) -
                                    dn * dn * pi * pi / L;
            const auto asym = -(ScaledComplex::from_log_sign(log_pref, 1.0) * g);
            const cd ratio = (exact / asym).to_complex();
            const bool good = std::abs(ratio.imag()) < 1e-12 && std::abs(ratio.real() - 1.0) <= 10.0 / (dn * dn);
            ok = ok && good;
            d += (d.empty() ? "" : ", ") + std::string("c=") + fmt("%g", c) + " n=" + std::to_string(n) + ": " +
                 fmt("%.8f", ratio.real());
        }
    return {ok, d};
}

std::vector<cd> unit_random(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<cd> x(n);
    double s = 0.0;
    for (auto& v : x) {
        v = {g(rng), g(rng)};
        s += std::norm(v);
    }
    for (auto& v : x) v /= std::sqrt(s);
    return x;
}

Outcome hum_endpoint() {
    const double T = 2.5;
    const auto sys = build_modal_system(params(1.0, 0.0, T), CouplingProfile::constant(1.0), Truncation{3, 6, false});
    std::vector<cd> B;
    for (std::size_t k = 0; k < sys.size(); ++k) B.push_back(sys.input_coefficient(k).to_complex());
    std::mt19937_64 rng(2024);
    double worst_res = 0.0, worst_traj = 0.0;
    const std::vector<double> times{0.0, 0.3, 0.8, 1.25, 1.7, 2.2, 2.5};
    for (int trial = 0; trial < 20; ++trial) {
        const auto x0 = unit_random(rng, sys.size());
        const auto x1 = unit_random(rng, sys.size());
        const auto sol = hum_solve(sys, sys.to_modal(x0), sys.to_modal(x1), T);
        for (const auto& r : sol.endpoint_residual) worst_res = std::max(worst_res, std::abs(r));
        const auto ref = oracle::modal_ode(sys.eigenvalues, B, [&](double s) { return sol.control(s); }, x0, times);
        const auto traj = trajectory_eval(sys, sol, sys.to_modal(x0), times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < sys.size(); ++k) {
                num += std::norm(traj[i].coeffs[k] - ref[i][k]);
                den += std::norm(ref[i][k]);
            }
            worst_traj = std::max(worst_traj, std::sqrt(num / std::max(den, 1e-300)));
        }
    }
    return {worst_res <= 1e-6 && worst_traj <= 1e-7,
            "max endpoint residual " + fmt("%.2e", worst_res) + ", max trajectory rel err " + fmt("%.2e", worst_traj)};
}

Outcome noninvariance() {
    const auto s = noninv_scan(params(1.0, 0.0, 2.5), CouplingProfile::constant(1.0), 2.5, 1.25, 5, 20);
    const double rel = std::abs(s.slope / s.expected_slope - 1.0);
    return {rel <= 0.05 && s.increasing, "slope " + fmt("%.6f", s.slope) + " vs " + fmt("%.6f", s.expected_slope) +
                                             (s.increasing ? ", increasing" : ", not increasing")};
}

Outcome ingham() {
    const auto rows = ingham_gap_profile(1.0, {2.5, 1.5}, {16, 64});
    const double long16 = rows[0].min_eig, long64 = rows[1].min_eig;
    const double short16 = rows[2].min_eig, short64 = rows[3].min_eig;
    const bool ok = long64 >= long16 / 1.1 && long64 <= long16 * 1.1 && short64 * 10.0 <= short16;
    return {ok, "T=2.5: " + fmt("%.4e", long16) + " -> " + fmt("%.4e", long64) + "; T=1.5: " + fmt("%.4e", short16) +
                    " -> " + fmt("%.4e", short64)};
}

Outcome sobolev() {
    const auto wh = params(1.0, 0.0, 2.5);
    const auto v0 = build_weights(wh, CouplingProfile::constant(1.0), SpaceTag::V0, Truncation{60, 0, false});
    const auto s0 = sobolev_slope(v0, IndexFamily::Parabolic, 5, 60);
    const auto hw = params(1.0, 0.0, 2.5, Variant::HeatWave);
    const Truncation tr{1, 512, false};
    const auto s1 = sobolev_slope(build_weights(hw, CouplingProfile::constant(1.0), SpaceTag::VHW, tr),
                                  IndexFamily::Hyperbolic, 16, 512);
    const auto s2 = sobolev_slope(build_weights(hw, CouplingProfile::sampled({0.0, 1.0}, {1.0, 0.0}), SpaceTag::VHW, tr),
                                  IndexFamily::Hyperbolic, 16, 512);
    const bool ok = !s0.exponential && std::abs(s0.slope - 10.0) <= 0.5 && std::abs(s1.slope - 3.0) <= 0.3 &&
                    std::abs(s2.slope - 4.0) <= 0.3;
    return {ok, "V0 " + fmt("%.4f", s0.slope) + ", HW beta=1 " + fmt("%.4f", s1.slope) + ", HW beta=L-x " +
                    fmt("%.4f", s2.slope)};
}

Outcome duality() {
    bool ok = true;
    double worst = 0.0;
    std::size_t checked = 0;
    for (auto v : {Variant::WaveHeat, Variant::HeatWave}) {
        const auto p = params(1.0, 1.0, 2.5, v);
        const auto beta = CouplingProfile::indicator(1.0, 0.1, 0.9);
        const Truncation tr{12, 16, true};
        for (auto tag : {SpaceTag::V, SpaceTag::V0, SpaceTag::VHW, SpaceTag::V0HW}) {
            const auto w = build_weights(p, beta, tag, tr);
            const auto wp = build_weights(p, beta, dual_of(tag), tr);
            for (const auto& [n, x] : w.parabolic_log_weights) {
                worst = std::max(worst, std::abs(x + wp.parabolic_log_weights.at(n)));
                ++checked;
            }
            for (const auto& [m, x] : w.hyperbolic_log_weights) {
                worst = std::max(worst, std::abs(x + wp.hyperbolic_log_weights.at(m)));
                ++checked;
            }
        }
        const auto rep = check_embedding_chain(p, beta, tr);
        ok = ok && rep.duality_ok && rep.chain_ok && rep.violations.empty();
    }
    return {ok && worst == 0.0,
            std::to_string(checked) + " weight pairs, max |log w + log w'| = " + fmt("%g", worst) +
                (ok ? ", chain holds" : ", chain violated")};
}

Outcome gram_oracle() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(6 * u(rng));
        ExponentialFamily f;
        f.horizon = 0.5 + 2.5 * u(rng);
        for (int k = 0; k < n; ++k) {
            f.exponents.push_back({-15.0 + 18.0 * u(rng), -20.0 + 40.0 * u(rng)});
            f.amplitudes.push_back(ScaledComplex::from_complex({0.2 + u(rng), u(rng) - 0.5}));
        }
        const auto g = exp_gram(f);
        std::vector<std::vector<cd>> ref(n, std::vector<cd>(n));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const cd z = f.exponents[j] + std::conj(f.exponents[k]);
                const cd I = oracle::simpson([&](double t) { return std::exp(z * t); }, 0.0, f.horizon, 100000);
                ref[j][k] = f.amplitudes[j].to_complex() * std::conj(f.amplitudes[k].to_complex()) * I;
            }
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double scale = std::sqrt(std::abs(ref[j][j]) * std::abs(ref[k][k]));
                worst = std::max(worst, std::abs(g.at(j, k).to_complex() - ref[j][k]) / scale);
            }
    }
    return {worst <= 1e-8, "max rel err " + fmt("%.2e", worst)};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CASCADE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome vanishing() {
    double b = vanishing_b_c50;
    if (std::isnan(b)) figure_one(), b = vanishing_b_c50;
    const auto p = params(1.0, 50.0, 2.5);
    const auto beta = CouplingProfile::indicator(1.0, 0.0, b);
    long index = -1;
    bool hyper = true;
    try {
        build_modal_system(p, beta, Truncation{3, 2, false});
    } catch (const VanishingCoupling& e) {
        index = e.index();
        hyper = e.hyperbolic();
    }
    const auto dir = std::filesystem::temp_directory_path() / "cascade_acceptance";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "vanishing.json";
    {
        std::ofstream out(cfg);
        out << std::setprecision(17) << R"({"params": {"reaction_c": 50.0, "length_L": 1.0, "horizon_T": 2.5},)"
            << R"( "profile": {"kind": "indicator", "beta0": 1.0, "a": 0.0, "b": )" << b << "},"
            << R"( "truncation": {"parabolic": 3, "hyperbolic": 2, "paired": false},)"
            << R"( "output_dir": ")" << (dir / "out").string() << "\"}";
    }
    const int code = run_cli("hum " + cfg.string());
    return {index == 2 && !hyper && code == 3,
            "VanishingCoupling(" + std::to_string(index) + (hyper ? ", hyperbolic" : "") + "), CLI exit " +
                std::to_string(code)};
}

struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> list{
        {"gamma_2 zero near b = 0.586 (c = 50)", 5.0, figure_one},
        {"closed forms match quadrature", 30.0, closed_vs_quadrature},
        {"psi^3(L) asymptote", 5.0, psi_asymptote},
        {"HUM endpoint and ODE trajectory", 60.0, hum_endpoint},
        {"non-invariance slope", 5.0, noninvariance},
        {"Ingham gap threshold", 60.0, ingham},
        {"Sobolev slopes", 120.0, sobolev},
        {"duality and embeddings", 1.0, duality},
        {"Gram matrix vs time quadrature", 30.0, gram_oracle},
        {"vanishing coupling surfaced", 5.0, vanishing},
    };
    int failed = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = list[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && dt <= list[i].budget_s;
        failed += !pass;
        std::printf("%s [%2zu] %s: %s (%.3f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", i + 1, list[i].name,
                    o.detail.c_str(), dt, list[i].budget_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(list.size()) - failed, list.size());
    return failed == 0 ? 0 : 1;
}
