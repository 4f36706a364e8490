#include "cascade/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"
#include "cascade/quadrature.hpp"

namespace cascade {

using std::numbers::pi;

std::string to_string(Variant v) { return v == Variant::WaveHeat ? "wave-heat" : "heat-wave"; }

Variant parse_variant(const std::string& s) {
    if (s == "wave-heat" || s == "WaveHeat" || s == "WH") return Variant::WaveHeat;
    if (s == "heat-wave" || s == "HeatWave" || s == "HW") return Variant::HeatWave;
    throw ConfigError("params.variant", "expected 'wave-heat' or 'heat-wave', got '" + s + "'");
}

void SystemParams::validate() const {
    if (!(length_L > 0.0) || !std::isfinite(length_L)) throw ConfigError("length_L", "must be positive");
    if (!std::isfinite(reaction_c)) throw ConfigError("reaction_c", "must be finite");
    if (!(horizon_T > 0.0) || !std::isfinite(horizon_T)) throw ConfigError("horizon_T", "must be positive");
}

// ---------------------------------------------------------------------------
// CouplingProfile

std::string CouplingProfile::kind_name() const {
    switch (kind_.index()) {
        case 0: return "constant";
        case 1: return "indicator";
        case 2: return "piecewise";
        default: return "sampled";
    }
}

void CouplingProfile::validate(double L) const {
    if (auto* c = std::get_if<ConstantProfile>(&kind_)) {
        if (!std::isfinite(c->beta0)) throw ConfigError("profile.beta0", "must be finite");
    } else if (auto* ind = std::get_if<IndicatorProfile>(&kind_)) {
        if (!std::isfinite(ind->beta0)) throw ConfigError("profile.beta0", "must be finite");
        if (!(0.0 <= ind->a && ind->a < ind->b && ind->b <= L))
            throw ConfigError("profile.a", "indicator requires 0 <= a < b <= L");
    } else if (auto* pw = std::get_if<PiecewiseConstantProfile>(&kind_)) {
        auto pieces = pw->pieces;
        std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const auto& q = pieces[i];
            if (!(0.0 <= q.a && q.a < q.b && q.b <= L)) throw ConfigError("profile.pieces", "interval outside [0, L]");
            if (!std::isfinite(q.value)) throw ConfigError("profile.pieces", "value must be finite");
            if (i > 0 && q.a < pieces[i - 1].b) throw ConfigError("profile.pieces", "intervals overlap");
        }
    } else {
        const auto& s = std::get<SampledProfile>(kind_);
        if (s.grid.size() < 2 || s.grid.size() != s.values.size())
            throw ConfigError("profile.grid", "need at least two nodes and matching values");
        if (s.grid.front() < 0.0 || s.grid.back() > L) throw ConfigError("profile.grid", "grid must lie in [0, L]");
        for (std::size_t i = 1; i < s.grid.size(); ++i)
            if (!(s.grid[i] > s.grid[i - 1])) throw ConfigError("profile.grid", "grid must be strictly increasing");
        for (double v : s.values)
            if (!std::isfinite(v)) throw ConfigError("profile.values", "values must be finite");
    }
}

namespace {

double interp(const std::vector<double>& grid, const std::vector<double>& values, double x) {
    if (x < grid.front() || x > grid.back()) return 0.0;
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.end()) return values.back();
    const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

}  // namespace

double CouplingProfile::operator()(double x) const {
    if (auto* c = std::get_if<ConstantProfile>(&kind_)) return c->beta0;
    if (auto* ind = std::get_if<IndicatorProfile>(&kind_)) return (x >= ind->a && x <= ind->b) ? ind->beta0 : 0.0;
    if (auto* pw = std::get_if<PiecewiseConstantProfile>(&kind_)) {
        for (const auto& q : pw->pieces)
            if (x >= q.a && x <= q.b) return q.value;
        return 0.0;
    }
    const auto& s = std::get<SampledProfile>(kind_);
    return interp(s.grid, s.values, x);
}

std::vector<double> CouplingProfile::breakpoints(double L) const {
    std::vector<double> out;
    auto add = [&](double x) {
        if (x > 0.0 && x < L) out.push_back(x);
    };
    if (auto* ind = std::get_if<IndicatorProfile>(&kind_)) {
        add(ind->a);
        add(ind->b);
    } else if (auto* pw = std::get_if<PiecewiseConstantProfile>(&kind_)) {
        for (const auto& q : pw->pieces) {
            add(q.a);
            add(q.b);
        }
    } else if (auto* s = std::get_if<SampledProfile>(&kind_)) {
        for (double x : s->grid) add(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double CouplingProfile::support_right(double L) const {
    if (std::holds_alternative<ConstantProfile>(kind_)) return L;
    if (auto* ind = std::get_if<IndicatorProfile>(&kind_)) return ind->b;
    if (auto* pw = std::get_if<PiecewiseConstantProfile>(&kind_)) {
        double r = 0.0;
        for (const auto& q : pw->pieces)
            if (q.value != 0.0) r = std::max(r, q.b);
        return r;
    }
    const auto& s = std::get<SampledProfile>(kind_);
    for (std::size_t i = s.grid.size(); i-- > 0;)
        if (s.values[i] != 0.0) return std::min(L, i + 1 < s.grid.size() ? s.grid[i + 1] : s.grid[i]);
    return 0.0;
}

bool CouplingProfile::is_zero() const { return sup_norm() == 0.0; }

double CouplingProfile::sup_norm() const {
    if (auto* c = std::get_if<ConstantProfile>(&kind_)) return std::abs(c->beta0);
    if (auto* ind = std::get_if<IndicatorProfile>(&kind_)) return std::abs(ind->beta0);
    double m = 0.0;
    if (auto* pw = std::get_if<PiecewiseConstantProfile>(&kind_)) {
        for (const auto& q : pw->pieces) m = std::max(m, std::abs(q.value));
        return m;
    }
    for (double v : std::get<SampledProfile>(kind_).values) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// Modes and eigenvalues

ModeId ModeId::parabolic(long n) {
    if (n < 1) throw DomainError("parabolic mode index must be >= 1, got " + std::to_string(n));
    return {Family::Parabolic, n};
}

std::string to_string(const ModeId& id) {
    return (id.is_parabolic() ? "parabolic(" : "hyperbolic(") + std::to_string(id.index) + ")";
}

double SampledFunction::operator()(double x) const { return interp(grid, values, x); }

double parabolic_eigenvalue(const SystemParams& p, long n) {
    if (n < 1) throw DomainError("parabolic mode index must be >= 1");
    const double k = static_cast<double>(n) * pi / p.length_L;
    return p.reaction_c - k * k;
}

std::complex<double> hyperbolic_eigenvalue(const SystemParams& p, long m) {
    return {0.0, static_cast<double>(2 * m + 1) * pi / (2.0 * p.length_L)};
}

bool is_resonant(const SystemParams& p, long n) {
    return std::abs(parabolic_eigenvalue(p, n)) < 1e-9 * pi * pi / (p.length_L * p.length_L);
}

std::pair<std::complex<double>, std::complex<double>> hyperbolic_eigvec_eval(const SystemParams& p, long m, double x) {
    const double L = p.length_L;
    if (!(x >= 0.0 && x <= L)) throw DomainError("x outside [0, L]");
    const std::complex<double> lam = hyperbolic_eigenvalue(p, m);
    const double amp = 2.0 * std::sqrt(L) / (std::abs(static_cast<double>(2 * m + 1)) * pi);
    // sinh(i w x) = i sin(w x)
    const std::complex<double> phi2{0.0, amp * std::sin(lam.imag() * x)};
    return {phi2, lam * phi2};
}

// ---------------------------------------------------------------------------
// P_beta

SampledFunction p_beta_apply(const CouplingProfile& beta, const SampledFunction& f) {
    const auto& x = f.grid;
    const std::size_t N = x.size();
    if (N < 3 || f.values.size() != N) throw DomainError("p_beta_apply needs at least 3 grid nodes");
    for (std::size_t i = 1; i < N; ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("grid must be strictly increasing");
    const double L = x.back();
    const auto bp = beta.breakpoints(L);

    // Three-point Gauss is exact for the quartic integrands that arise when
    // both beta and f are linear on a sub-panel.
    static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    std::vector<double> seg_int(N - 1, 0.0);    // int_{x_i}^{x_{i+1}} beta f
    std::vector<double> seg_moment(N - 1, 0.0); // int_{x_i}^{x_{i+1}} (s - x_i) beta f
    for (std::size_t i = 0; i + 1 < N; ++i) {
        std::vector<double> pts{x[i], x[i + 1]};
        for (double b : bp)
            if (b > x[i] && b < x[i + 1]) pts.push_back(b);
        std::sort(pts.begin(), pts.end());
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const double a = pts[j], b = pts[j + 1];
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int q = 0; q < 3; ++q) {
                const double s = mid + half * gx[q];
                const double v = half * gw[q] * beta(s) * f(s);
                seg_int[i] += v;
                seg_moment[i] += (s - x[i]) * v;
            }
        }
    }
    // g(x_i) = int_{x_i}^L beta f
    std::vector<double> g(N, 0.0);
    for (std::size_t i = N - 1; i-- > 0;) g[i] = g[i + 1] + seg_int[i];
    // int_{x_i}^{x_{i+1}} g = h g(x_{i+1}) + int (s - x_i) beta f
    SampledFunction w{x, std::vector<double>(N, 0.0)};
    for (std::size_t i = 0; i + 1 < N; ++i) w.values[i + 1] = w.values[i] + (x[i + 1] - x[i]) * g[i + 1] + seg_moment[i];
    return w;
}

// ---------------------------------------------------------------------------
// psi^3_{1,n}

std::vector<double> layer_nodes(double a, double b, double edge, double rate) {
    std::vector<double> out;
    if (!(rate > 0.0) || !(b > a)) return out;
    for (double d = 1.0 / rate; d < (b - a); d *= 2.0) {
        const double x = edge == b ? b - d : a + d;
        if (x > a && x < b) out.push_back(x);
    }
    return out;
}

ScaledComplex adjoint_wave_trace_eval(const SystemParams& p, const CouplingProfile& beta, long n, double x) {
    return adjoint_wave_trace_eval(p, beta, n, x, gamma_coefficient(p, beta, n).value);
}

ScaledComplex adjoint_wave_trace_eval(const SystemParams& p, const CouplingProfile& beta, long n, double x,
                                      const ScaledComplex& gamma_n) {
    const double L = p.length_L;
    if (!(x >= 0.0 && x <= L)) throw DomainError("x outside [0, L]");
    if (n < 1) throw DomainError("parabolic mode index must be >= 1");
    const double k = static_cast<double>(n) * pi / L;
    const double norm = std::sqrt(2.0 / L);
    if (beta.is_zero()) return ScaledComplex::zero();

    if (is_resonant(p, n)) {
        // sqrt(2/L) int_0^L beta(s) sin(ks) min(s, x) ds
        if (x == 0.0) return ScaledComplex::zero();
        auto f = [&](double s) { return beta(s) * std::sin(k * s) * std::min(s, x); };
        std::vector<double> interior = beta.breakpoints(L);
        interior.push_back(x);
        auto r = integrate_panels<double>(f, make_nodes(0.0, L, interior, n + 1));
        return ScaledComplex::from_real(norm * r.value);
    }

    const double lam = parabolic_eigenvalue(p, n);
    const double mu = std::abs(lam);
    if (x == L) {
        // gamma / (lam cosh(lam L))
        return ScaledComplex::from_real(norm) * gamma_n / (ScaledComplex::from_real(lam) * scaled_cosh(lam * L));
    }
    // Splitting gamma at x and merging it with the tail gives the Green form
    //   psi(x) = norm / (lam cosh(lam L)) int beta sin(ks) sinh(lam min(s,x)) cosh(lam (L - max(s,x))) ds,
    // whose scaled kernel is bounded by e^{-mu |x - s|}, so nothing cancels.
    const double sgn = lam > 0.0 ? 1.0 : -1.0;
    const double denom = 1.0 + std::exp(-2.0 * mu * L);
    auto f = [&](double s) {
        const double a = std::min(s, x);
        const double b = L - std::max(s, x);
        const double g = -std::expm1(-2.0 * mu * a) * (1.0 + std::exp(-2.0 * mu * b)) / (2.0 * denom) *
                         std::exp(-mu * (L - a - b));
        return beta(s) * std::sin(k * s) * sgn * g;
    };
    std::vector<double> interior = beta.breakpoints(L);
    interior.push_back(x);
    for (double q : layer_nodes(0.0, x, x, mu)) interior.push_back(q);
    for (double q : layer_nodes(x, L, x, mu)) interior.push_back(q);
    const auto r = integrate_panels<double>(f, make_nodes(0.0, L, interior, n + 1));
    return ScaledComplex::from_real(norm * r.value / lam);
}

}  // namespace cascade
