#include "cascade/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cascade/errors.hpp"
#include "cascade/parallel.hpp"
#include "cascade/quadrature.hpp"

namespace cascade {

using std::numbers::pi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double x, double y) {
    if (x == kNegInf) return y;
    if (y == kNegInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(-std::abs(x - y)));
}

// Nodes on [0, L] for a profile whose integrand grows like e^{rate s} toward
// the right end of every smooth piece and oscillates `halfwaves` times.
std::vector<double> growth_nodes(const CouplingProfile& beta, double L, double rate, long halfwaves) {
    std::vector<double> edges = beta.breakpoints(L);
    std::vector<double> interior = edges;
    edges.insert(edges.begin(), 0.0);
    edges.push_back(L);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto layer = layer_nodes(edges[i], edges[i + 1], edges[i + 1], rate);
        interior.insert(interior.end(), layer.begin(), layer.end());
    }
    auto coarse = make_nodes(0.0, L, interior);
    // Limit each panel to roughly one oscillation half-wave.
    const double h = L / static_cast<double>(std::max<long>(halfwaves, 1));
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
        const double a = coarse[i], b = coarse[i + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-12)));
        for (int k = 0; k < pieces; ++k) out.push_back(a + (b - a) * k / pieces);
    }
    out.push_back(L);
    return out;
}

GammaValue from_terms(long n, const std::vector<ScaledComplex>& terms, const ScaledComplex& factor, GammaMethod method) {
    GammaValue g;
    g.n = n;
    g.method = method;
    ScaledComplex sum;
    double scale = kNegInf;
    for (const auto& t : terms) {
        sum += t;
        scale = std::max(scale, t.log_magnitude());
    }
    g.value = factor * sum;
    g.log_scale = factor.is_zero() || scale == kNegInf ? kNegInf : scale + factor.log_magnitude();
    g.est_error = 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(terms.size());
    // Project onto the real axis; the terms are real.
    if (!g.value.is_zero()) g.value = ScaledComplex::from_log_sign(g.value.log_magnitude(), g.value.real_part_sign() < 0 ? -1.0 : 1.0);
    return g;
}

}  // namespace

std::string to_string(GammaMethod m) {
    switch (m) {
        case GammaMethod::ClosedFormIndicator: return "closed-form-indicator";
        case GammaMethod::ClosedFormConstant: return "closed-form-constant";
        default: return "quadrature";
    }
}

bool GammaValue::vanishing() const {
    if (value.is_zero() || log_scale == kNegInf) return true;
    return value.log_magnitude() - log_scale < std::log(kVanishingRelTol);
}

bool GammaHW::vanishing() const { return std::abs(scaled_value) <= kVanishingRelTol * l1 || scaled_value == 0.0; }

double GammaHW::log_abs(double L) const { return std::log(std::abs(scaled_value)) + root.real() * L; }

// ---------------------------------------------------------------------------
// gamma_n

GammaValue gamma_quadrature(const SystemParams& p, const CouplingProfile& beta, long n) {
    if (n < 1) throw DomainError("parabolic mode index must be >= 1");
    const double L = p.length_L;
    const double k = static_cast<double>(n) * pi / L;
    GammaValue g;
    g.n = n;
    g.method = GammaMethod::Quadrature;
    if (beta.is_zero()) {
        g.log_scale = kNegInf;
        return g;
    }
    if (is_resonant(p, n)) {
        auto f = [&](double s) { return beta(s) * std::sin(k * s) * s; };
        auto r = integrate_panels<double>(f, growth_nodes(beta, L, 0.0, n + 1));
        g.value = ScaledComplex::from_real(r.value);
        g.log_scale = std::log(r.l1);
        g.est_error = r.error / r.l1;
        return g;
    }
    const double lam = parabolic_eigenvalue(p, n);
    const double mu = std::abs(lam);
    const double sgn = lam > 0.0 ? 1.0 : -1.0;
    const auto nodes = growth_nodes(beta, L, mu, n + 1);
    ScaledComplex sum;
    double log_l1 = kNegInf;
    double log_err = kNegInf;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i], q = nodes[i + 1];
        // sinh(lam s) e^{-mu q} = sgn (e^{mu (s - q)} - e^{-mu (s + q)}) / 2
        auto f = [&](double s) {
            return beta(s) * std::sin(k * s) * sgn * 0.5 * (std::exp(mu * (s - q)) - std::exp(-mu * (s + q)));
        };
        auto r = integrate<double>(f, a, q);
        sum += ScaledComplex::from_scaled({r.value, 0.0}, mu * q);
        if (r.l1 > 0.0) log_l1 = log_add(log_l1, std::log(r.l1) + mu * q);
        if (r.error > 0.0) log_err = log_add(log_err, std::log(r.error) + mu * q);
    }
    g.value = sum;
    g.log_scale = log_l1;
    g.est_error = log_err == kNegInf ? 0.0 : std::exp(log_err - log_l1);
    return g;
}

GammaValue gamma_indicator_closed(const SystemParams& p, double a, double b, double beta0, long n) {
    if (n < 1) throw DomainError("parabolic mode index must be >= 1");
    if (!(0.0 <= a && a < b && b <= p.length_L)) throw DomainError("indicator requires 0 <= a < b <= L");
    const double L = p.length_L;
    const double k = static_cast<double>(n) * pi / L;
    if (beta0 == 0.0) {
        GammaValue g;
        g.n = n;
        g.method = GammaMethod::ClosedFormIndicator;
        g.log_scale = kNegInf;
        return g;
    }
    if (is_resonant(p, n)) {
        const double kL = L / (static_cast<double>(n) * pi);
        std::vector<ScaledComplex> terms{
            ScaledComplex::from_real(-kL * b * std::cos(k * b)), ScaledComplex::from_real(kL * a * std::cos(k * a)),
            ScaledComplex::from_real(kL * kL * std::sin(k * b)), ScaledComplex::from_real(-kL * kL * std::sin(k * a))};
        return from_terms(n, terms, ScaledComplex::from_real(beta0), GammaMethod::ClosedFormIndicator);
    }
    const double lam = parabolic_eigenvalue(p, n);
    std::vector<ScaledComplex> terms{
        ScaledComplex::from_real(-k * std::cos(k * b)) * scaled_sinh(lam * b),
        ScaledComplex::from_real(k * std::cos(k * a)) * scaled_sinh(lam * a),
        ScaledComplex::from_real(lam * std::sin(k * b)) * scaled_cosh(lam * b),
        ScaledComplex::from_real(-lam * std::sin(k * a)) * scaled_cosh(lam * a)};
    return from_terms(n, terms, ScaledComplex::from_real(beta0 / (lam * lam + k * k)), GammaMethod::ClosedFormIndicator);
}

GammaValue gamma_constant_closed(const SystemParams& p, double beta0, long n) {
    if (n < 1) throw DomainError("parabolic mode index must be >= 1");
    const double L = p.length_L;
    const double k = static_cast<double>(n) * pi / L;
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    if (beta0 == 0.0) {
        GammaValue g;
        g.n = n;
        g.method = GammaMethod::ClosedFormConstant;
        g.log_scale = kNegInf;
        return g;
    }
    if (is_resonant(p, n)) {
        std::vector<ScaledComplex> terms{ScaledComplex::from_real(-parity * L * L / (static_cast<double>(n) * pi))};
        return from_terms(n, terms, ScaledComplex::from_real(beta0), GammaMethod::ClosedFormConstant);
    }
    const double d = k * k - p.reaction_c;
    std::vector<ScaledComplex> terms{scaled_sinh(d * L)};
    return from_terms(n, terms, ScaledComplex::from_real(parity * beta0 * k / (d * d + k * k)), GammaMethod::ClosedFormConstant);
}

GammaValue gamma_coefficient(const SystemParams& p, const CouplingProfile& beta, long n) {
    const auto& kind = beta.kind();
    if (auto* c = std::get_if<ConstantProfile>(&kind)) return gamma_constant_closed(p, c->beta0, n);
    if (auto* ind = std::get_if<IndicatorProfile>(&kind)) return gamma_indicator_closed(p, ind->a, ind->b, ind->beta0, n);
    if (auto* pw = std::get_if<PiecewiseConstantProfile>(&kind)) {
        GammaValue total;
        total.n = n;
        total.method = GammaMethod::ClosedFormIndicator;
        total.log_scale = kNegInf;
        for (const auto& q : pw->pieces) {
            if (q.value == 0.0) continue;
            auto g = gamma_indicator_closed(p, q.a, q.b, q.value, n);
            total.value += g.value;
            total.log_scale = std::max(total.log_scale, g.log_scale);
            total.est_error += g.est_error;
        }
        return total;
    }
    return gamma_quadrature(p, beta, n);
}

// ---------------------------------------------------------------------------
// Gamma_m

std::complex<double> hw_root(const SystemParams& p, long m) {
    std::complex<double> r = std::sqrt(std::conj(hyperbolic_eigenvalue(p, m)) - p.reaction_c);
    if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
    return r;
}

GammaHW gamma_hw_scaled(const SystemParams& p, const CouplingProfile& beta, long m) {
    using boost::math::quadrature::gauss_kronrod;
    const double L = p.length_L;
    GammaHW g;
    g.m = m;
    g.root = hw_root(p, m);
    if (beta.is_zero()) return g;
    const double w = hyperbolic_eigenvalue(p, m).imag();
    const std::complex<double> rho = g.root;
    // beta(s) sinh(i w s) sinh(rho s) e^{-rho L}
    auto f = [&](double s) -> std::complex<double> {
        const std::complex<double> sh = 0.5 * (std::exp(rho * (s - L)) - std::exp(-rho * (s + L)));
        return beta(s) * std::complex<double>(0.0, std::sin(w * s)) * sh;
    };
    const long halfwaves = 2 * (std::abs(m) / 4 + 1);
    const auto nodes = growth_nodes(beta, L, std::max(rho.real(), 1.0), std::max<long>(halfwaves, std::abs(2 * m + 1)));
    auto r = integrate_panels<std::complex<double>>(f, nodes);
    g.scaled_value = r.value;
    g.est_error = r.error;
    g.l1 = r.l1;
    return g;
}

// ---------------------------------------------------------------------------
// Observation coefficients

ObsCoefficient obs_coefficient(const SystemParams& p, const CouplingProfile& beta, const ModeId& mode) {
    const double L = p.length_L;
    ObsCoefficient out;
    out.mode = mode;
    if (p.variant == Variant::WaveHeat) {
        if (mode.is_parabolic()) {
            auto g = gamma_coefficient(p, beta, mode.index);
            if (g.vanishing()) {
                out.vanishing = true;
                return out;
            }
            out.value = adjoint_wave_trace_eval(p, beta, mode.index, L, g.value);
        } else {
            const long m = mode.index;
            const double s = (2 * m + 1 > 0 ? 1.0 : -1.0) * ((m % 2 == 0) ? 1.0 : -1.0);
            out.value = ScaledComplex::from_real(s / std::sqrt(L));
        }
        return out;
    }
    if (mode.is_parabolic()) {
        const long n = mode.index;
        const double s = (n % 2 == 1) ? 1.0 : -1.0;
        out.value = ScaledComplex::from_real(s * std::sqrt(2.0 / L) * static_cast<double>(n) * pi / L);
        return out;
    }
    auto g = gamma_hw_scaled(p, beta, mode.index);
    if (g.vanishing()) {
        out.vanishing = true;
        return out;
    }
    // Gamma / (sqrt(L) sinh(rho L)) = 2 e^{-rho L} Gamma / (sqrt(L) (1 - e^{-2 rho L}))
    const std::complex<double> denom = std::sqrt(L) * (1.0 - std::exp(-2.0 * g.root * L));
    out.value = ScaledComplex::from_complex(2.0 * g.scaled_value / denom);
    return out;
}

// ---------------------------------------------------------------------------
// Zero scan

std::size_t ZeroScanResult::sign_changes(long n) const {
    return static_cast<std::size_t>(std::count_if(zeros.begin(), zeros.end(), [n](const ZeroPoint& z) { return z.n == n; }));
}

ZeroScanResult gamma_zero_scan(const SystemParams& p, double beta0, const ScanLattice& lattice, long n_max,
                               double refine_tol, int workers) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (!(refine_tol > 0.0)) throw DomainError("refine_tol must be positive");
    const double L = p.length_L;
    const auto& A = lattice.a_values;
    const auto& B = lattice.b_values;
    for (double a : A)
        if (a < 0.0 || a > L) throw DomainError("lattice a values must lie in [0, L]");
    for (double b : B)
        if (b < 0.0 || b > L) throw DomainError("lattice b values must lie in [0, L]");

    ZeroScanResult out;
    out.cells_a = A.size() > 0 ? A.size() - 1 : 0;
    out.cells_b = B.size() > 0 ? B.size() - 1 : 0;
    out.cell_mask.assign(out.cells_a * out.cells_b, 0);
    if (beta0 == 0.0) {
        out.degenerate = true;
        return out;
    }

    const std::size_t na = A.size(), nb = B.size();
    const std::size_t nn = static_cast<std::size_t>(n_max);
    auto valid = [&](std::size_t i, std::size_t j) { return A[i] < B[j]; };
    // sign[(i * nb + j) * nn + (n - 1)]
    std::vector<double> sign(na * nb * nn, 0.0);
    std::vector<double> logmag(na * nb * nn, kNegInf);
    std::vector<unsigned char> vanish(na * nb * nn, 0);
    parallel_for(na * nb, workers, [&](std::size_t idx) {
        const std::size_t i = idx / nb, j = idx % nb;
        if (!valid(i, j)) return;
        for (long n = 1; n <= n_max; ++n) {
            auto g = gamma_indicator_closed(p, A[i], B[j], beta0, n);
            const std::size_t s = idx * nn + static_cast<std::size_t>(n - 1);
            vanish[s] = g.vanishing() ? 1 : 0;
            sign[s] = vanish[s] ? 0.0 : g.sign();
            logmag[s] = g.value.log_magnitude();
        }
    });
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            if (!valid(i, j)) continue;
            for (long n = 1; n <= n_max; ++n) {
                const std::size_t s = (i * nb + j) * nn + static_cast<std::size_t>(n - 1);
                out.samples.push_back({n, A[i], B[j], logmag[s], sign[s]});
                if (vanish[s]) out.unresolved.push_back({n, A[i], B[j], 'n', 0.0});
            }
        }

    struct Edge {
        long n;
        std::size_t i0, j0, i1, j1;
        char along;
    };
    std::vector<Edge> edges;
    for (long n = 1; n <= n_max; ++n) {
        auto sg = [&](std::size_t i, std::size_t j) { return sign[(i * nb + j) * nn + static_cast<std::size_t>(n - 1)]; };
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j + 1 < nb; ++j)
                if (valid(i, j) && valid(i, j + 1) && sg(i, j) * sg(i, j + 1) < 0.0) edges.push_back({n, i, j, i, j + 1, 'b'});
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t i = 0; i + 1 < na; ++i)
                if (valid(i, j) && valid(i + 1, j) && sg(i, j) * sg(i + 1, j) < 0.0) edges.push_back({n, i, j, i + 1, j, 'a'});
    }
    out.zeros.resize(edges.size());
    parallel_for(edges.size(), workers, [&](std::size_t e) {
        const Edge& ed = edges[e];
        double a0 = A[ed.i0], b0 = B[ed.j0], a1 = A[ed.i1], b1 = B[ed.j1];
        const double s0 = sign[(ed.i0 * nb + ed.j0) * nn + static_cast<std::size_t>(ed.n - 1)];
        auto width = [&] { return std::abs(a1 - a0) + std::abs(b1 - b0); };
        for (int it = 0; it < 200 && width() > refine_tol; ++it) {
            const double am = 0.5 * (a0 + a1), bm = 0.5 * (b0 + b1);
            const auto g = gamma_indicator_closed(p, am, bm, beta0, ed.n);
            const double sm = g.value.is_zero() ? 0.0 : g.sign();
            if (sm == 0.0) {
                a0 = a1 = am;
                b0 = b1 = bm;
                break;
            }
            if (sm == s0) {
                a0 = am;
                b0 = bm;
            } else {
                a1 = am;
                b1 = bm;
            }
        }
        out.zeros[e] = {ed.n, 0.5 * (a0 + a1), 0.5 * (b0 + b1), ed.along, width()};
    });

    for (std::size_t i = 0; i < out.cells_a; ++i)
        for (std::size_t j = 0; j < out.cells_b; ++j) {
            for (long n = 1; n <= n_max; ++n) {
                bool pos = false, neg = false;
                for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
                    const std::size_t ii = i + di, jj = j + dj;
                    if (!valid(ii, jj)) continue;
                    const double s = sign[(ii * nb + jj) * nn + static_cast<std::size_t>(n - 1)];
                    pos |= s > 0.0;
                    neg |= s < 0.0;
                }
                if (pos && neg) {
                    out.cell_mask[i * out.cells_b + j] = 1;
                    break;
                }
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Exponent fit

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw InsufficientRange("least squares needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InsufficientRange("degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / static_cast<double>(n));
    return f;
}

ExponentFit gamma_hw_exponent_fit(const SystemParams& p, const CouplingProfile& beta, long m_lo, long m_hi, int workers,
                                  int samples) {
    m_lo = std::max<long>(std::abs(m_lo), 16);
    m_hi = std::abs(m_hi);
    if (m_hi < 10 * m_lo) throw InsufficientRange("exponent fit needs m_hi >= 10 m_lo with m_lo >= 16");
    std::vector<long> ms;
    const int count = std::max(samples, 4);
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        const long m = std::lround(std::exp(std::log(static_cast<double>(m_lo)) * (1.0 - t) + std::log(static_cast<double>(m_hi)) * t));
        if (ms.empty() || ms.back() != m) ms.push_back(m);
    }
    const double L = p.length_L;
    std::vector<double> vals(ms.size(), kNegInf);
    parallel_for(ms.size(), workers, [&](std::size_t i) {
        const auto g = gamma_hw_scaled(p, beta, ms[i]);
        if (g.scaled_value == 0.0) return;
        vals[i] = 2.0 * g.log_abs(L) - std::sqrt(2.0 * static_cast<double>(ms[i]) * pi * L);
    });
    ExponentFit fit;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (!std::isfinite(vals[i])) continue;
        fit.m_values.push_back(ms[i]);
        fit.log_values.push_back(vals[i]);
        x.push_back(std::log(static_cast<double>(ms[i])));
        y.push_back(vals[i]);
    }
    if (x.size() < 4) throw InsufficientRange("too few nonvanishing coefficients in range");
    const auto all = least_squares(x, y);
    fit.p = -all.slope;
    fit.intercept = all.intercept;
    fit.residual = all.residual;
    const std::size_t h = x.size() / 2;
    const auto lo = least_squares({x.begin(), x.begin() + static_cast<long>(h) + 1}, {y.begin(), y.begin() + static_cast<long>(h) + 1});
    const auto hi = least_squares({x.begin() + static_cast<long>(h), x.end()}, {y.begin() + static_cast<long>(h), y.end()});
    fit.p_lower = -lo.slope;
    fit.p_upper = -hi.slope;
    fit.super_polynomial = fit.p_upper - fit.p_lower > 1.0;
    return fit;
}

}  // namespace cascade
