#include "cascade/hum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cascade/errors.hpp"
#include "cascade/parallel.hpp"

namespace cascade {

using std::numbers::pi;

namespace {

constexpr double kEscalate = 1e12;
constexpr double kDoubleCeiling = 1e15;

template <class R>
Cx<R> cexp(R re, R im) {
    const R m = detail::r_exp(re);
    return {m * detail::r_cos(im), m * detail::r_sin(im)};
}

template <class R>
Cx<R> from_scaled_complex(const ScaledComplex& z) {
    if (z.is_zero()) return Cx<R>(R(0.0));
    return detail::r_exp(R(z.log_magnitude())) * unit_phasor<R>(z);
}

template <class R>
Cx<DoubleDouble> widen(const Cx<R>& z) {
    if constexpr (std::is_same_v<R, DoubleDouble>)
        return z;
    else
        return {DoubleDouble(z.re), DoubleDouble(z.im)};
}

template <class R>
Cx<R> narrow(const Cx<DoubleDouble>& z) {
    if constexpr (std::is_same_v<R, DoubleDouble>)
        return z;
    else
        return {to_double(z.re), to_double(z.im)};
}

// x_k(t) = e^{lambda_k t} x_k(0) + B_k sum_j alpha_j e^{conj(lambda_j)(T - t)} E_t(lambda_k + conj(lambda_j)).
template <class R>
std::vector<Cx<R>> duhamel(const ModalSystem& sys, const std::vector<Cx<R>>& alpha,
                           const std::vector<std::complex<double>>& init, double T, double t) {
    const std::size_t n = sys.size();
    std::vector<Cx<R>> x(n);
    const R rt(t);
    const R rem = R(T) - rt;
    for (std::size_t k = 0; k < n; ++k) {
        const auto lk = sys.eigenvalues[k];
        Cx<R> xk = cexp<R>(R(lk.real()) * rt, R(lk.imag()) * rt) * Cx<R>::from(init[k]);
        Cx<R> sum(R(0.0));
        for (std::size_t j = 0; j < n; ++j) {
            const auto lj = sys.eigenvalues[j];
            R shift;
            const Cx<R> e = exp_integral_shifted<R>(lk + std::conj(lj), t, shift);
            const Cx<R> f = cexp<R>(shift + R(lj.real()) * rem, -R(lj.imag()) * rem);
            sum += alpha[j] * (f * e);
        }
        xk += from_scaled_complex<R>(sys.input_coefficient(k)) * sum;
        x[k] = xk;
    }
    return x;
}

std::vector<int> pair_map(const ModalSystem& sys) {
    std::vector<int> pair(sys.size(), -1);
    for (std::size_t k = 0; k < sys.size(); ++k) {
        const auto& m = sys.modes[k];
        pair[k] = m.is_parabolic() ? static_cast<int>(k) : sys.index_of(ModeId::hyperbolic(-1 - m.index));
    }
    return pair;
}

bool close(std::complex<double> a, std::complex<double> b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Data and coefficients invariant under the conjugation m -> -1-m.
bool real_symmetric(const ModalSystem& sys, const std::vector<std::complex<double>>& x0,
                    const std::vector<std::complex<double>>& x1) {
    if (!sys.truncation.paired) return false;
    const auto pair = pair_map(sys);
    for (std::size_t k = 0; k < sys.size(); ++k) {
        if (pair[k] < 0) return false;
        const auto p = static_cast<std::size_t>(pair[k]);
        if (!close(x0[p], std::conj(x0[k]), 1e-12) || !close(x1[p], std::conj(x1[k]), 1e-12)) return false;
        if (!close(sys.obs_coeffs[p].to_complex(), std::conj(sys.obs_coeffs[k].to_complex()), 1e-10)) return false;
        if (!close(sys.eigenvalues[p], std::conj(sys.eigenvalues[k]), 1e-12)) return false;
    }
    return true;
}

template <class R>
struct Attempt {
    std::vector<Cx<R>> alpha;
    std::vector<ScaledComplex> eta;
    double energy = 0.0;
    std::vector<std::complex<double>> residual;
    double max_rel = std::numeric_limits<double>::infinity();
    bool projected = false;
};

template <class R>
Attempt<R> attempt(const ModalSystem& sys, const ExponentialFamily& fam, const std::vector<std::complex<double>>& x0,
                   const std::vector<std::complex<double>>& x1, double T, bool project) {
    const std::size_t n = sys.size();
    const auto K = preconditioned_kernel<R>(fam);
    std::vector<R> sqrtE(n);
    std::vector<R> dhalf(n);
    std::vector<Cx<R>> r(n);
    for (std::size_t k = 0; k < n; ++k) {
        R s;
        const Cx<R> e = exp_integral_shifted<R>(2.0 * sys.eigenvalues[k].real(), T, s);
        sqrtE[k] = detail::r_sqrt(e.re) * detail::r_exp(R(0.5) * s);
        dhalf[k] = detail::r_exp(R(sys.obs_coeffs[k].log_magnitude())) * sqrtE[k];
        const auto lk = sys.eigenvalues[k];
        const Cx<R> free = cexp<R>(R(lk.real()) * R(T), R(lk.imag()) * R(T)) * Cx<R>::from(x0[k]);
        const Cx<R> d = Cx<R>::from(x1[k]) - free;
        r[k] = (R(1.0) / dhalf[k]) * d;
    }
    EmbeddedLU<R> lu(K);
    Attempt<R> out;
    if (lu.singular()) return out;
    const auto y = lu.solve(r);
    out.alpha.resize(n);
    out.eta.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Cx<R> ys = (R(1.0) / sqrtE[k]) * y[k];
        // The conjugate of the exact phasor used in the kernel; any mismatch is
        // amplified by the cancellation in the endpoint sum.
        out.alpha[k] = unit_phasor<R>(fam.amplitudes[k]).conj() * ys;
        out.eta[k] = ScaledComplex::from_scaled(ys.to_std(), -sys.obs_coeffs[k].log_magnitude());
    }
    if (project) {
        const auto pair = pair_map(sys);
        std::vector<Cx<R>> a(n);
        for (std::size_t k = 0; k < n; ++k)
            a[k] = R(0.5) * (out.alpha[k] + out.alpha[static_cast<std::size_t>(pair[k])].conj());
        out.alpha = a;
        out.projected = true;
    }
    const auto Ky = matvec(K, y);
    R en(0.0);
    for (std::size_t k = 0; k < n; ++k) en = en + (y[k].conj() * Ky[k]).re;
    out.energy = to_double(en);
    const auto xT = duhamel<R>(sys, out.alpha, x0, T, T);
    out.residual.resize(n);
    out.max_rel = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out.residual[k] = (xT[k] - Cx<R>::from(x1[k])).to_std();
        out.max_rel = std::max(out.max_rel, std::abs(out.residual[k]) / (1.0 + std::abs(x1[k])));
    }
    return out;
}

template <class R>
void fill(HumSolution& sol, const Attempt<R>& a, Precision prec) {
    sol.alpha.clear();
    for (const auto& z : a.alpha) sol.alpha.push_back(widen(z));
    sol.moment_coeffs = a.eta;
    sol.energy = a.energy;
    sol.endpoint_residual = a.residual;
    sol.max_relative_residual = a.max_rel;
    sol.real_projected = a.projected;
    sol.precision_used = prec;
}

}  // namespace

int ModalSystem::index_of(const ModeId& id) const {
    for (std::size_t k = 0; k < modes.size(); ++k)
        if (modes[k] == id) return static_cast<int>(k);
    return -1;
}

std::vector<std::complex<double>> ModalSystem::to_vector(const ModalVector& v) const {
    std::vector<std::complex<double>> x(size(), 0.0);
    auto place = [&](const std::map<long, std::complex<double>>& src, bool parabolic) {
        for (const auto& [i, c] : src) {
            const ModeId id = parabolic ? ModeId{ModeId::Family::Parabolic, i} : ModeId::hyperbolic(i);
            const int k = index_of(id);
            if (k < 0) throw DomainError("mode " + to_string(id) + " outside the truncation");
            x[static_cast<std::size_t>(k)] = c;
        }
    };
    place(v.parabolic_coeffs, true);
    place(v.hyperbolic_coeffs, false);
    return x;
}

ModalVector ModalSystem::to_modal(const std::vector<std::complex<double>>& x) const {
    ModalVector v;
    for (std::size_t k = 0; k < size(); ++k) {
        if (modes[k].is_parabolic())
            v.parabolic_coeffs[modes[k].index] = x[k];
        else
            v.hyperbolic_coeffs[modes[k].index] = x[k];
    }
    return v;
}

ModalSystem build_modal_system(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc) {
    p.validate();
    beta.validate(p.length_L);
    if (trunc.parabolic < 0 || trunc.hyperbolic < 0) throw ConfigError("truncation", "sizes must be nonnegative");
    ModalSystem s;
    s.params = p;
    s.truncation = trunc;
    auto add = [&](const ModeId& id, std::complex<double> lambda) {
        const auto b = obs_coefficient(p, beta, id);
        if (b.vanishing || b.value.is_zero()) throw VanishingCoupling(id.index, !id.is_parabolic());
        s.modes.push_back(id);
        s.eigenvalues.push_back(lambda);
        s.obs_coeffs.push_back(b.value);
    };
    for (long n = 1; n <= trunc.parabolic; ++n) add(ModeId::parabolic(n), parabolic_eigenvalue(p, n));
    for (long m : trunc.hyperbolic_indices()) add(ModeId::hyperbolic(m), hyperbolic_eigenvalue(p, m));
    const bool hw = p.variant == Variant::HeatWave;
    s.weights_V = build_weights(p, beta, hw ? SpaceTag::VHW : SpaceTag::V, trunc);
    s.weights_Vprime = dual_weights(s.weights_V);
    return s;
}

std::complex<double> HumSolution::control(double s) const {
    std::complex<double> u = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        u += alpha[j].to_std() * std::exp(control_exponents[j] * (horizon - s));
    return real_projected ? std::complex<double>(u.real(), 0.0) : u;
}

HumSolution hum_solve(const ModalSystem& sys, const ModalVector& init, const ModalVector& target, double T,
                      Precision ceiling) {
    if (!(T > 0.0)) throw DomainError("horizon must be positive");
    if (sys.size() == 0) throw DomainError("empty modal system");
    const auto x0 = sys.to_vector(init);
    const auto x1 = sys.to_vector(target);
    HumSolution sol;
    sol.horizon = T;
    if (T <= 2.0 * sys.params.length_L)
        sol.warnings.push_back("T <= 2L: truncation-only result, no continuum meaning");

    ExponentialFamily fam;
    fam.horizon = T;
    for (std::size_t k = 0; k < sys.size(); ++k) {
        fam.exponents.push_back(sys.eigenvalues[k]);
        fam.amplitudes.push_back(sys.input_coefficient(k));
        sol.control_exponents.push_back(std::conj(sys.eigenvalues[k]));
    }
    sol.gramian = exp_gram(fam);
    const auto ev = hermitian_eigenvalues(sol.gramian.preconditioned);
    const double emin = ev(0);
    const double emax = ev(ev.size() - 1);
    sol.condition = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();

    const bool project = real_symmetric(sys, x0, x1);
    bool use_double = sol.condition <= kEscalate;
    if (!use_double && ceiling == Precision::Double) {
        if (sol.condition > kDoubleCeiling) throw IllConditioned(sol.condition, std::numeric_limits<double>::quiet_NaN());
        use_double = true;
    }
    if (use_double) {
        const auto a = attempt<double>(sys, fam, x0, x1, T, project);
        fill(sol, a, Precision::Double);
        if (a.max_rel <= kEndpointTol) return sol;
        if (ceiling == Precision::Double) throw IllConditioned(sol.condition, a.max_rel);
    }
    const auto a = attempt<DoubleDouble>(sys, fam, x0, x1, T, project);
    if (a.alpha.empty()) throw IllConditioned(sol.condition, std::numeric_limits<double>::infinity());
    fill(sol, a, Precision::DoubleDouble);
    if (!(a.max_rel <= kEndpointTol)) throw IllConditioned(sol.condition, a.max_rel);
    return sol;
}

std::vector<std::complex<double>> duhamel_eval(const ModalSystem& sys, const std::vector<Cx<DoubleDouble>>& alpha,
                                               const std::vector<std::complex<double>>& init, double T, double t,
                                               Precision precision) {
    if (alpha.size() != sys.size() || init.size() != sys.size()) throw DomainError("vector sizes do not match the system");
    std::vector<std::complex<double>> out;
    if (precision == Precision::DoubleDouble) {
        for (const auto& z : duhamel<DoubleDouble>(sys, alpha, init, T, t)) out.push_back(z.to_std());
    } else {
        std::vector<Cx<double>> a;
        for (const auto& z : alpha) a.push_back(narrow<double>(z));
        for (const auto& z : duhamel<double>(sys, a, init, T, t)) out.push_back(z.to_std());
    }
    return out;
}

std::vector<TrajectorySample> trajectory_eval(const ModalSystem& sys, const HumSolution& sol, const ModalVector& init,
                                              const std::vector<double>& times) {
    const auto x0 = sys.to_vector(init);
    std::vector<TrajectorySample> out;
    for (double t : times) {
        if (t < 0.0 || t > sol.horizon) throw DomainError("trajectory time outside [0, T]");
        TrajectorySample s;
        s.t = t;
        s.coeffs = duhamel_eval(sys, sol.alpha, x0, sol.horizon, t, sol.precision_used);
        double h = 0.0;
        for (const auto& c : s.coeffs) h += std::norm(c);
        s.h_norm = std::sqrt(h);
        const auto mv = sys.to_modal(s.coeffs);
        s.v_norm_log = weighted_norm(mv, sys.weights_V).log_value;
        s.vprime_norm_log = weighted_norm(mv, sys.weights_Vprime).log_value;
        out.push_back(std::move(s));
    }
    return out;
}

NoninvPoint noninv_own_mode(const SystemParams& p0, const CouplingProfile& beta, long n, double t, double T) {
    if (!(t > 0.0 && t < T)) throw DomainError("need 0 < t < T");
    SystemParams p = p0;
    p.horizon_T = T;
    p.variant = Variant::WaveHeat;
    const auto g = gamma_coefficient(p, beta, n);
    if (g.vanishing()) throw VanishingCoupling(n, false);
    const auto b = obs_coefficient(p, beta, ModeId::parabolic(n));
    NoninvPoint out;
    out.n = n;
    const double lb = b.value.log_magnitude();
    const double lambda = parabolic_eigenvalue(p, n);
    double log_x;
    if (is_resonant(p, n)) {
        // d/dt x = beta_n^2 with x(0) = 0.
        out.resonant = true;
        log_x = 2.0 * lb + std::log(t);
    } else {
        // beta_n^2 e^{lambda T} sinh(lambda t) / lambda; sinh(lambda t)/lambda > 0.
        log_x = 2.0 * lb + lambda * T + log_abs_sinh(lambda * t) - std::log(std::abs(lambda));
    }
    out.x_value = ScaledComplex::from_log_phase(log_x, 2.0 * b.value.phase());
    const double dn = static_cast<double>(n);
    const double nu = nu_value(p, false);
    out.ratio_log = 8.0 * std::log(dn) - 4.0 * g.value.log_magnitude() + 2.0 * nu * dn * dn + 2.0 * log_x;
    return out;
}

NoninvScan noninv_scan(const SystemParams& p, const CouplingProfile& beta, double T, double t, long n_lo, long n_hi,
                       int workers) {
    if (n_lo < 1 || n_hi < n_lo) throw DomainError("invalid n range");
    if (!(T > 0.0)) throw DomainError("horizon must be positive");
    NoninvScan out;
    out.rows.resize(static_cast<std::size_t>(n_hi - n_lo + 1));
    parallel_for(out.rows.size(), workers, [&](std::size_t i) {
        out.rows[i] = noninv_own_mode(p, beta, n_lo + static_cast<long>(i), t, T);
    });
    std::vector<double> x, y;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const double dn = static_cast<double>(out.rows[i].n);
        x.push_back(dn * dn);
        y.push_back(out.rows[i].ratio_log);
        if (i > 0 && !(out.rows[i].ratio_log > out.rows[i - 1].ratio_log)) out.increasing = false;
    }
    if (x.size() >= 2) {
        const auto fit = least_squares(x, y);
        out.slope = fit.slope;
        out.intercept = fit.intercept;
        out.residual = fit.residual;
    }
    const double L = p.length_L;
    out.expected_slope = 2.0 * pi * pi * (T + t) / (L * L);
    return out;
}

std::pair<double, double> semigroup_v_invariance_check(const ModalSystem& sys, const ModalVector& vec, double t) {
    auto x = sys.to_vector(vec);
    const double before = weighted_norm(sys.to_modal(x), sys.weights_V).log_value;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= std::exp(sys.eigenvalues[k] * t);
    const double after = weighted_norm(sys.to_modal(x), sys.weights_V).log_value;
    return {before, after};
}

}  // namespace cascade
