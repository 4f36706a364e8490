#include "cascade/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"
#include "cascade/parallel.hpp"

namespace cascade {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDoubleEscalate = 1e12;
constexpr double kDoubleCeiling = 1e15;
constexpr double kDDCeiling = 1e28;

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

struct InverseResult {
    Eigen::MatrixXcd inverse;
    double condition = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    Precision precision = Precision::Double;
    bool ok = false;
};

// Inverse of the preconditioned Gram, escalating to double-double when the
// double eigen-decomposition cannot be trusted.
InverseResult robust_inverse(const GramMatrix& g, Precision ceiling) {
    InverseResult r;
    const Eigen::MatrixXcd& Gt = g.preconditioned;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(Gt));
    const double emin = es.eigenvalues()(0);
    const double emax = es.eigenvalues()(g.n - 1);
    const double cond = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    r.condition = cond;
    const bool double_ok = emin > 0.0 && cond <= kDoubleEscalate;
    if (double_ok || ceiling == Precision::Double) {
        if (!(emin > 0.0) || cond > kDoubleCeiling) return r;
        const Eigen::VectorXd inv_e = es.eigenvalues().cwiseInverse();
        r.inverse = es.eigenvectors() * inv_e.asDiagonal() * es.eigenvectors().adjoint();
        r.precision = Precision::Double;
    } else {
        r.precision = Precision::DoubleDouble;
        const auto K = preconditioned_kernel<DoubleDouble>(g.family);
        EmbeddedLU<DoubleDouble> lu(K);
        if (lu.singular()) return r;
        r.inverse = to_eigen(lu.inverse());
        const double top = hermitian_eigenvalues(r.inverse)(g.n - 1);
        if (!(top > 0.0)) return r;
        r.condition = emax * top;
        if (r.condition > kDDCeiling) return r;
    }
    r.residual = (Gt * r.inverse - Eigen::MatrixXcd::Identity(g.n, g.n)).norm();
    r.ok = true;
    return r;
}

}  // namespace

void ExponentialFamily::validate() const {
    if (exponents.size() != amplitudes.size()) throw DomainError("exponents and amplitudes differ in length");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
    for (const auto& a : amplitudes)
        if (a.is_zero()) throw DomainError("zero amplitude in exponential family");
}

Eigen::MatrixXcd GramMatrix::scaled(double shift) const {
    Eigen::MatrixXcd out(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out(j, k) = at(j, k).scaled(shift);
    return out;
}

ScaledComplex exp_integral(std::complex<double> z, double T) {
    double shift = 0.0;
    const auto v = exp_integral_shifted<double>(z, T, shift);
    return ScaledComplex::from_scaled(v.to_std(), shift);
}

GramMatrix exp_gram(const ExponentialFamily& family) {
    family.validate();
    GramMatrix g;
    g.family = family;
    g.n = static_cast<int>(family.size());
    g.entries.resize(static_cast<std::size_t>(g.n) * g.n);
    g.log_diag.resize(g.n);
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
            const auto e = exp_integral(family.exponents[j] + std::conj(family.exponents[k]), family.horizon);
            g.entries[static_cast<std::size_t>(j) * g.n + k] = family.amplitudes[j] * family.amplitudes[k].conj() * e;
        }
    for (int j = 0; j < g.n; ++j) g.log_diag[j] = g.at(j, j).log_magnitude();
    g.preconditioned = to_eigen(preconditioned_kernel<double>(family));
    return g;
}

SpectralEstimate weighted_extreme_eigs(const GramMatrix& g, const std::vector<double>& log_weights, Precision ceiling,
                                       bool throw_on_floor) {
    if (static_cast<int>(log_weights.size()) != g.n) throw DomainError("weight count does not match the Gram size");
    SpectralEstimate out;
    const int n = g.n;
    // A = W^{-1/2} G W^{-1/2} = Delta Gt Delta with Delta = exp(ell).
    std::vector<double> ell(n);
    for (int k = 0; k < n; ++k) ell[k] = 0.5 * (g.log_diag[k] - log_weights[k]);
    const double ell_min = *std::min_element(ell.begin(), ell.end());
    const double ell_max = *std::max_element(ell.begin(), ell.end());

    Eigen::VectorXd dmax(n);
    for (int k = 0; k < n; ++k) dmax(k) = std::exp(ell[k] - ell_max);
    const Eigen::MatrixXcd top = dmax.asDiagonal() * g.preconditioned * dmax.asDiagonal();
    const double lam_top = hermitian_eigenvalues(top)(n - 1);
    out.log_max_eig = 2.0 * ell_max + std::log(lam_top);
    out.max_eig = std::exp(out.log_max_eig);

    const auto inv = robust_inverse(g, ceiling);
    out.condition = inv.condition;
    out.precision_used = inv.precision;
    if (!inv.ok) {
        if (throw_on_floor) throw IllConditioned(inv.condition, inv.residual);
        out.below_floor = true;
        out.log_min_eig = kNegInf;
        out.min_eig = 0.0;
        return out;
    }
    // min eig(A) = exp(2 ell_min) / max eig(Dh Gt^{-1} Dh), Dh = exp(ell_min - ell) <= 1.
    Eigen::VectorXd dh(n);
    for (int k = 0; k < n; ++k) dh(k) = std::exp(ell_min - ell[k]);
    const Eigen::MatrixXcd B = hermitize(dh.asDiagonal() * inv.inverse * dh.asDiagonal());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
    const double mu = es.eigenvalues()(n - 1);
    if (!(mu > 0.0)) {
        if (throw_on_floor) throw IllConditioned(inv.condition, inv.residual);
        out.below_floor = true;
        out.log_min_eig = kNegInf;
        return out;
    }
    out.log_min_eig = 2.0 * ell_min - std::log(mu);
    out.min_eig = std::exp(out.log_min_eig);
    const Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
    out.witness.resize(n);
    for (int k = 0; k < n; ++k) {
        if (v(k) == 0.0) continue;
        out.witness[k] = ScaledComplex::from_log_phase(std::log(std::abs(v(k))) - 0.5 * log_weights[k], std::arg(v(k)));
    }
    return out;
}

ObservationFamily observation_family(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc) {
    p.validate();
    ObservationFamily out;
    out.family.horizon = p.horizon_T;
    auto add = [&](const ModeId& mode, std::complex<double> lambda) {
        const auto b = obs_coefficient(p, beta, mode);
        if (b.vanishing || b.value.is_zero()) throw VanishingCoupling(mode.index, !mode.is_parabolic());
        out.modes.push_back(mode);
        out.family.exponents.push_back(std::conj(lambda));
        out.family.amplitudes.push_back(b.value);
    };
    for (long n = 1; n <= trunc.parabolic; ++n) add(ModeId::parabolic(n), parabolic_eigenvalue(p, n));
    for (long m : trunc.hyperbolic_indices()) add(ModeId::hyperbolic(m), hyperbolic_eigenvalue(p, m));
    return out;
}

ObsEstimate obs_constant_estimate(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc,
                                  const std::optional<WeightSequence>& weights, Precision ceiling) {
    const auto fam = observation_family(p, beta, trunc);
    const auto g = exp_gram(fam.family);
    std::vector<double> lw(fam.modes.size(), 0.0);
    if (weights) {
        for (std::size_t k = 0; k < fam.modes.size(); ++k) {
            const auto& m = fam.modes[k];
            const auto& src = m.is_parabolic() ? weights->parabolic_log_weights : weights->hyperbolic_log_weights;
            auto it = src.find(m.index);
            if (it == src.end()) throw DomainError("weights do not cover mode " + to_string(m));
            lw[k] = it->second;
        }
    }
    const auto est = weighted_extreme_eigs(g, lw, ceiling, true);
    ObsEstimate out;
    out.log_C_T = est.log_min_eig;
    out.C_T = est.min_eig;
    out.modes = fam.modes;
    out.witness = est.witness;
    out.condition = est.condition;
    out.precision_used = est.precision_used;
    return out;
}

AdmissibilityResult admissibility_constant(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc) {
    AdmissibilityResult out;
    std::vector<int> ladder;
    for (int h = 1; h < trunc.hyperbolic; h *= 2) ladder.push_back(h);
    ladder.push_back(std::max(trunc.hyperbolic, 0));
    double prev = 0.0;
    for (int h : ladder) {
        Truncation t = trunc;
        t.hyperbolic = h;
        const auto fam = observation_family(p, beta, t);
        const auto g = exp_gram(fam.family);
        const auto est = weighted_extreme_eigs(g, std::vector<double>(fam.modes.size(), 0.0), Precision::Double, false);
        out.ladder.push_back({h, est.max_eig});
        if (!out.ladder.empty() && out.ladder.size() > 1 && out.plateau_hyperbolic < 0 &&
            std::abs(est.max_eig - prev) < 0.01 * std::abs(prev))
            out.plateau_hyperbolic = h;
        prev = est.max_eig;
        out.K_T = est.max_eig;
    }
    return out;
}

std::vector<InghamRow> ingham_gap_profile(double L, const std::vector<double>& T_list, const std::vector<int>& N_h_list,
                                          Precision ceiling, int workers) {
    if (!(L > 0.0)) throw ConfigError("length_L", "must be positive");
    std::vector<InghamRow> rows(T_list.size() * N_h_list.size());
    parallel_for(rows.size(), workers, [&](std::size_t idx) {
        const double T = T_list[idx / N_h_list.size()];
        const int N = N_h_list[idx % N_h_list.size()];
        if (!(T > 0.0)) throw ConfigError("T_list", "horizons must be positive");
        if (N < 1) throw ConfigError("N_h_list", "counts must be at least 1");
        SystemParams p;
        p.length_L = L;
        p.horizon_T = T;
        ExponentialFamily f;
        f.horizon = T;
        // m = 0, -1, 1, -2, 2, ...
        for (int i = 0; i < N; ++i) {
            const long m = (i % 2 == 1) ? -static_cast<long>((i + 1) / 2) : static_cast<long>(i / 2);
            f.exponents.push_back(hyperbolic_eigenvalue(p, m));
            f.amplitudes.push_back(ScaledComplex::from_real(1.0));
        }
        const auto g = exp_gram(f);
        const auto est = weighted_extreme_eigs(g, std::vector<double>(N, 0.0), ceiling, false);
        rows[idx] = {T, N, est.min_eig, est.precision_used, est.below_floor};
    });
    return rows;
}

}  // namespace cascade
