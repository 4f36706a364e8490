#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cascade/double_double.hpp"
#include "cascade/linalg.hpp"
#include "cascade/scaled_complex.hpp"
#include "cascade/spaces.hpp"
#include "cascade/spectral_core.hpp"

namespace cascade {

struct ExponentialFamily {
    std::vector<std::complex<double>> exponents;
    std::vector<ScaledComplex> amplitudes;
    double horizon = 1.0;

    std::size_t size() const { return exponents.size(); }
    void validate() const;
};

// Entries G(j,k) = c_j conj(c_k) int_0^T e^{(lambda_j + conj lambda_k) t} dt.
struct GramMatrix {
    int n = 0;
    std::vector<ScaledComplex> entries;  // row-major
    std::vector<double> log_diag;
    Eigen::MatrixXcd preconditioned;     // D^{-1/2} G D^{-1/2}, D = diag(G)
    ExponentialFamily family;

    const ScaledComplex& at(int j, int k) const { return entries[static_cast<std::size_t>(j) * n + k]; }
    Eigen::MatrixXcd scaled(double shift) const;  // e^{-shift} G
};

// Below this |z| T the removable singularity of (e^{zT} - 1) / z is handled by series.
inline constexpr double kSeriesThreshold = 1e-8;

namespace detail {

template <class R>
R r_exp(R x) {
    using std::exp;
    return exp(x);
}
template <class R>
R r_expm1(R x) {
    using std::expm1;
    return expm1(x);
}
template <class R>
R r_sin(R x) {
    using std::sin;
    return sin(x);
}
template <class R>
R r_cos(R x) {
    using std::cos;
    return cos(x);
}
template <class R>
R r_sqrt(R x) {
    using std::sqrt;
    return sqrt(x);
}

}  // namespace detail

// e^{i arg z} in precision R; exact for real z so that +-1 carries no spurious imaginary part.
template <class R>
Cx<R> unit_phasor(const ScaledComplex& z) {
    const double th = z.phase();
    if (th == 0.0) return Cx<R>(R(1.0));
    if (std::abs(th) == std::numbers::pi) return Cx<R>(R(-1.0));
    return {detail::r_cos(R(th)), detail::r_sin(R(th))};
}

// (e^{zT} - 1) / z = e^{shift} * returned value, with shift = max(0, Re(z) T).
template <class R>
Cx<R> exp_integral_shifted(std::complex<double> zd, double Td, R& shift) {
    const Cx<R> z = Cx<R>::from(zd);
    const R T(Td);
    const R a = z.re * T;
    const R b = z.im * T;
    shift = R(0.0);
    if (std::abs(zd) * Td < kSeriesThreshold) {
        const Cx<R> zt{a, b};
        Cx<R> s = Cx<R>(R(1.0)) + R(1.0 / 2.0) * zt + R(1.0 / 6.0) * (zt * zt) + R(1.0 / 24.0) * (zt * zt * zt);
        return T * s;
    }
    Cx<R> num;
    if (to_double(a) > 1.0) {
        shift = a;
        const R ea = detail::r_exp(-a);
        num = {detail::r_cos(b) - ea, detail::r_sin(b)};
    } else {
        const R sh = detail::r_sin(b * R(0.5));
        num = {detail::r_expm1(a) * detail::r_cos(b) - R(2.0) * sh * sh, detail::r_exp(a) * detail::r_sin(b)};
    }
    return num / z;
}

ScaledComplex exp_integral(std::complex<double> z, double T);

// D^{-1/2} G D^{-1/2} evaluated entirely in precision R.
template <class R>
CMatrix<R> preconditioned_kernel(const ExponentialFamily& f) {
    const int n = static_cast<int>(f.size());
    CMatrix<R> out(n);
    std::vector<R> diag_shift(n);
    std::vector<R> diag_val(n);
    std::vector<Cx<R>> phase(n);
    for (int j = 0; j < n; ++j) {
        R s;
        Cx<R> e = exp_integral_shifted<R>(2.0 * f.exponents[j].real(), f.horizon, s);
        diag_shift[j] = s;
        diag_val[j] = e.re;
        phase[j] = unit_phasor<R>(f.amplitudes[j]);
    }
    for (int j = 0; j < n; ++j) {
        out(j, j) = Cx<R>(R(1.0));
        for (int k = j + 1; k < n; ++k) {
            R s;
            Cx<R> e = exp_integral_shifted<R>(f.exponents[j] + std::conj(f.exponents[k]), f.horizon, s);
            const R expo = s - R(0.5) * (diag_shift[j] + diag_shift[k]);
            const R scale = detail::r_exp(expo) / detail::r_sqrt(diag_val[j] * diag_val[k]);
            const Cx<R> v = scale * (phase[j] * phase[k].conj() * e);
            out(j, k) = v;
            out(k, j) = v.conj();
        }
    }
    return out;
}

GramMatrix exp_gram(const ExponentialFamily& family);

struct SpectralEstimate {
    double min_eig = 0.0;          // linear value; 0 when it underflows
    double log_min_eig = 0.0;
    double max_eig = 0.0;
    double log_max_eig = 0.0;
    double condition = 0.0;        // of the preconditioned Gram
    Precision precision_used = Precision::Double;
    bool below_floor = false;      // minimum eigenvalue not resolvable at the ceiling precision
    std::vector<ScaledComplex> witness;  // minimizing coefficients, unit weighted norm
};

// Extreme eigenvalues of W^{-1/2} G W^{-1/2}, W = diag(exp(log_weights)).
// Raises IllConditioned when the minimum is not resolvable and throw_on_floor is set.
SpectralEstimate weighted_extreme_eigs(const GramMatrix& g, const std::vector<double>& log_weights, Precision ceiling,
                                       bool throw_on_floor);

// Exponents {lambda_k} (adjoint spectrum) and observation coefficients as amplitudes.
struct ObservationFamily {
    std::vector<ModeId> modes;
    ExponentialFamily family;
};
ObservationFamily observation_family(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc);

struct ObsEstimate {
    double C_T = 0.0;
    double log_C_T = 0.0;
    std::vector<ModeId> modes;
    std::vector<ScaledComplex> witness;
    double condition = 0.0;
    Precision precision_used = Precision::Double;
};

// Truncated lower observability constant in the metric of `weights`
// (unit weights when absent).
ObsEstimate obs_constant_estimate(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc,
                                  const std::optional<WeightSequence>& weights, Precision ceiling = Precision::DoubleDouble);

struct AdmissibilityStep {
    int hyperbolic = 0;
    double K_T = 0.0;
};

struct AdmissibilityResult {
    double K_T = 0.0;
    int plateau_hyperbolic = -1;  // first N_h whose change was below 1%; -1 if never
    std::vector<AdmissibilityStep> ladder;
};

AdmissibilityResult admissibility_constant(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc);

struct InghamRow {
    double T = 0.0;
    int N_h = 0;
    double min_eig = 0.0;
    Precision precision_used = Precision::Double;
    bool below_floor = false;
};

// Hyperbolic-only Gram minimum eigenvalue for N_h exponentials taken in the
// order m = 0, -1, 1, -2, 2, ... with unit amplitudes.
std::vector<InghamRow> ingham_gap_profile(double L, const std::vector<double>& T_list, const std::vector<int>& N_h_list,
                                          Precision ceiling = Precision::DoubleDouble, int workers = 1);

}  // namespace cascade
