#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cascade/coupling.hpp"
#include "cascade/double_double.hpp"
#include "cascade/gramian.hpp"
#include "cascade/linalg.hpp"
#include "cascade/scaled_complex.hpp"
#include "cascade/spaces.hpp"
#include "cascade/spectral_core.hpp"

namespace cascade {

// Diagonal modal system x_k' = lambda_k x_k + B_k u with B_k = conj(b_k),
// b_k the observation coefficient of the adjoint mode k.
struct ModalSystem {
    SystemParams params;
    Truncation truncation;
    std::vector<ModeId> modes;  // parabolic 1..N_p, then hyperbolic m_min..m_max
    std::vector<std::complex<double>> eigenvalues;
    std::vector<ScaledComplex> obs_coeffs;
    WeightSequence weights_V;
    WeightSequence weights_Vprime;

    std::size_t size() const { return modes.size(); }
    ScaledComplex input_coefficient(std::size_t k) const { return obs_coeffs[k].conj(); }
    // Position of a mode in `modes`, or -1.
    int index_of(const ModeId& id) const;
    std::vector<std::complex<double>> to_vector(const ModalVector& v) const;
    ModalVector to_modal(const std::vector<std::complex<double>>& x) const;
};

ModalSystem build_modal_system(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc);

// Control u(s) = sum_j alpha_j exp(conj(lambda_j) (T - s)), alpha_j = eta_j b_j.
struct HumSolution {
    double horizon = 0.0;
    std::vector<ScaledComplex> moment_coeffs;     // eta
    std::vector<std::complex<double>> control_exponents;  // conj(lambda_j)
    std::vector<Cx<DoubleDouble>> alpha;          // control amplitudes at working precision
    GramMatrix gramian;                           // M(k, j) = conj(b_k) b_j E(lambda_k + conj lambda_j)
    double energy = 0.0;
    std::vector<std::complex<double>> endpoint_residual;
    double max_relative_residual = 0.0;           // max |res_k| / (1 + |target_k|)
    double condition = 0.0;
    Precision precision_used = Precision::Double;
    bool real_projected = false;
    std::vector<std::string> warnings;

    std::complex<double> control(double s) const;
};

inline constexpr double kEndpointTol = 1e-6;

HumSolution hum_solve(const ModalSystem& sys, const ModalVector& init, const ModalVector& target, double T,
                      Precision ceiling = Precision::DoubleDouble);

// x(t) for a control given by amplitudes alpha over horizon T (no solve).
std::vector<std::complex<double>> duhamel_eval(const ModalSystem& sys, const std::vector<Cx<DoubleDouble>>& alpha,
                                               const std::vector<std::complex<double>>& init, double T, double t,
                                               Precision precision = Precision::DoubleDouble);

struct TrajectorySample {
    double t = 0.0;
    std::vector<std::complex<double>> coeffs;
    double h_norm = 0.0;  // Euclidean norm of the modal coefficients
    double v_norm_log = 0.0;
    double vprime_norm_log = 0.0;
};

std::vector<TrajectorySample> trajectory_eval(const ModalSystem& sys, const HumSolution& sol, const ModalVector& init,
                                              const std::vector<double>& times);

struct NoninvPoint {
    long n = 0;
    ScaledComplex x_value;
    double ratio_log = 0.0;
    bool resonant = false;
};

NoninvPoint noninv_own_mode(const SystemParams& p, const CouplingProfile& beta, long n, double t, double T);

struct NoninvScan {
    std::vector<NoninvPoint> rows;
    double slope = 0.0;  // fitted coefficient of n^2
    double intercept = 0.0;
    double residual = 0.0;
    double expected_slope = 0.0;  // 2 pi^2 (T + t) / L^2
    bool increasing = true;
};

NoninvScan noninv_scan(const SystemParams& p, const CouplingProfile& beta, double T, double t, long n_lo, long n_hi,
                       int workers = 1);

// V-norms (log) of vec and of the free evolution e^{lambda t} vec.
std::pair<double, double> semigroup_v_invariance_check(const ModalSystem& sys, const ModalVector& vec, double t);

}  // namespace cascade
