#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cascade/scaled_complex.hpp"
#include "cascade/spectral_core.hpp"

namespace cascade {

enum class GammaMethod { ClosedFormIndicator, ClosedFormConstant, Quadrature };
std::string to_string(GammaMethod m);

// Coefficients below this fraction of the size of their own terms count as zero.
inline constexpr double kVanishingRelTol = 1e-9;

struct GammaValue {
    long n = 1;
    ScaledComplex value;
    GammaMethod method = GammaMethod::Quadrature;
    double est_error = 0.0;   // absolute, relative to exp(log_scale)
    double log_scale = 0.0;   // log of the magnitude of the summed terms

    bool vanishing() const;
    double sign() const { return value.real_part_sign(); }
};

struct GammaHW {
    long m = 0;
    std::complex<double> scaled_value;  // e^{-root L} Gamma_m
    std::complex<double> root;          // root^2 = conj(lambda_{2,m}) - c, Re root >= 0
    double est_error = 0.0;
    double l1 = 0.0;                    // integral of the modulus of the scaled integrand

    bool vanishing() const;
    // log |Gamma_m|
    double log_abs(double L) const;
};

struct ObsCoefficient {
    ModeId mode;
    ScaledComplex value;
    bool vanishing = false;
};

GammaValue gamma_quadrature(const SystemParams& p, const CouplingProfile& beta, long n);
GammaValue gamma_indicator_closed(const SystemParams& p, double a, double b, double beta0, long n);
GammaValue gamma_constant_closed(const SystemParams& p, double beta0, long n);
// Closed form when the profile admits one, quadrature otherwise.
GammaValue gamma_coefficient(const SystemParams& p, const CouplingProfile& beta, long n);

std::complex<double> hw_root(const SystemParams& p, long m);
GammaHW gamma_hw_scaled(const SystemParams& p, const CouplingProfile& beta, long m);

ObsCoefficient obs_coefficient(const SystemParams& p, const CouplingProfile& beta, const ModeId& mode);

struct ScanLattice {
    std::vector<double> a_values;
    std::vector<double> b_values;
};

struct ZeroPoint {
    long n;
    double a;
    double b;
    char along;    // 'a' or 'b': the lattice direction that bracketed the root
    double width;  // final bracket width
};

struct ScanSample {
    long n;
    double a;
    double b;
    double gamma_log_magnitude;
    double sign;
};

struct ZeroScanResult {
    std::vector<ZeroPoint> zeros;
    std::vector<ScanSample> samples;
    // cell (i, j) spans [a_i, a_{i+1}] x [b_j, b_{j+1}]; row-major in i.
    std::vector<unsigned char> cell_mask;
    std::size_t cells_a = 0;
    std::size_t cells_b = 0;
    // lattice nodes where some gamma_n vanishes without a bracketing sign change
    std::vector<ZeroPoint> unresolved;
    bool degenerate = false;

    std::size_t sign_changes(long n) const;
};

ZeroScanResult gamma_zero_scan(const SystemParams& p, double beta0, const ScanLattice& lattice, long n_max,
                               double refine_tol, int workers = 1);

struct ExponentFit {
    double p = 0.0;           // minus the fitted slope
    double intercept = 0.0;
    double residual = 0.0;    // RMS of the least-squares residual
    double p_lower = 0.0;     // minus the slope on the lower half of the range
    double p_upper = 0.0;     // minus the slope on the upper half
    bool super_polynomial = false;
    std::vector<long> m_values;
    std::vector<double> log_values;  // log(|Gamma_m|^2 e^{-sqrt(2|m| pi L)})
};

ExponentFit gamma_hw_exponent_fit(const SystemParams& p, const CouplingProfile& beta, long m_lo, long m_hi,
                                  int workers = 1, int samples = 40);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cascade
