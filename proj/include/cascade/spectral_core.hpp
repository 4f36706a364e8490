#pragma once

#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cascade/scaled_complex.hpp"

namespace cascade {

enum class Variant { WaveHeat, HeatWave };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct SystemParams {
    double length_L = 1.0;
    double reaction_c = 0.0;
    double horizon_T = 2.5;
    Variant variant = Variant::WaveHeat;

    void validate() const;
};

struct ConstantProfile {
    double beta0 = 1.0;
};

struct IndicatorProfile {
    double beta0 = 1.0;
    double a = 0.0;
    double b = 1.0;
};

struct Piece {
    double a;
    double b;
    double value;
};

struct PiecewiseConstantProfile {
    std::vector<Piece> pieces;
};

// Linear interpolation on the grid, zero outside it.
struct SampledProfile {
    std::vector<double> grid;
    std::vector<double> values;
};

class CouplingProfile {
public:
    using Kind = std::variant<ConstantProfile, IndicatorProfile, PiecewiseConstantProfile, SampledProfile>;

    CouplingProfile() : kind_(ConstantProfile{}) {}
    explicit CouplingProfile(Kind k) : kind_(std::move(k)) {}

    static CouplingProfile constant(double beta0) { return CouplingProfile(ConstantProfile{beta0}); }
    static CouplingProfile indicator(double beta0, double a, double b) { return CouplingProfile(IndicatorProfile{beta0, a, b}); }
    static CouplingProfile piecewise(std::vector<Piece> pieces) { return CouplingProfile(PiecewiseConstantProfile{std::move(pieces)}); }
    static CouplingProfile sampled(std::vector<double> grid, std::vector<double> values) {
        return CouplingProfile(SampledProfile{std::move(grid), std::move(values)});
    }

    const Kind& kind() const { return kind_; }
    std::string kind_name() const;

    void validate(double L) const;
    double operator()(double x) const;
    // Points in (0, L) where the profile or its slope may jump.
    std::vector<double> breakpoints(double L) const;
    // Smallest r such that the profile vanishes on (r, L].
    double support_right(double L) const;
    bool is_zero() const;
    double sup_norm() const;

private:
    Kind kind_;
};

struct ModeId {
    enum class Family { Parabolic, Hyperbolic };
    Family family = Family::Parabolic;
    long index = 1;

    static ModeId parabolic(long n);
    static ModeId hyperbolic(long m) { return {Family::Hyperbolic, m}; }
    bool is_parabolic() const { return family == Family::Parabolic; }
    friend bool operator==(const ModeId&, const ModeId&) = default;
};

std::string to_string(const ModeId& id);

struct SampledFunction {
    std::vector<double> grid;
    std::vector<double> values;

    double operator()(double x) const;
};

double parabolic_eigenvalue(const SystemParams& p, long n);
std::complex<double> hyperbolic_eigenvalue(const SystemParams& p, long m);
bool is_resonant(const SystemParams& p, long n);

// (phi^2_{2,m}(x), phi^3_{2,m}(x)).
std::pair<std::complex<double>, std::complex<double>> hyperbolic_eigvec_eval(const SystemParams& p, long m, double x);

// w with w'' = -beta f, w(0) = 0, w'(L) = 0, sampled on the grid of f.
SampledFunction p_beta_apply(const CouplingProfile& beta, const SampledFunction& f);

// psi^3_{1,n}(x). The coupling coefficient is computed internally unless given.
ScaledComplex adjoint_wave_trace_eval(const SystemParams& p, const CouplingProfile& beta, long n, double x);
ScaledComplex adjoint_wave_trace_eval(const SystemParams& p, const CouplingProfile& beta, long n, double x,
                                      const ScaledComplex& gamma_n);

// Graded nodes accumulating toward `edge` from inside [a, b] at scale 1/rate.
std::vector<double> layer_nodes(double a, double b, double edge, double rate);

}  // namespace cascade
