#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cascade/spectral_core.hpp"

namespace cascade {

enum class SpaceTag { V, Vprime, V0, V0prime, VHW, VHWprime, V0HW, V0HWprime };

std::string to_string(SpaceTag t);
SpaceTag parse_space_tag(const std::string& s);
SpaceTag dual_of(SpaceTag t);
bool is_dual_tag(SpaceTag t);  // V', V0', ...

// Parabolic modes n = 1..parabolic. Hyperbolic modes m = -hyperbolic..hyperbolic,
// or -hyperbolic-1..hyperbolic when paired (closed under m -> -1-m).
struct Truncation {
    int parabolic = 4;
    int hyperbolic = 12;
    bool paired = false;

    long m_min() const { return paired ? -static_cast<long>(hyperbolic) - 1 : -static_cast<long>(hyperbolic); }
    long m_max() const { return hyperbolic; }
    std::vector<long> hyperbolic_indices() const;
    std::size_t size() const { return static_cast<std::size_t>(parabolic) + hyperbolic_indices().size(); }
};

struct WeightSequence {
    std::map<long, double> parabolic_log_weights;
    std::map<long, double> hyperbolic_log_weights;
    double nu_or_sigma = 0.0;
    SpaceTag space_tag = SpaceTag::V;
    Truncation truncation;
};

struct ModalVector {
    std::map<long, std::complex<double>> parabolic_coeffs;
    std::map<long, std::complex<double>> hyperbolic_coeffs;
};

struct NormValue {
    double log_value = 0.0;        // log of the norm; -inf for zero
    std::optional<double> linear;  // present when log_value < 300
};

double nu_value(const SystemParams& p, bool null_mode);
double sigma_value(const SystemParams& p, bool null_mode);

// Throws VanishingCoupling when a required coupling coefficient is zero.
WeightSequence build_weights(const SystemParams& p, const CouplingProfile& beta, SpaceTag tag, const Truncation& trunc);
WeightSequence dual_weights(const WeightSequence& w);

NormValue weighted_norm(const ModalVector& v, const WeightSequence& w);

struct WnRow {
    long n;
    double log_weight;
    double log_asymptote;
    double log_ratio;
};

std::vector<WnRow> wn_asymptotic_compare(const SystemParams& p, double a, double b, double beta0, long n_lo, long n_hi,
                                         bool null_mode);

enum class IndexFamily { Parabolic, Hyperbolic };

struct SlopeResult {
    bool exponential = false;
    double slope = 0.0;
    double residual = 0.0;
    double slope_lower = 0.0;
    double slope_upper = 0.0;
};

// Log-log slope of the weights over [lo, hi] (positive indices).
SlopeResult sobolev_slope(const WeightSequence& w, IndexFamily family, long lo, long hi);

struct EmbeddingReport {
    double max_duality_error = 0.0;
    bool duality_ok = true;
    bool chain_ok = true;
    std::vector<std::string> violations;
};

// V subset V0 subset H subset V0' subset V' at the level of weights.
EmbeddingReport check_embedding_chain(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc);

}  // namespace cascade
