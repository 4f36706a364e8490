#include "cascade/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"

namespace cascade {

using std::numbers::pi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_hw(SpaceTag t) {
    return t == SpaceTag::VHW || t == SpaceTag::VHWprime || t == SpaceTag::V0HW || t == SpaceTag::V0HWprime;
}

bool is_null(SpaceTag t) {
    return t == SpaceTag::V0 || t == SpaceTag::V0prime || t == SpaceTag::V0HW || t == SpaceTag::V0HWprime;
}

}  // namespace

std::string to_string(SpaceTag t) {
    switch (t) {
        case SpaceTag::V: return "V";
        case SpaceTag::Vprime: return "Vprime";
        case SpaceTag::V0: return "V0";
        case SpaceTag::V0prime: return "V0prime";
        case SpaceTag::VHW: return "VHW";
        case SpaceTag::VHWprime: return "VHWprime";
        case SpaceTag::V0HW: return "V0HW";
        default: return "V0HWprime";
    }
}

SpaceTag parse_space_tag(const std::string& s) {
    for (auto t : {SpaceTag::V, SpaceTag::Vprime, SpaceTag::V0, SpaceTag::V0prime, SpaceTag::VHW, SpaceTag::VHWprime,
                   SpaceTag::V0HW, SpaceTag::V0HWprime})
        if (to_string(t) == s) return t;
    throw ConfigError("space_tag", "unknown space '" + s + "'");
}

bool is_dual_tag(SpaceTag t) {
    return t == SpaceTag::Vprime || t == SpaceTag::V0prime || t == SpaceTag::VHWprime || t == SpaceTag::V0HWprime;
}

SpaceTag dual_of(SpaceTag t) {
    switch (t) {
        case SpaceTag::V: return SpaceTag::Vprime;
        case SpaceTag::Vprime: return SpaceTag::V;
        case SpaceTag::V0: return SpaceTag::V0prime;
        case SpaceTag::V0prime: return SpaceTag::V0;
        case SpaceTag::VHW: return SpaceTag::VHWprime;
        case SpaceTag::VHWprime: return SpaceTag::VHW;
        case SpaceTag::V0HW: return SpaceTag::V0HWprime;
        default: return SpaceTag::V0HW;
    }
}

std::vector<long> Truncation::hyperbolic_indices() const {
    std::vector<long> out;
    for (long m = m_min(); m <= m_max(); ++m) out.push_back(m);
    return out;
}

double nu_value(const SystemParams& p, bool null_mode) {
    const double L = p.length_L;
    if (null_mode) return 2.0 * pi * pi / L;
    return 2.0 * pi * pi * (1.0 + p.horizon_T / L) / L;
}

double sigma_value(const SystemParams& p, bool null_mode) {
    if (null_mode) return 0.0;
    return 2.0 * pi * pi * p.horizon_T / (p.length_L * p.length_L);
}

WeightSequence build_weights(const SystemParams& p, const CouplingProfile& beta, SpaceTag tag, const Truncation& trunc) {
    WeightSequence w;
    w.space_tag = tag;
    w.truncation = trunc;
    const double L = p.length_L;
    const double flip = is_dual_tag(tag) ? -1.0 : 1.0;
    if (!is_hw(tag)) {
        const double nu = nu_value(p, is_null(tag));
        w.nu_or_sigma = nu;
        for (long n = 1; n <= trunc.parabolic; ++n) {
            const auto g = gamma_coefficient(p, beta, n);
            if (g.vanishing()) throw VanishingCoupling(n, false);
            const double dn = static_cast<double>(n);
            w.parabolic_log_weights[n] = flip * (4.0 * std::log(dn) - 2.0 * g.value.log_magnitude() + nu * dn * dn);
        }
        for (long m : trunc.hyperbolic_indices()) w.hyperbolic_log_weights[m] = 0.0;
        return w;
    }
    const double sigma = sigma_value(p, is_null(tag));
    w.nu_or_sigma = sigma;
    for (long n = 1; n <= trunc.parabolic; ++n) {
        const double dn = static_cast<double>(n);
        w.parabolic_log_weights[n] = flip * (sigma * dn * dn - 2.0 * std::log(dn));
    }
    for (long m : trunc.hyperbolic_indices()) {
        const auto g = gamma_hw_scaled(p, beta, m);
        if (g.vanishing()) throw VanishingCoupling(m, true);
        const double am = static_cast<double>(std::abs(m));
        w.hyperbolic_log_weights[m] = flip * (std::sqrt(2.0 * am * pi * L) - 2.0 * g.log_abs(L));
    }
    return w;
}

WeightSequence dual_weights(const WeightSequence& w) {
    WeightSequence d = w;
    d.space_tag = dual_of(w.space_tag);
    for (auto& [k, v] : d.parabolic_log_weights) v = -v;
    for (auto& [k, v] : d.hyperbolic_log_weights) v = -v;
    return d;
}

NormValue weighted_norm(const ModalVector& v, const WeightSequence& w) {
    std::vector<double> terms;
    auto collect = [&](const std::map<long, std::complex<double>>& coeffs, const std::map<long, double>& weights,
                       const char* family) {
        for (const auto& [k, c] : coeffs) {
            auto it = weights.find(k);
            if (it == weights.end())
                throw DomainError(std::string(family) + " index " + std::to_string(k) + " outside the weight truncation");
            if (c == 0.0) continue;
            terms.push_back(it->second + 2.0 * std::log(std::abs(c)));
        }
    };
    collect(v.parabolic_coeffs, w.parabolic_log_weights, "parabolic");
    collect(v.hyperbolic_coeffs, w.hyperbolic_log_weights, "hyperbolic");
    NormValue out;
    if (terms.empty()) {
        out.log_value = kNegInf;
        out.linear = 0.0;
        return out;
    }
    const double mx = *std::max_element(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    out.log_value = 0.5 * (mx + std::log(s));
    if (out.log_value < 300.0) out.linear = std::exp(out.log_value);
    return out;
}

std::vector<WnRow> wn_asymptotic_compare(const SystemParams& p, double a, double b, double beta0, long n_lo, long n_hi,
                                         bool null_mode) {
    const double L = p.length_L;
    const double c = p.reaction_c;
    const double nu = nu_value(p, null_mode);
    std::vector<WnRow> rows;
    for (long n = std::max<long>(n_lo, 1); n <= n_hi; ++n) {
        const auto g = gamma_indicator_closed(p, a, b, beta0, n);
        if (g.vanishing()) throw VanishingCoupling(n, false);
        const double dn = static_cast<double>(n);
        const double k = dn * pi / L;
        const double theta = L / (dn * pi);
        const double exact = 4.0 * std::log(dn) - 2.0 * g.value.log_magnitude() + nu * dn * dn;
        const double denom = std::sin(k * b - theta) - std::exp(-(k * k - c) * (b - a)) * std::sin(k * a - theta);
        const double asym = std::log(4.0 * std::pow(pi, 4) / (beta0 * beta0 * std::pow(L, 4))) + 8.0 * std::log(dn) +
                            (nu - 2.0 * pi * pi * b / (L * L)) * dn * dn + 2.0 * c * b - 2.0 * std::log(std::abs(denom));
        rows.push_back({n, exact, asym, exact - asym});
    }
    return rows;
}

SlopeResult sobolev_slope(const WeightSequence& w, IndexFamily family, long lo, long hi) {
    lo = std::max<long>(lo, 1);
    if (hi < 10 * lo) throw InsufficientRange("slope estimate needs the index range to span a decade");
    const auto& weights = family == IndexFamily::Parabolic ? w.parabolic_log_weights : w.hyperbolic_log_weights;
    // Log-spaced sample so each decade carries equal weight in the fit.
    std::vector<long> picks;
    const int count = 40;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        const long k = std::lround(std::exp(std::log(static_cast<double>(lo)) * (1.0 - t) + std::log(static_cast<double>(hi)) * t));
        if (picks.empty() || picks.back() != k) picks.push_back(k);
    }
    std::vector<double> x, y;
    for (long k : picks) {
        auto it = weights.find(k);
        if (it == weights.end()) throw DomainError("index " + std::to_string(k) + " outside the weight truncation");
        x.push_back(std::log(static_cast<double>(k)));
        y.push_back(it->second);
    }
    const auto all = least_squares(x, y);
    const std::size_t h = x.size() / 2;
    const auto lower = least_squares({x.begin(), x.begin() + static_cast<long>(h) + 1}, {y.begin(), y.begin() + static_cast<long>(h) + 1});
    const auto upper = least_squares({x.begin() + static_cast<long>(h), x.end()}, {y.begin() + static_cast<long>(h), y.end()});
    SlopeResult r;
    r.slope_lower = lower.slope;
    r.slope_upper = upper.slope;
    r.exponential = std::abs(upper.slope - lower.slope) > std::max(1.0, 0.25 * std::abs(lower.slope));
    if (!r.exponential) {
        r.slope = all.slope;
        r.residual = all.residual;
    }
    return r;
}

EmbeddingReport check_embedding_chain(const SystemParams& p, const CouplingProfile& beta, const Truncation& trunc) {
    const bool hw = p.variant == Variant::HeatWave;
    const auto V = build_weights(p, beta, hw ? SpaceTag::VHW : SpaceTag::V, trunc);
    const auto Vp = build_weights(p, beta, hw ? SpaceTag::VHWprime : SpaceTag::Vprime, trunc);
    const auto V0 = build_weights(p, beta, hw ? SpaceTag::V0HW : SpaceTag::V0, trunc);
    const auto V0p = build_weights(p, beta, hw ? SpaceTag::V0HWprime : SpaceTag::V0prime, trunc);
    EmbeddingReport rep;
    auto check = [&](const std::map<long, double>& a, const std::map<long, double>& ap, const std::map<long, double>& a0,
                     const std::map<long, double>& a0p, const char* fam) {
        for (const auto& [k, lw] : a) {
            const double e1 = std::abs(lw + ap.at(k));
            const double e0 = std::abs(a0.at(k) + a0p.at(k));
            rep.max_duality_error = std::max({rep.max_duality_error, e1, e0});
            const double chain[5] = {lw, a0.at(k), 0.0, a0p.at(k), ap.at(k)};
            for (int i = 0; i < 4; ++i) {
                // The pivot space sits between V0 and V0' only for the wave-heat weights.
                if (hw && (i == 1 || i == 2)) continue;
                if (chain[i] < chain[i + 1]) {
                    rep.chain_ok = false;
                    rep.violations.push_back(std::string(fam) + " " + std::to_string(k) + " link " + std::to_string(i));
                }
            }
        }
    };
    check(V.parabolic_log_weights, Vp.parabolic_log_weights, V0.parabolic_log_weights, V0p.parabolic_log_weights, "parabolic");
    if (!hw)
        check(V.hyperbolic_log_weights, Vp.hyperbolic_log_weights, V0.hyperbolic_log_weights, V0p.hyperbolic_log_weights,
              "hyperbolic");
    rep.duality_ok = rep.max_duality_error <= 1e-12;
    return rep;
}

}  // namespace cascade
