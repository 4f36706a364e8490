#include "cascade/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "cascade/errors.hpp"

namespace cascade::cli {

using nlohmann::json;

namespace {

// Reads keys from one JSON object and remembers which were consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    template <class T>
    void get(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(field(key), std::string("wrong type: ") + e.what());
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Range parse_range(const json& j, const std::string& path, Range r) {
    Section s(j, path);
    s.get("min", r.min);
    s.get("max", r.max);
    s.get("count", r.count);
    s.finish();
    if (r.count < 1) throw ConfigError(path + ".count", "must be at least 1");
    if (r.max < r.min) throw ConfigError(path + ".max", "must not be below min");
    return r;
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"count", r.count}}; }

CouplingProfile parse_profile(const json& j) {
    Section s(j, "profile");
    std::string kind = "constant";
    s.get("kind", kind);
    if (kind == "constant") {
        double beta0 = 1.0;
        s.get("beta0", beta0);
        s.finish();
        return CouplingProfile::constant(beta0);
    }
    if (kind == "indicator") {
        double beta0 = 1.0, a = 0.0, b = 1.0;
        s.get("beta0", beta0);
        s.get("a", a);
        s.get("b", b);
        s.finish();
        return CouplingProfile::indicator(beta0, a, b);
    }
    if (kind == "piecewise") {
        std::vector<std::array<double, 3>> raw;
        s.get("pieces", raw);
        s.finish();
        std::vector<Piece> pieces;
        for (const auto& p : raw) pieces.push_back({p[0], p[1], p[2]});
        return CouplingProfile::piecewise(pieces);
    }
    if (kind == "sampled") {
        std::vector<double> grid, values;
        s.get("grid", grid);
        s.get("values", values);
        s.finish();
        return CouplingProfile::sampled(grid, values);
    }
    throw ConfigError("profile.kind", "unknown profile kind '" + kind + "'");
}

json profile_json(const CouplingProfile& p) {
    return std::visit(
        [](const auto& k) -> json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ConstantProfile>) {
                return {{"kind", "constant"}, {"beta0", k.beta0}};
            } else if constexpr (std::is_same_v<K, IndicatorProfile>) {
                return {{"kind", "indicator"}, {"beta0", k.beta0}, {"a", k.a}, {"b", k.b}};
            } else if constexpr (std::is_same_v<K, PiecewiseConstantProfile>) {
                json pieces = json::array();
                for (const auto& q : k.pieces) pieces.push_back({q.a, q.b, q.value});
                return {{"kind", "piecewise"}, {"pieces", pieces}};
            } else {
                return {{"kind", "sampled"}, {"grid", k.grid}, {"values", k.values}};
            }
        },
        p.kind());
}

std::map<long, std::complex<double>> parse_coeffs(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object of index -> [re, im]");
    std::map<long, std::complex<double>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        long k = 0;
        try {
            std::size_t used = 0;
            k = std::stol(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError(path + "." + it.key(), "index must be an integer");
        }
        const auto& v = it.value();
        if (v.is_number()) {
            out[k] = v.get<double>();
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            out[k] = {v[0].get<double>(), v[1].get<double>()};
        } else {
            throw ConfigError(path + "." + it.key(), "expected a number or [re, im]");
        }
    }
    return out;
}

}  // namespace

std::vector<double> Range::values() const {
    std::vector<double> v;
    if (count == 1) return {min};
    for (int i = 0; i < count; ++i) v.push_back(min + (max - min) * i / (count - 1));
    return v;
}

ModalVector modal_vector_from_json(const json& j, const std::string& path) {
    Section s(j, path);
    ModalVector v;
    if (s.has("parabolic")) v.parabolic_coeffs = parse_coeffs(s.raw("parabolic"), path + ".parabolic");
    if (s.has("hyperbolic")) v.hyperbolic_coeffs = parse_coeffs(s.raw("hyperbolic"), path + ".hyperbolic");
    s.finish();
    return v;
}

json to_json(const ModalVector& v) {
    auto enc = [](const std::map<long, std::complex<double>>& m) {
        json o = json::object();
        for (const auto& [k, c] : m) o[std::to_string(k)] = {c.real(), c.imag()};
        return o;
    };
    return {{"parabolic", enc(v.parabolic_coeffs)}, {"hyperbolic", enc(v.hyperbolic_coeffs)}};
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    Section root(j, "");
    if (root.has("params")) {
        Section s(root.raw("params"), "params");
        s.get("length_L", c.params.length_L);
        s.get("reaction_c", c.params.reaction_c);
        s.get("horizon_T", c.params.horizon_T);
        if (s.has("variant")) {
            std::string v;
            s.get("variant", v);
            try {
                c.params.variant = parse_variant(v);
            } catch (const Error& e) {
                throw ConfigError("params.variant", e.what());
            }
        }
        s.finish();
    }
    if (root.has("profile")) c.profile = parse_profile(root.raw("profile"));
    if (root.has("truncation")) {
        Section s(root.raw("truncation"), "truncation");
        s.get("parabolic", c.truncation.parabolic);
        s.get("hyperbolic", c.truncation.hyperbolic);
        s.get("paired", c.truncation.paired);
        s.finish();
    }
    if (root.has("precision")) {
        std::string p;
        root.get("precision", p);
        c.precision = parse_precision(p);
    }
    root.get("workers", c.workers);
    root.get("output_dir", c.output_dir);
    if (root.has("spectrum")) {
        Section s(root.raw("spectrum"), "spectrum");
        s.get("n_max", c.spectrum.n_max);
        s.get("m_max", c.spectrum.m_max);
        s.get("grid_points", c.spectrum.grid_points);
        s.finish();
    }
    if (root.has("gamma_scan")) {
        Section s(root.raw("gamma_scan"), "gamma_scan");
        s.get("beta0", c.gamma_scan.beta0);
        s.get("n_max", c.gamma_scan.n_max);
        if (s.has("a")) c.gamma_scan.a = parse_range(s.raw("a"), "gamma_scan.a", c.gamma_scan.a);
        if (s.has("b")) c.gamma_scan.b = parse_range(s.raw("b"), "gamma_scan.b", c.gamma_scan.b);
        s.get("refine_tol", c.gamma_scan.refine_tol);
        s.finish();
    }
    if (root.has("hum")) {
        Section s(root.raw("hum"), "hum");
        if (s.has("init")) c.hum.init = modal_vector_from_json(s.raw("init"), "hum.init");
        if (s.has("target")) c.hum.target = modal_vector_from_json(s.raw("target"), "hum.target");
        s.get("seed", c.hum.seed);
        s.get("samples", c.hum.samples);
        s.finish();
    }
    if (root.has("noninv")) {
        Section s(root.raw("noninv"), "noninv");
        s.get("t", c.noninv.t);
        s.get("n_min", c.noninv.n_min);
        s.get("n_max", c.noninv.n_max);
        s.finish();
    }
    if (root.has("constants")) {
        Section s(root.raw("constants"), "constants");
        s.get("T_list", c.constants.T_list);
        s.get("N_h_list", c.constants.N_h_list);
        s.get("parabolic_list", c.constants.parabolic_list);
        s.finish();
    }
    if (root.has("hw")) {
        Section s(root.raw("hw"), "hw");
        s.get("m_min", c.hw.m_min);
        s.get("m_max", c.hw.m_max);
        s.get("samples", c.hw.samples);
        s.get("table_m", c.hw.table_m);
        s.get("steer", c.hw.steer);
        s.finish();
    }
    root.finish();

    try {
        c.params.validate();
    } catch (const ConfigError& e) {
        const std::string& f = e.field();
        if (f.rfind("params.", 0) == 0) throw;
        const std::string what = e.what();
        throw ConfigError("params." + f, what.substr(std::min(what.size(), f.size() + 2)));
    }
    try {
        c.profile.validate(c.params.length_L);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("profile", e.what());
    }
    if (c.truncation.parabolic < 0) throw ConfigError("truncation.parabolic", "must be nonnegative");
    if (c.truncation.hyperbolic < 0) throw ConfigError("truncation.hyperbolic", "must be nonnegative");
    if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
    if (c.spectrum.n_max < 1) throw ConfigError("spectrum.n_max", "must be at least 1");
    if (c.spectrum.m_max < 0) throw ConfigError("spectrum.m_max", "must be nonnegative");
    if (c.spectrum.grid_points < 2) throw ConfigError("spectrum.grid_points", "must be at least 2");
    if (c.gamma_scan.n_max < 1) throw ConfigError("gamma_scan.n_max", "must be at least 1");
    if (!(c.gamma_scan.refine_tol > 0.0)) throw ConfigError("gamma_scan.refine_tol", "must be positive");
    if (c.gamma_scan.a.min < 0.0 || c.gamma_scan.a.max > c.params.length_L)
        throw ConfigError("gamma_scan.a", "must lie in [0, L]");
    if (c.gamma_scan.b.min < 0.0 || c.gamma_scan.b.max > c.params.length_L)
        throw ConfigError("gamma_scan.b", "must lie in [0, L]");
    if (c.hum.samples < 2) throw ConfigError("hum.samples", "must be at least 2");
    if (!(c.noninv.t > 0.0 && c.noninv.t < c.params.horizon_T)) throw ConfigError("noninv.t", "must lie in (0, T)");
    if (c.noninv.n_min < 1 || c.noninv.n_max < c.noninv.n_min) throw ConfigError("noninv.n_max", "invalid index range");
    for (double T : c.constants.T_list)
        if (!(T > 0.0)) throw ConfigError("constants.T_list", "horizons must be positive");
    for (int n : c.constants.N_h_list)
        if (n < 1) throw ConfigError("constants.N_h_list", "counts must be at least 1");
    for (int n : c.constants.parabolic_list)
        if (n < 0) throw ConfigError("constants.parabolic_list", "counts must be nonnegative");
    if (c.hw.m_min < 1 || c.hw.m_max < c.hw.m_min) throw ConfigError("hw.m_max", "invalid index range");
    if (c.hw.samples < 4) throw ConfigError("hw.samples", "must be at least 4");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["params"] = {{"length_L", c.params.length_L},
                   {"reaction_c", c.params.reaction_c},
                   {"horizon_T", c.params.horizon_T},
                   {"variant", to_string(c.params.variant)}};
    j["profile"] = profile_json(c.profile);
    j["truncation"] = {{"parabolic", c.truncation.parabolic},
                       {"hyperbolic", c.truncation.hyperbolic},
                       {"paired", c.truncation.paired}};
    j["precision"] = to_string(c.precision);
    j["workers"] = c.workers;
    j["output_dir"] = c.output_dir;
    j["spectrum"] = {{"n_max", c.spectrum.n_max}, {"m_max", c.spectrum.m_max}, {"grid_points", c.spectrum.grid_points}};
    j["gamma_scan"] = {{"beta0", c.gamma_scan.beta0},
                       {"n_max", c.gamma_scan.n_max},
                       {"a", range_json(c.gamma_scan.a)},
                       {"b", range_json(c.gamma_scan.b)},
                       {"refine_tol", c.gamma_scan.refine_tol}};
    json hum = {{"seed", c.hum.seed}, {"samples", c.hum.samples}};
    if (c.hum.init) hum["init"] = to_json(*c.hum.init);
    if (c.hum.target) hum["target"] = to_json(*c.hum.target);
    j["hum"] = hum;
    j["noninv"] = {{"t", c.noninv.t}, {"n_min", c.noninv.n_min}, {"n_max", c.noninv.n_max}};
    j["constants"] = {{"T_list", c.constants.T_list},
                      {"N_h_list", c.constants.N_h_list},
                      {"parabolic_list", c.constants.parabolic_list}};
    j["hw"] = {{"m_min", c.hw.m_min},
               {"m_max", c.hw.m_max},
               {"samples", c.hw.samples},
               {"table_m", c.hw.table_m},
               {"steer", c.hw.steer}};
    return j;
}

json default_config_json() { return to_json(ExperimentConfig{}); }

}  // namespace cascade::cli
