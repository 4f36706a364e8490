#include "cascade/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include "cascade/cli/csv.hpp"
#include "cascade/coupling.hpp"
#include "cascade/errors.hpp"
#include "cascade/gramian.hpp"
#include "cascade/hum.hpp"
#include "cascade/spaces.hpp"
#include "cascade/version.hpp"

namespace cascade::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
    const ExperimentConfig& cfg;
    const RunOptions& opt;
    fs::path dir;
    json outputs = json::array();
    json warnings = json::array();
    json results = json::object();
    Precision precision_used = Precision::Double;

    void write(const std::string& name, const CsvTable& t) {
        write_csv(dir / name, t);
        outputs.push_back(name);
    }
    void used(Precision p) {
        if (p == Precision::DoubleDouble) precision_used = p;
    }
    void warn(const std::string& w) { warnings.push_back(w); }
};

std::vector<std::complex<double>> random_unit(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> v(n);
    double s = 0.0;
    for (auto& z : v) {
        z = {g(rng), g(rng)};
        s += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(s);
    return v;
}

std::string family_name(const ModeId& m) { return m.is_parabolic() ? "parabolic" : "hyperbolic"; }

// Steering demo shared by hum and hw.
json steer(Context& ctx, const ModalSystem& sys, const std::string& prefix) {
    const auto& cfg = ctx.cfg;
    std::mt19937_64 rng(cfg.hum.seed);
    const ModalVector init = cfg.hum.init ? *cfg.hum.init : sys.to_modal(random_unit(sys.size(), rng));
    const ModalVector target = cfg.hum.target ? *cfg.hum.target : sys.to_modal(random_unit(sys.size(), rng));
    const double T = cfg.params.horizon_T;
    const auto sol = hum_solve(sys, init, target, T, cfg.precision);
    ctx.used(sol.precision_used);
    for (const auto& w : sol.warnings) ctx.warn(w);

    std::vector<double> times;
    for (int i = 0; i < cfg.hum.samples; ++i) times.push_back(T * i / (cfg.hum.samples - 1));

    CsvTable control{{"t", "u_re", "u_im"}, {}};
    for (double t : times) {
        const auto u = sol.control(t);
        control.add(t, u.real(), u.imag());
    }
    ctx.write(prefix + "_control.csv", control);

    const auto traj = trajectory_eval(sys, sol, init, times);
    CsvTable tr{{"t", "mode", "x_re", "x_im", "v_norm_log"}, {}};
    CsvTable norms{{"t", "h_norm", "v_norm_log", "vprime_norm_log"}, {}};
    for (const auto& s : traj) {
        for (std::size_t k = 0; k < sys.size(); ++k)
            tr.add(s.t, to_string(sys.modes[k]), s.coeffs[k].real(), s.coeffs[k].imag(), s.v_norm_log);
        norms.add(s.t, s.h_norm, s.v_norm_log, s.vprime_norm_log);
    }
    ctx.write(prefix + "_trajectory.csv", tr);
    ctx.write(prefix + "_norms.csv", norms);

    const auto x0 = sys.to_vector(init);
    const auto x1 = sys.to_vector(target);
    CsvTable res{{"mode", "residual_re", "residual_im", "init_re", "init_im", "target_re", "target_im"}, {}};
    for (std::size_t k = 0; k < sys.size(); ++k)
        res.add(to_string(sys.modes[k]), sol.endpoint_residual[k].real(), sol.endpoint_residual[k].imag(), x0[k].real(),
                x0[k].imag(), x1[k].real(), x1[k].imag());
    ctx.write(prefix + "_residuals.csv", res);

    return {{"modes", sys.size()},
            {"energy", sol.energy},
            {"max_relative_residual", sol.max_relative_residual},
            {"condition", sol.condition},
            {"precision_used", to_string(sol.precision_used)},
            {"real_projected", sol.real_projected}};
}

void cmd_spectrum(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto& p = cfg.params;
    CsvTable par{{"n", "lambda", "resonant"}, {}};
    json resonant = json::array();
    for (long n = 1; n <= cfg.spectrum.n_max; ++n) {
        const bool r = is_resonant(p, n);
        par.add(n, parabolic_eigenvalue(p, n), r);
        if (r) {
            resonant.push_back(n);
            ctx.warn("resonant parabolic mode n = " + std::to_string(n) + " (lambda = 0)");
        }
    }
    ctx.write("spectrum_parabolic.csv", par);
    CsvTable hyp{{"m", "lambda_re", "lambda_im"}, {}};
    CsvTable modes{{"x", "m", "phi2_re", "phi2_im", "phi3_re", "phi3_im"}, {}};
    const int G = cfg.spectrum.grid_points;
    for (long m = -cfg.spectrum.m_max; m <= cfg.spectrum.m_max; ++m) {
        const auto l = hyperbolic_eigenvalue(p, m);
        hyp.add(m, l.real(), l.imag());
        for (int i = 0; i < G; ++i) {
            const double x = p.length_L * i / (G - 1);
            const auto [f2, f3] = hyperbolic_eigvec_eval(p, m, x);
            modes.add(x, m, f2.real(), f2.imag(), f3.real(), f3.imag());
        }
    }
    ctx.write("spectrum_hyperbolic.csv", hyp);
    ctx.write("spectrum_modes.csv", modes);
    ctx.results["resonant_parabolic"] = resonant;
}

void cmd_gamma_scan(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto& gs = cfg.gamma_scan;
    ScanLattice lat{gs.a.values(), gs.b.values()};
    const auto r = gamma_zero_scan(cfg.params, gs.beta0, lat, gs.n_max, gs.refine_tol, cfg.workers);
    if (r.degenerate) ctx.warn("degenerate profile: beta0 = 0, every coupling coefficient vanishes");
    CsvTable samples{{"n", "a", "b", "gamma_abs_log", "sign"}, {}};
    for (const auto& s : r.samples) samples.add(s.n, s.a, s.b, s.gamma_log_magnitude, s.sign);
    ctx.write("gamma_scan.csv", samples);
    CsvTable zeros{{"n", "a", "b", "along", "width"}, {}};
    json zj = json::array();
    for (const auto& z : r.zeros) {
        zeros.add(z.n, z.a, z.b, std::string(1, z.along), z.width);
        zj.push_back({{"n", z.n}, {"a", z.a}, {"b", z.b}});
    }
    ctx.write("gamma_zeros.csv", zeros);
    if (r.cells_a > 0 && r.cells_b > 0) {
        CsvTable mask{{"i", "j", "a_lo", "a_hi", "b_lo", "b_hi", "in_hat_s"}, {}};
        for (std::size_t i = 0; i < r.cells_a; ++i)
            for (std::size_t j = 0; j < r.cells_b; ++j)
                mask.add(i, j, lat.a_values[i], lat.a_values[i + 1], lat.b_values[j], lat.b_values[j + 1],
                         static_cast<bool>(r.cell_mask[i * r.cells_b + j]));
        ctx.write("gamma_mask.csv", mask);
    }
    json changes = json::object();
    for (long n = 1; n <= gs.n_max; ++n) changes[std::to_string(n)] = r.sign_changes(n);
    ctx.results["zeros"] = zj;
    ctx.results["sign_changes"] = changes;
    ctx.results["unresolved"] = r.unresolved.size();
    ctx.results["degenerate"] = r.degenerate;
}

void cmd_hum(Context& ctx) {
    const auto sys = build_modal_system(ctx.cfg.params, ctx.cfg.profile, ctx.cfg.truncation);
    ctx.results = steer(ctx, sys, "hum");
}

void cmd_noninv(Context& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.params.variant != Variant::WaveHeat)
        throw ConfigError("params.variant", "noninv applies to the wave-heat cascade");
    const double T = cfg.params.horizon_T;
    if (T <= 2.0 * cfg.params.length_L) ctx.warn("T <= 2L: truncation-only result, no continuum meaning");
    const auto s = noninv_scan(cfg.params, cfg.profile, T, cfg.noninv.t, cfg.noninv.n_min, cfg.noninv.n_max, cfg.workers);
    CsvTable t{{"n", "x_abs_log", "ratio_log", "resonant"}, {}};
    for (const auto& r : s.rows) t.add(r.n, r.x_value.log_magnitude(), r.ratio_log, r.resonant);
    ctx.write("noninv.csv", t);
    ctx.results = {{"slope", s.slope},
                   {"intercept", s.intercept},
                   {"expected_slope", s.expected_slope},
                   {"relative_deviation", std::abs(s.slope - s.expected_slope) / s.expected_slope},
                   {"increasing", s.increasing}};
}

void cmd_constants(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const double L = cfg.params.length_L;
    const auto rows = ingham_gap_profile(L, cfg.constants.T_list, cfg.constants.N_h_list, cfg.precision, cfg.workers);
    CsvTable ing{{"T", "N_h", "min_eig", "precision_used", "below_floor", "label"}, {}};
    for (const auto& r : rows) {
        ctx.used(r.precision_used);
        ing.add(r.T, r.N_h, r.min_eig, to_string(r.precision_used), r.below_floor,
                std::string(r.T > 2.0 * L ? "continuum" : "no continuum meaning"));
    }
    ctx.write("constants_ingham.csv", ing);

    const bool hw = cfg.params.variant == Variant::HeatWave;
    CsvTable obs{{"T", "N_p", "N_h", "C_T_log", "condition", "precision_used", "status"}, {}};
    for (int np : cfg.constants.parabolic_list) {
        Truncation t = cfg.truncation;
        t.parabolic = np;
        try {
            const auto w = build_weights(cfg.params, cfg.profile, hw ? SpaceTag::VHWprime : SpaceTag::Vprime, t);
            const auto e = obs_constant_estimate(cfg.params, cfg.profile, t, w, cfg.precision);
            ctx.used(e.precision_used);
            obs.add(cfg.params.horizon_T, np, t.hyperbolic, e.log_C_T, e.condition, to_string(e.precision_used),
                    std::string("ok"));
        } catch (const IllConditioned& e) {
            obs.add(cfg.params.horizon_T, np, t.hyperbolic, std::nan(""), e.condition(), to_string(cfg.precision),
                    std::string("ill-conditioned"));
        }
    }
    ctx.write("constants_obs.csv", obs);

    const auto adm = admissibility_constant(cfg.params, cfg.profile, cfg.truncation);
    CsvTable at{{"N_h", "K_T"}, {}};
    for (const auto& s : adm.ladder) at.add(s.hyperbolic, s.K_T);
    ctx.write("constants_adm.csv", at);
    if (cfg.params.horizon_T <= 2.0 * L) ctx.warn("T <= 2L: observability estimates have no continuum meaning");
    ctx.results = {{"K_T", adm.K_T}, {"K_T_plateau_N_h", adm.plateau_hyperbolic}};
}

void cmd_hw(Context& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.params.variant != Variant::HeatWave)
        throw ConfigError("params.variant", "hw requires the heat-wave variant");
    const auto& p = cfg.params;
    const double L = p.length_L;
    CsvTable gt{{"m", "scaled_re", "scaled_im", "gamma_abs_log", "root_re", "root_im", "vanishing"}, {}};
    for (long m = -cfg.hw.table_m; m <= cfg.hw.table_m; ++m) {
        const auto g = gamma_hw_scaled(p, cfg.profile, m);
        gt.add(m, g.scaled_value.real(), g.scaled_value.imag(), g.log_abs(L), g.root.real(), g.root.imag(), g.vanishing());
    }
    ctx.write("hw_gamma.csv", gt);

    const auto sys = build_modal_system(p, cfg.profile, cfg.truncation);
    CsvTable ob{{"family", "index", "b_re", "b_im", "b_abs_log"}, {}};
    for (std::size_t k = 0; k < sys.size(); ++k) {
        const auto b = sys.obs_coeffs[k];
        ob.add(family_name(sys.modes[k]), sys.modes[k].index, b.to_complex().real(), b.to_complex().imag(),
               b.log_magnitude());
    }
    ctx.write("hw_obs.csv", ob);
    CsvTable wt{{"family", "index", "weight_log"}, {}};
    for (const auto& [n, w] : sys.weights_V.parabolic_log_weights) wt.add(std::string("parabolic"), n, w);
    for (const auto& [m, w] : sys.weights_V.hyperbolic_log_weights) wt.add(std::string("hyperbolic"), m, w);
    ctx.write("hw_weights.csv", wt);

    ExponentFit fit;
    try {
        fit = gamma_hw_exponent_fit(p, cfg.profile, cfg.hw.m_min, cfg.hw.m_max, cfg.workers, cfg.hw.samples);
    } catch (const InsufficientRange& e) {
        throw ConfigError("hw.m_max", e.what());
    }
    CsvTable ft{{"m", "fit_value_log"}, {}};
    for (std::size_t i = 0; i < fit.m_values.size(); ++i) ft.add(fit.m_values[i], fit.log_values[i]);
    ctx.write("hw_fit.csv", ft);
    ctx.results["exponent_fit"] = {{"p", fit.p},
                                   {"p_lower", fit.p_lower},
                                   {"p_upper", fit.p_upper},
                                   {"residual", fit.residual},
                                   {"super_polynomial", fit.super_polynomial}};
    if (fit.super_polynomial) ctx.warn("Gamma_m decays faster than any power over the fitted range");
    if (cfg.hw.steer) ctx.results["steering"] = steer(ctx, sys, "hw_hum");
}

void write_gnuplot_stub(const Context& ctx, const std::string& name) {
    if (ctx.outputs.empty()) return;
    const std::string data = ctx.outputs.front().get<std::string>();
    std::ofstream gp(ctx.dir / (name + ".gp"));
    gp << "# Plot template for " << data << "; edit columns as needed.\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << name << ".png'\n"
       << "plot '" << data << "' using 1:2 with linespoints\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"spectrum", "gamma-scan", "hum", "noninv", "constants", "hw"};
    return names;
}

json run_command(const std::string& name, const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    Context ctx{cfg, opt, fs::path(cfg.output_dir)};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw ConfigError("output_dir", "cannot create " + cfg.output_dir + ": " + ec.message());

    if (name == "spectrum")
        cmd_spectrum(ctx);
    else if (name == "gamma-scan")
        cmd_gamma_scan(ctx);
    else if (name == "hum")
        cmd_hum(ctx);
    else if (name == "noninv")
        cmd_noninv(ctx);
    else if (name == "constants")
        cmd_constants(ctx);
    else if (name == "hw")
        cmd_hw(ctx);
    else
        throw ConfigError("command", "unknown command '" + name + "'");

    if (opt.gnuplot_stub) write_gnuplot_stub(ctx, name);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json report = {{"command", name},
                   {"config", to_json(cfg)},
                   {"outputs", ctx.outputs},
                   {"results", ctx.results},
                   {"warnings", ctx.warnings},
                   {"provenance",
                    {{"version", kVersion}, {"precision_used", to_string(ctx.precision_used)}, {"wall_time_s", wall}}}};
    std::ofstream out(ctx.dir / (name + "_report.json"));
    out << report.dump(2) << '\n';
    return report;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const VanishingCoupling*>(&e)) return 3;
    if (dynamic_cast<const IllConditioned*>(&e)) return 4;
    return 1;
}

}  // namespace cascade::cli
