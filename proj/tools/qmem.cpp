// qmem: command-line laboratory for the gadget / ferromagnet quantum-memory
// model. One experiment per invocation; each subcommand reads a flat
// key = value config file plus --set overrides and writes CSV + a JSON run
// manifest. Exit codes: 0 success, 1 runtime/domain error, 2 config error.

#include <CLI11.hpp>
#include <iostream>

#include "qmem/anyon_thermo.hpp"
#include "qmem/backaction.hpp"
#include "qmem/config.hpp"
#include "qmem/exact_diag.hpp"
#include "qmem/fm_metropolis.hpp"
#include "qmem/magnon_fields.hpp"
#include "qmem/run_output.hpp"
#include "qmem/sw_engine.hpp"

namespace {

using namespace qmem;
using Type = KeySpec::Type;

struct CommonArgs {
    std::string config_file;
    std::vector<std::string> overrides;
    std::string outdir;
};

Config load_config(const CommonArgs& args, const Schema& schema) {
    Config cfg;
    if (!args.config_file.empty()) cfg.load_file(args.config_file);
    for (const auto& kv : args.overrides) cfg.set_override(kv);
    cfg.validate(schema);
    return cfg;
}

std::string fmt(double v) { return format_number(v); }

// ---------------------------------------------------------------- gadget

const Schema kGadgetSchema{
    {"delta", Type::Double, "1.0", "mediator gap Delta (energy unit of the gadget)"},
    {"alpha", Type::Double, "0.02", "X_u Z_f/g coupling (energy)"},
    {"beta", Type::Double, "0.0", "Z_f Z_g coupling (energy)"},
    {"gamma", Type::Double, "0.02", "S^x Z_u coupling (energy)"},
    {"delta_pair", Type::Double, "0.0", "X X coupling on the code pairs (energy)"},
    {"epsilon", Type::Double, "0.02", "X_f/g X_code coupling (energy)"},
    {"tau", Type::Double, "0.0", "S^x Z_f/g coupling (energy)"},
    {"s_values", Type::String, "-1,-0.5,0,0.5,1", "classical FM-spin values for the fit"},
    {"quantum_check", Type::Bool, "false",
     "also diagonalize the 256x256 gadget with the FM spin as a qubit"},
};

GadgetSpec spec_from(const Config& cfg, const Schema& schema) {
    GadgetSpec sp;
    sp.delta = cfg.get_double(schema, "delta");
    sp.alpha = cfg.get_double(schema, "alpha");
    sp.beta = cfg.get_double(schema, "beta");
    sp.gamma = cfg.get_double(schema, "gamma");
    sp.delta_pair = cfg.get_double(schema, "delta_pair");
    sp.epsilon = cfg.get_double(schema, "epsilon");
    sp.tau = cfg.get_double(schema, "tau");
    sp.validate();
    return sp;
}

int run_gadget_verify(const CommonArgs& args) {
    auto cfg = load_config(args, kGadgetSchema);
    const GadgetSpec sp = spec_from(cfg, kGadgetSchema);

    RunManifest man;
    man.subcommand = "gadget-verify";
    man.params = cfg.resolved(kGadgetSchema);

    const auto closed = closed_form_coefficients(sp);
    const auto engine = gadget_effective(sp);
    const auto fit = fit_effective(sp, cfg.get_list(kGadgetSchema, "s_values"));
    const auto tv = tuning_values(sp);

    CsvBuilder csv(man);
    csv.columns({"coefficient", "closed_form", "sw_engine", "exact_fit", "engine_vs_fit_rel",
                 "closed_vs_fit_rel"});
    auto line = [&](const char* name, double c, double e, double f) {
        const double denom = std::abs(f) > 0 ? std::abs(f) : 1.0;
        csv.row({name, fmt(c), fmt(e), fmt(f), fmt(std::abs(e - f) / denom),
                 fmt(std::abs(c - f) / denom)});
    };
    line("c_const", closed.c_const, engine.coeffs.c_const, fit.coeffs.c_const);
    line("c_sx", closed.c_sx, engine.coeffs.c_sx, fit.coeffs.c_sx);
    line("c_r", closed.c_r, engine.coeffs.c_r, fit.coeffs.c_r);
    line("c_rsx", closed.c_rsx, engine.coeffs.c_rsx, fit.coeffs.c_rsx);
    line("c_w", closed.c_w, engine.coeffs.c_w, fit.coeffs.c_w);
    line("c_wsx", closed.c_wsx, engine.coeffs.c_wsx, fit.coeffs.c_wsx);
    csv.row({"engine_residual_norm", fmt(engine.residual_norm), "", "", "", ""});
    csv.row({"fit_uv_residual", fmt(fit.max_fit_residual), "", "", "", ""});
    csv.row({"fit_quadratic_in_s_residual", fmt(fit.max_quadratic_residual), "", "", "", ""});
    csv.row({"fit_asymmetry", fmt(fit.asymmetry), "", "", "", ""});
    csv.row({"delta_star", fmt(tv.delta_star), "", "", "", ""});
    csv.row({"tau_star", fmt(tv.tau_star), "", "", "", ""});
    if (cfg.get_bool(kGadgetSchema, "quantum_check"))
        csv.row({"quantum_cross_check_max_dev", fmt(quantum_cross_check(sp)), "", "", "", ""});

    OutputWriter out(OutputWriter::resolve_dir(args.outdir));
    const auto path = out.write(man, "gadget_verify.csv", csv);
    out.write_manifest(man);
    std::cout << "wrote " << path << "\n";
    return 0;
}

const Schema kSweepSchema = [] {
    Schema s = kGadgetSchema;
    s.push_back({"sweep_key", Type::String, "epsilon",
                 "parameter to sweep: epsilon|alpha|gamma|beta|tau|delta_pair|delta"});
    s.push_back({"sweep_from", Type::Double, "0.01", "first value (energy)"});
    s.push_back({"sweep_to", Type::Double, "0.05", "last value (energy)"});
    s.push_back({"sweep_steps", Type::Int, "9", "number of sweep points"});
    s.push_back({"with_fit", Type::Bool, "false", "add exact-diagonalization fit columns"});
    return s;
}();

int run_gadget_sweep(const CommonArgs& args) {
    auto cfg = load_config(args, kSweepSchema);
    GadgetSpec base = spec_from(cfg, kSweepSchema);
    const std::string key = cfg.get_string(kSweepSchema, "sweep_key");
    const double from = cfg.get_double(kSweepSchema, "sweep_from");
    const double to = cfg.get_double(kSweepSchema, "sweep_to");
    const long long steps = cfg.get_int(kSweepSchema, "sweep_steps");
    const bool with_fit = cfg.get_bool(kSweepSchema, "with_fit");
    if (steps < 2) throw ConfigError("key 'sweep_steps': need at least 2 points");

    double* slot = nullptr;
    if (key == "epsilon") slot = &base.epsilon;
    else if (key == "alpha") slot = &base.alpha;
    else if (key == "gamma") slot = &base.gamma;
    else if (key == "beta") slot = &base.beta;
    else if (key == "tau") slot = &base.tau;
    else if (key == "delta_pair") slot = &base.delta_pair;
    else if (key == "delta") slot = &base.delta;
    else throw ConfigError("key 'sweep_key': unknown parameter '" + key + "'");

    RunManifest man;
    man.subcommand = "gadget-sweep";
    man.params = cfg.resolved(kSweepSchema);

    CsvBuilder csv(man);
    std::vector<std::string> cols{key,     "c_const", "c_sx",  "c_r",
                                  "c_rsx", "c_w",     "c_wsx", "closed_c_wsx"};
    if (with_fit) cols.insert(cols.end(), {"fit_c_r", "fit_c_rsx", "fit_c_w", "fit_c_wsx"});
    csv.columns(cols);
    for (long long i = 0; i < steps; ++i) {
        *slot = from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
        const auto eng = gadget_effective(base).coeffs;
        std::vector<double> row{*slot,   eng.c_const, eng.c_sx, eng.c_r, eng.c_rsx,
                                eng.c_w, eng.c_wsx,   closed_form_coefficients(base).c_wsx};
        if (with_fit) {
            const auto fit = fit_effective(base).coeffs;
            row.insert(row.end(), {fit.c_r, fit.c_rsx, fit.c_w, fit.c_wsx});
        }
        csv.numeric_row(row);
    }

    OutputWriter out(OutputWriter::resolve_dir(args.outdir));
    const auto path = out.write(man, "gadget_sweep.csv", csv);
    out.write_manifest(man);
    std::cout << "wrote " << path << "\n";
    return 0;
}

// ---------------------------------------------------------------- magnons

const Schema kSuscSchema{
    {"J", Type::Double, "1.0", "exchange energy (sets the energy unit)"},
    {"S", Type::Double, "0.5", "spin magnitude"},
    {"h_z", Type::Double, "1e-3", "symmetry-breaking field (units of J)"},
    {"T", Type::Double, "0.1", "temperature for chi_zz (units of J)"},
    {"Lambda", Type::Int, "32", "linear lattice size (sites)"},
    {"refine", Type::Int, "8", "BZ quadrature refinement (grid (refine*Lambda)^3)"},
    {"include_k0", Type::Bool, "true", "include the h_z-regulated k = 0 term"},
    {"q_steps", Type::Int, "40", "points of the chi(q) table on (0, pi]"},
    {"r_max", Type::Int, "12", "chi(r) table covers integer r in [1, r_max]"},
};

int run_susceptibility(const CommonArgs& args) {
    auto cfg = load_config(args, kSuscSchema);
    FMParams p;
    p.J = cfg.get_double(kSuscSchema, "J");
    p.S = cfg.get_double(kSuscSchema, "S");
    p.h_z = cfg.get_double(kSuscSchema, "h_z");
    p.T = cfg.get_double(kSuscSchema, "T");
    p.Lambda = static_cast<int>(cfg.get_int(kSuscSchema, "Lambda"));
    p.validate();
    BZOptions opt;
    opt.refine = static_cast<int>(cfg.get_int(kSuscSchema, "refine"));
    opt.include_k0 = cfg.get_bool(kSuscSchema, "include_k0");

    RunManifest man;
    man.subcommand = "susceptibility";
    man.params = cfg.resolved(kSuscSchema);
    OutputWriter out(OutputWriter::resolve_dir(args.outdir));

    CsvBuilder q_csv(man);
    q_csv.columns({"q", "omega_q", "chi_xx_q", "chi_zz_q", "chi_zz_window"});
    const long long qs = cfg.get_int(kSuscSchema, "q_steps");
    for (long long i = 1; i <= qs; ++i) {
        const double q = std::numbers::pi * static_cast<double>(i) / static_cast<double>(qs);
        std::string warn;
        const double zz = chi_zz_q({q, 0, 0}, p, &warn);
        q_csv.row({fmt(q), fmt(dispersion({q, 0, 0}, p)), fmt(chi_xx_q({q, 0, 0}, p)), fmt(zz),
                   warn.empty() ? "ok" : "outside_window"});
    }
    out.write(man, "susceptibility_q.csv", q_csv);

    const int rmax = static_cast<int>(cfg.get_int(kSuscSchema, "r_max"));
    std::vector<std::array<int, 3>> rs;
    for (int r = 1; r <= rmax; ++r) rs.push_back({r, 0, 0});
    const auto lattice = chi_xx_r_lattice_batch(rs, p, opt);
    CsvBuilder r_csv(man);
    r_csv.columns({"r", "chi_xx_r_continuum", "chi_xx_r_lattice", "rel_deviation"});
    for (int r = 1; r <= rmax; ++r) {
        const double cont = chi_xx_r(r, p);
        const double lat = lattice[r - 1];
        r_csv.numeric_row({static_cast<double>(r), cont, lat, std::abs(lat / cont - 1.0)});
    }
    const auto path = out.write(man, "susceptibility_r.csv", r_csv);
    out.write_manifest(man);
    std::cout << "wrote " << path << "\n";
    return 0;
}

const Schema kCouplingSchema{
    {"A", Type::Double, "0.05", "five-body coupling strength (units of J)"},
    {"L", Type::Int, "16", "code size (plaquettes per side)"},
    {"J", Type::Double, "1.0", "exchange energy"},
    {"S", Type::Double, "0.5", "spin magnitude"},
    {"h_z", Type::Double, "0.0", "symmetry-breaking field; 0 means unscreened"},
};

int run_coupling_matrix(const CommonArgs& args) {
    auto cfg = load_config(args, kCouplingSchema);
    FMParams p;
    p.J = cfg.get_double(kCouplingSchema, "J");
    p.S = cfg.get_double(kCouplingSchema, "S");
    p.h_z = cfg.get_double(kCouplingSchema, "h_z");
    const int L = static_cast<int>(cfg.get_int(kCouplingSchema, "L"));
    const double A = cfg.get_double(kCouplingSchema, "A");

    auto cm = coupling_matrix(A, L, p);
    cm.check_invariants();

    RunManifest man;
    man.subcommand = "coupling-matrix";
    man.params = cfg.resolved(kCouplingSchema);
    CsvBuilder csv(man);
    csv.columns({"row", "col", "value"});
    for (std::size_t i = 0; i < cm.size(); ++i)
        for (std::size_t j = 0; j < cm.size(); ++j)
            if (i != j)
                csv.numeric_row(
                    {static_cast<double>(i), static_cast<double>(j), cm.values[i][j]});

    OutputWriter out(OutputWriter::resolve_dir(args.outdir));
    const auto path = out.write(man, "coupling_matrix.csv", csv);
    out.write_manifest(man);
    std::cout << "wrote " << path << " (mu at center = "
              << fmt(chemical_potential(cm, central_plaquette(L))) << ")\n";
    return 0;
}

// ---------------------------------------------------------------- thermo

const Schema kThermoSchema{
    {"A", Type::Double, "0.05", "five-body coupling strength (units of J)"},
    {"J", Type::Double, "1.0", "exchange energy"},
    {"S", Type::Double, "0.5", "spin magnitude"},
    {"h_z", Type::Double, "0.0", "field for the transverse coupling matrix"},
    {"L_values", Type::String, "8,16,24,32", "code sizes for the mu(L) table"},
    {"beta_values", Type::String, "1,2,5,10", "inverse temperatures for the energy table"},
    {"T", Type::Double, "0.1", "temperature for the longitudinal channel (units of J)"},
    {"include_constant", Type::Bool, "true", "add the 2SA offset to longitudinal mu"},
    {"kappa_n", Type::Double, "1.0", "bath rate prefactor"},
    {"n", Type::Int, "1", "bath exponent (1 Ohmic, >= 2 super-Ohmic)"},
    {"beta", Type::Double, "1.0", "inverse temperature for the rate table"},
    {"omega_c", Type::Double, "10.0", "bath cutoff energy"},
    {"omega_max", Type::Double, "3.0", "rate table covers [-omega_max, omega_max]"},
    {"omega_steps", Type::Int, "61", "points of the rate table"},
};

int run_thermo(const CommonArgs& args) {
    auto cfg = load_config(args, kThermoSchema);
    FMParams p;
    p.J = cfg.get_double(kThermoSchema, "J");
    p.S = cfg.get_double(kThermoSchema, "S");
    p.h_z = cfg.get_double(kThermoSchema, "h_z");
    const double A = cfg.get_double(kThermoSchema, "A");
    const double T = cfg.get_double(kThermoSchema, "T");
    const double D = 2.0 * p.J * p.S;
    LongitudinalMuOptions lopt;
    lopt.include_constant = cfg.get_bool(kThermoSchema, "include_constant");
    lopt.S = p.S;

    RunManifest man;
    man.subcommand = "thermo";
    man.params = cfg.resolved(kThermoSchema);
    OutputWriter out(OutputWriter::resolve_dir(args.outdir));

    const auto Ls = cfg.get_list(kThermoSchema, "L_values");
    CsvBuilder mu_csv(man);
    mu_csv.columns({"L", "mu_transverse", "mu_longitudinal", "longitudinal_constant"});
    for (double dl : Ls) {
        const int L = static_cast<int>(dl);
        auto cm = coupling_matrix(A, L, p);
        mu_csv.numeric_row({dl, chemical_potential(cm, central_plaquette(L)),
                            longitudinal_mu(L, T, D, A, lopt),
                            longitudinal_mu_constant(L, T, D, A)});
    }
    out.write(man, "thermo_mu.csv", mu_csv);

    CsvBuilder e_csv(man);
    e_csv.columns({"L", "beta", "mu", "thermal_energy"});
    for (double dl : Ls) {
        const int L = static_cast<int>(dl);
        auto cm = coupling_matrix(A, L, p);
        const double mu = chemical_potential(cm, central_plaquette(L));
        for (double beta : cfg.get_list(kThermoSchema, "beta_values"))
            e_csv.numeric_row({dl, beta, mu, thermal_energy(L, mu, beta)});
    }
    out.write(man, "thermo_energy.csv", e_csv);

    NoiseParams np;
    np.kappa_n = cfg.get_double(kThermoSchema, "kappa_n");
    np.n = static_cast<int>(cfg.get_int(kThermoSchema, "n"));
    np.beta = cfg.get_double(kThermoSchema, "beta");
    np.omega_c = cfg.get_double(kThermoSchema, "omega_c");
    const double wmax = cfg.get_double(kThermoSchema, "omega_max");
    const long long wsteps = cfg.get_int(kThermoSchema, "omega_steps");
    CsvBuilder rate_csv(man);
    rate_csv.columns({"omega", "rate", "adiabaticity_ratio_at_minus_omega"});
    for (long long i = 0; i < wsteps; ++i) {
        const double w =
            -wmax + 2.0 * wmax * static_cast<double>(i) / static_cast<double>(wsteps - 1);
        const double ratio = (w > 0) ? adiabaticity_margin(w, np).ratio : 0.0;
        rate_csv.numeric_row({w, error_rate(w, np), ratio});
    }
    const auto path = out.write(man, "thermo_rates.csv", rate_csv);
    out.write_manifest(man);
    std::cout << "wrote " << path << "\n";
    return 0;
}

// ---------------------------------------------------------------- metropolis

const Schema kFig4Schema{
    {"L_values", Type::String, "3,4,5,6", "code sizes (Lambda = 2 L^2 per the figure preset)"},
    {"A_over_J", Type::Double, "0.05", "transverse forcing A in units of J"},
    {"temperature", Type::Double, "0.25", "temperature (units of J)"},
    {"sweeps_thermalize", Type::Int, "3000", "thermalization sweeps"},
    {"sweeps_measure", Type::Int, "24000", "measurement sweeps"},
    {"seed", Type::Uint64, "20240917", "RNG seed (recorded in the output header)"},
    {"scaling", Type::String, "fig4", "scaling preset: fig4 (Lambda = 2L^2) or maintext (L^3)"},
    {"max_spins", Type::Int, "1000000", "resource cap on Lambda^3"},
    {"profile", Type::Bool, "false", "dump the center-column S^x profile per layer"},
};

int run_metropolis_fig4(const CommonArgs& args) {
    auto cfg = load_config(args, kFig4Schema);
    FMParams p;  // J = 1, classical spins
    Fig4Options opt;
    opt.A_over_J = cfg.get_double(kFig4Schema, "A_over_J");
    opt.temperature = cfg.get_double(kFig4Schema, "temperature");
    opt.sweeps_thermalize = cfg.get_int(kFig4Schema, "sweeps_thermalize");
    opt.sweeps_measure = cfg.get_int(kFig4Schema, "sweeps_measure");
    opt.seed = cfg.get_uint64(kFig4Schema, "seed");
    opt.max_spins = static_cast<std::size_t>(cfg.get_int(kFig4Schema, "max_spins"));
    const std::string scaling = cfg.get_string(kFig4Schema, "scaling");
    if (scaling == "maintext") opt.main_text_scaling = true;
    else if (scaling != "fig4") throw ConfigError("key 'scaling': must be fig4 or maintext");
    opt.want_profile = cfg.get_bool(kFig4Schema, "profile");

    std::vector<int> Ls;
    for (double v : cfg.get_list(kFig4Schema, "L_values")) Ls.push_back(static_cast<int>(v));

    const auto rows = run_fig4(Ls, p, opt);

    RunManifest man;
    man.subcommand = "metropolis-fig4";
    man.params = cfg.resolved(kFig4Schema);
    man.seed = opt.seed;
    CsvBuilder csv(man);
    csv.columns({"L", "Lambda", "h_z", "sx_center", "sx_center_err", "m_z", "acceptance",
                 "cone_half_angle"});
    for (const auto& r : rows)
        csv.numeric_row({static_cast<double>(r.L), static_cast<double>(r.Lambda), r.h_z,
                         r.sx_center, r.sx_center_err, r.m_z, r.acceptance, r.cone_angle});

    OutputWriter out(OutputWriter::resolve_dir(args.outdir));
    const auto path = out.write(man, "fig4.csv", csv);
    if (opt.want_profile) {
        CsvBuilder prof(man);
        prof.columns({"L", "distance_from_plane", "sx"});
        for (const auto& r : rows)
            for (std::size_t d = 0; d < r.sx_profile.size(); ++d)
                prof.numeric_row(
                    {static_cast<double>(r.L), static_cast<double>(d), r.sx_profile[d]});
        out.write(man, "fig4_profile.csv", prof);
    }
    out.write_manifest(man);
    std::cout << "wrote " << path << "\n";
    return 0;
}

// ---------------------------------------------------------------- backaction

const Schema kBackSchema{
    {"regime", Type::String, "fresnel", "lattice | fresnel | infinite | distance"},
    {"geometry", Type::String, "disk", "code geometry: single | disk | square"},
    {"radius", Type::Double, "8.0", "disk radius (plaquettes), geometry = disk"},
    {"code_L", Type::Int, "8", "square side (plaquettes), geometry = square"},
    {"offset", Type::String, "adjacent",
     "spin position: adjacent (one unit off-plane) or inplane (half-cell offset)"},
    {"d", Type::Double, "8.0", "distance from the code plane, regime = distance"},
    {"J", Type::Double, "1.0", "exchange energy"},
    {"S", Type::Double, "0.5", "spin magnitude"},
    {"h_z", Type::Double, "1e-4", "field regulator for the lattice sum"},
    {"Lambda", Type::Int, "48", "lattice size for the k-space sum"},
    {"refine", Type::Int, "1", "BZ quadrature refinement for the lattice sum"},
    {"include_k0", Type::Bool, "true", "include the regulated k = 0 term"},
    {"A", Type::Double, "0.01", "effective five-body coupling (units of J)"},
    {"t_min", Type::Double, "0.5", "first time (units of 1/J)"},
    {"t_max", Type::Double, "40.0", "last time (units of 1/J)"},
    {"t_steps", Type::Int, "20", "number of time points"},
    {"log_t", Type::Bool, "false", "geometric instead of linear time grid"},
};

int run_backaction(const CommonArgs& args) {
    auto cfg = load_config(args, kBackSchema);
    FMParams p;
    p.J = cfg.get_double(kBackSchema, "J");
    p.S = cfg.get_double(kBackSchema, "S");
    p.h_z = cfg.get_double(kBackSchema, "h_z");
    p.Lambda = static_cast<int>(cfg.get_int(kBackSchema, "Lambda"));
    const double A = cfg.get_double(kBackSchema, "A");
    const std::string regime = cfg.get_string(kBackSchema, "regime");
    const std::string geometry = cfg.get_string(kBackSchema, "geometry");
    const std::string offset = cfg.get_string(kBackSchema, "offset");

    if (offset != "adjacent" && offset != "inplane")
        throw ConfigError("key 'offset': must be adjacent or inplane");
    const bool inplane = offset == "inplane";

    PlaquetteSet code;
    Vec3 spin = inplane ? Vec3{0.5, 0.5, 0.0} : Vec3{0, 0, 1};
    if (geometry == "single") {
        code = PlaquetteSet::single();
        if (inplane) spin = {0.5, 0.5, 0.0};
    } else if (geometry == "disk") {
        code = PlaquetteSet::disk(cfg.get_double(kBackSchema, "radius"), inplane ? 0.5 : 0.0,
                                  inplane ? 0.5 : 0.0);
    } else if (geometry == "square") {
        const int L = static_cast<int>(cfg.get_int(kBackSchema, "code_L"));
        code = PlaquetteSet::square(L);
        const double c = std::floor(L / 2.0);
        spin = inplane ? Vec3{c + 0.5, c + 0.5, 0.0} : Vec3{c, c, 1.0};
    } else {
        throw ConfigError("key 'geometry': must be single, disk or square");
    }
    if (regime == "distance") spin = {0.5, 0.5, cfg.get_double(kBackSchema, "d")};

    const double t_min = cfg.get_double(kBackSchema, "t_min");
    const double t_max = cfg.get_double(kBackSchema, "t_max");
    const long long steps = cfg.get_int(kBackSchema, "t_steps");
    const bool log_t = cfg.get_bool(kBackSchema, "log_t");
    if (!(t_max > 0.0) || steps < 1)
        throw std::runtime_error("backaction: empty time series (t_max and t_steps must be > 0)");
    std::vector<double> times;
    for (long long i = 0; i < steps; ++i) {
        const double frac =
            steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
        times.push_back(log_t ? t_min * std::pow(t_max / t_min, frac)
                              : t_min + (t_max - t_min) * frac);
    }

    TimeSeries ts;
    if (regime == "lattice") {
        BZOptions opt;
        opt.refine = static_cast<int>(cfg.get_int(kBackSchema, "refine"));
        opt.include_k0 = cfg.get_bool(kBackSchema, "include_k0");
        LatticeResponse resp(spin, A, code, p, opt);
        for (double t : times) ts.append(t, resp.value(t), p.S);
    } else if (regime == "fresnel") {
        for (double t : times) ts.append(t, sx_fresnel(spin, t, A, code, p), p.S);
    } else if (regime == "infinite") {
        for (double t : times) ts.append(t, sx_infinite_code(t, A, p), p.S);
    } else if (regime == "distance") {
        const double d = cfg.get_double(kBackSchema, "d");
        for (double t : times) ts.append(t, sx_distance(t, d, A, p), p.S);
    } else {
        throw ConfigError("key 'regime': must be lattice, fresnel, infinite or distance");
    }

    RunManifest man;
    man.subcommand = "backaction";
    man.params = cfg.resolved(kBackSchema);
    CsvBuilder csv(man);
    csv.columns({"t", "sx", "valid"});
    for (std::size_t i = 0; i < ts.times.size(); ++i)
        csv.row({fmt(ts.times[i]), fmt(ts.values[i]), ts.valid[i] ? "1" : "0"});

    OutputWriter out(OutputWriter::resolve_dir(args.outdir));
    const auto path = out.write(man, "backaction.csv", csv);
    out.write_manifest(man);
    std::cout << "wrote " << path << " (refresh time t_r = " << fmt(refresh_time(A, p)) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the magnon-mediated quantum-memory model"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* desc;
        const Schema* schema;
        int (*fn)(const CommonArgs&);
    };
    static const Sub subs[] = {
        {"gadget-verify", "compare closed-form, SW-engine and exact-fit gadget coefficients",
         &kGadgetSchema, run_gadget_verify},
        {"gadget-sweep", "sweep one gadget coupling and tabulate effective coefficients",
         &kSweepSchema, run_gadget_sweep},
        {"susceptibility", "magnon dispersion and static susceptibility tables", &kSuscSchema,
         run_susceptibility},
        {"coupling-matrix", "mediated plaquette-coupling matrix J_pp'", &kCouplingSchema,
         run_coupling_matrix},
        {"thermo", "anyon chemical potential, thermal energy and bath rates", &kThermoSchema,
         run_thermo},
        {"metropolis-fig4", "classical Heisenberg Metropolis run of the forcing response",
         &kFig4Schema, run_metropolis_fig4},
        {"backaction", "time-dependent ferromagnet response to the code coupling", &kBackSchema,
         run_backaction},
    };

    std::map<std::string, const Sub*> dispatch;
    std::map<std::string, CommonArgs> cargs;
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.desc);
        auto& a = cargs[s.name];
        sc->add_option("config", a.config_file, "config file with key = value lines");
        sc->add_option("--set", a.overrides, "override a config key, e.g. --set epsilon=0.03");
        sc->add_option("--outdir", a.outdir, "output directory (default $QMEM_OUT_DIR or .)");
        sc->footer(Config::help_text(*s.schema));
        dispatch[s.name] = &s;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string chosen = app.get_subcommands().front()->get_name();
    try {
        return dispatch[chosen]->fn(cargs[chosen]);
    } catch (const qmem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
