// qb: command-line driver for charging, storage, sweeps, decay rates and
// Bessel zeros.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical tolerance failure
// or failed sweep cells.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qb/bessel.hpp"
#include "qb/io.hpp"
#include "qb/noise.hpp"
#include "qb/runner.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct RunOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::string csv, json, plot;
    int threads{-1};
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("-c,--config", o.config, "Config file (sectioned key = value)");
    cmd->add_option("-s,--set", o.overrides, "Override section.key=value (repeatable)");
    cmd->add_option("--csv", o.csv, "CSV output path");
    cmd->add_option("--json", o.json, "JSON summary path ('-' for stdout)");
    cmd->add_option("--plot", o.plot, "SVG plot path");
}

qb::ExperimentConfig load(const RunOptions& o) {
    qb::ConfigEntries entries;
    if (!o.config.empty()) entries = qb::read_config_file(o.config);
    for (const auto& s : o.overrides) qb::apply_override(entries, s);
    qb::ExperimentConfig cfg = qb::build_config(entries);
    if (!o.csv.empty()) cfg.output.csv = o.csv;
    if (!o.json.empty()) cfg.output.json = o.json;
    if (!o.plot.empty()) cfg.output.plot = o.plot;
    if (o.threads >= 0) cfg.threads = o.threads;
    return cfg;
}

void emit_json(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        qb::write_text_file(path, text);
    }
}

int run_trajectory(const std::string& command, const RunOptions& o) {
    const qb::ExperimentConfig cfg = load(o);
    const qb::TrajectoryRecord rec = qb::run_command(command, cfg);
    if (!cfg.output.csv.empty()) qb::write_text_file(cfg.output.csv, qb::trajectory_csv(rec));
    if (!cfg.output.plot.empty()) qb::write_text_file(cfg.output.plot, qb::trajectory_svg(rec));
    emit_json(cfg.output.json, qb::summary_json(rec, cfg));
    return 0;
}

int run_sweep(const RunOptions& o) {
    const qb::ExperimentConfig cfg = load(o);
    const qb::SweepResult res = qb::sweep2d(cfg, cfg.sweep);
    if (!cfg.output.csv.empty()) qb::write_text_file(cfg.output.csv, qb::sweep_csv(res));
    if (!cfg.output.plot.empty()) qb::write_text_file(cfg.output.plot, qb::sweep_svg(res));
    if (!cfg.output.json.empty()) {
        emit_json(cfg.output.json, qb::sweep_json(res, cfg));
    } else if (cfg.output.csv.empty()) {
        std::cout << qb::sweep_csv(res);
    }
    for (const auto& e : res.errors) std::cerr << "cell failed: " << e << '\n';
    return res.ok() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamically modulated Dicke quantum battery simulator"};
    app.require_subcommand(1);

    RunOptions charge_opts, store_opts, sweep_opts;
    auto* charge = app.add_subcommand("charge", "Charge the battery from a single-mode charger");
    add_run_options(charge, charge_opts);
    auto* store = app.add_subcommand("store", "Evolve a battery under a storage channel");
    add_run_options(store, store_opts);
    auto* sweep = app.add_subcommand("sweep", "Two-dimensional parameter sweep");
    add_run_options(sweep, sweep_opts);
    sweep->add_option("--threads", sweep_opts.threads, "Worker threads (0: all cores)");

    double xi = 0.0, nu = 0.0, omega0 = 1.0;
    std::string spectrum_name = "lorentz";
    qb::LorentzianSpectrum spectrum;
    auto* rate = app.add_subcommand("rate", "Engineered decay rate of a modulated emitter");
    rate->add_option("--xi", xi, "Modulation amplitude")->required();
    rate->add_option("--nu", nu, "Modulation frequency")->required();
    rate->add_option("--spectrum", spectrum_name, "Bath spectrum")
        ->check(CLI::IsMember({"lorentz"}));
    rate->add_option("--Omega", spectrum.Omega, "Coupling strength");
    rate->add_option("--lambda", spectrum.lambda_w, "Spectral width");
    rate->add_option("--omega-a", spectrum.omega_a, "Spectral centre");
    rate->add_option("--omega0", omega0, "Emitter frequency");

    int order = 0, count = 1;
    auto* zeros = app.add_subcommand("bessel-zeros", "Positive zeros of J_n");
    zeros->add_option("--order", order, "Bessel order")->required();
    zeros->add_option("--count", count, "Number of zeros")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*charge) return run_trajectory("charge", charge_opts);
        if (*store) return run_trajectory("store", store_opts);
        if (*sweep) return run_sweep(sweep_opts);
        if (*rate) {
            const qb::ModulationParams m{xi, nu};
            const double g0 = 2.0 * 3.14159265358979323846 * qb::spectral_density(spectrum, omega0);
            const double g = qb::effective_rate(m, spectrum, omega0);
            std::printf("gamma %.12g\ngamma0 %.12g\nratio %.12g\n", g, g0, g0 > 0.0 ? g / g0 : 0.0);
            return 0;
        }
        if (*zeros) {
            for (int k = 1; k <= count; ++k) std::printf("%.12g\n", qb::bessel_j_zero(order, k));
            return 0;
        }
    } catch (const qb::AccuracyError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
