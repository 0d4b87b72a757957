// Command-line front end: figure presets, custom runs, CSV + manifest output.
#include <clocale>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rabisim/scenarios.hpp"
#include "rabisim/version.hpp"

namespace {

using rabisim::RunConfig;

// Every flag funnels through apply_override so validation and override
// logging stay identical to the config-file path.
struct FlagSet {
    std::vector<std::pair<CLI::Option*, std::pair<std::string, std::string*>>> entries;
    std::vector<std::string> storage;

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& help) {
        storage.reserve(64);  // keep pointers stable
        storage.emplace_back();
        CLI::Option* opt = cmd->add_option(flag, storage.back(), help);
        entries.push_back({opt, {key, &storage.back()}});
    }

    void apply(RunConfig& cfg) const {
        for (const auto& [opt, kv] : entries) {
            if (opt->count() > 0) rabisim::apply_override(cfg, kv.first, *kv.second);
        }
    }
};

void add_common_flags(CLI::App* cmd, FlagSet& flags, std::string& config_path) {
    cmd->add_option("--config", config_path, "config file (sectioned key = value)");
    flags.add(cmd, "--seed", "run.seed", "master seed for all random streams");
    flags.add(cmd, "--n-max", "space.n_max", "Fock-space cutoff");
    flags.add(cmd, "--out-dir", "run.out_dir", "output directory");
    flags.add(cmd, "--threads", "run.threads", "worker threads (0 = hardware)");
}

void add_param_flags(CLI::App* cmd, FlagSet& flags) {
    flags.add(cmd, "--omega0", "params.omega0", "atomic transition frequency");
    flags.add(cmd, "--g", "params.g", "coupling strength");
    flags.add(cmd, "--gamma-ph", "params.gamma_ph", "dephasing rate");
    flags.add(cmd, "--gamma", "params.gamma", "atomic relaxation rate");
    flags.add(cmd, "--kappa", "params.kappa", "cavity relaxation rate");
    flags.add(cmd, "--n-t", "params.n_t", "thermal photon number");
    flags.add(cmd, "--hamiltonian", "params.hamiltonian", "rabi|jc|phase");
    flags.add(cmd, "--state", "state.initial", "initial state, e.g. g,fock:0 or e,coh:0.2236");
    flags.add(cmd, "--t-end", "grid.t_end", "evolution time (units of 1/omega)");
    flags.add(cmd, "--samples", "grid.n_samples", "number of sample points");
    flags.add(cmd, "--xi", "grid.xi", "dimensionless-time scale tau = xi*t");
}

int execute(const RunConfig& cfg) {
    const rabisim::RunOutputs outputs = rabisim::run_scenario(cfg);
    for (const auto& f : outputs.files) std::cout << "wrote " << f << "\n";
    std::cout << "wrote " << outputs.manifest_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"rabisim: Rabi-model open-system dynamics (master equation, "
                 "quantum trajectories, stochastic frequency noise)"};
    app.set_version_flag("--version", rabisim::version_string);
    app.require_subcommand(1);

    struct SubSpec {
        CLI::App* cmd = nullptr;
        FlagSet flags;
        std::string config_path;
    };

    SubSpec evolve, traj, noise, sweep, compare, run;
    std::string preset_name;

    evolve.cmd = app.add_subcommand("evolve", "integrate the master equation");
    add_common_flags(evolve.cmd, evolve.flags, evolve.config_path);
    add_param_flags(evolve.cmd, evolve.flags);

    traj.cmd = app.add_subcommand("trajectories", "Monte-Carlo wavefunction unraveling");
    add_common_flags(traj.cmd, traj.flags, traj.config_path);
    add_param_flags(traj.cmd, traj.flags);
    traj.flags.add(traj.cmd, "--n-traj", "trajectories.n_traj", "ensemble size");
    traj.flags.add(traj.cmd, "--single", "trajectories.n_single",
                   "emit this many single trajectories (with jump times) instead of the ensemble");

    noise.cmd = app.add_subcommand("noise", "stochastic-frequency ensemble simulation");
    add_common_flags(noise.cmd, noise.flags, noise.config_path);
    add_param_flags(noise.cmd, noise.flags);
    noise.flags.add(noise.cmd, "--epsilon", "noise.epsilon", "maximum frequency shift");
    noise.flags.add(noise.cmd, "--x", "noise.x", "noise-frequency knob");
    noise.flags.add(noise.cmd, "--dt", "noise.dt", "simulation unit step");
    noise.flags.add(noise.cmd, "--noise-t-end", "noise.t_end", "run length");
    noise.flags.add(noise.cmd, "--n-runs", "noise.n_runs", "ensemble size");
    noise.flags.add(noise.cmd, "--abs-r", "noise.outer_branch_abs_r",
                    "use |r| in the outer branches of the frequency walk (true|false)");
    noise.flags.add(noise.cmd, "--single", "trajectories.n_single",
                    "additionally emit this many single runs");

    sweep.cmd = app.add_subcommand("sweep", "beta vs a parameter axis");
    add_common_flags(sweep.cmd, sweep.flags, sweep.config_path);
    add_param_flags(sweep.cmd, sweep.flags);
    sweep.flags.add(sweep.cmd, "--axis", "sweep.axis", "omega0_sum|g|gamma_ph");
    sweep.flags.add(sweep.cmd, "--values", "sweep.values", "comma-separated axis values");

    compare.cmd = app.add_subcommand("compare-he", "Rabi vs phase-operator Hamiltonian");
    add_common_flags(compare.cmd, compare.flags, compare.config_path);
    add_param_flags(compare.cmd, compare.flags);

    run.cmd = app.add_subcommand("run", "execute a figure-reproduction preset");
    run.cmd->add_option("preset", preset_name,
                        "fig1a|fig1b|fig1c|fig2-traj|fig2d-jc|fig2e-phase|"
                        "fig3a|fig3b|fig3c|fig4|fig5a|fig5b|fig5c|custom")
        ->required();
    add_common_flags(run.cmd, run.flags, run.config_path);
    add_param_flags(run.cmd, run.flags);
    run.flags.add(run.cmd, "--n-traj", "trajectories.n_traj", "trajectory ensemble size");
    run.flags.add(run.cmd, "--single", "trajectories.n_single", "single-run count");
    run.flags.add(run.cmd, "--n-runs", "noise.n_runs", "noise ensemble size");
    run.flags.add(run.cmd, "--noise-t-end", "noise.t_end", "noise run length");

    CLI11_PARSE(app, argc, argv);

    try {
        SubSpec* active = nullptr;
        RunConfig cfg;
        if (evolve.cmd->parsed()) {
            active = &evolve;
            cfg = active->config_path.empty() ? RunConfig{}
                                              : rabisim::load_config_file(active->config_path);
            cfg.scenario = rabisim::Scenario::custom;
            cfg.solver = rabisim::SolverKind::master;
            cfg.custom_kind = rabisim::CustomKind::series;
        } else if (traj.cmd->parsed()) {
            active = &traj;
            cfg = active->config_path.empty() ? RunConfig{}
                                              : rabisim::load_config_file(active->config_path);
            cfg.scenario = rabisim::Scenario::custom;
            cfg.solver = rabisim::SolverKind::trajectory;
            // pure-state default tolerances, unless the config pinned its own
            bool integ_set = false;
            for (const auto& ov : cfg.overrides) {
                integ_set = integ_set || ov.rfind("integrator.", 0) == 0;
            }
            if (!integ_set) cfg.integrator = rabisim::trajectory_integrator_defaults();
        } else if (noise.cmd->parsed()) {
            active = &noise;
            cfg = active->config_path.empty() ? RunConfig{}
                                              : rabisim::load_config_file(active->config_path);
            cfg.scenario = rabisim::Scenario::custom;
            cfg.solver = rabisim::SolverKind::stochastic;
            cfg.n_single = 0;
        } else if (sweep.cmd->parsed()) {
            active = &sweep;
            cfg = active->config_path.empty() ? RunConfig{}
                                              : rabisim::load_config_file(active->config_path);
            cfg.scenario = rabisim::Scenario::custom;
            cfg.solver = rabisim::SolverKind::master;
            cfg.custom_kind = rabisim::CustomKind::sweep;
        } else if (compare.cmd->parsed()) {
            active = &compare;
            cfg = active->config_path.empty() ? RunConfig{}
                                              : rabisim::load_config_file(active->config_path);
            cfg.scenario = rabisim::Scenario::custom;
            cfg.solver = rabisim::SolverKind::master;
            cfg.custom_kind = rabisim::CustomKind::compare;
        } else {
            active = &run;
            if (!active->config_path.empty()) {
                throw rabisim::ConfigError(
                    "run <preset> does not take --config; put `scenario = <preset>` in the "
                    "config file and use the matching solver subcommand instead");
            }
            cfg = rabisim::preset_config(rabisim::parse_scenario(preset_name));
        }
        active->flags.apply(cfg);

        if (cfg.solver == rabisim::SolverKind::stochastic) {
            const std::string warning = cfg.noise.validate_with(cfg.params);
            if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
        }
        return execute(cfg);
    } catch (const rabisim::NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
