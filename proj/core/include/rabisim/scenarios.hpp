#ifndef RABISIM_SCENARIOS_HPP
#define RABISIM_SCENARIOS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rabisim/analysis.hpp"
#include "rabisim/noise.hpp"

namespace rabisim {

/// Figure-reproduction presets plus a fully user-driven `custom` mode.
enum class Scenario {
    fig1a, fig1b, fig1c,
    fig2_traj, fig2d_jc, fig2e_phase,
    fig3a, fig3b, fig3c,
    fig4,
    fig5a, fig5b, fig5c,
    custom,
};

enum class SolverKind { master, trajectory, stochastic };
enum class HamiltonianKind { rabi, jc, phase };
/// What a `custom` scenario computes: a single time series, a beta sweep, or
/// the Rabi-vs-phase-operator comparison.
enum class CustomKind { series, sweep, compare };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);
SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind solver);
HamiltonianKind parse_hamiltonian(const std::string& name);
std::string to_string(HamiltonianKind kind);
CustomKind parse_custom_kind(const std::string& name);
std::string to_string(CustomKind kind);

QOperator build_hamiltonian(HamiltonianKind kind, const SimParams& params,
                            const HilbertSpace& space);

struct RunConfig {
    Scenario scenario = Scenario::custom;
    SolverKind solver = SolverKind::master;
    HamiltonianKind hamiltonian = HamiltonianKind::rabi;
    CustomKind custom_kind = CustomKind::series;
    SimParams params;
    int n_max = 30;
    TimeGrid grid;
    IntegratorCfg integrator;
    StateSpec initial_state;
    std::uint64_t seed = 0;
    int threads = 0;
    int n_traj = 2000;
    int n_single = 0;           // trajectory solver: emit this many single runs
    NoiseCfg noise;
    SweepAxis sweep_axis = SweepAxis::gamma_ph;
    std::vector<double> sweep_values;
    std::string out_dir = ".";
    std::vector<std::string> overrides;  // "key=value" log of departures from the preset

    void validate() const;
};

/// Fully resolved parameter set for a preset (see the figure table in README).
RunConfig preset_config(Scenario scenario);

/// Parses the sectioned key=value config format. A `scenario` key makes the
/// named preset the baseline; every other key is applied on top and logged as
/// an override. Unknown sections/keys and malformed values are ConfigErrors
/// that carry the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Canonical serialization; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

/// Applies one `key = value` override (same keys as the config format, spelled
/// section.key) and records it in config.overrides.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

struct RunOutputs {
    std::vector<std::string> files;   // CSVs, in deterministic order
    std::string manifest_path;        // JSON run manifest
};

/// Executes the configured scenario, writing one CSV per curve plus the run
/// manifest into config.out_dir. Numerical failures propagate as exceptions
/// after the manifest (with the failure report) has been written.
RunOutputs run_scenario(const RunConfig& config);

} // namespace rabisim

#endif
