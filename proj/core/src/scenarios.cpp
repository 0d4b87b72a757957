#include "rabisim/scenarios.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rabisim/parallel.hpp"
#include "rabisim/rng.hpp"
#include "rabisim/series_io.hpp"
#include "rabisim/version.hpp"

namespace rabisim {

using nlohmann::json;

// ---------------------------------------------------------------------------
// enum <-> string
// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, Scenario> kScenarioNames = {
    {"fig1a", Scenario::fig1a},           {"fig1b", Scenario::fig1b},
    {"fig1c", Scenario::fig1c},           {"fig2-traj", Scenario::fig2_traj},
    {"fig2d-jc", Scenario::fig2d_jc},     {"fig2e-phase", Scenario::fig2e_phase},
    {"fig3a", Scenario::fig3a},           {"fig3b", Scenario::fig3b},
    {"fig3c", Scenario::fig3c},           {"fig4", Scenario::fig4},
    {"fig5a", Scenario::fig5a},           {"fig5b", Scenario::fig5b},
    {"fig5c", Scenario::fig5c},           {"custom", Scenario::custom},
};

} // namespace

Scenario parse_scenario(const std::string& name) {
    const auto it = kScenarioNames.find(name);
    if (it == kScenarioNames.end()) throw ConfigError("unknown scenario '" + name + "'");
    return it->second;
}

std::string to_string(Scenario scenario) {
    for (const auto& [name, s] : kScenarioNames) {
        if (s == scenario) return name;
    }
    return "custom";
}

SolverKind parse_solver(const std::string& name) {
    if (name == "master") return SolverKind::master;
    if (name == "trajectory") return SolverKind::trajectory;
    if (name == "stochastic") return SolverKind::stochastic;
    throw ConfigError("unknown solver '" + name + "'");
}

std::string to_string(SolverKind solver) {
    switch (solver) {
        case SolverKind::master: return "master";
        case SolverKind::trajectory: return "trajectory";
        case SolverKind::stochastic: return "stochastic";
    }
    return "?";
}

HamiltonianKind parse_hamiltonian(const std::string& name) {
    if (name == "rabi") return HamiltonianKind::rabi;
    if (name == "jc") return HamiltonianKind::jc;
    if (name == "phase") return HamiltonianKind::phase;
    throw ConfigError("unknown hamiltonian '" + name + "' (expected rabi|jc|phase)");
}

std::string to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::rabi: return "rabi";
        case HamiltonianKind::jc: return "jc";
        case HamiltonianKind::phase: return "phase";
    }
    return "?";
}

CustomKind parse_custom_kind(const std::string& name) {
    if (name == "series") return CustomKind::series;
    if (name == "sweep") return CustomKind::sweep;
    if (name == "compare") return CustomKind::compare;
    throw ConfigError("unknown custom kind '" + name + "' (expected series|sweep|compare)");
}

std::string to_string(CustomKind kind) {
    switch (kind) {
        case CustomKind::series: return "series";
        case CustomKind::sweep: return "sweep";
        case CustomKind::compare: return "compare";
    }
    return "?";
}

QOperator build_hamiltonian(HamiltonianKind kind, const SimParams& params,
                            const HilbertSpace& space) {
    switch (kind) {
        case HamiltonianKind::rabi: return rabi_hamiltonian(params, space);
        case HamiltonianKind::jc: return jc_hamiltonian(params, space);
        case HamiltonianKind::phase: return phase_hamiltonian(params, space);
    }
    throw ConfigError("bad hamiltonian kind");
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "omega0_sum") return SweepAxis::omega0_sum;
    if (name == "g") return SweepAxis::g;
    if (name == "gamma_ph") return SweepAxis::gamma_ph;
    throw ConfigError("unknown sweep axis '" + name + "' (expected omega0_sum|g|gamma_ph)");
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

namespace {

constexpr double kCoherentAlphaSq = 0.05;  // |alpha|^2 of the coherent presets

RunConfig base_config() {
    RunConfig cfg;
    cfg.params = SimParams{1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    cfg.n_max = 30;
    cfg.grid = TimeGrid{500.0, 501, 0.1};
    cfg.initial_state = StateSpec{};  // |g,0>
    cfg.noise = NoiseCfg{};
    cfg.noise.epsilon = 0.06;
    cfg.noise.x = 6.0;
    cfg.sweep_axis = SweepAxis::gamma_ph;
    cfg.sweep_values = {0.05, 0.1, 0.15, 0.2};
    return cfg;
}

} // namespace

RunConfig preset_config(Scenario scenario) {
    RunConfig cfg = base_config();
    cfg.scenario = scenario;
    switch (scenario) {
        case Scenario::fig1a:
        case Scenario::fig1b:
        case Scenario::fig1c:
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            break;
        case Scenario::fig2_traj:
            cfg.solver = SolverKind::trajectory;
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.initial_state = StateSpec::fock(StateSpec::Atom::ground, 5);
            cfg.n_single = 3;
            cfg.integrator = trajectory_integrator_defaults();
            break;
        case Scenario::fig2d_jc:
            cfg.solver = SolverKind::trajectory;
            cfg.hamiltonian = HamiltonianKind::jc;
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.initial_state = StateSpec::fock(StateSpec::Atom::ground, 5);
            cfg.n_single = 1;
            cfg.integrator = trajectory_integrator_defaults();
            break;
        case Scenario::fig2e_phase:
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.custom_kind = CustomKind::compare;
            break;
        case Scenario::fig3a:
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.custom_kind = CustomKind::sweep;
            cfg.sweep_axis = SweepAxis::omega0_sum;
            cfg.sweep_values = {1.6, 1.8, 2.0, 2.2, 2.4};
            break;
        case Scenario::fig3b:
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.custom_kind = CustomKind::sweep;
            cfg.sweep_axis = SweepAxis::g;
            cfg.sweep_values = {0.02, 0.04, 0.06, 0.08, 0.1};
            break;
        case Scenario::fig3c:
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.custom_kind = CustomKind::sweep;
            cfg.sweep_axis = SweepAxis::gamma_ph;
            cfg.sweep_values = {0.05, 0.1, 0.15, 0.2};
            break;
        case Scenario::fig4:
            cfg.solver = SolverKind::stochastic;
            cfg.params.g = 0.06;
            cfg.n_max = 15;
            cfg.noise = NoiseCfg{};
            cfg.noise.Omega0 = 1.0;
            cfg.noise.epsilon = 0.06;  // epsilon = g
            cfg.noise.x = 6.0;
            cfg.noise.dt = 0.05;
            cfg.noise.t_end = 500.0;
            cfg.noise.n_runs = 500;
            cfg.n_single = 3;
            break;
        case Scenario::fig5a:
            cfg.params.g = 0.1;
            cfg.params.gamma_ph = 0.1;
            cfg.params.gamma = 0.1;
            cfg.params.kappa = 0.1;
            break;
        case Scenario::fig5b:
        case Scenario::fig5c:
            cfg.params.g = 0.02;
            cfg.params.n_t = 0.06;
            cfg.params.gamma_ph = 2e-4;
            cfg.params.gamma = 3e-4;
            cfg.params.kappa = 4e-5;
            cfg.n_max = 15;
            cfg.grid = TimeGrid{5000.0, 501, 0.02};  // tau column equals g*t
            break;
        case Scenario::custom:
            break;
    }
    return cfg;
}

void RunConfig::validate() const {
    params.validate();
    grid.validate();
    if (n_max < 1) throw ConfigError("RunConfig: n_max must be >= 1");
    if (n_traj < 1) throw ConfigError("RunConfig: n_traj must be >= 1");
    if (n_single < 0) throw ConfigError("RunConfig: n_single must be >= 0");
    if (threads < 0) throw ConfigError("RunConfig: threads must be >= 0");
    if (out_dir.empty()) throw ConfigError("RunConfig: out_dir must not be empty");
}

// ---------------------------------------------------------------------------
// config text format
// ---------------------------------------------------------------------------

namespace {

double parse_double_value(const std::string& v) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("trailing characters in number: '" + v + "'");
    return out;
}

int parse_int_value(const std::string& v) {
    std::size_t used = 0;
    int out;
    try {
        out = std::stoi(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("trailing characters in integer: '" + v + "'");
    return out;
}

std::uint64_t parse_u64_value(const std::string& v) {
    std::size_t used = 0;
    unsigned long long out;
    try {
        out = std::stoull(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a seed value: '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("trailing characters in seed: '" + v + "'");
    return out;
}

bool parse_bool_value(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("not a boolean: '" + v + "' (expected true|false)");
}

std::vector<double> parse_values_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double_value(item));
    }
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// every recognized section.key with its setter
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "run.scenario") cfg.scenario = parse_scenario(value);
    else if (key == "run.solver") cfg.solver = parse_solver(value);
    else if (key == "run.custom") cfg.custom_kind = parse_custom_kind(value);
    else if (key == "run.seed") cfg.seed = parse_u64_value(value);
    else if (key == "run.threads") cfg.threads = parse_int_value(value);
    else if (key == "run.out_dir") cfg.out_dir = value;
    else if (key == "params.omega") cfg.params.omega = parse_double_value(value);
    else if (key == "params.omega0") cfg.params.omega0 = parse_double_value(value);
    else if (key == "params.g") cfg.params.g = parse_double_value(value);
    else if (key == "params.gamma_ph") cfg.params.gamma_ph = parse_double_value(value);
    else if (key == "params.gamma") cfg.params.gamma = parse_double_value(value);
    else if (key == "params.kappa") cfg.params.kappa = parse_double_value(value);
    else if (key == "params.n_t") cfg.params.n_t = parse_double_value(value);
    else if (key == "params.hamiltonian") cfg.hamiltonian = parse_hamiltonian(value);
    else if (key == "space.n_max") cfg.n_max = parse_int_value(value);
    else if (key == "grid.t_end") cfg.grid.t_end = parse_double_value(value);
    else if (key == "grid.n_samples") cfg.grid.n_samples = parse_int_value(value);
    else if (key == "grid.xi") cfg.grid.xi = parse_double_value(value);
    else if (key == "integrator.atol") cfg.integrator.atol = parse_double_value(value);
    else if (key == "integrator.rtol") cfg.integrator.rtol = parse_double_value(value);
    else if (key == "integrator.trunc_tol") cfg.integrator.trunc_tol = parse_double_value(value);
    else if (key == "state.initial") cfg.initial_state = parse_state_spec(value);
    else if (key == "trajectories.n_traj") cfg.n_traj = parse_int_value(value);
    else if (key == "trajectories.n_single") cfg.n_single = parse_int_value(value);
    else if (key == "noise.epsilon") cfg.noise.epsilon = parse_double_value(value);
    else if (key == "noise.x") cfg.noise.x = parse_double_value(value);
    else if (key == "noise.dt") cfg.noise.dt = parse_double_value(value);
    else if (key == "noise.t_end") cfg.noise.t_end = parse_double_value(value);
    else if (key == "noise.n_runs") cfg.noise.n_runs = parse_int_value(value);
    else if (key == "noise.sample_stride") cfg.noise.sample_stride = parse_int_value(value);
    else if (key == "noise.outer_branch_abs_r") cfg.noise.outer_branch_abs_r = parse_bool_value(value);
    else if (key == "sweep.axis") cfg.sweep_axis = parse_sweep_axis(value);
    else if (key == "sweep.values") cfg.sweep_values = parse_values_list(value);
    else throw ConfigError("unknown key '" + key + "'");
}

const char* const kKnownSections[] = {"run",          "params", "space", "grid",
                                      "integrator",   "state",  "trajectories",
                                      "noise",        "sweep"};

} // namespace

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
    apply_key(config, key, value);
    config.overrides.push_back(key + "=" + value);
}

RunConfig parse_config(const std::string& text) {
    struct Entry {
        std::string key;
        std::string value;
        int line;
    };
    std::vector<Entry> entries;

    std::istringstream is(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(s.substr(1, s.size() - 2));
            bool known = false;
            for (const char* name : kKnownSections) known = known || section == name;
            if (!known) {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        }
        entries.push_back({section + "." + trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line_no});
    }

    // the scenario key (if any) selects the preset baseline, then everything
    // else is applied on top as explicit overrides
    RunConfig cfg;
    bool have_scenario = false;
    for (const auto& entry : entries) {
        if (entry.key == "run.scenario") {
            if (have_scenario) {
                throw ConfigError("line " + std::to_string(entry.line) + ": duplicate scenario key");
            }
            try {
                cfg = preset_config(parse_scenario(entry.value));
            } catch (const ConfigError& err) {
                throw ConfigError("line " + std::to_string(entry.line) + ": " + err.what());
            }
            have_scenario = true;
        }
    }
    for (const auto& entry : entries) {
        if (entry.key == "run.scenario") continue;
        try {
            apply_override(cfg, entry.key, entry.value);
        } catch (const ConfigError& err) {
            throw ConfigError("line " + std::to_string(entry.line) + ": " + err.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[run]\n";
    os << "scenario = " << to_string(c.scenario) << "\n";
    os << "solver = " << to_string(c.solver) << "\n";
    os << "custom = " << to_string(c.custom_kind) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "threads = " << c.threads << "\n";
    os << "out_dir = " << c.out_dir << "\n";
    os << "[params]\n";
    os << "omega = " << format_double(c.params.omega) << "\n";
    os << "omega0 = " << format_double(c.params.omega0) << "\n";
    os << "g = " << format_double(c.params.g) << "\n";
    os << "gamma_ph = " << format_double(c.params.gamma_ph) << "\n";
    os << "gamma = " << format_double(c.params.gamma) << "\n";
    os << "kappa = " << format_double(c.params.kappa) << "\n";
    os << "n_t = " << format_double(c.params.n_t) << "\n";
    os << "hamiltonian = " << to_string(c.hamiltonian) << "\n";
    os << "[space]\n";
    os << "n_max = " << c.n_max << "\n";
    os << "[grid]\n";
    os << "t_end = " << format_double(c.grid.t_end) << "\n";
    os << "n_samples = " << c.grid.n_samples << "\n";
    os << "xi = " << format_double(c.grid.xi) << "\n";
    os << "[integrator]\n";
    os << "atol = " << format_double(c.integrator.atol) << "\n";
    os << "rtol = " << format_double(c.integrator.rtol) << "\n";
    os << "trunc_tol = " << format_double(c.integrator.trunc_tol) << "\n";
    os << "[state]\n";
    os << "initial = " << format_state_spec(c.initial_state) << "\n";
    os << "[trajectories]\n";
    os << "n_traj = " << c.n_traj << "\n";
    os << "n_single = " << c.n_single << "\n";
    os << "[noise]\n";
    os << "epsilon = " << format_double(c.noise.epsilon) << "\n";
    os << "x = " << format_double(c.noise.x) << "\n";
    os << "dt = " << format_double(c.noise.dt) << "\n";
    os << "t_end = " << format_double(c.noise.t_end) << "\n";
    os << "n_runs = " << c.noise.n_runs << "\n";
    os << "sample_stride = " << c.noise.sample_stride << "\n";
    os << "outer_branch_abs_r = " << (c.noise.outer_branch_abs_r ? "true" : "false") << "\n";
    os << "[sweep]\n";
    os << "axis = " << to_string(c.sweep_axis) << "\n";
    if (!c.sweep_values.empty()) {
        os << "values = ";
        for (std::size_t i = 0; i < c.sweep_values.size(); ++i) {
            if (i) os << ",";
            os << format_double(c.sweep_values[i]);
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// scenario execution
// ---------------------------------------------------------------------------

namespace {

struct CurveReport {
    std::string file;
    std::string label;
    json detail = json::object();
    std::string status = "ok";
    std::string error;
    double max_top_pop = 0.0;
};

double max_top_pop(const ObservableSeries& s) {
    double m = 0.0;
    for (const auto& r : s.rows) m = std::max(m, r.top_level_pop);
    return m;
}

json params_json(const SimParams& p) {
    return json{{"omega", p.omega},     {"omega0", p.omega0}, {"g", p.g},
                {"gamma_ph", p.gamma_ph}, {"gamma", p.gamma},   {"kappa", p.kappa},
                {"n_t", p.n_t}};
}

class ScenarioRunner {
public:
    explicit ScenarioRunner(const RunConfig& cfg)
        : cfg_(cfg), space_(build_space(cfg.n_max)) {}

    RunOutputs run() {
        std::filesystem::create_directories(cfg_.out_dir);
        try {
            dispatch();
        } catch (const std::exception& err) {
            failure_ = err.what();
            write_manifest();
            throw;
        }
        write_manifest();
        RunOutputs out;
        for (const auto& c : curves_) out.files.push_back(path_of(c.file));
        out.manifest_path = path_of("rabisim_manifest.json");
        return out;
    }

private:
    std::string path_of(const std::string& name) const {
        return (std::filesystem::path(cfg_.out_dir) / name).string();
    }

    void emit_series(const std::string& file, const std::string& label,
                     const ObservableSeries& series, json detail,
                     const std::vector<double>* jumps = nullptr) {
        write_series_csv(path_of(file), series, jumps);
        CurveReport rep;
        rep.file = file;
        rep.label = label;
        rep.detail = std::move(detail);
        rep.max_top_pop = max_top_pop(series);
        curves_.push_back(std::move(rep));
    }

    void emit_spectrum(const std::string& file, const std::string& label,
                       const SpectrumSeries& spectrum, json detail) {
        write_spectrum_csv(path_of(file), spectrum);
        CurveReport rep;
        rep.file = file;
        rep.label = label;
        rep.detail = std::move(detail);
        curves_.push_back(std::move(rep));
    }

    void emit_sweep(const std::string& file, const SweepResult& sweep) {
        write_sweep_csv(path_of(file), sweep);
        CurveReport rep;
        rep.file = file;
        rep.label = "beta vs " + to_string(sweep.axis);
        rep.detail = json{{"axis", to_string(sweep.axis)}};
        json pts = json::array();
        for (const auto& p : sweep.points) {
            pts.push_back(json{{"axis_value", p.axis_value},
                               {"beta", p.failed() ? json() : json(p.beta)},
                               {"r_squared", p.failed() ? json() : json(p.r_squared)},
                               {"flag", p.flag}});
        }
        rep.detail["points"] = pts;
        curves_.push_back(std::move(rep));
    }

    ObservableSeries run_master(const SimParams& params, HamiltonianKind kind,
                                const StateSpec& state) {
        const QOperator h = build_hamiltonian(kind, params, space_);
        const Vector psi0 = prepare_state(state, space_);
        return evolve(DensityMatrix::pure(space_, psi0), h, params, cfg_.grid,
                      cfg_.integrator)
            .series;
    }

    // fig1a: <n> from vacuum with the dephasing reservoir on and off
    void run_fig1a() {
        SimParams off = cfg_.params;
        off.gamma_ph = 0.0;
        std::array<SimParams, 2> variants{off, cfg_.params};
        std::array<ObservableSeries, 2> series;
        parallel_for_indexed(2, cfg_.threads, [&](int i) {
            series[i] = run_master(variants[i], cfg_.hamiltonian, cfg_.initial_state);
        });
        emit_series("fig1a_dephasing_off.csv", "gamma_ph=0", series[0],
                    params_json(variants[0]));
        emit_series("fig1a_dephasing_on.csv",
                    "gamma_ph=" + format_double(cfg_.params.gamma_ph), series[1],
                    params_json(variants[1]));
    }

    std::array<StateSpec, 6> six_states() const {
        const Complex alpha = std::sqrt(kCoherentAlphaSq);
        using A = StateSpec::Atom;
        return {StateSpec::fock(A::ground, 0),      StateSpec::coherent(A::ground, alpha),
                StateSpec::fock(A::superposition, 0), StateSpec::coherent(A::superposition, alpha),
                StateSpec::fock(A::excited, 0),     StateSpec::coherent(A::excited, alpha)};
    }

    // fig1b / fig1c: the six initial states phi_1..phi_6
    void run_fig1bc(const std::string& prefix) {
        const auto states = six_states();
        std::array<ObservableSeries, 6> series;
        parallel_for_indexed(6, cfg_.threads, [&](int i) {
            series[i] = run_master(cfg_.params, cfg_.hamiltonian, states[i]);
        });
        for (int i = 0; i < 6; ++i) {
            json detail = params_json(cfg_.params);
            detail["state"] = format_state_spec(states[i]);
            emit_series(prefix + "_phi" + std::to_string(i + 1) + ".csv",
                        "phi" + std::to_string(i + 1), series[i], std::move(detail));
        }
    }

    void run_single_trajectories(const std::string& prefix, int count) {
        const QOperator h = build_hamiltonian(cfg_.hamiltonian, cfg_.params, space_);
        const Vector psi0 = prepare_state(cfg_.initial_state, space_);
        std::vector<TrajectoryResult> results(count);
        parallel_for_indexed(count, cfg_.threads, [&](int i) {
            results[i] = run_trajectory(psi0, h, cfg_.params.gamma_ph, cfg_.grid,
                                        derive_stream_seed(cfg_.seed, i), cfg_.integrator);
        });
        for (int i = 0; i < count; ++i) {
            json detail = params_json(cfg_.params);
            detail["seed_stream"] = i;
            detail["jump_count"] = results[i].jump_times.size();
            detail["hamiltonian"] = to_string(cfg_.hamiltonian);
            emit_series(prefix + "_run" + std::to_string(i) + ".csv",
                        "trajectory " + std::to_string(i), results[i].series,
                        std::move(detail), &results[i].jump_times);
        }
    }

    void run_trajectory_ensemble(const std::string& prefix) {
        const QOperator h = build_hamiltonian(cfg_.hamiltonian, cfg_.params, space_);
        const Vector psi0 = prepare_state(cfg_.initial_state, space_);
        TrajectoryCfg tcfg;
        tcfg.master_seed = cfg_.seed;
        tcfg.n_traj = cfg_.n_traj;
        tcfg.grid = cfg_.grid;
        tcfg.integrator = cfg_.integrator;
        tcfg.threads = cfg_.threads;
        const EnsembleSeries ens = average_trajectories(psi0, h, cfg_.params.gamma_ph, tcfg);
        json detail = params_json(cfg_.params);
        detail["n_traj"] = cfg_.n_traj;
        detail["hamiltonian"] = to_string(cfg_.hamiltonian);
        emit_series(prefix + "_mean.csv", "ensemble mean", ens.mean, detail);
        emit_series(prefix + "_stderr.csv", "ensemble stderr", ens.stderror, detail);
    }

    void run_compare(const std::string& prefix) {
        const HamiltonianComparison cmp =
            compare_hamiltonians(cfg_.params, space_, cfg_.grid, cfg_.integrator);
        json detail = params_json(cfg_.params);
        detail["beta"] = cmp.fit_rabi.beta;
        detail["r_squared"] = cmp.fit_rabi.r_squared;
        emit_series(prefix + "_rabi.csv", "Rabi Hamiltonian", cmp.rabi, detail);
        json detail_e = params_json(cfg_.params);
        detail_e["beta"] = cmp.fit_phase.beta;
        detail_e["r_squared"] = cmp.fit_phase.r_squared;
        emit_series(prefix + "_phase.csv", "phase-operator Hamiltonian", cmp.phase,
                    detail_e);
    }

    void run_sweep(const std::string& file) {
        const SweepResult sweep =
            sweep_beta(cfg_.sweep_axis, cfg_.sweep_values, cfg_.params, space_, cfg_.grid,
                       cfg_.integrator, cfg_.threads);
        emit_sweep(file, sweep);
    }

    // fig4: noise spectra, sample single runs, and the <n>/P_e ensembles
    void run_fig4() {
        const Vector psi0 = prepare_state(cfg_.initial_state, space_);
        const double xs[3] = {1.0, 3.0, 6.0};
        for (double x : xs) {
            NoiseCfg ncfg = cfg_.noise;
            ncfg.x = x;
            ncfg.master_seed = cfg_.seed;
            ncfg.threads = cfg_.threads;
            ncfg.Omega0 = cfg_.params.omega0;

            std::vector<NoisePath> paths(ncfg.n_runs);
            parallel_for_indexed(ncfg.n_runs, cfg_.threads, [&](int i) {
                paths[i] = generate_noise_path(ncfg, derive_stream_seed(cfg_.seed, i));
            });
            const std::string tag = "x" + format_double(x);
            json detail = params_json(cfg_.params);
            detail["x"] = x;
            detail["epsilon"] = ncfg.epsilon;
            detail["n_runs"] = ncfg.n_runs;
            emit_spectrum("fig4_spectrum_" + tag + ".csv", "noise spectrum " + tag,
                          noise_spectrum(paths), detail);

            const EnsembleSeries ens =
                ensemble_average_stochastic(psi0, cfg_.params, ncfg, space_);
            emit_series("fig4_mean_" + tag + ".csv", "<n>_av " + tag, ens.mean, detail);
            emit_series("fig4_stderr_" + tag + ".csv", "stderr " + tag, ens.stderror,
                        detail);
        }
        // single runs for the high-frequency noise
        NoiseCfg ncfg = cfg_.noise;
        ncfg.master_seed = cfg_.seed;
        ncfg.Omega0 = cfg_.params.omega0;
        for (int i = 0; i < cfg_.n_single; ++i) {
            const ObservableSeries single = evolve_stochastic(
                psi0, cfg_.params, ncfg, derive_stream_seed(cfg_.seed, i), space_);
            json detail = params_json(cfg_.params);
            detail["x"] = ncfg.x;
            detail["seed_stream"] = i;
            emit_series("fig4_single_x" + format_double(ncfg.x) + "_run" +
                            std::to_string(i) + ".csv",
                        "single run " + std::to_string(i), single, std::move(detail));
        }
    }

    void run_noise_custom() {
        const Vector psi0 = prepare_state(cfg_.initial_state, space_);
        NoiseCfg ncfg = cfg_.noise;
        ncfg.master_seed = cfg_.seed;
        ncfg.threads = cfg_.threads;
        ncfg.Omega0 = cfg_.params.omega0;

        std::vector<NoisePath> paths(ncfg.n_runs);
        parallel_for_indexed(ncfg.n_runs, cfg_.threads, [&](int i) {
            paths[i] = generate_noise_path(ncfg, derive_stream_seed(cfg_.seed, i));
        });
        json detail = params_json(cfg_.params);
        detail["x"] = ncfg.x;
        detail["epsilon"] = ncfg.epsilon;
        detail["n_runs"] = ncfg.n_runs;
        emit_spectrum("noise_spectrum.csv", "noise spectrum", noise_spectrum(paths), detail);

        const EnsembleSeries ens = ensemble_average_stochastic(psi0, cfg_.params, ncfg, space_);
        emit_series("noise_mean.csv", "ensemble mean", ens.mean, detail);
        emit_series("noise_stderr.csv", "ensemble stderr", ens.stderror, detail);
        for (int i = 0; i < cfg_.n_single; ++i) {
            const ObservableSeries single = evolve_stochastic(
                psi0, cfg_.params, ncfg, derive_stream_seed(cfg_.seed, i), space_);
            json sdetail = detail;
            sdetail["seed_stream"] = i;
            emit_series("noise_single_run" + std::to_string(i) + ".csv",
                        "single run " + std::to_string(i), single, sdetail);
        }
    }

    // fig5a: damping-vs-dephasing competition, rates in units of 0.1
    void run_fig5a() {
        struct Entry {
            const char* name;
            double gph, gam, kap;
        };
        const Entry entries[] = {
            {"fig5a_none.csv", 0.0, 0.0, 0.0}, {"fig5a_001.csv", 0.0, 0.0, 0.1},
            {"fig5a_010.csv", 0.0, 0.1, 0.0},  {"fig5a_111.csv", 0.1, 0.1, 0.1},
            {"fig5a_101.csv", 0.1, 0.0, 0.1},  {"fig5a_110.csv", 0.1, 0.1, 0.0},
        };
        std::array<ObservableSeries, 6> series;
        std::array<SimParams, 6> variants;
        for (int i = 0; i < 6; ++i) {
            variants[i] = cfg_.params;
            variants[i].gamma_ph = entries[i].gph;
            variants[i].gamma = entries[i].gam;
            variants[i].kappa = entries[i].kap;
        }
        parallel_for_indexed(6, cfg_.threads, [&](int i) {
            series[i] = run_master(variants[i], cfg_.hamiltonian, cfg_.initial_state);
        });
        for (int i = 0; i < 6; ++i) {
            std::ostringstream label;
            label << "(gamma_ph,gamma,kappa)=(" << entries[i].gph << "," << entries[i].gam
                  << "," << entries[i].kap << ")";
            emit_series(entries[i].name, label.str(), series[i], params_json(variants[i]));
        }
    }

    // fig5b / fig5c: circuit-QED rate sets (current / future / biased)
    void run_fig5bc(bool with_rwa_baseline) {
        struct Entry {
            const char* tag;
            double gph, gam, kap;
        };
        const Entry entries[] = {
            {"current", 2e-4, 3e-4, 4e-5},
            {"future", 2e-5, 3e-5, 4e-6},
            {"biased", 2e-2, 3e-4, 4e-5},
        };
        const std::string prefix = with_rwa_baseline ? "fig5c" : "fig5b";
        const int n_curves = with_rwa_baseline ? 4 : 3;
        std::vector<ObservableSeries> series(n_curves);
        std::vector<SimParams> variants(n_curves, cfg_.params);
        std::vector<HamiltonianKind> kinds(n_curves, cfg_.hamiltonian);
        for (int i = 0; i < 3; ++i) {
            variants[i].gamma_ph = entries[i].gph;
            variants[i].gamma = entries[i].gam;
            variants[i].kappa = entries[i].kap;
        }
        if (with_rwa_baseline) {
            variants[3] = variants[0];  // current rates
            kinds[3] = HamiltonianKind::jc;
        }
        parallel_for_indexed(n_curves, cfg_.threads, [&](int i) {
            series[i] = run_master(variants[i], kinds[i], cfg_.initial_state);
        });
        for (int i = 0; i < 3; ++i) {
            json detail = params_json(variants[i]);
            detail["hamiltonian"] = to_string(kinds[i]);
            emit_series(prefix + "_" + entries[i].tag + ".csv", entries[i].tag, series[i],
                        std::move(detail));
        }
        if (with_rwa_baseline) {
            json detail = params_json(variants[3]);
            detail["hamiltonian"] = to_string(kinds[3]);
            emit_series(prefix + "_rwa_current.csv", "P_e^RWA baseline", series[3],
                        std::move(detail));
        }
    }

    void run_custom() {
        switch (cfg_.solver) {
            case SolverKind::master:
                if (cfg_.custom_kind == CustomKind::sweep) {
                    run_sweep("custom_sweep.csv");
                } else if (cfg_.custom_kind == CustomKind::compare) {
                    run_compare("custom");
                } else {
                    emit_series("custom_series.csv", "master-equation run",
                                run_master(cfg_.params, cfg_.hamiltonian, cfg_.initial_state),
                                params_json(cfg_.params));
                }
                break;
            case SolverKind::trajectory:
                if (cfg_.n_single > 0) {
                    run_single_trajectories("custom_traj", cfg_.n_single);
                } else {
                    run_trajectory_ensemble("custom_traj");
                }
                break;
            case SolverKind::stochastic:
                run_noise_custom();
                break;
        }
    }

    void dispatch() {
        switch (cfg_.scenario) {
            case Scenario::fig1a: run_fig1a(); break;
            case Scenario::fig1b: run_fig1bc("fig1b"); break;
            case Scenario::fig1c: run_fig1bc("fig1c"); break;
            case Scenario::fig2_traj: run_single_trajectories("fig2_traj", cfg_.n_single); break;
            case Scenario::fig2d_jc: run_single_trajectories("fig2d_jc", std::max(1, cfg_.n_single)); break;
            case Scenario::fig2e_phase: run_compare("fig2e"); break;
            case Scenario::fig3a: run_sweep("fig3a_sweep.csv"); break;
            case Scenario::fig3b: run_sweep("fig3b_sweep.csv"); break;
            case Scenario::fig3c: run_sweep("fig3c_sweep.csv"); break;
            case Scenario::fig4: run_fig4(); break;
            case Scenario::fig5a: run_fig5a(); break;
            case Scenario::fig5b: run_fig5bc(false); break;
            case Scenario::fig5c: run_fig5bc(true); break;
            case Scenario::custom: run_custom(); break;
        }
    }

    void write_manifest() {
        json manifest;
        manifest["version"] = version_string;
        manifest["scenario"] = to_string(cfg_.scenario);
        manifest["solver"] = to_string(cfg_.solver);
        manifest["hamiltonian"] = to_string(cfg_.hamiltonian);
        manifest["seed"] = cfg_.seed;
        manifest["threads"] = cfg_.threads;
        manifest["n_max"] = cfg_.n_max;
        manifest["params"] = params_json(cfg_.params);
        manifest["grid"] = json{{"t_end", cfg_.grid.t_end},
                                {"n_samples", cfg_.grid.n_samples},
                                {"xi", cfg_.grid.xi}};
        manifest["integrator"] = json{{"atol", cfg_.integrator.atol},
                                      {"rtol", cfg_.integrator.rtol},
                                      {"trunc_tol", cfg_.integrator.trunc_tol}};
        manifest["overrides"] = cfg_.overrides;
        manifest["canonical_config"] = serialize_config(cfg_);
        json curves = json::array();
        for (const auto& c : curves_) {
            json entry{{"file", c.file},
                       {"label", c.label},
                       {"status", c.status},
                       {"max_top_pop", c.max_top_pop}};
            entry["detail"] = c.detail;
            curves.push_back(entry);
        }
        manifest["curves"] = curves;
        manifest["status"] = failure_.empty() ? "ok" : "failed";
        if (!failure_.empty()) manifest["error"] = failure_;

        std::ofstream os(path_of("rabisim_manifest.json"));
        if (!os) throw std::runtime_error("cannot write manifest in " + cfg_.out_dir);
        os << manifest.dump(2) << "\n";
    }

    const RunConfig& cfg_;
    HilbertSpace space_;
    std::vector<CurveReport> curves_;
    std::string failure_;
};

} // namespace

RunOutputs run_scenario(const RunConfig& config) {
    config.validate();
    ScenarioRunner runner(config);
    return runner.run();
}

} // namespace rabisim
