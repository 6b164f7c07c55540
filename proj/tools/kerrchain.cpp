// kerrchain: command-line driver for the pumped Kerr chain simulations

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kerrchain/config.hpp"
#include "kerrchain/errors.hpp"
#include "kerrchain/experiments.hpp"
#include "kerrchain/open_evolution.hpp"
#include "kerrchain/version.hpp"

namespace {

using namespace kerrchain;
using nlohmann::json;

struct Flags {
    std::optional<std::string> config;
    bool show_config = false;

    std::optional<std::string> preset;
    std::optional<double> chi;
    std::optional<double> alpha_over_chi;
    std::optional<std::string> epsilon_branch;
    std::optional<double> epsilon_over_alpha;
    std::optional<double> delta_over_alpha;
    std::optional<double> kappa_over_alpha;
    std::optional<std::string> damping;
    std::optional<std::string> rate_convention;
    std::optional<int> n_max;
    std::optional<double> t_end_in_T;
    std::optional<int> n_points;
    std::optional<std::string> output_path;
    std::optional<std::string> format;
    std::optional<double> zero_threshold;
    std::optional<double> kappa_min;
    std::optional<double> kappa_max;
    std::optional<int> kappa_points;
    std::optional<std::string> state;
    std::optional<double> time_in_T;
    std::optional<double> rk4_step;
    std::optional<std::string> regime_output;
    std::optional<std::string> sensitivity_output;

    json to_json() const
    {
        json j = json::object();
        auto put = [&j](const char* key, const auto& value) {
            if (value) j[key] = *value;
        };
        put("preset", preset);
        put("chi", chi);
        put("alpha-over-chi", alpha_over_chi);
        put("epsilon-branch", epsilon_branch);
        put("epsilon-over-alpha", epsilon_over_alpha);
        put("delta-over-alpha", delta_over_alpha);
        put("kappa-over-alpha", kappa_over_alpha);
        put("damping", damping);
        put("rate-convention", rate_convention);
        put("n-max", n_max);
        put("t-end-in-T", t_end_in_T);
        put("n-points", n_points);
        put("output-path", output_path);
        put("format", format);
        put("zero-threshold", zero_threshold);
        put("kappa-min", kappa_min);
        put("kappa-max", kappa_max);
        put("kappa-points", kappa_points);
        put("state", state);
        put("time-in-T", time_in_T);
        put("rk4-step", rk4_step);
        put("regime-output", regime_output);
        put("sensitivity-output", sensitivity_output);
        return j;
    }
};

void add_run_options(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON config file, or an output table to rerun");
    sub->add_flag("--show-config", f.show_config, "Print the resolved configuration with provenance and exit");
    sub->add_option("--preset", f.preset, "Named preset that pins the physical parameters");
    sub->add_option("--chi", f.chi, "Kerr nonlinearity (fixed at 1)");
    sub->add_option("--alpha-over-chi", f.alpha_over_chi, "Pump strength alpha/chi");
    sub->add_option("--epsilon-branch", f.epsilon_branch, "Coupling: plus, minus or explicit");
    sub->add_option("--epsilon-over-alpha", f.epsilon_over_alpha, "Explicit coupling epsilon/alpha");
    sub->add_option("--delta-over-alpha", f.delta_over_alpha, "Detuning added to the coupling, in units of alpha");
    sub->add_option("--kappa-over-alpha", f.kappa_over_alpha, "Damping constant kappa/alpha (all modes)");
    sub->add_option("--damping", f.damping, "none, amplitude or phase");
    sub->add_option("--rate-convention", f.rate_convention, "reference or literal mapping of kappa to rates");
    sub->add_option("--n-max", f.n_max, "Per-mode photon cutoff");
    sub->add_option("--t-end-in-T", f.t_end_in_T, "End time in units of the period T");
    sub->add_option("--n-points", f.n_points, "Number of output times");
    sub->add_option("-o,--output-path", f.output_path, "Output file; '-' for stdout");
    sub->add_option("--format", f.format, "csv or json");
    sub->add_option("--zero-threshold", f.zero_threshold, "Negativities at or below this count as zero");
    sub->add_option("--kappa-min", f.kappa_min, "Lower end of the kappa/alpha sweep");
    sub->add_option("--kappa-max", f.kappa_max, "Upper end of the kappa/alpha sweep");
    sub->add_option("--kappa-points", f.kappa_points, "Log-spaced kappa/alpha sweep points");
    sub->add_option("--state", f.state, "classify-state: 'evolved' or a named state");
    sub->add_option("--time-in-T", f.time_in_T, "classify-state: time of the evolved state in units of T");
    sub->add_option("--rk4-step", f.rk4_step, "Fixed RK4 step in units of 1/chi");
    sub->add_option("--regime-output", f.regime_output, "sweep-kappa: also write the regime table here");
    sub->add_option("--sensitivity-output", f.sensitivity_output,
                    "sweep-kappa: also write the doubled-threshold sensitivity report here");
}

[[noreturn]] void conflict(const std::string& message) { throw ConfigError(ExitCode::conflict, message); }

void require_damping(const RunConfig& cfg, const std::string& command, bool damped)
{
    const bool is_damped = cfg.damping != DampingKind::none;
    if (damped && !is_damped) conflict(command + " needs --damping amplitude or phase");
    if (!damped && is_damped) {
        conflict(command + " runs undamped dynamics but damping is '" + std::string(to_string(cfg.damping)) + "'");
    }
}

class Runner {
public:
    Runner(const RunConfig& cfg, std::string command) : cfg_(cfg)
    {
        context_.command = std::move(command);
        context_.config_json = cfg.to_json();
        context_.generated = current_timestamp();
    }

    void emit(const Table& table, const std::string& path) const { emit_table(table, cfg_.format, path, context_); }

    EvolveOptions evolve_options() const { return {cfg_.rk4_step, true}; }

    int time_series() const
    {
        const auto samples =
            run_time_series(cfg_.scenario(), cfg_.t_end_in_T, cfg_.n_points, cfg_.zero_threshold, evolve_options());
        emit(time_series_table(samples), cfg_.output_path);
        return 0;
    }

    int steady_state() const
    {
        SweepSpec spec = cfg_.kappa_sweep();
        spec.grid = {cfg_.kappa_over_alpha};
        const std::vector<SteadyRow> rows{steady_row(spec, cfg_.kappa_over_alpha)};
        emit(steady_table(spec, rows), cfg_.output_path);
        if (!rows.front().ok) {
            std::cerr << "kerrchain: steady state not unique: " << rows.front().status << '\n';
            return static_cast<int>(ExitCode::numerical);
        }
        return 0;
    }

    int sweep() const
    {
        const SweepSpec spec = cfg_.kappa_sweep();
        const auto rows = sweep_steady_state(spec);
        emit(steady_table(spec, rows), cfg_.output_path);
        if (!cfg_.regime_output.empty() || !cfg_.sensitivity_output.empty()) {
            SteadyClassifier classifier(spec);
            const RegimeTable regimes = extract_regime_table(classifier, rows, cfg_.zero_threshold);
            for (const auto& note : regimes.notes) std::cerr << "note: " << note << '\n';
            if (!cfg_.regime_output.empty()) emit(regimes.to_table(), cfg_.regime_output);
            if (!cfg_.sensitivity_output.empty()) {
                const auto report = regime_sensitivity(classifier, rows, regimes, cfg_.zero_threshold);
                emit(sensitivity_table(report), cfg_.sensitivity_output);
            }
        }
        const auto degenerate = std::count_if(rows.begin(), rows.end(), [](const SteadyRow& r) { return !r.ok; });
        if (degenerate > 0) std::cerr << "note: " << degenerate << " sweep rows have a degenerate steady state\n";
        return 0;
    }

    int classify_state() const
    {
        DensityMatrix rho;
        double t_over_T = std::nan("");
        if (cfg_.state == "evolved") {
            const Scenario scenario = cfg_.scenario();
            t_over_T = cfg_.time_in_T;
            rho = evolve(scenario, {cfg_.time_in_T * scenario.period}, evolve_options()).front();
        } else {
            for (const auto& s : named_states()) {
                if (s.label == cfg_.state) rho = DensityMatrix::from_pure(s.state());
            }
        }
        const EntanglementReport r = entanglement_report(rho, cfg_.zero_threshold);
        Table table;
        table.columns = {"state", "t_over_T", "N_12", "N_23", "N_13", "N_1_23", "N_2_13", "N_3_12", "N_tri", "subtype"};
        table.add_row({cfg_.state, t_over_T, r.reduced[0], r.reduced[1], r.reduced[2], r.bipartition[0],
                       r.bipartition[1], r.bipartition[2], r.tripartite, std::string(to_string(r.subtype))});
        emit(table, cfg_.output_path);
        return 0;
    }

    int truncation() const
    {
        if (cfg_.n_max < 2) throw ConfigError(ExitCode::out_of_range, "validate-truncation needs --n-max >= 2");
        const TruncationCheck check = validate_truncation(cfg_.scenario(), cfg_.t_end_in_T, cfg_.n_points,
                                                          evolve_options());
        emit(check.table, cfg_.output_path);
        std::cerr << "max 1 - F = " << format_number(check.max_deviation) << '\n';
        return 0;
    }

    int frequency_ratio() const
    {
        emit(frequency_ratio_table(5.0, std::max(cfg_.n_points, 2)), cfg_.output_path);
        return 0;
    }

private:
    const RunConfig& cfg_;
    TableContext context_;
};

int run(const std::string& command, const Flags& flags, const std::optional<std::string>& preset_name)
{
    const json file = flags.config ? load_config_file(*flags.config) : json(nullptr);
    const RunConfig cfg = resolve_config(file, flags.to_json(), preset_name);
    for (const auto& line : cfg.log) std::cerr << "note: " << line << '\n';
    if (flags.show_config) {
        std::cout << cfg.describe();
        return 0;
    }

    const std::string label = preset_name ? "preset " + *preset_name : command;
    Runner runner(cfg, label);

    if (preset_name) {
        switch (find_preset(*preset_name).task) {
        case Task::time_series: return runner.time_series();
        case Task::steady_state: return runner.steady_state();
        case Task::steady_sweep: return runner.sweep();
        case Task::frequency_ratio: return runner.frequency_ratio();
        case Task::truncation: return runner.truncation();
        }
    }
    if (command == "evolve-closed") {
        require_damping(cfg, command, false);
        return runner.time_series();
    }
    if (command == "evolve-open") {
        require_damping(cfg, command, true);
        return runner.time_series();
    }
    if (command == "steady-state") {
        require_damping(cfg, command, true);
        return runner.steady_state();
    }
    if (command == "sweep-kappa") {
        require_damping(cfg, command, true);
        return runner.sweep();
    }
    if (command == "classify-state") return runner.classify_state();
    if (command == "validate-truncation") {
        require_damping(cfg, command, false);
        return runner.truncation();
    }
    throw ConfigError(ExitCode::usage, "unknown command '" + command + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulates a coherently pumped chain of three Kerr oscillators: closed and damped dynamics, "
                 "correlation functions and tripartite entanglement classification.",
                 "kerrchain"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(0, 1);

    Flags flags;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"evolve-closed", "Undamped time series (closed form for n-max 1, numerical otherwise)"},
        {"evolve-open", "Lindblad time series under amplitude or phase damping"},
        {"steady-state", "Steady state at one damping constant"},
        {"sweep-kappa", "Steady states over a log-spaced kappa/alpha grid, with optional regime table"},
        {"classify-state", "Negativities and entanglement subtype of a named or evolved state"},
        {"validate-truncation", "1 - F(t) of the two-level closed form against a larger cutoff"},
    };
    for (const auto& [name, help] : commands) add_run_options(app.add_subcommand(name, help), flags);

    std::string preset_name;
    CLI::App* preset = app.add_subcommand("preset", "Run a named preset");
    preset->add_option("name", preset_name, "fig2, fig3, fig4a, fig4b, fig5a, fig5b, fig6, fig7a, fig7b, "
                                            "fig8a, fig8b, fig8c, fig9a, fig9b")
        ->required();
    add_run_options(preset, flags);

    if (argc < 2) {
        std::cout << app.help();
        return 0;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::usage);
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        const std::optional<std::string> name =
            chosen == preset ? std::optional<std::string>(preset_name) : std::nullopt;
        return run(chosen->get_name(), flags, name);
    } catch (const ConfigError& e) {
        std::cerr << "kerrchain: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const NumericalError& e) {
        std::cerr << "kerrchain: numerical failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical);
    } catch (const OutputError& e) {
        std::cerr << "kerrchain: " << e.what() << '\n';
        return static_cast<int>(ExitCode::output);
    } catch (const std::invalid_argument& e) {
        std::cerr << "kerrchain: " << e.what() << '\n';
        return static_cast<int>(ExitCode::out_of_range);
    } catch (const std::exception& e) {
        std::cerr << "kerrchain: " << e.what() << '\n';
        return 1;
    }
}
