// config.hpp: run configuration (defaults, config files, presets and flags)
// merged into one resolved RunConfig with per-field provenance

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrchain/experiments.hpp"

namespace kerrchain {

enum class ExitCode : int {
    ok = 0,
    usage = 2,
    conflict = 3,
    malformed_file = 4,
    out_of_range = 5,
    numerical = 6,
    output = 7,
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const { return code_; }

private:
    ExitCode code_;
};

enum class EpsilonBranch { plus, minus, explicit_value };

std::string_view to_string(EpsilonBranch branch);

enum class Source { default_value, file, preset, flag };

std::string_view to_string(Source source);

struct RunConfig {
    std::optional<std::string> preset;
    double chi = 1.0;
    double alpha_over_chi = 0.001;
    EpsilonBranch epsilon_branch = EpsilonBranch::minus;
    std::optional<double> epsilon_over_alpha;
    double delta_over_alpha = 0.0;
    double kappa_over_alpha = 0.1;
    DampingKind damping = DampingKind::none;
    RateConvention rate_convention = RateConvention::reference;
    int n_max = 1;
    double t_end_in_T = 1.0;
    int n_points = 201;
    std::string output_path = "-";
    Format format = Format::csv;
    double zero_threshold = kDefaultZeroThreshold;
    double kappa_min = 0.05;
    double kappa_max = 10.0;
    int kappa_points = 120;
    std::string state = "evolved";
    double time_in_T = 0.5;
    std::string regime_output;
    std::string sensitivity_output;
    std::optional<double> rk4_step;

    // Source of every key, and the preset overrides applied while resolving.
    std::map<std::string, Source> provenance;
    std::vector<std::string> log;

    double alpha() const { return alpha_over_chi * chi; }
    double epsilon() const;
    SystemParams params() const;
    // Time unit T: the resonant period of the branch, or 2 pi / omega2 of
    // the explicit coupling.
    double period() const;
    Scenario scenario() const;
    SweepSpec kappa_sweep() const;

    // Single-line JSON of every setting that shapes the output (paths excluded).
    std::string to_json() const;
    // key = value (source), one per line.
    std::string describe() const;
};

// Every accepted key with its default value.
nlohmann::ordered_json default_settings();

// Settings from a JSON config file, a CSV written by this tool (its
// "# config:" line) or a JSON table written by this tool (its "config" key).
// Throws ConfigError(malformed_file).
nlohmann::json load_config_file(const std::string& path);

// Merges defaults < file < flags, then applies the preset: physics fields are
// pinned (overrides of file or flag values are logged) and sampling fields
// only replace defaults. `preset_name` comes from the preset subcommand.
RunConfig resolve_config(const nlohmann::json& file, const nlohmann::json& flags,
                         const std::optional<std::string>& preset_name = std::nullopt);

} // namespace kerrchain
