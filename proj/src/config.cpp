#include "kerrchain/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace kerrchain {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(ExitCode code, const std::string& message) { throw ConfigError(code, message); }

class Settings {
public:
    Settings() : values_(default_settings())
    {
        for (const auto& item : values_.items()) sources_[item.key()] = Source::default_value;
    }

    void merge(const json& layer, Source source)
    {
        if (layer.is_null()) return;
        const ExitCode code = source == Source::file ? ExitCode::malformed_file : ExitCode::usage;
        if (!layer.is_object()) fail(code, "configuration must be a JSON object");
        for (const auto& item : layer.items()) {
            if (!values_.contains(item.key())) fail(code, "unknown configuration key '" + item.key() + "'");
            set(item.key(), item.value(), source);
        }
    }

    void set(const std::string& key, const json& value, Source source)
    {
        values_[key] = value;
        sources_[key] = source;
    }

    const ordered_json& value(const std::string& key) const { return values_.at(key); }
    Source source(const std::string& key) const { return sources_.at(key); }
    bool user_set(const std::string& key) const
    {
        return sources_.at(key) == Source::file || sources_.at(key) == Source::flag;
    }
    const std::map<std::string, Source>& sources() const { return sources_; }

    template <typename T>
    T get(const std::string& key) const
    {
        const auto& v = values_.at(key);
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw std::invalid_argument("expected a number");
            } else if constexpr (std::is_same_v<T, int>) {
                if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
            } else {
                if (!v.is_string()) throw std::invalid_argument("expected a string");
            }
            return v.get<T>();
        } catch (const std::exception& e) {
            const ExitCode code = sources_.at(key) == Source::file ? ExitCode::malformed_file : ExitCode::usage;
            fail(code, "configuration key '" + key + "': " + e.what());
        }
    }

    template <typename T>
    std::optional<T> get_optional(const std::string& key) const
    {
        if (values_.at(key).is_null()) return std::nullopt;
        return get<T>(key);
    }

private:
    ordered_json values_;
    std::map<std::string, Source> sources_;
};

std::string dump(const json& v) { return v.dump(); }

void apply_preset(Settings& s, const Preset& p, std::vector<std::string>& log)
{
    auto pin = [&](const std::string& key, const json& value) {
        if (s.user_set(key) && s.value(key) != value) {
            log.push_back("preset " + p.name + " overrides " + key + ": " + dump(s.value(key)) + " (" +
                          std::string(to_string(s.source(key))) + ") -> " + dump(value));
        }
        s.set(key, value, Source::preset);
    };
    auto fill = [&](const std::string& key, const json& value) {
        if (s.source(key) == Source::default_value) s.set(key, value, Source::preset);
    };

    pin("alpha-over-chi", p.alpha_over_chi);
    pin("epsilon-branch", std::string(to_string(p.branch)));
    pin("epsilon-over-alpha", nullptr);
    pin("delta-over-alpha", p.delta_over_alpha);
    pin("damping", std::string(to_string(p.damping)));
    if (p.kappa_over_alpha) pin("kappa-over-alpha", *p.kappa_over_alpha);
    pin("n-max", p.n_max);
    if (p.t_end_in_T) fill("t-end-in-T", *p.t_end_in_T);
    if (p.n_points) fill("n-points", *p.n_points);
}

template <typename Enum, typename Parse>
Enum parse_enum(const std::string& key, const std::string& text, Parse parse)
{
    try {
        return parse(text);
    } catch (const std::invalid_argument& e) {
        fail(ExitCode::out_of_range, "configuration key '" + key + "': " + e.what());
    }
}

EpsilonBranch epsilon_branch_from_string(std::string_view text)
{
    for (auto b : {EpsilonBranch::plus, EpsilonBranch::minus, EpsilonBranch::explicit_value}) {
        if (to_string(b) == text) return b;
    }
    throw std::invalid_argument("unknown epsilon branch '" + std::string(text) + "'");
}

void require(bool condition, const std::string& message)
{
    if (!condition) fail(ExitCode::out_of_range, message);
}

bool finite(double x) { return std::isfinite(x); }

void validate(const RunConfig& c)
{
    require(c.chi == 1.0, "chi is fixed at 1; give rates as ratios instead");
    require(finite(c.alpha_over_chi) && c.alpha_over_chi > 0.0, "alpha-over-chi must be positive");
    if (c.epsilon_over_alpha) require(finite(*c.epsilon_over_alpha), "epsilon-over-alpha must be finite");
    require(finite(c.delta_over_alpha), "delta-over-alpha must be finite");
    require(finite(c.kappa_over_alpha) && c.kappa_over_alpha >= 0.0, "kappa-over-alpha must be >= 0");
    require(c.n_max >= 1 && c.n_max <= 15, "n-max must lie in [1, 15]");
    require(finite(c.t_end_in_T) && c.t_end_in_T >= 0.0, "t-end-in-T must be >= 0");
    require(c.n_points >= 1 && c.n_points <= 1000000, "n-points must lie in [1, 1000000]");
    require(finite(c.zero_threshold) && c.zero_threshold > 0.0, "zero-threshold must be positive");
    require(finite(c.kappa_min) && c.kappa_min > 0.0, "kappa-min must be positive");
    require(finite(c.kappa_max) && c.kappa_max > c.kappa_min, "kappa-max must exceed kappa-min");
    require(c.kappa_points >= 2 && c.kappa_points <= 100000, "kappa-points must lie in [2, 100000]");
    require(finite(c.time_in_T) && c.time_in_T >= 0.0, "time-in-T must be >= 0");
    if (c.rk4_step) require(finite(*c.rk4_step) && *c.rk4_step > 0.0, "rk4-step must be positive");
    if (c.state != "evolved") {
        const auto states = named_states();
        const bool known = std::any_of(states.begin(), states.end(), [&](const auto& s) { return s.label == c.state; });
        require(known, "state must be 'evolved' or a named state, got '" + c.state + "'");
    }
    try {
        c.params().validate();
    } catch (const std::invalid_argument& e) {
        fail(ExitCode::out_of_range, e.what());
    }
    require(finite(c.period()) && c.period() > 0.0, "the coupling gives no finite period");
}

} // namespace

std::string_view to_string(EpsilonBranch branch)
{
    switch (branch) {
    case EpsilonBranch::plus: return "plus";
    case EpsilonBranch::minus: return "minus";
    case EpsilonBranch::explicit_value: return "explicit";
    }
    return "explicit";
}

std::string_view to_string(Source source)
{
    switch (source) {
    case Source::default_value: return "default";
    case Source::file: return "file";
    case Source::preset: return "preset";
    case Source::flag: return "flag";
    }
    return "default";
}

double RunConfig::epsilon() const
{
    switch (epsilon_branch) {
    case EpsilonBranch::plus: return resonant_epsilon(alpha(), Branch::plus);
    case EpsilonBranch::minus: return resonant_epsilon(alpha(), Branch::minus);
    case EpsilonBranch::explicit_value: return epsilon_over_alpha.value_or(0.0) * alpha();
    }
    return 0.0;
}

SystemParams RunConfig::params() const
{
    SystemParams p;
    p.chi = chi;
    p.alpha = alpha();
    p.epsilon = epsilon();
    p.delta = delta_over_alpha * alpha();
    p.set_uniform_kappa(kappa_over_alpha * alpha());
    p.damping = damping;
    p.rate_convention = rate_convention;
    return p;
}

double RunConfig::period() const
{
    switch (epsilon_branch) {
    case EpsilonBranch::plus: return resonant_period(alpha(), Branch::plus);
    case EpsilonBranch::minus: return resonant_period(alpha(), Branch::minus);
    case EpsilonBranch::explicit_value: {
        SystemParams p = params();
        p.delta = 0.0;
        return slow_period(p);
    }
    }
    return 0.0;
}

Scenario RunConfig::scenario() const { return {params(), n_max, period()}; }

SweepSpec RunConfig::kappa_sweep() const
{
    SweepSpec spec;
    spec.parameter = SweepParameter::kappa_over_alpha;
    spec.grid = log_grid(kappa_min, kappa_max, kappa_points);
    spec.base = params();
    spec.n_max = n_max;
    spec.zero_threshold = zero_threshold;
    return spec;
}

ordered_json default_settings()
{
    const RunConfig d;
    ordered_json j;
    j["preset"] = nullptr;
    j["chi"] = d.chi;
    j["alpha-over-chi"] = d.alpha_over_chi;
    j["epsilon-branch"] = std::string(to_string(d.epsilon_branch));
    j["epsilon-over-alpha"] = nullptr;
    j["delta-over-alpha"] = d.delta_over_alpha;
    j["kappa-over-alpha"] = d.kappa_over_alpha;
    j["damping"] = std::string(to_string(d.damping));
    j["rate-convention"] = std::string(to_string(d.rate_convention));
    j["n-max"] = d.n_max;
    j["t-end-in-T"] = d.t_end_in_T;
    j["n-points"] = d.n_points;
    j["format"] = std::string(to_string(d.format));
    j["zero-threshold"] = d.zero_threshold;
    j["kappa-min"] = d.kappa_min;
    j["kappa-max"] = d.kappa_max;
    j["kappa-points"] = d.kappa_points;
    j["state"] = d.state;
    j["time-in-T"] = d.time_in_T;
    j["rk4-step"] = nullptr;
    j["output-path"] = d.output_path;
    j["regime-output"] = d.regime_output;
    j["sensitivity-output"] = d.sensitivity_output;
    return j;
}

std::string RunConfig::to_json() const
{
    ordered_json j;
    j["preset"] = preset ? json(*preset) : json(nullptr);
    j["chi"] = chi;
    j["alpha-over-chi"] = alpha_over_chi;
    j["epsilon-branch"] = std::string(to_string(epsilon_branch));
    j["epsilon-over-alpha"] = epsilon_over_alpha ? json(*epsilon_over_alpha) : json(nullptr);
    j["delta-over-alpha"] = delta_over_alpha;
    j["kappa-over-alpha"] = kappa_over_alpha;
    j["damping"] = std::string(to_string(damping));
    j["rate-convention"] = std::string(to_string(rate_convention));
    j["n-max"] = n_max;
    j["t-end-in-T"] = t_end_in_T;
    j["n-points"] = n_points;
    j["format"] = std::string(to_string(format));
    j["zero-threshold"] = zero_threshold;
    j["kappa-min"] = kappa_min;
    j["kappa-max"] = kappa_max;
    j["kappa-points"] = kappa_points;
    j["state"] = state;
    j["time-in-T"] = time_in_T;
    j["rk4-step"] = rk4_step ? json(*rk4_step) : json(nullptr);
    return j.dump();
}

std::string RunConfig::describe() const
{
    ordered_json j = ordered_json::parse(to_json());
    j["output-path"] = output_path;
    j["regime-output"] = regime_output;
    j["sensitivity-output"] = sensitivity_output;
    std::ostringstream out;
    for (const auto& item : j.items()) {
        const auto it = provenance.find(item.key());
        out << item.key() << " = " << item.value().dump() << " ("
            << (it == provenance.end() ? "default" : to_string(it->second)) << ")\n";
    }
    return out.str();
}

json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ExitCode::malformed_file, "cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const json doc = json::parse(text, nullptr, false);
    if (!doc.is_discarded()) {
        if (!doc.is_object()) fail(ExitCode::malformed_file, "config file '" + path + "' is not a JSON object");
        if (doc.contains("column_order") && doc.contains("columns")) {
            if (!doc.contains("config") || !doc["config"].is_object()) {
                fail(ExitCode::malformed_file, "output table '" + path + "' carries no config");
            }
            return doc["config"];
        }
        return doc;
    }

    std::istringstream lines(text);
    std::string line;
    const std::string marker = "# config: ";
    while (std::getline(lines, line)) {
        if (line.rfind(marker, 0) != 0) continue;
        const json embedded = json::parse(line.substr(marker.size()), nullptr, false);
        if (embedded.is_discarded() || !embedded.is_object()) {
            fail(ExitCode::malformed_file, "embedded config in '" + path + "' is not a JSON object");
        }
        return embedded;
    }
    fail(ExitCode::malformed_file, "'" + path + "' is neither a JSON config nor an output table with a config line");
}

RunConfig resolve_config(const json& file, const json& flags, const std::optional<std::string>& preset_name)
{
    Settings s;
    s.merge(file, Source::file);
    s.merge(flags, Source::flag);

    if (preset_name) {
        const auto current = s.get_optional<std::string>("preset");
        if (current && *current != *preset_name) {
            fail(ExitCode::conflict, "preset '" + *current + "' conflicts with preset subcommand '" + *preset_name + "'");
        }
        if (!current) s.set("preset", *preset_name, Source::flag);
    }

    // an explicit coupling implies the explicit branch; a named branch excludes it
    if (!s.value("epsilon-over-alpha").is_null()) {
        const bool branch_set = s.user_set("epsilon-branch");
        if (branch_set && s.get<std::string>("epsilon-branch") != "explicit") {
            fail(ExitCode::conflict, "epsilon-over-alpha conflicts with epsilon-branch '" +
                                         s.get<std::string>("epsilon-branch") + "'");
        }
        if (!branch_set) s.set("epsilon-branch", "explicit", s.source("epsilon-over-alpha"));
    } else if (s.get<std::string>("epsilon-branch") == "explicit") {
        fail(ExitCode::conflict, "epsilon-branch 'explicit' needs epsilon-over-alpha");
    }

    RunConfig c;
    if (const auto name = s.get_optional<std::string>("preset")) {
        const Preset* preset = nullptr;
        try {
            preset = &find_preset(*name);
        } catch (const std::invalid_argument& e) {
            fail(ExitCode::out_of_range, e.what());
        }
        apply_preset(s, *preset, c.log);
        c.preset = *name;
    }

    c.chi = s.get<double>("chi");
    c.alpha_over_chi = s.get<double>("alpha-over-chi");
    c.epsilon_branch = parse_enum<EpsilonBranch>("epsilon-branch", s.get<std::string>("epsilon-branch"),
                                                 epsilon_branch_from_string);
    c.epsilon_over_alpha = s.get_optional<double>("epsilon-over-alpha");
    c.delta_over_alpha = s.get<double>("delta-over-alpha");
    c.kappa_over_alpha = s.get<double>("kappa-over-alpha");
    c.damping = parse_enum<DampingKind>("damping", s.get<std::string>("damping"), damping_kind_from_string);
    c.rate_convention = parse_enum<RateConvention>("rate-convention", s.get<std::string>("rate-convention"),
                                                   rate_convention_from_string);
    c.n_max = s.get<int>("n-max");
    c.t_end_in_T = s.get<double>("t-end-in-T");
    c.n_points = s.get<int>("n-points");
    c.format = parse_enum<Format>("format", s.get<std::string>("format"), format_from_string);
    c.zero_threshold = s.get<double>("zero-threshold");
    c.kappa_min = s.get<double>("kappa-min");
    c.kappa_max = s.get<double>("kappa-max");
    c.kappa_points = s.get<int>("kappa-points");
    c.state = s.get<std::string>("state");
    c.time_in_T = s.get<double>("time-in-T");
    c.rk4_step = s.get_optional<double>("rk4-step");
    c.output_path = s.get<std::string>("output-path");
    c.regime_output = s.get<std::string>("regime-output");
    c.sensitivity_output = s.get<std::string>("sensitivity-output");
    c.provenance = s.sources();

    validate(c);
    return c;
}

} // namespace kerrchain
