#include "kerrchain/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kerrchain/errors.hpp"
#include "kerrchain/open_evolution.hpp"

namespace kerrchain {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool undamped(const SystemParams& params)
{
    return params.damping == DampingKind::none ||
           std::all_of(params.kappa.begin(), params.kappa.end(), [](double k) { return k == 0.0; });
}

std::vector<PureState> evolve_pure(const Scenario& scenario, const std::vector<double>& times,
                                   const EvolveOptions& options)
{
    std::vector<PureState> out;
    if (scenario.n_max == 1 && options.closed_form_when_qubit) {
        const NqsSolution nqs = NqsSolution::from(scenario.params);
        out.reserve(times.size());
        for (double t : times) out.push_back(nqs.state(t));
        return out;
    }
    return propagate_schrodinger(HilbertSpace(scenario.n_max), scenario.params, times, {options.step});
}

Sample analyze_pure(const PureState& psi, double t_over_T, double zero_threshold)
{
    // correlations straight from amplitudes; avoids dense operator products on big cutoffs
    Sample s = analyze(DensityMatrix::from_pure(psi), t_over_T, zero_threshold);
    s.correlations = correlation_report(psi);
    return s;
}

std::string transition_label(Subtype from, Subtype to)
{
    return std::string(to_string(from)) + " -> " + std::string(to_string(to));
}

} // namespace

std::vector<double> time_grid(double t_end_in_T, int n_points, double period)
{
    if (n_points < 1) throw std::invalid_argument("time grid needs at least one point");
    if (!(t_end_in_T >= 0.0) || !std::isfinite(t_end_in_T)) throw std::invalid_argument("t_end must be finite and >= 0");
    if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("period must be finite and positive");
    std::vector<double> grid(static_cast<std::size_t>(n_points), 0.0);
    for (int i = 1; i < n_points; ++i) {
        grid[static_cast<std::size_t>(i)] = i * t_end_in_T * period / (n_points - 1);
    }
    return grid;
}

std::vector<DensityMatrix> evolve(const Scenario& scenario, const std::vector<double>& times,
                                  const EvolveOptions& options)
{
    scenario.params.validate();
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    if (undamped(scenario.params)) {
        for (const auto& psi : evolve_pure(scenario, times, options)) out.push_back(DensityMatrix::from_pure(psi));
        return out;
    }
    const HilbertSpace space(scenario.n_max);
    const LindbladGenerator gen = make_generator(space, scenario.params);
    LindbladOptions lopts;
    lopts.step = options.step;
    if (scenario.period > 0.0) lopts.period = scenario.period;
    return propagate_lindblad(gen, DensityMatrix::from_pure(vacuum_state(space)), times, lopts);
}

Sample analyze(const DensityMatrix& rho, double t_over_T, double zero_threshold)
{
    Sample s;
    s.t_over_T = t_over_T;
    s.correlations = correlation_report(rho);
    s.entanglement = entanglement_report(rho, zero_threshold);
    for (const auto& target : target_library()) s.fidelities.push_back(state_fidelity(rho, target));
    return s;
}

std::vector<Sample> run_time_series(const Scenario& scenario, double t_end_in_T, int n_points,
                                    double zero_threshold, const EvolveOptions& options)
{
    const std::vector<double> times = time_grid(t_end_in_T, n_points, scenario.period);
    std::vector<Sample> samples;
    samples.reserve(times.size());
    if (undamped(scenario.params)) {
        const auto states = evolve_pure(scenario, times, options);
        for (std::size_t i = 0; i < states.size(); ++i) {
            samples.push_back(analyze_pure(states[i], times[i] / scenario.period, zero_threshold));
        }
        return samples;
    }
    const auto states = evolve(scenario, times, options);
    for (std::size_t i = 0; i < states.size(); ++i) {
        samples.push_back(analyze(states[i], times[i] / scenario.period, zero_threshold));
    }
    return samples;
}

Table time_series_table(std::span<const Sample> samples)
{
    Table table;
    table.columns = {"t_over_T", "g1_12", "g1_13", "g2_12", "g2_13", "N_12", "N_13", "N_1_23", "N_2_13",
                     "N_3_12", "N_tri", "subtype", "g1_23", "g2_23", "N_23", "n_1", "n_2", "n_3"};
    for (const auto& target : target_library()) table.columns.push_back("F_" + target.label);

    for (const auto& s : samples) {
        const auto& c = s.correlations;
        const auto& e = s.entanglement;
        std::vector<Cell> row{s.t_over_T,
                              c.g1[0],
                              c.g1[2],
                              c.g2[0],
                              c.g2[2],
                              e.reduced[0],
                              e.reduced[2],
                              e.bipartition[0],
                              e.bipartition[1],
                              e.bipartition[2],
                              e.tripartite,
                              std::string(to_string(e.subtype)),
                              c.g1[1],
                              c.g2[1],
                              e.reduced[1],
                              c.occupations[0],
                              c.occupations[1],
                              c.occupations[2]};
        for (double f : s.fidelities) row.emplace_back(f);
        table.add_row(std::move(row));
    }
    return table;
}

std::string_view to_string(SweepParameter parameter)
{
    switch (parameter) {
    case SweepParameter::kappa_over_alpha: return "kappa_over_alpha";
    case SweepParameter::epsilon_over_alpha: return "epsilon_over_alpha";
    case SweepParameter::alpha_over_epsilon: return "alpha_over_epsilon";
    case SweepParameter::time: return "time";
    }
    return "time";
}

SweepParameter sweep_parameter_from_string(std::string_view text)
{
    for (auto p : {SweepParameter::kappa_over_alpha, SweepParameter::epsilon_over_alpha,
                   SweepParameter::alpha_over_epsilon, SweepParameter::time}) {
        if (to_string(p) == text) return p;
    }
    throw std::invalid_argument("unknown sweep parameter '" + std::string(text) + "'");
}

void SweepSpec::validate() const
{
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("sweep grid has a non-finite value");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
    }
    if (parameter == SweepParameter::kappa_over_alpha && !(grid.front() > 0.0)) {
        throw std::invalid_argument("kappa grid must be positive");
    }
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    base.validate();
}

SystemParams params_at(const SweepSpec& spec, double value)
{
    SystemParams p = spec.base;
    switch (spec.parameter) {
    case SweepParameter::kappa_over_alpha: p.set_uniform_kappa(value * p.alpha); break;
    case SweepParameter::epsilon_over_alpha: p.epsilon = value * p.alpha; break;
    case SweepParameter::alpha_over_epsilon: p.alpha = value * p.epsilon; break;
    case SweepParameter::time: throw std::invalid_argument("time is not a steady-state sweep parameter");
    }
    return p;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

unsigned sweep_threads()
{
    if (const char* env = std::getenv("KERRCHAIN_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

SteadyRow steady_row(const SweepSpec& spec, double value)
{
    SteadyRow row;
    row.value = value;
    const HilbertSpace space(spec.n_max);
    const LindbladGenerator gen = make_generator(space, params_at(spec, value));
    try {
        const DensityMatrix rho = steady_state(gen);
        row.correlations = correlation_report(rho);
        row.entanglement = entanglement_report(rho, spec.zero_threshold);
        row.residual = steady_state_residual(gen, rho);
        row.status = "ok";
    } catch (const NumericalError& e) {
        row.ok = false;
        row.status = e.what();
        row.correlations.g1.fill(kNaN);
        row.correlations.g2.fill(kNaN);
        row.correlations.occupations.fill(kNaN);
        row.entanglement.reduced.fill(kNaN);
        row.entanglement.bipartition.fill(kNaN);
        row.entanglement.tripartite = kNaN;
        row.residual = kNaN;
    }
    return row;
}

std::vector<SteadyRow> sweep_steady_state(const SweepSpec& spec)
{
    spec.validate();
    if (spec.parameter == SweepParameter::time) throw std::invalid_argument("time is not a steady-state sweep parameter");

    std::vector<SteadyRow> rows(spec.grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                rows[i] = steady_row(spec, spec.grid[i]);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(rows.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

Table steady_table(const SweepSpec& spec, std::span<const SteadyRow> rows)
{
    const std::vector<std::string> all{"g1_12", "g1_23", "g1_13", "g2_12", "g2_23", "g2_13", "N_12", "N_23",
                                       "N_13",  "N_1_23", "N_2_13", "N_3_12", "N_tri", "subtype", "residual"};
    for (const auto& name : spec.outputs) {
        if (std::find(all.begin(), all.end(), name) == all.end()) {
            throw std::invalid_argument("unknown sweep output '" + name + "'");
        }
    }
    auto keep = [&](const std::string& name) {
        return spec.outputs.empty() || std::find(spec.outputs.begin(), spec.outputs.end(), name) != spec.outputs.end();
    };

    Table table;
    table.columns.emplace_back(to_string(spec.parameter));
    for (const auto& name : all) {
        if (keep(name)) table.columns.push_back(name);
    }
    table.columns.emplace_back("status");

    for (const auto& r : rows) {
        const auto& c = r.correlations;
        const auto& e = r.entanglement;
        const std::vector<Cell> values{c.g1[0],
                                       c.g1[1],
                                       c.g1[2],
                                       c.g2[0],
                                       c.g2[1],
                                       c.g2[2],
                                       e.reduced[0],
                                       e.reduced[1],
                                       e.reduced[2],
                                       e.bipartition[0],
                                       e.bipartition[1],
                                       e.bipartition[2],
                                       e.tripartite,
                                       r.ok ? std::string(to_string(e.subtype)) : std::string("undetermined"),
                                       r.residual};
        std::vector<Cell> row{r.value};
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (keep(all[i])) row.push_back(values[i]);
        }
        row.emplace_back(r.ok ? std::string("ok") : std::string("degenerate"));
        table.add_row(std::move(row));
    }
    return table;
}

std::vector<double> RegimeTable::boundaries() const
{
    std::vector<double> out;
    for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(rows[i].lo);
    return out;
}

std::vector<Subtype> RegimeTable::sequence() const
{
    std::vector<Subtype> out;
    for (const auto& r : rows) out.push_back(r.subtype);
    return out;
}

Table RegimeTable::to_table() const
{
    Table table;
    table.columns = {"kappa_over_alpha_lo", "kappa_over_alpha_hi", "subtype"};
    for (const auto& r : rows) table.add_row({r.lo, r.hi, std::string(to_string(r.subtype))});
    return table;
}

SteadyClassifier::SteadyClassifier(SweepSpec spec) : spec_(std::move(spec)) {}

std::optional<EntanglementReport> SteadyClassifier::report(double value)
{
    if (auto it = cache_.find(value); it != cache_.end()) return it->second;
    const SteadyRow row = steady_row(spec_, value);
    std::optional<EntanglementReport> result;
    if (row.ok) result = row.entanglement;
    cache_.emplace(value, result);
    return result;
}

void SteadyClassifier::seed(std::span<const SteadyRow> rows)
{
    for (const auto& r : rows) {
        cache_[r.value] = r.ok ? std::optional<EntanglementReport>(r.entanglement) : std::nullopt;
    }
}

namespace {

struct Boundary {
    double at;
    Subtype left;
    Subtype right;
};

class Refiner {
public:
    Refiner(SteadyClassifier& classifier, double threshold, double resolution, std::vector<std::string>& notes)
        : classifier_(classifier), threshold_(threshold), resolution_(resolution), notes_(notes)
    {
    }

    std::optional<Subtype> classify_at(double x)
    {
        const auto report = classifier_.report(x);
        if (!report) return std::nullopt;
        return classify(*report, threshold_);
    }

    void refine(double lo, Subtype s_lo, double hi, Subtype s_hi, std::vector<Boundary>& out)
    {
        if (s_lo == s_hi) return;
        if (hi - lo <= 2.0 * resolution_) {
            out.push_back({0.5 * (lo + hi), s_lo, s_hi});
            return;
        }
        const double mid = 0.5 * (lo + hi);
        const auto s_mid = classify_at(mid);
        if (!s_mid) {
            std::ostringstream note;
            note << "steady state not unique at " << format_number(mid) << "; boundary placed there";
            notes_.push_back(note.str());
            out.push_back({mid, s_lo, s_hi});
            return;
        }
        refine(lo, s_lo, mid, *s_mid, out);
        refine(mid, *s_mid, hi, s_hi, out);
    }

private:
    SteadyClassifier& classifier_;
    double threshold_;
    double resolution_;
    std::vector<std::string>& notes_;
};

} // namespace

RegimeTable extract_regime_table(SteadyClassifier& classifier, std::span<const SteadyRow> rows,
                                 double zero_threshold, double resolution)
{
    RegimeTable table;
    classifier.seed(rows);
    std::vector<std::pair<double, Subtype>> points;
    for (const auto& r : rows) {
        if (!points.empty() && !(r.value > points.back().first)) {
            throw std::invalid_argument("regime extraction needs a sweep sorted by parameter");
        }
        if (!r.ok) {
            table.notes.push_back("grid point " + format_number(r.value) + " skipped: " + r.status);
            continue;
        }
        points.emplace_back(r.value, classify(r.entanglement, zero_threshold));
    }
    if (points.empty()) throw std::invalid_argument("regime extraction needs at least one classified point");

    Refiner refiner(classifier, zero_threshold, resolution, table.notes);
    std::vector<Boundary> boundaries;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto [lo, s_lo] = points[i - 1];
        const auto [hi, s_hi] = points[i];
        const std::size_t before = boundaries.size();
        refiner.refine(lo, s_lo, hi, s_hi, boundaries);
        if (boundaries.size() - before > 1) {
            std::ostringstream note;
            note << "grid cell [" << format_number(lo) << ", " << format_number(hi) << "] holds "
                 << boundaries.size() - before << " transitions";
            table.notes.push_back(note.str());
        }
    }

    double start = points.front().first;
    Subtype current = points.front().second;
    for (const auto& b : boundaries) {
        table.rows.push_back({start, b.at, current});
        start = b.at;
        current = b.right;
    }
    table.rows.push_back({start, points.back().first, current});
    return table;
}

namespace {

// Negativities that decide the classification, with their labels.
std::array<std::pair<const char*, double>, 4> deciding(const EntanglementReport& r)
{
    return {{{"N_tri", r.tripartite}, {"N_12", r.reduced[0]}, {"N_23", r.reduced[1]}, {"N_13", r.reduced[2]}}};
}

} // namespace

std::vector<SensitivityRow> regime_sensitivity(SteadyClassifier& classifier, std::span<const SteadyRow> rows,
                                               const RegimeTable& base, double zero_threshold, double factor)
{
    const double perturbed_threshold = zero_threshold * factor;
    const RegimeTable perturbed = extract_regime_table(classifier, rows, perturbed_threshold);

    std::vector<SensitivityRow> out;
    for (std::size_t i = 1; i < base.rows.size(); ++i) {
        const Subtype left = base.rows[i - 1].subtype;
        const Subtype right = base.rows[i].subtype;
        SensitivityRow row;
        row.transition = transition_label(left, right);
        row.boundary = base.rows[i].lo;
        row.perturbed = kNaN;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < perturbed.rows.size(); ++j) {
            if (perturbed.rows[j - 1].subtype != left || perturbed.rows[j].subtype != right) continue;
            const double distance = std::abs(perturbed.rows[j].lo - row.boundary);
            if (distance < best) {
                best = distance;
                row.perturbed = perturbed.rows[j].lo;
            }
        }

        // the negativity whose side of the threshold differs across the boundary
        const double h = 0.01;
        const auto lo_report = classifier.report(row.boundary - h);
        const auto hi_report = classifier.report(row.boundary + h);
        row.predicted_shift = kNaN;
        if (lo_report && hi_report) {
            const auto lo_values = deciding(*lo_report);
            const auto hi_values = deciding(*hi_report);
            for (std::size_t q = 0; q < lo_values.size(); ++q) {
                if ((lo_values[q].second > zero_threshold) == (hi_values[q].second > zero_threshold)) continue;
                row.quantity = lo_values[q].first;
                const double slope = (hi_values[q].second - lo_values[q].second) / (2.0 * h);
                row.predicted_shift = slope != 0.0 ? (perturbed_threshold - zero_threshold) / std::abs(slope) : kNaN;
                break;
            }
        }
        out.push_back(std::move(row));
    }
    return out;
}

Table sensitivity_table(std::span<const SensitivityRow> rows)
{
    Table table;
    table.columns = {"transition", "boundary", "perturbed", "shift", "predicted_shift", "quantity"};
    for (const auto& r : rows) {
        table.add_row({r.transition, r.boundary, r.perturbed, r.perturbed - r.boundary, r.predicted_shift,
                       r.quantity.empty() ? std::string("-") : r.quantity});
    }
    return table;
}

Table frequency_ratio_table(double max_alpha_over_epsilon, int n_points)
{
    if (n_points < 2 || !(max_alpha_over_epsilon > 0.0)) {
        throw std::invalid_argument("frequency ratio table needs n_points >= 2 and a positive range");
    }
    Table table;
    table.columns = {"alpha_over_epsilon", "omega_ratio"};
    for (int i = 0; i < n_points; ++i) {
        const double x = i * max_alpha_over_epsilon / (n_points - 1);
        table.add_row({x, frequency_ratio(x, 1.0)});
    }
    return table;
}

TruncationCheck validate_truncation(const Scenario& scenario, double t_end_in_T, int n_points,
                                    const EvolveOptions& options)
{
    if (!undamped(scenario.params)) throw std::invalid_argument("truncation check applies to undamped runs");
    const std::vector<double> times = time_grid(t_end_in_T, n_points, scenario.period);
    const auto full = propagate_schrodinger(HilbertSpace(scenario.n_max), scenario.params, times, {options.step});
    const NqsSolution nqs = NqsSolution::from(scenario.params);

    TruncationCheck check;
    check.table.columns = {"t_over_T", "one_minus_fidelity"};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double deviation = 1.0 - fidelity(nqs.state(times[i]), full[i]);
        check.max_deviation = std::max(check.max_deviation, deviation);
        check.table.add_row({times[i] / scenario.period, deviation});
    }
    return check;
}

std::vector<TargetState> named_states()
{
    std::vector<TargetState> states(target_library().begin(), target_library().end());
    TargetState star{"star", {}};
    for (int index : {0, 4, 5, 7}) star.amplitudes[static_cast<std::size_t>(index)] = 0.5;
    states.push_back(std::move(star));
    return states;
}

std::string_view to_string(Task task)
{
    switch (task) {
    case Task::time_series: return "time-series";
    case Task::steady_state: return "steady-state";
    case Task::steady_sweep: return "steady-sweep";
    case Task::frequency_ratio: return "frequency-ratio";
    case Task::truncation: return "truncation";
    }
    return "time-series";
}

namespace {

std::vector<Preset> build_presets()
{
    std::vector<Preset> p;
    auto add = [&p](Preset preset) { p.push_back(std::move(preset)); };

    add({"fig2", "omega1/omega2 against alpha/epsilon", Task::frequency_ratio, 0.001, Branch::minus, 0.0,
         DampingKind::none, std::nullopt, 1, std::nullopt, 501});
    add({"fig3", "1 - F(t) of the two-level truncation against n_max = 9", Task::truncation, 0.001, Branch::plus, 0.0,
         DampingKind::none, std::nullopt, 9, 3.0, 301});
    for (auto [name, branch] : {std::pair{"fig4a", Branch::plus}, std::pair{"fig4b", Branch::minus},
                                std::pair{"fig5a", Branch::plus}, std::pair{"fig5b", Branch::minus}}) {
        add({name, "undamped correlations, negativities and fidelities over one period", Task::time_series, 0.001,
             branch, 0.0, DampingKind::none, std::nullopt, 1, 1.0, 401});
    }
    add({"fig6", "undamped negativities with detuned coupling", Task::time_series, 0.001, Branch::minus, -0.6,
         DampingKind::none, std::nullopt, 1, 10.0, 1001});
    add({"fig7a", "amplitude-damped negativities", Task::time_series, 0.001, Branch::minus, 0.0,
         DampingKind::amplitude, 0.1, 1, 20.0, 801});
    add({"fig7b", "amplitude-damped negativities with detuned coupling", Task::time_series, 0.001, Branch::minus,
         -0.6, DampingKind::amplitude, 0.1, 1, 20.0, 801});
    add({"fig8a", "steady-state correlation functions against kappa", Task::steady_sweep, 0.001, Branch::minus, 0.0,
         DampingKind::amplitude, std::nullopt, 1, std::nullopt, std::nullopt});
    add({"fig8b", "steady-state negativities against kappa", Task::steady_sweep, 0.001, Branch::minus, 0.0,
         DampingKind::amplitude, std::nullopt, 1, std::nullopt, std::nullopt});
    add({"fig8c", "steady-state negativities against kappa with detuned coupling", Task::steady_sweep, 0.001,
         Branch::minus, -0.6, DampingKind::amplitude, std::nullopt, 1, std::nullopt, std::nullopt});
    add({"fig9a", "phase-damped negativities", Task::time_series, 0.001, Branch::minus, 0.0, DampingKind::phase, 0.1,
         1, 20.0, 801});
    add({"fig9b", "phase-damped negativities with detuned coupling", Task::time_series, 0.001, Branch::minus, -0.6,
         DampingKind::phase, 0.1, 1, 20.0, 801});
    return p;
}

} // namespace

std::span<const Preset> presets()
{
    static const std::vector<Preset> all = build_presets();
    return all;
}

const Preset& find_preset(std::string_view name)
{
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

} // namespace kerrchain
