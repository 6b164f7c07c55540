// experiments.hpp: time series, steady-state sweeps, regime tables and the
// named presets built on top of the evolution and entanglement modules

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kerrchain/closed_evolution.hpp"
#include "kerrchain/correlations.hpp"
#include "kerrchain/entanglement.hpp"
#include "kerrchain/table.hpp"

namespace kerrchain {

// A run of the chain: physics, cutoff, and the period T used as time unit.
struct Scenario {
    SystemParams params;
    int n_max = 1;
    double period = 0.0;
};

// t_i = i * t_end_in_T * T / (n_points - 1); a single point sits at t = 0.
std::vector<double> time_grid(double t_end_in_T, int n_points, double period);

struct EvolveOptions {
    // RK4 step override (units of 1/chi) for the numerical propagators.
    std::optional<double> step;
    // Undamped runs with n_max = 1 use the closed-form amplitudes.
    bool closed_form_when_qubit = true;
};

// Density matrices at the given absolute times, started from vacuum. Undamped
// runs go through the closed form or Schrodinger propagation, damped runs
// through the Lindblad propagator.
std::vector<DensityMatrix> evolve(const Scenario& scenario, const std::vector<double>& times,
                                  const EvolveOptions& options = {});

struct Sample {
    double t_over_T = 0.0;
    CorrelationReport correlations;
    EntanglementReport entanglement;
    std::vector<double> fidelities; // aligned with target_library()
};

Sample analyze(const DensityMatrix& rho, double t_over_T, double zero_threshold = kDefaultZeroThreshold);

std::vector<Sample> run_time_series(const Scenario& scenario, double t_end_in_T, int n_points,
                                    double zero_threshold = kDefaultZeroThreshold, const EvolveOptions& options = {});

// Columns: t_over_T, g1_12, g1_13, g2_12, g2_13, N_12, N_13, N_1_23, N_2_13,
// N_3_12, N_tri, subtype, then g1_23, g2_23, N_23, n_1, n_2, n_3 and one
// F_<label> column per library target.
Table time_series_table(std::span<const Sample> samples);

enum class SweepParameter { kappa_over_alpha, epsilon_over_alpha, alpha_over_epsilon, time };

std::string_view to_string(SweepParameter parameter);
SweepParameter sweep_parameter_from_string(std::string_view text);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::kappa_over_alpha;
    std::vector<double> grid;
    SystemParams base;
    int n_max = 1;
    double zero_threshold = kDefaultZeroThreshold;
    // Column names to keep besides the parameter and status columns; empty keeps all.
    std::vector<std::string> outputs;

    // Throws std::invalid_argument for an empty or non-increasing grid.
    void validate() const;
};

// base with the swept parameter set to `value`.
SystemParams params_at(const SweepSpec& spec, double value);

// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

struct SteadyRow {
    double value = 0.0;
    CorrelationReport correlations;
    EntanglementReport entanglement;
    double residual = 0.0;
    bool ok = true;
    std::string status; // "ok" or the failure message
};

// Thread count for sweeps: KERRCHAIN_THREADS when set to a positive integer,
// otherwise the hardware concurrency.
unsigned sweep_threads();

SteadyRow steady_row(const SweepSpec& spec, double value);

// One row per grid point, in grid order. Rows whose steady state is not
// unique are kept with ok = false.
std::vector<SteadyRow> sweep_steady_state(const SweepSpec& spec);

// Columns: the swept parameter, g1_12, g1_23, g1_13, g2_12, g2_23, g2_13,
// N_12, N_23, N_13, N_1_23, N_2_13, N_3_12, N_tri, subtype, residual, status.
Table steady_table(const SweepSpec& spec, std::span<const SteadyRow> rows);

struct RegimeRow {
    double lo = 0.0;
    double hi = 0.0;
    Subtype subtype = Subtype::none;
};

struct RegimeTable {
    std::vector<RegimeRow> rows;
    std::vector<std::string> notes;

    std::vector<double> boundaries() const;
    std::vector<Subtype> sequence() const;
    // Columns: kappa_over_alpha_lo, kappa_over_alpha_hi, subtype.
    Table to_table() const;
};

// Classification of the steady state at a parameter value; memoizes reports
// so that reclassification at another threshold costs no solves.
class SteadyClassifier {
public:
    explicit SteadyClassifier(SweepSpec spec);

    const SweepSpec& spec() const { return spec_; }
    // Report at `value`; std::nullopt when the steady state is not unique.
    std::optional<EntanglementReport> report(double value);
    void seed(std::span<const SteadyRow> rows);

private:
    SweepSpec spec_;
    std::map<double, std::optional<EntanglementReport>> cache_;
};

// Contiguous subtype intervals over the sweep grid. Every grid cell whose ends
// differ is bisected recursively until each boundary is bracketed within
// `resolution`; cells that hide more than one transition are noted.
RegimeTable extract_regime_table(SteadyClassifier& classifier, std::span<const SteadyRow> rows,
                                 double zero_threshold, double resolution = 0.01);

struct SensitivityRow {
    std::string transition; // "III-1 -> III-3"
    double boundary = 0.0;
    double perturbed = 0.0;  // NaN when the transition disappears
    double predicted_shift = 0.0;
    std::string quantity;    // negativity that crosses the threshold
};

// Repeats the extraction with the threshold multiplied by `factor` and
// compares each boundary shift with threshold * (factor - 1) / |dN/dkappa| of
// the negativity crossing there.
std::vector<SensitivityRow> regime_sensitivity(SteadyClassifier& classifier, std::span<const SteadyRow> rows,
                                               const RegimeTable& base, double zero_threshold, double factor = 2.0);

// Columns: transition, boundary, perturbed, shift, predicted_shift, quantity.
Table sensitivity_table(std::span<const SensitivityRow> rows);

// Columns: alpha_over_epsilon, omega_ratio.
Table frequency_ratio_table(double max_alpha_over_epsilon, int n_points);

struct TruncationCheck {
    Table table; // t_over_T, one_minus_fidelity
    double max_deviation = 0.0;
};

// 1 - |<psi_cut|psi_full>| along the grid, the full state propagated on the
// scenario cutoff and psi_cut the closed-form two-level state.
TruncationCheck validate_truncation(const Scenario& scenario, double t_end_in_T, int n_points,
                                    const EvolveOptions& options = {});

// Named three-qubit states accepted by classification: the target library
// plus "star", (|000> + |100> + |101> + |111>)/2.
std::vector<TargetState> named_states();

enum class Task { time_series, steady_state, steady_sweep, frequency_ratio, truncation };

std::string_view to_string(Task task);

// Parameters pinned by a named preset. Optional fields are left to the user.
struct Preset {
    std::string name;
    std::string description;
    Task task = Task::time_series;
    double alpha_over_chi = 0.001;
    Branch branch = Branch::minus;
    double delta_over_alpha = 0.0;
    DampingKind damping = DampingKind::none;
    std::optional<double> kappa_over_alpha;
    int n_max = 1;
    std::optional<double> t_end_in_T;
    std::optional<int> n_points;
};

std::span<const Preset> presets();
// Throws std::invalid_argument for an unknown name.
const Preset& find_preset(std::string_view name);

} // namespace kerrchain
