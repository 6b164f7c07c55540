// closed_evolution.hpp: undamped dynamics: closed-form two-level truncation and
// numerical Schrodinger propagation on an arbitrary cutoff

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kerrchain/states.hpp"

namespace kerrchain {

enum class Branch { plus, minus };

std::string_view to_string(Branch branch);

// Closed-form amplitudes of the vacuum-initialized chain truncated to
// occupations {0,1} per mode. Valid when alpha, epsilon << chi.
struct NqsSolution {
    double alpha;
    double epsilon; // effective coupling (epsilon + delta)
    double omega1;
    double omega2;
    double a1, a2, a3, a4, a5;

    static NqsSolution from(const SystemParams& params);

    // (C000, C001, C010, C011, C100, C101, C110, C111) at time t.
    std::array<complex, 8> amplitudes(double t) const;
    PureState state(double t) const;
};

std::array<complex, 8> nqs_amplitudes(const SystemParams& params, double t);

// omega1 / omega2 for couplings alpha and epsilon. Throws std::invalid_argument
// when omega2 vanishes (alpha = epsilon = 0).
double frequency_ratio(double alpha, double epsilon);

// epsilon = 12 alpha / (10 +- sqrt 28), where omega1 = 2 omega2.
double resonant_epsilon(double alpha, Branch branch);

// Period sqrt(5 +- sqrt 7) pi / (2 alpha) of the resonant branch.
double resonant_period(double alpha, Branch branch);

// 2 pi / omega2 for arbitrary couplings; equals resonant_period on resonance.
// Returns +inf when the system has no dynamics.
double slow_period(const SystemParams& params);

struct SchrodingerOptions {
    // Fixed RK4 step; when unset the step is min(period/20000, 1/‖H‖).
    std::optional<double> step;
    double norm_tolerance = 1e-6;
};

// Propagates |000> under H on `space`; returns one state per grid time.
// Throws NumericalError when |‖psi‖^2 - 1| exceeds options.norm_tolerance.
std::vector<PureState> propagate_schrodinger(const HilbertSpace& space, const SystemParams& params,
                                             const std::vector<double>& t_grid,
                                             const SchrodingerOptions& options = {});

// Default step used by propagate_schrodinger.
double default_schrodinger_step(const Matrix& hamiltonian, const SystemParams& params);

} // namespace kerrchain
