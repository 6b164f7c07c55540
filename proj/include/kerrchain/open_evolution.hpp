// open_evolution.hpp: Lindblad dynamics under amplitude or phase damping

#pragma once

#include <optional>
#include <vector>

#include "kerrchain/states.hpp"

namespace kerrchain {

struct JumpOperator {
    Matrix op;
    double rate; // multiplies the dissipator (rate/2)(2 L rho L^dag - {L^dag L, rho})
    int mode;
};

struct LindbladGenerator {
    HilbertSpace space;
    Matrix hamiltonian;
    std::vector<JumpOperator> jumps;
    DampingKind kind = DampingKind::none;
    // Slow coherent period 2 pi / omega2 of the couplings (+inf without dynamics).
    double period = 0.0;

    // Largest jump rate, 0 when undamped.
    double max_rate() const;
};

// Dissipator rate for mode j under the params' rate convention.
double jump_rate(const SystemParams& params, int mode);

// Jumps a_j for amplitude damping, a_j^dag a_j for phase damping; modes with a
// zero rate are omitted.
LindbladGenerator make_generator(const HilbertSpace& space, const SystemParams& params);

// d rho/dt = -i[H, rho] + sum_j (rate_j/2)(2 L_j rho L_j^dag - L_j^dag L_j rho - rho L_j^dag L_j)
Matrix lindblad_rhs(const LindbladGenerator& gen, const Matrix& rho);
Matrix lindblad_rhs(const LindbladGenerator& gen, const DensityMatrix& rho);

// Superoperator acting on column-major vec(rho): vec(L rho) = liouvillian * vec(rho).
Matrix liouvillian(const LindbladGenerator& gen);

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, Index dim);

struct LindbladOptions {
    // Fixed RK4 step; when unset the step is min(period, 1/max_rate)/20000,
    // further capped at 1/‖Liouvillian‖.
    std::optional<double> step;
    // Overrides gen.period in the default step rule.
    std::optional<double> period;
    double positivity_tolerance = 1e-6;
};

double default_lindblad_step(const LindbladGenerator& gen, const Matrix& superop,
                             std::optional<double> period);

// Returns rho(t) for each grid time. The hermitian part is carried between
// output points; positivity is checked and violations beyond the tolerance
// raise NumericalError.
std::vector<DensityMatrix> propagate_lindblad(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                              const std::vector<double>& t_grid,
                                              const LindbladOptions& options = {});

struct SteadyStateOptions {
    // Singular values below relative_null_tolerance * sigma_max count as null.
    double relative_null_tolerance = 1e-9;
};

// Unique null vector of the Liouvillian, normalized to unit trace and
// hermitized. Throws NumericalError when the null space is not one-dimensional.
DensityMatrix steady_state(const LindbladGenerator& gen, const SteadyStateOptions& options = {});

// max |L(rho)| entry.
double steady_state_residual(const LindbladGenerator& gen, const DensityMatrix& rho);

} // namespace kerrchain
