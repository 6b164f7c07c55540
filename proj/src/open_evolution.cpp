#include "kerrchain/open_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kerrchain/closed_evolution.hpp"
#include "kerrchain/errors.hpp"
#include "kerrchain/rk4.hpp"

namespace kerrchain {

namespace {

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

void check_density(const DensityMatrix& rho, const HilbertSpace& space)
{
    rho.check_layout();
    if (!rho.is_full() || rho.dim() != space.total_dim()) {
        throw std::invalid_argument("initial density matrix does not live on the generator's space");
    }
    const DensityDiagnostics d = diagnose(rho.matrix);
    if (d.hermiticity_error > 1e-10 || d.trace_error > 1e-8 || d.min_eigenvalue < -1e-7) {
        throw std::invalid_argument("initial density matrix is not hermitian, unit-trace and positive");
    }
}

} // namespace

double LindbladGenerator::max_rate() const
{
    double rate = 0.0;
    for (const auto& j : jumps) rate = std::max(rate, j.rate);
    return rate;
}

double jump_rate(const SystemParams& params, int mode)
{
    const double kappa = params.kappa[static_cast<std::size_t>(checked_mode(mode) - 1)];
    if (params.damping == DampingKind::none) return 0.0;
    if (params.damping == DampingKind::amplitude && params.rate_convention == RateConvention::reference) {
        return 2.0 * kappa;
    }
    return kappa;
}

LindbladGenerator make_generator(const HilbertSpace& space, const SystemParams& params)
{
    LindbladGenerator gen{space, build_hamiltonian(space, params), {}, params.damping, slow_period(params)};
    if (params.damping == DampingKind::none) return gen;

    const OperatorKind kind =
        params.damping == DampingKind::amplitude ? OperatorKind::annihilation : OperatorKind::number;
    for (int mode = 1; mode <= kModeCount; ++mode) {
        const double rate = jump_rate(params, mode);
        if (rate == 0.0) continue;
        gen.jumps.push_back({mode_operator(space, mode, kind).matrix, rate, mode});
    }
    return gen;
}

Matrix lindblad_rhs(const LindbladGenerator& gen, const Matrix& rho)
{
    const complex minus_i{0.0, -1.0};
    Matrix out = minus_i * (gen.hamiltonian * rho - rho * gen.hamiltonian);
    for (const auto& j : gen.jumps) {
        const Matrix ldag = j.op.adjoint();
        const Matrix ldag_l = ldag * j.op;
        out += (0.5 * j.rate) * (2.0 * j.op * rho * ldag - ldag_l * rho - rho * ldag_l);
    }
    return out;
}

Matrix lindblad_rhs(const LindbladGenerator& gen, const DensityMatrix& rho)
{
    return lindblad_rhs(gen, rho.matrix);
}

Matrix liouvillian(const LindbladGenerator& gen)
{
    const Index n = gen.hamiltonian.rows();
    const Matrix id = Matrix::Identity(n, n);
    const complex minus_i{0.0, -1.0};
    Matrix l = minus_i * (kron(id, gen.hamiltonian) - kron(gen.hamiltonian.transpose(), id));
    for (const auto& j : gen.jumps) {
        const Matrix ldag_l = j.op.adjoint() * j.op;
        l += (0.5 * j.rate) * (2.0 * kron(j.op.conjugate(), j.op) - kron(id, ldag_l) - kron(ldag_l.transpose(), id));
    }
    return l;
}

Vector vectorize(const Matrix& rho)
{
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v, Index dim)
{
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

double default_lindblad_step(const LindbladGenerator& gen, const Matrix& superop, std::optional<double> period)
{
    double scale = period.value_or(gen.period);
    if (gen.max_rate() > 0.0) scale = std::min(scale, 1.0 / gen.max_rate());
    double step = scale / 20000.0;
    const double bound = LinearRk4::norm_bound(superop);
    if (bound > 0.0) step = std::min(step, 1.0 / bound);
    if (!std::isfinite(step)) step = 1.0;
    return step;
}

std::vector<DensityMatrix> propagate_lindblad(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                              const std::vector<double>& t_grid, const LindbladOptions& options)
{
    check_density(rho0, gen.space);
    const Matrix superop = liouvillian(gen);
    const double step = options.step.value_or(default_lindblad_step(gen, superop, options.period));
    LinearRk4 stepper(superop, step);

    const Index dim = rho0.dim();
    std::vector<DensityMatrix> out;
    out.reserve(t_grid.size());
    Matrix rho = rho0.matrix;
    double now = 0.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < now) {
            throw std::invalid_argument("time grid must be finite, non-negative and non-decreasing");
        }
        rho = hermitian_part(unvectorize(stepper.advance(vectorize(rho), t - now), dim));
        now = t;
        if (!rho.allFinite()) {
            throw NumericalError("Lindblad propagation overflowed at t = " + std::to_string(t) + "; reduce the step");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
        const double min_eig = solver.eigenvalues().minCoeff();
        if (min_eig < -options.positivity_tolerance) {
            throw NumericalError("Lindblad propagation: eigenvalue " + std::to_string(min_eig) + " at t = " +
                                 std::to_string(t) + " violates positivity; reduce the step");
        }
        out.push_back(DensityMatrix::full(gen.space, rho));
    }
    return out;
}

DensityMatrix steady_state(const LindbladGenerator& gen, const SteadyStateOptions& options)
{
    const Matrix superop = liouvillian(gen);
    Eigen::BDCSVD<Matrix> svd(superop, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = options.relative_null_tolerance * sigma(0);
    const auto null_dim = static_cast<long>((sigma.array() <= cutoff).count());
    if (null_dim != 1) {
        throw NumericalError("steady state: Liouvillian null space has dimension " + std::to_string(null_dim));
    }

    const Index dim = gen.hamiltonian.rows();
    Matrix rho = unvectorize(svd.matrixV().col(superop.cols() - 1), dim);
    const complex tr = rho.trace();
    if (std::abs(tr) < 1e-12) throw NumericalError("steady state: null vector has vanishing trace");
    rho = hermitian_part(rho / tr);
    return DensityMatrix::full(gen.space, rho);
}

double steady_state_residual(const LindbladGenerator& gen, const DensityMatrix& rho)
{
    return lindblad_rhs(gen, rho).cwiseAbs().maxCoeff();
}

} // namespace kerrchain
