#include "kerrchain/states.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace kerrchain {

complex PureState::amplitude(const Occupation& occ) const
{
    return space.contains(occ) ? amplitudes(space.index_of(occ)) : complex{0.0, 0.0};
}

PureState vacuum_state(const HilbertSpace& space) { return basis_state(space, {0, 0, 0}); }

PureState basis_state(const HilbertSpace& space, const Occupation& occ)
{
    PureState s{space, Vector::Zero(space.total_dim())};
    s.amplitudes(space.index_of(occ)) = 1.0;
    return s;
}

PureState embed(const PureState& state, const HilbertSpace& target)
{
    if (state.amplitudes.size() != state.space.total_dim()) {
        throw std::invalid_argument("state amplitude count does not match its space");
    }
    PureState out{target, Vector::Zero(target.total_dim())};
    for (Index i = 0; i < state.space.total_dim(); ++i) {
        const Occupation occ = state.space.occupation_of(i);
        if (target.contains(occ)) out.amplitudes(target.index_of(occ)) = state.amplitudes(i);
    }
    return out;
}

double fidelity(const PureState& a, const PureState& b)
{
    const HilbertSpace& larger = a.space.n_max() >= b.space.n_max() ? a.space : b.space;
    const PureState ea = embed(a, larger);
    const PureState eb = embed(b, larger);
    if (ea.amplitudes.size() != eb.amplitudes.size()) {
        throw std::invalid_argument("fidelity: dimension mismatch after embedding");
    }
    return std::abs(ea.amplitudes.dot(eb.amplitudes));
}

DensityMatrix DensityMatrix::full(const HilbertSpace& space, Matrix matrix)
{
    DensityMatrix rho{std::move(matrix), {1, 2, 3}, {space.mode_dim(), space.mode_dim(), space.mode_dim()}};
    rho.check_layout();
    return rho;
}

DensityMatrix DensityMatrix::from_pure(const PureState& state)
{
    return full(state.space, state.amplitudes * state.amplitudes.adjoint());
}

void DensityMatrix::check_layout() const
{
    if (modes.size() != dims.size() || modes.empty()) {
        throw std::invalid_argument("density matrix layout: modes and dims disagree");
    }
    if (!std::is_sorted(modes.begin(), modes.end()) ||
        std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
        throw std::invalid_argument("density matrix layout: modes must be strictly ascending");
    }
    for (int m : modes) checked_mode(m);
    const Index product = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
    if (matrix.rows() != product || matrix.cols() != product) {
        throw std::invalid_argument("density matrix layout: matrix size does not match dims");
    }
}

DensityDiagnostics diagnose(const Matrix& rho)
{
    DensityDiagnostics d{};
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - complex{1.0, 0.0});
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(rho), Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double trace_distance(const Matrix& a, const Matrix& b)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a - b), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

} // namespace kerrchain
