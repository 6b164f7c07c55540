#include "kerrchain/correlations.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrchain {

namespace {

void check_pair(int j, int k)
{
    checked_mode(j);
    checked_mode(k);
    if (j == k) throw std::invalid_argument("correlations are defined for distinct modes only");
}

HilbertSpace space_of(const DensityMatrix& rho)
{
    rho.check_layout();
    if (!rho.is_full() || rho.dims[0] != rho.dims[1] || rho.dims[1] != rho.dims[2]) {
        throw std::invalid_argument("correlations need a full three-mode density matrix");
    }
    return HilbertSpace(static_cast<int>(rho.dims[0] - 1));
}

// tr(rho O)
complex expectation(const Matrix& rho, const Matrix& op)
{
    return rho.cwiseProduct(op.transpose()).sum();
}

Matrix lower(const HilbertSpace& space, int mode)
{
    return mode_operator(space, mode, OperatorKind::annihilation).matrix;
}

// a_mode |psi>, computed on the amplitude vector directly
Vector lower(const PureState& psi, int mode)
{
    const HilbertSpace& space = psi.space;
    Vector out = Vector::Zero(space.total_dim());
    for (Index i = 0; i < space.total_dim(); ++i) {
        Occupation occ = space.occupation_of(i);
        const int n = occ[mode];
        if (n == 0) continue;
        (mode == 1 ? occ.n1 : mode == 2 ? occ.n2 : occ.n3) -= 1;
        out(space.index_of(occ)) += std::sqrt(static_cast<double>(n)) * psi.amplitudes(i);
    }
    return out;
}

double g1_from(complex cross, double nj, double nk)
{
    if (nj < kEmptyModeThreshold || nk < kEmptyModeThreshold) return 0.0;
    return std::abs(cross) / std::sqrt(nj * nk);
}

double g2_from(double numerator, double nj, double nk)
{
    if (nj < kEmptyModeThreshold || nk < kEmptyModeThreshold) return 1.0;
    return numerator / (nj * nk);
}

template <typename State>
CorrelationReport report_for(const State& state)
{
    CorrelationReport r;
    for (int m = 1; m <= kModeCount; ++m) {
        r.occupations[static_cast<std::size_t>(m - 1)] = mean_occupation(state, m);
    }
    for (std::size_t p = 0; p < kModePairs.size(); ++p) {
        const auto [j, k] = kModePairs[p];
        r.g1[p] = g1(state, j, k);
        r.g2[p] = g2(state, j, k);
    }
    return r;
}

} // namespace

double mean_occupation(const DensityMatrix& rho, int mode)
{
    const HilbertSpace space = space_of(rho);
    return expectation(rho.matrix, mode_operator(space, mode, OperatorKind::number).matrix).real();
}

double g1(const DensityMatrix& rho, int j, int k)
{
    check_pair(j, k);
    const HilbertSpace space = space_of(rho);
    const Matrix aj = lower(space, j);
    const Matrix ak = lower(space, k);
    const complex cross = expectation(rho.matrix, aj.adjoint() * ak);
    return g1_from(cross, expectation(rho.matrix, aj.adjoint() * aj).real(),
                   expectation(rho.matrix, ak.adjoint() * ak).real());
}

double g2(const DensityMatrix& rho, int j, int k)
{
    check_pair(j, k);
    const HilbertSpace space = space_of(rho);
    const Matrix aj = lower(space, j);
    const Matrix ak = lower(space, k);
    const Matrix pair = aj * ak;
    const double numerator = expectation(rho.matrix, pair.adjoint() * pair).real();
    return g2_from(numerator, expectation(rho.matrix, aj.adjoint() * aj).real(),
                   expectation(rho.matrix, ak.adjoint() * ak).real());
}

double mean_occupation(const PureState& psi, int mode)
{
    checked_mode(mode);
    return lower(psi, mode).squaredNorm();
}

double g1(const PureState& psi, int j, int k)
{
    check_pair(j, k);
    const Vector aj = lower(psi, j);
    const Vector ak = lower(psi, k);
    return g1_from(aj.dot(ak), aj.squaredNorm(), ak.squaredNorm());
}

double g2(const PureState& psi, int j, int k)
{
    check_pair(j, k);
    const Vector ak = lower(psi, k);
    const Vector aj_ak = lower(PureState{psi.space, ak}, j);
    return g2_from(aj_ak.squaredNorm(), mean_occupation(psi, j), ak.squaredNorm());
}

CorrelationReport correlation_report(const DensityMatrix& rho) { return report_for(rho); }
CorrelationReport correlation_report(const PureState& psi) { return report_for(psi); }

} // namespace kerrchain
