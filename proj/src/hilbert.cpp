#include "kerrchain/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kerrchain {

std::string_view to_string(DampingKind kind)
{
    switch (kind) {
    case DampingKind::none: return "none";
    case DampingKind::amplitude: return "amplitude";
    case DampingKind::phase: return "phase";
    }
    return "none";
}

DampingKind damping_kind_from_string(std::string_view text)
{
    if (text == "none") return DampingKind::none;
    if (text == "amplitude") return DampingKind::amplitude;
    if (text == "phase") return DampingKind::phase;
    throw std::invalid_argument("unknown damping kind '" + std::string(text) + "'");
}

std::string_view to_string(RateConvention convention)
{
    return convention == RateConvention::literal ? "literal" : "reference";
}

RateConvention rate_convention_from_string(std::string_view text)
{
    if (text == "literal") return RateConvention::literal;
    if (text == "reference") return RateConvention::reference;
    throw std::invalid_argument("unknown rate convention '" + std::string(text) + "'");
}

void SystemParams::validate() const
{
    if (!(chi > 0.0)) throw std::invalid_argument("chi must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    if (!std::isfinite(epsilon) || !std::isfinite(delta))
        throw std::invalid_argument("epsilon and delta must be finite");
    for (double k : kappa) {
        if (!(k >= 0.0)) throw std::invalid_argument("damping rates must be non-negative");
    }
}

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max)
{
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be at least 1 (one-photon states are required)");
    }
}

bool HilbertSpace::contains(const Occupation& occ) const
{
    auto ok = [this](int n) { return n >= 0 && n <= n_max_; };
    return ok(occ.n1) && ok(occ.n2) && ok(occ.n3);
}

Index HilbertSpace::index_of(const Occupation& occ) const
{
    if (!contains(occ)) throw std::out_of_range("occupation outside the truncated space");
    const Index d = mode_dim();
    return (static_cast<Index>(occ.n1) * d + occ.n2) * d + occ.n3;
}

Occupation HilbertSpace::occupation_of(Index index) const
{
    if (index < 0 || index >= total_dim()) throw std::out_of_range("basis index out of range");
    const Index d = mode_dim();
    return {static_cast<int>(index / (d * d)), static_cast<int>((index / d) % d),
            static_cast<int>(index % d)};
}

HilbertSpace build_space(int n_max) { return HilbertSpace(n_max); }

int checked_mode(int mode)
{
    if (mode < 1 || mode > kModeCount) {
        throw std::invalid_argument("mode index must be 1, 2 or 3, got " + std::to_string(mode));
    }
    return mode;
}

namespace {

Occupation shifted(Occupation occ, int mode, int by)
{
    switch (mode) {
    case 1: occ.n1 += by; break;
    case 2: occ.n2 += by; break;
    default: occ.n3 += by; break;
    }
    return occ;
}

// Adds value at (row, col) and its conjugate at (col, row).
void add_hermitian_pair(Matrix& h, Index row, Index col, complex value)
{
    h(row, col) += value;
    h(col, row) += std::conj(value);
}

} // namespace

ModeOperator mode_operator(const HilbertSpace& space, int mode, OperatorKind kind)
{
    checked_mode(mode);
    const Index dim = space.total_dim();
    Matrix a = Matrix::Zero(dim, dim);
    for (Index col = 0; col < dim; ++col) {
        const Occupation occ = space.occupation_of(col);
        const int n = occ[mode];
        if (n == 0) continue;
        a(space.index_of(shifted(occ, mode, -1)), col) = std::sqrt(static_cast<double>(n));
    }

    switch (kind) {
    case OperatorKind::annihilation: return {std::move(a), mode, kind};
    case OperatorKind::creation: return {a.adjoint(), mode, kind};
    case OperatorKind::number: return {a.adjoint() * a, mode, kind};
    }
    return {std::move(a), mode, kind};
}

Matrix build_hamiltonian(const HilbertSpace& space, const SystemParams& params)
{
    params.validate();
    const Index dim = space.total_dim();
    const double hop = params.coupling();
    Matrix h = Matrix::Zero(dim, dim);

    for (Index col = 0; col < dim; ++col) {
        const Occupation occ = space.occupation_of(col);

        double kerr = 0.0;
        for (int mode = 1; mode <= kModeCount; ++mode) {
            const double n = occ[mode];
            kerr += n * (n - 1.0);
        }
        h(col, col) = 0.5 * params.chi * kerr;

        // a_to^dag a_from |occ>, only the upward-index half; the pair adds the rest
        for (auto [from, to] : {std::pair{2, 1}, std::pair{3, 2}}) {
            for (auto [src, dst] : {std::pair{from, to}, std::pair{to, from}}) {
                if (occ[src] == 0 || occ[dst] == space.n_max()) continue;
                const Index row = space.index_of(shifted(shifted(occ, src, -1), dst, +1));
                if (row <= col) continue;
                const double amp = std::sqrt(static_cast<double>(occ[src]) * (occ[dst] + 1));
                add_hermitian_pair(h, row, col, hop * amp);
            }
        }

        // alpha a_j^dag for the pumped boundary modes; conjugate gives alpha a_j
        for (int mode : {1, 3}) {
            if (occ[mode] == space.n_max()) continue;
            const Index row = space.index_of(shifted(occ, mode, +1));
            add_hermitian_pair(h, row, col, params.alpha * std::sqrt(static_cast<double>(occ[mode] + 1)));
        }
    }
    return h;
}

Matrix mode_swap_13(const HilbertSpace& space)
{
    const Index dim = space.total_dim();
    Matrix p = Matrix::Zero(dim, dim);
    for (Index col = 0; col < dim; ++col) {
        const Occupation occ = space.occupation_of(col);
        p(space.index_of({occ.n3, occ.n2, occ.n1}), col) = 1.0;
    }
    return p;
}

} // namespace kerrchain
