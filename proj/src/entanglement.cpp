#include "kerrchain/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kerrchain {

ModeSet::ModeSet(std::initializer_list<int> modes)
{
    for (int m : modes) mask_ |= 1U << (checked_mode(m) - 1);
}

int ModeSet::size() const { return std::popcount(mask_); }

namespace {

// Mixed-radix digits of a basis index, first subsystem slowest.
struct Layout {
    std::vector<Index> dims;
    std::vector<Index> strides;

    explicit Layout(const std::vector<Index>& d) : dims(d), strides(d.size(), 1)
    {
        for (std::size_t s = d.size(); s-- > 1;) strides[s - 1] = strides[s] * d[s];
    }
    Index digit(Index index, std::size_t pos) const { return (index / strides[pos]) % dims[pos]; }
};

// Positions (within rho.modes) selected by `set`; validates a strict nonempty subset.
std::vector<std::size_t> positions(const DensityMatrix& rho, ModeSet set)
{
    rho.check_layout();
    std::vector<std::size_t> pos;
    int matched = 0;
    for (std::size_t p = 0; p < rho.modes.size(); ++p) {
        if (set.contains(rho.modes[p])) {
            pos.push_back(p);
            ++matched;
        }
    }
    if (set.empty() || matched != set.size() || matched == static_cast<int>(rho.modes.size())) {
        throw std::invalid_argument("mode set must be a nonempty strict subset of the matrix's modes");
    }
    return pos;
}

Eigen::VectorXd pt_spectrum(const DensityMatrix& rho, ModeSet part)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(partial_transpose(rho, part)),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

TargetState make_target(std::string label, std::initializer_list<std::pair<int, double>> terms)
{
    TargetState t{std::move(label), {}};
    double norm = 0.0;
    for (auto [index, value] : terms) {
        t.amplitudes[static_cast<std::size_t>(index)] = value;
        norm += value * value;
    }
    for (auto& a : t.amplitudes) a /= std::sqrt(norm);
    return t;
}

// basis index of |ijk> in the two-level space
constexpr int q(int i, int j, int k) { return 4 * i + 2 * j + k; }

std::vector<TargetState> build_library()
{
    std::vector<TargetState> lib;
    lib.push_back(make_target("ghz_p", {{q(0, 0, 0), 1}, {q(1, 1, 1), 1}}));
    lib.push_back(make_target("ghz_m", {{q(0, 0, 0), 1}, {q(1, 1, 1), -1}}));
    lib.push_back(make_target("ghz010_p", {{q(0, 1, 0), 1}, {q(1, 0, 1), 1}}));
    lib.push_back(make_target("ghz010_m", {{q(0, 1, 0), 1}, {q(1, 0, 1), -1}}));
    for (int s2 : {1, -1}) {
        for (int s13 : {1, -1}) {
            std::string label = std::string("prod_2") + (s2 > 0 ? "p" : "m") + "_13" + (s13 > 0 ? "p" : "m");
            lib.push_back(make_target(std::move(label), {{q(0, 0, 0), 1.0},
                                                         {q(1, 0, 1), 1.0 * s13},
                                                         {q(0, 1, 0), 1.0 * s2},
                                                         {q(1, 1, 1), 1.0 * s2 * s13}}));
        }
    }
    lib.push_back(make_target("w", {{q(0, 0, 1), 1}, {q(0, 1, 0), 1}, {q(1, 0, 0), 1}}));
    lib.push_back(make_target("w_flip", {{q(1, 1, 0), 1}, {q(1, 0, 1), 1}, {q(0, 1, 1), 1}}));
    lib.push_back(make_target("bell13_phi_p", {{q(0, 0, 0), 1}, {q(1, 0, 1), 1}}));
    lib.push_back(make_target("bell13_phi_m", {{q(0, 0, 0), 1}, {q(1, 0, 1), -1}}));
    lib.push_back(make_target("bell13_psi_p", {{q(0, 0, 1), 1}, {q(1, 0, 0), 1}}));
    lib.push_back(make_target("bell13_psi_m", {{q(0, 0, 1), 1}, {q(1, 0, 0), -1}}));
    return lib;
}

} // namespace

DensityMatrix reduce(const DensityMatrix& rho, ModeSet keep)
{
    const std::vector<std::size_t> kept = positions(rho, keep);
    const Layout full(rho.dims);

    DensityMatrix out;
    for (std::size_t p : kept) {
        out.modes.push_back(rho.modes[p]);
        out.dims.push_back(rho.dims[p]);
    }
    const Layout reduced(out.dims);
    std::vector<std::size_t> traced;
    for (std::size_t p = 0; p < rho.modes.size(); ++p) {
        if (std::find(kept.begin(), kept.end(), p) == kept.end()) traced.push_back(p);
    }

    const Index n = rho.dim();
    auto reduced_index = [&](Index i) {
        Index r = 0;
        for (std::size_t s = 0; s < kept.size(); ++s) r += full.digit(i, kept[s]) * reduced.strides[s];
        return r;
    };
    out.matrix = Matrix::Zero(reduced.strides[0] * reduced.dims[0], reduced.strides[0] * reduced.dims[0]);
    for (Index row = 0; row < n; ++row) {
        for (Index col = 0; col < n; ++col) {
            bool diagonal_in_traced = true;
            for (std::size_t p : traced) {
                if (full.digit(row, p) != full.digit(col, p)) {
                    diagonal_in_traced = false;
                    break;
                }
            }
            if (diagonal_in_traced) out.matrix(reduced_index(row), reduced_index(col)) += rho.matrix(row, col);
        }
    }
    return out;
}

Matrix partial_transpose(const DensityMatrix& rho, ModeSet part)
{
    const std::vector<std::size_t> swapped = positions(rho, part);
    const Layout layout(rho.dims);
    const Index n = rho.dim();
    Matrix out(n, n);
    for (Index row = 0; row < n; ++row) {
        for (Index col = 0; col < n; ++col) {
            Index r = row;
            Index c = col;
            for (std::size_t p : swapped) {
                const Index dr = layout.digit(row, p);
                const Index dc = layout.digit(col, p);
                r += (dc - dr) * layout.strides[p];
                c += (dr - dc) * layout.strides[p];
            }
            out(r, c) = rho.matrix(row, col);
        }
    }
    return out;
}

double negativity(const DensityMatrix& rho, ModeSet part)
{
    double sum = 0.0;
    for (double lambda : pt_spectrum(rho, part)) {
        if (lambda < -kEigenvalueFloor) sum -= lambda;
    }
    return 2.0 * sum;
}

double negativity_trace_norm(const DensityMatrix& rho, ModeSet part)
{
    return pt_spectrum(rho, part).cwiseAbs().sum() - rho.trace();
}

double tripartite_negativity(const DensityMatrix& rho)
{
    if (!rho.is_full()) throw std::invalid_argument("tripartite negativity needs a three-mode matrix");
    const double product = negativity(rho, {1}) * negativity(rho, {2}) * negativity(rho, {3});
    return std::cbrt(product);
}

std::string_view to_string(Subtype subtype)
{
    switch (subtype) {
    case Subtype::none: return "none";
    case Subtype::iii_0: return "III-0";
    case Subtype::iii_1: return "III-1";
    case Subtype::iii_2: return "III-2";
    case Subtype::iii_3: return "III-3";
    }
    return "none";
}

Subtype subtype_from_string(std::string_view text)
{
    for (Subtype s : {Subtype::none, Subtype::iii_0, Subtype::iii_1, Subtype::iii_2, Subtype::iii_3}) {
        if (to_string(s) == text) return s;
    }
    throw std::invalid_argument("unknown entanglement subtype '" + std::string(text) + "'");
}

Subtype classify(const EntanglementReport& report, double zero_threshold)
{
    if (report.tripartite <= zero_threshold) return Subtype::none;
    const auto nonzero = std::count_if(report.reduced.begin(), report.reduced.end(),
                                       [zero_threshold](double n) { return n > zero_threshold; });
    return static_cast<Subtype>(static_cast<int>(Subtype::iii_0) + nonzero);
}

EntanglementReport entanglement_report(const DensityMatrix& rho, double zero_threshold)
{
    if (!rho.is_full()) throw std::invalid_argument("entanglement report needs a three-mode matrix");
    EntanglementReport r;
    r.reduced = {negativity(reduce(rho, {1, 2}), {1}), negativity(reduce(rho, {2, 3}), {2}),
                 negativity(reduce(rho, {1, 3}), {1})};
    r.bipartition = {negativity(rho, {1}), negativity(rho, {2}), negativity(rho, {3})};
    r.tripartite = std::cbrt(r.bipartition[0] * r.bipartition[1] * r.bipartition[2]);
    r.subtype = classify(r, zero_threshold);
    return r;
}

PureState TargetState::state() const
{
    PureState s{HilbertSpace(1), Vector(8)};
    for (Index i = 0; i < 8; ++i) s.amplitudes(i) = amplitudes[static_cast<std::size_t>(i)];
    return s;
}

std::span<const TargetState> target_library()
{
    static const std::vector<TargetState> library = build_library();
    return library;
}

const TargetState& find_target(std::string_view label)
{
    for (const auto& t : target_library()) {
        if (t.label == label) return t;
    }
    throw std::invalid_argument("unknown target state '" + std::string(label) + "'");
}

double state_fidelity(const DensityMatrix& rho, const TargetState& target)
{
    rho.check_layout();
    if (!rho.is_full()) throw std::invalid_argument("state fidelity: dimension mismatch");
    const HilbertSpace space(static_cast<int>(rho.dims[0] - 1));
    if (rho.dim() != space.total_dim()) throw std::invalid_argument("state fidelity: dimension mismatch");
    const Vector phi = embed(target.state(), space).amplitudes;
    return phi.dot(rho.matrix * phi).real();
}

} // namespace kerrchain
