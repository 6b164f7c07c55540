// entanglement.hpp: partial traces, partial transposes, negativities and
// classification of tripartite entanglement subtypes

#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include "kerrchain/states.hpp"

namespace kerrchain {

// Default zero threshold applied to negativities when classifying.
inline constexpr double kDefaultZeroThreshold = 1e-4;

// Eigenvalues of a partial transpose above -kEigenvalueFloor are treated as
// roundoff rather than entanglement.
inline constexpr double kEigenvalueFloor = 1e-12;

// Set of mode labels drawn from {1, 2, 3}.
class ModeSet {
public:
    ModeSet() = default;
    ModeSet(std::initializer_list<int> modes);

    bool contains(int mode) const { return (mask_ >> (mode - 1)) & 1U; }
    bool empty() const { return mask_ == 0; }
    int size() const;
    unsigned mask() const { return mask_; }

    friend bool operator==(const ModeSet&, const ModeSet&) = default;

private:
    unsigned mask_ = 0;
};

// Partial trace keeping `keep`, which must be a nonempty strict subset of the
// matrix's modes.
DensityMatrix reduce(const DensityMatrix& rho, ModeSet keep);

// Transpose of the subsystem indices in `part` (nonempty strict subset of the
// matrix's modes).
Matrix partial_transpose(const DensityMatrix& rho, ModeSet part);

// 2 * sum of |negative eigenvalues| of rho^{T_part}: 1 for a Bell pair.
double negativity(const DensityMatrix& rho, ModeSet part);

// ||rho^{T_part}||_1 - tr(rho), the same quantity by the trace-norm route.
double negativity_trace_norm(const DensityMatrix& rho, ModeSet part);

// Geometric mean of the three one-vs-rest negativities of a three-mode matrix.
double tripartite_negativity(const DensityMatrix& rho);

enum class Subtype { none, iii_0, iii_1, iii_2, iii_3 };

std::string_view to_string(Subtype subtype);
Subtype subtype_from_string(std::string_view text);

struct EntanglementReport {
    std::array<double, 3> reduced{};     // N12, N23, N13 of two-mode reductions
    std::array<double, 3> bipartition{}; // N1-23, N2-13, N3-12
    double tripartite = 0.0;
    Subtype subtype = Subtype::none;
};

Subtype classify(const EntanglementReport& report, double zero_threshold = kDefaultZeroThreshold);

EntanglementReport entanglement_report(const DensityMatrix& rho, double zero_threshold = kDefaultZeroThreshold);

// Named three-qubit state on the {0,1}^3 subspace, mode-1-major amplitudes.
struct TargetState {
    std::string label;
    std::array<complex, 8> amplitudes;

    PureState state() const;
};

// GHZ pairs, the four product states (|0>2 +- |1>2)(|00>13 +- |11>13)/2, W
// and its spin flip, and Bell states of modes 1-3 with mode 2 in vacuum.
std::span<const TargetState> target_library();
const TargetState& find_target(std::string_view label);

// <target|rho|target>, with the target embedded into rho's space.
double state_fidelity(const DensityMatrix& rho, const TargetState& target);

} // namespace kerrchain
