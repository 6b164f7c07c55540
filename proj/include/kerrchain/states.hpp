// states.hpp: pure states and density matrices over the composite Fock basis

#pragma once

#include <vector>

#include "kerrchain/hilbert.hpp"

namespace kerrchain {

struct PureState {
    HilbertSpace space;
    Vector amplitudes;

    double norm() const { return amplitudes.norm(); }
    complex amplitude(const Occupation& occ) const;
};

PureState vacuum_state(const HilbertSpace& space);
PureState basis_state(const HilbertSpace& space, const Occupation& occ);

// Zero-pads (or truncates) by occupation triple into `target`. Amplitudes that
// do not fit are dropped, so embedding into a smaller space is a projection.
PureState embed(const PureState& state, const HilbertSpace& target);

// |<a|b>| after embedding both into the larger of the two spaces.
double fidelity(const PureState& a, const PureState& b);

// Density matrix over a list of modes. A full three-mode matrix carries
// modes {1,2,3}; a reduced one carries the kept modes in ascending order.
// Subsystem order inside `matrix` follows `modes`, first mode slowest.
struct DensityMatrix {
    Matrix matrix;
    std::vector<int> modes;
    std::vector<Index> dims;

    static DensityMatrix full(const HilbertSpace& space, Matrix matrix);
    static DensityMatrix from_pure(const PureState& state);

    Index dim() const { return matrix.rows(); }
    double trace() const { return matrix.trace().real(); }
    bool is_full() const { return modes.size() == static_cast<std::size_t>(kModeCount); }
    // Throws std::invalid_argument when the layout does not match the matrix.
    void check_layout() const;
};

struct DensityDiagnostics {
    double hermiticity_error; // max |rho - rho^dag|
    double trace_error;       // |tr rho - 1|
    double min_eigenvalue;
};

DensityDiagnostics diagnose(const Matrix& rho);

Matrix hermitian_part(const Matrix& m);

// (1/2) || a - b ||_1 for hermitian arguments.
double trace_distance(const Matrix& a, const Matrix& b);

} // namespace kerrchain
