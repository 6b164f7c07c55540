// rk4.hpp: fixed-step classical Runge-Kutta for dy/dt = A y with constant A

#pragma once

#include "kerrchain/hilbert.hpp"

namespace kerrchain {

// For a constant generator A one RK4 step of size h is exactly the matrix
// polynomial P(hA) = I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24, so n steps
// are P(hA)^n. The stepper forms that power by repeated squaring and caches
// it for the most recent (n, h), h matched to 1e-12 relative, which makes
// uniform output grids cheap.
class LinearRk4 {
public:
    LinearRk4(Matrix generator, double max_step);

    double max_step() const { return max_step_; }
    const Matrix& generator() const { return generator_; }

    // Number of equal steps used to cover an interval of length dt.
    long steps_for(double dt) const;

    // y(t + dt) from y(t), using steps_for(dt) equal steps of size dt/n.
    Vector advance(const Vector& y, double dt);

    // One RK4 step matrix P(hA).
    static Matrix step_matrix(const Matrix& generator, double h);

    // Largest absolute row sum of A; 1/‖A‖ bounds a step that stays well
    // inside the RK4 stability region.
    static double norm_bound(const Matrix& generator);

private:
    Matrix generator_;
    double max_step_;
    long cached_steps_ = 0;
    double cached_h_ = 0.0;
    Matrix cached_propagator_;
};

} // namespace kerrchain
