#include "kerrchain/rk4.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrchain {

LinearRk4::LinearRk4(Matrix generator, double max_step)
    : generator_(std::move(generator)), max_step_(max_step)
{
    if (generator_.rows() != generator_.cols()) throw std::invalid_argument("generator must be square");
    if (!(max_step_ > 0.0) || !std::isfinite(max_step_)) throw std::invalid_argument("max_step must be positive");
}

long LinearRk4::steps_for(double dt) const
{
    if (dt < 0.0) throw std::invalid_argument("time grid must be non-decreasing");
    if (dt == 0.0) return 0;
    // the small slack keeps dt = k * max_step from rounding up to k+1 steps
    return std::max(1L, static_cast<long>(std::ceil(dt / max_step_ * (1.0 - 1e-12))));
}

Matrix LinearRk4::step_matrix(const Matrix& generator, double h)
{
    const Index n = generator.rows();
    const Matrix ha = h * generator;
    const Matrix id = Matrix::Identity(n, n);
    // Horner form of the degree-4 Taylor polynomial
    Matrix p = id + ha / 4.0;
    p = id + (ha * p) / 3.0;
    p = id + (ha * p) / 2.0;
    return id + ha * p;
}

double LinearRk4::norm_bound(const Matrix& generator)
{
    return generator.cwiseAbs().rowwise().sum().maxCoeff();
}

Vector LinearRk4::advance(const Vector& y, double dt)
{
    const long steps = steps_for(dt);
    if (steps == 0) return y;
    const double h = dt / static_cast<double>(steps);

    // uniform output grids give intervals that differ only in the last bits
    if (steps != cached_steps_ || std::abs(h - cached_h_) > 1e-12 * h) {
        Matrix base = step_matrix(generator_, h);
        Matrix result = Matrix::Identity(generator_.rows(), generator_.cols());
        bool first = true;
        for (long k = steps; k > 0; k >>= 1) {
            if (k & 1L) {
                result = first ? base : Matrix(result * base);
                first = false;
            }
            if (k > 1) base = base * base;
        }
        cached_propagator_ = std::move(result);
        cached_steps_ = steps;
        cached_h_ = h;
    }
    return cached_propagator_ * y;
}

} // namespace kerrchain
