// Independent reference implementations and random generators for the tests.
// Nothing here calls the code under test except for plain data types.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kerrchain/hilbert.hpp"
#include "kerrchain/states.hpp"

namespace oracle {

using kerrchain::complex;
using kerrchain::Index;
using kerrchain::Matrix;
using kerrchain::Vector;

inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out = Matrix::Zero(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// single-mode annihilation on d levels
inline Matrix lower(Index d)
{
    Matrix a = Matrix::Zero(d, d);
    for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// a_mode embedded as I (x) ... (x) a (x) ... with mode 1 leftmost
inline Matrix embedded_lower(Index d, int mode)
{
    const Matrix id = Matrix::Identity(d, d);
    const Matrix a = lower(d);
    return kron(kron(mode == 1 ? a : id, mode == 2 ? a : id), mode == 3 ? a : id);
}

inline Matrix hamiltonian(int n_max, const kerrchain::SystemParams& p)
{
    const Index d = n_max + 1;
    const Matrix a1 = embedded_lower(d, 1), a2 = embedded_lower(d, 2), a3 = embedded_lower(d, 3);
    Matrix h = Matrix::Zero(d * d * d, d * d * d);
    for (const Matrix* a : {&a1, &a2, &a3}) {
        const Matrix ad = a->adjoint();
        h += 0.5 * p.chi * ad * ad * (*a) * (*a);
    }
    const double g = p.epsilon + p.delta;
    h += g * (a1.adjoint() * a2 + a2.adjoint() * a1 + a2.adjoint() * a3 + a3.adjoint() * a2);
    h += p.alpha * (a1.adjoint() + a1 + a3.adjoint() + a3);
    return h;
}

// exp(-i H t) |000> by spectral decomposition of hermitian H
inline Vector evolve_vacuum(const Matrix& h, double t)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(h.rows());
    for (Index i = 0; i < h.rows(); ++i) phases(i) = std::exp(complex(0.0, -es.eigenvalues()(i) * t));
    Vector psi0 = Vector::Zero(h.rows());
    psi0(0) = 1.0;
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * psi0;
}

// Partial transpose of a three-mode matrix (common mode dimension d) on the
// modes flagged in `flip`, by explicit six-index relabelling.
inline Matrix partial_transpose(const Matrix& rho, Index d, std::array<bool, 3> flip)
{
    Matrix out(rho.rows(), rho.cols());
    auto idx = [d](Index i, Index j, Index k) { return (i * d + j) * d + k; };
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k)
                for (Index ip = 0; ip < d; ++ip)
                    for (Index jp = 0; jp < d; ++jp)
                        for (Index kp = 0; kp < d; ++kp) {
                            const Index r[3] = {flip[0] ? ip : i, flip[1] ? jp : j, flip[2] ? kp : k};
                            const Index c[3] = {flip[0] ? i : ip, flip[1] ? j : jp, flip[2] ? k : kp};
                            out(idx(r[0], r[1], r[2]), idx(c[0], c[1], c[2])) = rho(idx(i, j, k), idx(ip, jp, kp));
                        }
    return out;
}

// Partial trace of a three-mode matrix over one mode (1, 2 or 3).
inline Matrix trace_out(const Matrix& rho, Index d, int mode)
{
    Matrix out = Matrix::Zero(d * d, d * d);
    auto idx = [d](Index i, Index j, Index k) { return (i * d + j) * d + k; };
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y)
            for (Index xp = 0; xp < d; ++xp)
                for (Index yp = 0; yp < d; ++yp)
                    for (Index s = 0; s < d; ++s) {
                        complex v;
                        if (mode == 1) v = rho(idx(s, x, y), idx(s, xp, yp));
                        else if (mode == 2) v = rho(idx(x, s, y), idx(xp, s, yp));
                        else v = rho(idx(x, y, s), idx(xp, yp, s));
                        out(x * d + y, xp * d + yp) += v;
                    }
    return out;
}

// 2 * sum |negative eigenvalues| using the general (non-hermitian) solver.
inline double negativity_brute(const Matrix& pt)
{
    Eigen::ComplexEigenSolver<Matrix> es(pt, false);
    double sum = 0.0;
    for (Index i = 0; i < pt.rows(); ++i) {
        const double re = es.eigenvalues()(i).real();
        if (re < 0.0) sum -= re;
    }
    return 2.0 * sum;
}

// Pure-state negativity across a bipartition from Schmidt coefficients:
// ||rho^T||_1 - 1 = (sum_i s_i)^2 - 1. `psi` is reshaped as rows(A) x cols(B).
inline double schmidt_negativity(const Vector& psi, Index rows, Index cols)
{
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = psi(r * cols + c);
    const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    return s.sum() * s.sum() - 1.0;
}

// Bring the chosen mode to the front of a three-mode pure state.
inline Vector mode_first(const Vector& psi, Index d, int mode)
{
    Vector out(psi.size());
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k) {
                const Index src = (i * d + j) * d + k;
                const Index dst = mode == 1 ? src : mode == 2 ? (j * d + i) * d + k : (k * d + i) * d + j;
                out(dst) = psi(src);
            }
    return out;
}

class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    complex gaussian()
    {
        std::normal_distribution<double> n(0.0, 1.0);
        return {n(engine_), n(engine_)};
    }

    Vector state(Index dim)
    {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) v(i) = gaussian();
        return v / v.norm();
    }

    // Ginibre-distributed mixed state of the given rank
    Matrix density(Index dim, Index rank)
    {
        Matrix g(dim, rank);
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < rank; ++j) g(i, j) = gaussian();
        Matrix rho = g * g.adjoint();
        return rho / rho.trace();
    }

    Matrix density(Index dim) { return density(dim, integer(1, static_cast<int>(dim))); }

    kerrchain::SystemParams params(kerrchain::DampingKind damping = kerrchain::DampingKind::none)
    {
        kerrchain::SystemParams p;
        p.alpha = log_uniform(1e-4, 1e-1);
        p.epsilon = p.alpha * uniform(0.1, 5.0);
        p.delta = p.alpha * uniform(-1.0, 1.0);
        p.damping = damping;
        p.set_uniform_kappa(p.alpha * log_uniform(0.05, 10.0));
        return p;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace oracle
