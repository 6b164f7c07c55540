#include "kerrchain/closed_evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kerrchain/errors.hpp"
#include "kerrchain/rk4.hpp"

namespace kerrchain {

namespace {

constexpr complex kI{0.0, 1.0};

// sin(w t) / w with the w -> 0 limit taken explicitly
double sinc_t(double omega, double t)
{
    const double x = omega * t;
    if (std::abs(x) < 1e-6) return t * (1.0 - x * x / 6.0);
    return std::sin(x) / omega;
}

void check_grid(const std::vector<double>& t_grid)
{
    double previous = 0.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < previous) {
            throw std::invalid_argument("time grid must be finite, non-negative and non-decreasing");
        }
        previous = t;
    }
}

} // namespace

std::string_view to_string(Branch branch) { return branch == Branch::plus ? "plus" : "minus"; }

NqsSolution NqsSolution::from(const SystemParams& params)
{
    params.validate();
    const double a = params.alpha;
    const double e = params.coupling();
    NqsSolution s{};
    s.alpha = a;
    s.epsilon = e;
    s.omega1 = std::sqrt(4 * a * a + 4 * a * e + 2 * e * e);
    s.omega2 = std::sqrt(4 * a * a - 4 * a * e + 2 * e * e);
    s.a1 = 2 * a * a - 2 * a * e + e * e;
    s.a2 = 2 * a * a + 2 * a * e + e * e;
    s.a3 = 2 * a * a * a - a * e * e + e * e * e;
    s.a4 = -2 * a * a * a + a * e * e + e * e * e;
    s.a5 = 2 * a * a * a - a * e * e - e * e * e;
    return s;
}

std::array<complex, 8> NqsSolution::amplitudes(double t) const
{
    const double a = alpha;
    const double e = epsilon;
    const double denom = 8 * a * a * a * a + 2 * e * e * e * e;
    if (denom == 0.0) return {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

    const double c1 = std::cos(omega1 * t);
    const double c2 = std::cos(omega2 * t);
    const double s1 = sinc_t(omega1, t);
    const double s2 = sinc_t(omega2, t);

    const complex c000 = (4 * a * a * a * a - 2 * a * a * e * e + 2 * e * e * e * e + a * a * (a1 * c1 + a2 * c2)) / denom;
    const complex c001 = -kI * a / 2.0 * (s1 + s2);
    const complex c010 = a / denom * (-2 * e * e * e + a3 * c1 + a4 * c2);
    const complex c011 = -kI * a / 2.0 * (s1 - s2);
    const complex c101 = a / denom * (-4 * a * a * a + 2 * a * e * e + a3 * c1 + a5 * c2);
    const complex c111 = a * a / denom * (4 * a * e + a1 * c1 - a2 * c2);
    return {c000, c001, c010, c011, c001, c101, c011, c111};
}

PureState NqsSolution::state(double t) const
{
    const auto c = amplitudes(t);
    PureState s{HilbertSpace(1), Vector(8)};
    // the amplitude order matches the mode-1-major basis of the n_max = 1 space
    for (Index i = 0; i < 8; ++i) s.amplitudes(i) = c[static_cast<std::size_t>(i)];
    return s;
}

std::array<complex, 8> nqs_amplitudes(const SystemParams& params, double t)
{
    return NqsSolution::from(params).amplitudes(t);
}

double frequency_ratio(double alpha, double epsilon)
{
    SystemParams p;
    p.alpha = alpha;
    p.epsilon = epsilon;
    const NqsSolution s = NqsSolution::from(p);
    if (s.omega2 == 0.0) throw std::invalid_argument("frequency_ratio: omega2 vanishes");
    return s.omega1 / s.omega2;
}

double resonant_epsilon(double alpha, Branch branch)
{
    if (!(alpha > 0.0)) throw std::invalid_argument("resonant_epsilon: alpha must be positive");
    const double root = std::sqrt(28.0);
    return 12.0 * alpha / (branch == Branch::plus ? 10.0 + root : 10.0 - root);
}

double resonant_period(double alpha, Branch branch)
{
    if (!(alpha > 0.0)) throw std::invalid_argument("resonant_period: alpha must be positive");
    const double root = std::sqrt(7.0);
    return std::sqrt(branch == Branch::plus ? 5.0 + root : 5.0 - root) * std::numbers::pi / (2.0 * alpha);
}

double slow_period(const SystemParams& params)
{
    const NqsSolution s = NqsSolution::from(params);
    const double slow = std::min(s.omega1, s.omega2);
    if (slow == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::numbers::pi / slow;
}

double default_schrodinger_step(const Matrix& hamiltonian, const SystemParams& params)
{
    double step = slow_period(params) / 20000.0;
    const double bound = LinearRk4::norm_bound(hamiltonian);
    if (bound > 0.0) step = std::min(step, 1.0 / bound);
    if (!std::isfinite(step)) step = 1.0;
    return step;
}

std::vector<PureState> propagate_schrodinger(const HilbertSpace& space, const SystemParams& params,
                                             const std::vector<double>& t_grid,
                                             const SchrodingerOptions& options)
{
    check_grid(t_grid);
    const Matrix h = build_hamiltonian(space, params);
    const double step = options.step.value_or(default_schrodinger_step(h, params));
    LinearRk4 stepper(complex{0.0, -1.0} * h, step);

    std::vector<PureState> out;
    out.reserve(t_grid.size());
    Vector psi = vacuum_state(space).amplitudes;
    double now = 0.0;
    for (double t : t_grid) {
        psi = stepper.advance(psi, t - now);
        now = t;
        const double drift = std::abs(psi.squaredNorm() - 1.0);
        if (!(drift <= options.norm_tolerance)) { // also catches NaN from overflow
            throw NumericalError("Schrodinger propagation: norm drift " + std::to_string(drift) +
                                 " at t = " + std::to_string(t) + " exceeds tolerance; reduce the step");
        }
        out.push_back(PureState{space, psi});
    }
    return out;
}

} // namespace kerrchain
