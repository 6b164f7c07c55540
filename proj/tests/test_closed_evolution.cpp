#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kerrchain/closed_evolution.hpp"
#include "kerrchain/entanglement.hpp"
#include "kerrchain/errors.hpp"
#include "kerrchain/rk4.hpp"
#include "oracles.hpp"

using namespace kerrchain;

namespace {

SystemParams resonant(double alpha, Branch branch, double delta = 0.0)
{
    SystemParams p;
    p.alpha = alpha;
    p.epsilon = resonant_epsilon(alpha, branch);
    p.delta = delta;
    return p;
}

double max_diff(const std::array<complex, 8>& a, const Vector& b)
{
    double d = 0.0;
    for (Index i = 0; i < 8; ++i) d = std::max(d, std::abs(a[static_cast<std::size_t>(i)] - b(i)));
    return d;
}

} // namespace

TEST_SUITE("closed")
{
    TEST_CASE("resonant couplings and periods at alpha = 0.001")
    {
        // 30-digit reference evaluation of 12 alpha / (10 +- sqrt 28) and sqrt(5 +- sqrt 7) pi / (2 alpha)
        CHECK(resonant_epsilon(0.001, Branch::plus) == doctest::Approx(7.8474956297846980e-4).epsilon(1e-14));
        CHECK(resonant_epsilon(0.001, Branch::minus) == doctest::Approx(2.5485837703548635e-3).epsilon(1e-14));
        CHECK(resonant_period(0.001, Branch::plus) == doctest::Approx(4343.4013396564511).epsilon(1e-14));
        CHECK(resonant_period(0.001, Branch::minus) == doctest::Approx(2410.1609501014538).epsilon(1e-14));
        CHECK_THROWS_AS(resonant_epsilon(0.0, Branch::plus), std::invalid_argument);
    }

    TEST_CASE("frequency ratio is two on both resonant branches")
    {
        oracle::Random rng(21);
        for (int draw = 0; draw < 100; ++draw) {
            const double alpha = rng.log_uniform(1e-5, 1.0);
            for (Branch b : {Branch::plus, Branch::minus}) {
                CHECK(std::abs(frequency_ratio(alpha, resonant_epsilon(alpha, b)) - 2.0) <= 1e-12);
                CHECK(resonant_period(alpha, b) == doctest::Approx(slow_period(resonant(alpha, b))).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("frequency ratio rises to 1 + sqrt 2 at alpha/epsilon = 1/sqrt 2 and falls after")
    {
        const double peak = 1.0 / std::numbers::sqrt2;
        CHECK(frequency_ratio(0.0, 1.0) == doctest::Approx(1.0));
        CHECK(frequency_ratio(peak, 1.0) == doctest::Approx(1.0 + std::numbers::sqrt2).epsilon(1e-12));
        double last = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double r = peak * i / 200.0;
            const double ratio = frequency_ratio(r, 1.0);
            CHECK(ratio >= last);
            CHECK(ratio <= 1.0 + std::numbers::sqrt2 + 1e-12);
            last = ratio;
        }
        for (int i = 1; i <= 200; ++i) {
            const double r = peak + (10.0 - peak) * i / 200.0;
            const double ratio = frequency_ratio(r, 1.0);
            CHECK(ratio <= last);
            CHECK(ratio >= 1.0);
            last = ratio;
        }
        CHECK_THROWS_AS(frequency_ratio(0.0, 0.0), std::invalid_argument);
    }

    TEST_CASE("closed form matches spectral propagation of the qubit hamiltonian")
    {
        oracle::Random rng(22);
        for (int draw = 0; draw < 100; ++draw) {
            const SystemParams p = rng.params();
            const Matrix h = oracle::hamiltonian(1, p);
            const double t = rng.uniform(0.0, 3.0) * slow_period(p);
            CHECK(max_diff(nqs_amplitudes(p, t), oracle::evolve_vacuum(h, t)) < 1e-10);
        }
    }

    TEST_CASE("closed form at t = 0, without pump, and for tiny times")
    {
        SystemParams p = resonant(0.001, Branch::minus);
        auto c = nqs_amplitudes(p, 0.0);
        CHECK(c[0] == complex{1.0, 0.0});
        for (std::size_t i = 1; i < 8; ++i) CHECK(std::abs(c[i]) == 0.0);

        p.alpha = 0.0;
        c = nqs_amplitudes(p, 123.0);
        CHECK(std::abs(c[0]) == doctest::Approx(1.0));
        CHECK(slow_period(SystemParams{}) == std::numeric_limits<double>::infinity());

        // series branch of the sinc terms against the oracle
        p = resonant(0.001, Branch::plus);
        const double t = 1e-4;
        CHECK(max_diff(nqs_amplitudes(p, t), oracle::evolve_vacuum(oracle::hamiltonian(1, p), t)) < 1e-14);
    }

    TEST_CASE("closed form keeps the norm and the 1-3 symmetry")
    {
        oracle::Random rng(23);
        for (int draw = 0; draw < 100; ++draw) {
            const SystemParams p = rng.params();
            const PureState s = NqsSolution::from(p).state(rng.uniform(0.0, 10.0) * slow_period(p));
            CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(s.amplitudes(1) - s.amplitudes(4)) < 1e-12); // C001 = C100
            CHECK(std::abs(s.amplitudes(3) - s.amplitudes(6)) < 1e-12); // C011 = C110
        }
    }

    TEST_CASE("resonant evolution returns to vacuum after one period")
    {
        for (Branch b : {Branch::plus, Branch::minus}) {
            const SystemParams p = resonant(0.001, b);
            CHECK(std::abs(nqs_amplitudes(p, resonant_period(0.001, b))[0]) >= 1.0 - 1e-12);
        }
    }

    TEST_CASE("minus branch state at half period")
    {
        // expm reference: ((3+r)|000> - (1+r)|010> + (1+r)|101> + (5-r)|111>)/8, r = sqrt 7
        const double r = std::sqrt(7.0);
        const SystemParams p = resonant(0.001, Branch::minus);
        const auto c = nqs_amplitudes(p, 0.5 * resonant_period(0.001, Branch::minus));
        const std::array<double, 8> expected{(3 + r) / 8, 0, -(1 + r) / 8, 0, 0, (1 + r) / 8, 0, (5 - r) / 8};
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(c[i] - expected[i]) < 1e-10);

        // GHZ fidelity 0.5 beats the best product-state fidelity 7/16
        const DensityMatrix rho = DensityMatrix::from_pure(NqsSolution::from(p).state(0.5 * resonant_period(0.001, Branch::minus)));
        CHECK(state_fidelity(rho, find_target("ghz_p")) == doctest::Approx(0.5).epsilon(1e-9));
        double best_product = 0.0;
        for (const char* label : {"prod_2p_13p", "prod_2p_13m", "prod_2m_13p", "prod_2m_13m"}) {
            best_product = std::max(best_product, state_fidelity(rho, find_target(label)));
        }
        CHECK(best_product == doctest::Approx(7.0 / 16.0).epsilon(1e-9));
    }

    TEST_CASE("Schrodinger propagation on the qubit space reproduces the closed form")
    {
        oracle::Random rng(24);
        for (int draw = 0; draw < 5; ++draw) {
            const SystemParams p = rng.params();
            std::vector<double> grid;
            for (int i = 0; i < 20; ++i) grid.push_back(rng.uniform(0.0, 2.0) * slow_period(p));
            std::sort(grid.begin(), grid.end());
            const auto states = propagate_schrodinger(build_space(1), p, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(max_diff(nqs_amplitudes(p, grid[i]), states[i].amplitudes) < 1e-6);
            }
        }
    }

    TEST_CASE("larger cutoff matches the spectral oracle")
    {
        SystemParams p = resonant(0.05, Branch::plus);
        const Matrix h = oracle::hamiltonian(3, p);
        const std::vector<double> grid{0.0, 10.0, 40.0, 41.0};
        const auto states = propagate_schrodinger(build_space(3), p, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK((states[i].amplitudes - oracle::evolve_vacuum(h, grid[i])).norm() < 1e-8);
        }
    }

    TEST_CASE("propagation errors")
    {
        const SystemParams p = resonant(0.001, Branch::plus);
        CHECK_THROWS_AS(propagate_schrodinger(build_space(1), p, {1.0, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(propagate_schrodinger(build_space(1), p, {-1.0}), std::invalid_argument);
        SchrodingerOptions coarse;
        coarse.step = 5000.0; // far outside the RK4 stability region for |E| ~ alpha
        CHECK_THROWS_AS(propagate_schrodinger(build_space(2), p, {1e6}, coarse), NumericalError);
    }

    TEST_CASE("RK4 powering equals the explicit step loop")
    {
        oracle::Random rng(25);
        for (int draw = 0; draw < 20; ++draw) {
            Matrix a(6, 6);
            for (Index i = 0; i < 6; ++i)
                for (Index j = 0; j < 6; ++j) a(i, j) = rng.gaussian();
            const double h = 0.01;
            const long n = rng.integer(1, 300);
            Vector y(6);
            for (Index i = 0; i < 6; ++i) y(i) = rng.gaussian();

            Vector loop = y;
            for (long k = 0; k < n; ++k) {
                const Vector k1 = a * loop;
                const Vector k2 = a * (loop + 0.5 * h * k1);
                const Vector k3 = a * (loop + 0.5 * h * k2);
                const Vector k4 = a * (loop + h * k3);
                loop += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            LinearRk4 stepper(a, h);
            CHECK(stepper.steps_for(n * h) == n);
            CHECK((stepper.advance(y, n * h) - loop).norm() <= 1e-10 * std::max(1.0, loop.norm()));
        }
        LinearRk4 stepper(Matrix::Identity(2, 2), 0.1);
        CHECK(stepper.steps_for(0.0) == 0);
        CHECK(stepper.steps_for(0.25) == 3);
        CHECK_THROWS_AS(LinearRk4(Matrix::Identity(2, 2), 0.0), std::invalid_argument);
    }
}
