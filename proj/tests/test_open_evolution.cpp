#include <doctest.h>

#include <cmath>

#include "kerrchain/closed_evolution.hpp"
#include "kerrchain/errors.hpp"
#include "kerrchain/open_evolution.hpp"
#include "oracles.hpp"

using namespace kerrchain;

namespace {

SystemParams damped(DampingKind kind, double kappa_over_alpha, double delta_over_alpha = 0.0)
{
    SystemParams p;
    p.alpha = 0.001;
    p.epsilon = resonant_epsilon(p.alpha, Branch::minus);
    p.delta = delta_over_alpha * p.alpha;
    p.damping = kind;
    p.set_uniform_kappa(kappa_over_alpha * p.alpha);
    return p;
}

DensityMatrix vacuum_rho(const HilbertSpace& space) { return DensityMatrix::from_pure(vacuum_state(space)); }

} // namespace

TEST_SUITE("open")
{
    TEST_CASE("rate conventions")
    {
        SystemParams p = damped(DampingKind::amplitude, 1.0);
        p.kappa = {0.1, 0.2, 0.3};
        CHECK(jump_rate(p, 2) == doctest::Approx(0.4));
        p.rate_convention = RateConvention::literal;
        CHECK(jump_rate(p, 2) == doctest::Approx(0.2));
        p.damping = DampingKind::phase;
        CHECK(jump_rate(p, 3) == doctest::Approx(0.3));
        p.rate_convention = RateConvention::reference;
        CHECK(jump_rate(p, 3) == doctest::Approx(0.3));
        p.damping = DampingKind::none;
        CHECK(jump_rate(p, 1) == 0.0);
    }

    TEST_CASE("generator jump operators")
    {
        const HilbertSpace space(1);
        SystemParams p = damped(DampingKind::amplitude, 1.0);
        p.kappa[1] = 0.0;
        const LindbladGenerator gen = make_generator(space, p);
        REQUIRE(gen.jumps.size() == 2);
        CHECK(gen.jumps[0].mode == 1);
        CHECK(gen.jumps[1].mode == 3);
        CHECK((gen.jumps[0].op - mode_operator(space, 1, OperatorKind::annihilation).matrix).norm() == 0.0);
        CHECK(gen.max_rate() == doctest::Approx(2.0 * p.kappa[0]));

        p.damping = DampingKind::phase;
        const LindbladGenerator phase = make_generator(space, p);
        CHECK((phase.jumps[1].op - mode_operator(space, 3, OperatorKind::number).matrix).norm() == 0.0);

        p.damping = DampingKind::none;
        CHECK(make_generator(space, p).jumps.empty());
    }

    TEST_CASE("superoperator agrees with the commutator form")
    {
        oracle::Random rng(31);
        for (int draw = 0; draw < 100; ++draw) {
            const int n_max = rng.integer(1, 2);
            const HilbertSpace space(n_max);
            const SystemParams p = rng.params(draw % 2 ? DampingKind::amplitude : DampingKind::phase);
            const LindbladGenerator gen = make_generator(space, p);
            const Matrix rho = rng.density(space.total_dim());
            const Matrix direct = lindblad_rhs(gen, rho);
            const Matrix via_super = unvectorize(liouvillian(gen) * vectorize(rho), space.total_dim());
            CHECK((direct - via_super).cwiseAbs().maxCoeff() < 1e-15 + 1e-12 * direct.cwiseAbs().maxCoeff());
            // trace and hermiticity preserved by the generator itself
            CHECK(std::abs(direct.trace()) < 1e-14);
            CHECK((direct - direct.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        }
    }

    TEST_CASE("propagation keeps trace, hermiticity and positivity")
    {
        oracle::Random rng(32);
        for (int draw = 0; draw < 100; ++draw) {
            const HilbertSpace space(1);
            const SystemParams p = rng.params(draw % 2 ? DampingKind::amplitude : DampingKind::phase);
            const LindbladGenerator gen = make_generator(space, p);
            const DensityMatrix rho0 = DensityMatrix::full(space, rng.density(8));
            std::vector<double> grid;
            for (int i = 1; i <= 4; ++i) grid.push_back(i * rng.uniform(0.1, 1.0) * slow_period(p));
            std::sort(grid.begin(), grid.end());
            for (const auto& rho : propagate_lindblad(gen, rho0, grid)) {
                const DensityDiagnostics d = diagnose(rho.matrix);
                CHECK(d.trace_error <= 1e-8);
                CHECK(d.hermiticity_error == 0.0);
                CHECK(d.min_eigenvalue > -1e-10);
            }
        }
    }

    TEST_CASE("undamped Lindblad evolution is the pure closed-form evolution")
    {
        const HilbertSpace space(1);
        const SystemParams p = damped(DampingKind::none, 0.0);
        const double t = 0.37 * resonant_period(p.alpha, Branch::minus);
        const auto out = propagate_lindblad(make_generator(space, p), vacuum_rho(space), {t});
        const Matrix expected = DensityMatrix::from_pure(NqsSolution::from(p).state(t)).matrix;
        CHECK((out.front().matrix - expected).cwiseAbs().maxCoeff() < 1e-6);
    }

    TEST_CASE("steady state residual over random parameters")
    {
        oracle::Random rng(33);
        for (int draw = 0; draw < 100; ++draw) {
            const SystemParams p = rng.params(DampingKind::amplitude);
            const LindbladGenerator gen = make_generator(build_space(1), p);
            const DensityMatrix rho = steady_state(gen);
            CHECK(steady_state_residual(gen, rho) <= 1e-10);
            const DensityDiagnostics d = diagnose(rho.matrix);
            CHECK(d.trace_error < 1e-12);
            CHECK(d.min_eigenvalue > -1e-10);
        }
    }

    TEST_CASE("steady state is the long-time limit of amplitude damping")
    {
        const HilbertSpace space(1);
        const SystemParams p = damped(DampingKind::amplitude, 0.1);
        const LindbladGenerator gen = make_generator(space, p);
        const DensityMatrix late = propagate_lindblad(gen, vacuum_rho(space), {50.0 / p.kappa[0]}).front();
        CHECK(trace_distance(late.matrix, steady_state(gen).matrix) < 1e-6);
    }

    TEST_CASE("steady state of a two-photon cutoff")
    {
        const LindbladGenerator gen = make_generator(build_space(2), damped(DampingKind::amplitude, 1.0));
        CHECK(steady_state_residual(gen, steady_state(gen)) <= 1e-10);
    }

    TEST_CASE("undamped generator has a degenerate null space")
    {
        const LindbladGenerator gen = make_generator(build_space(1), damped(DampingKind::none, 0.0));
        CHECK_THROWS_AS(steady_state(gen), NumericalError);
    }

    TEST_CASE("phase damping spreads the population evenly")
    {
        const HilbertSpace space(1);
        const SystemParams p = damped(DampingKind::phase, 0.1);
        const auto rho = propagate_lindblad(make_generator(space, p), vacuum_rho(space), {50.0 / p.kappa[0]}).front();
        for (Index i = 0; i < 8; ++i) CHECK(std::abs(rho.matrix(i, i).real() - 0.125) < 1e-3);
    }

    TEST_CASE("invalid inputs")
    {
        const HilbertSpace space(1);
        const LindbladGenerator gen = make_generator(space, damped(DampingKind::amplitude, 1.0));
        Matrix bad = Matrix::Identity(8, 8);
        CHECK_THROWS_AS(propagate_lindblad(gen, DensityMatrix::full(space, bad), {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(propagate_lindblad(gen, vacuum_rho(build_space(2)), {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(propagate_lindblad(gen, vacuum_rho(space), {2.0, 1.0}), std::invalid_argument);

        LindbladOptions coarse;
        coarse.step = 2.0e4; // h * rate = 40, far outside the stability region
        CHECK_THROWS_AS(propagate_lindblad(gen, vacuum_rho(space), {1e6}, coarse), NumericalError);
    }
}
