#include <doctest.h>

#include "kerrchain/hilbert.hpp"
#include "oracles.hpp"

using namespace kerrchain;

TEST_SUITE("hilbert")
{
    TEST_CASE("space dimensions")
    {
        CHECK(build_space(1).total_dim() == 8);
        CHECK(build_space(2).total_dim() == 27);
        CHECK(build_space(9).total_dim() == 1000);
        CHECK(build_space(4).mode_dims() == std::array<Index, 3>{5, 5, 5});
        CHECK_THROWS_AS(build_space(0), std::invalid_argument);
        CHECK_THROWS_AS(build_space(-2), std::invalid_argument);
    }

    TEST_CASE("index map is a bijection with mode 1 slowest")
    {
        const HilbertSpace space(3);
        CHECK(space.index_of({0, 0, 1}) == 1);
        CHECK(space.index_of({0, 1, 0}) == 4);
        CHECK(space.index_of({1, 0, 0}) == 16);
        for (Index i = 0; i < space.total_dim(); ++i) CHECK(space.index_of(space.occupation_of(i)) == i);
        CHECK_FALSE(space.contains({4, 0, 0}));
        CHECK_FALSE(space.contains({0, -1, 0}));
        CHECK_THROWS(space.index_of({0, 0, 4}));
        CHECK_THROWS(space.occupation_of(64));
    }

    TEST_CASE("qubit annihilation operator")
    {
        const ModeOperator a = mode_operator(build_space(1), 1, OperatorKind::annihilation);
        CHECK(a.mode == 1);
        CHECK(a.kind == OperatorKind::annihilation);
        int nonzero = 0;
        for (Index r = 0; r < 8; ++r) {
            for (Index c = 0; c < 8; ++c) {
                if (a.matrix(r, c) != complex{}) {
                    ++nonzero;
                    CHECK(a.matrix(r, c) == complex{1.0, 0.0});
                }
            }
        }
        CHECK(nonzero == 4);
    }

    TEST_CASE("number operator on |110>")
    {
        const HilbertSpace space(1);
        const Matrix n2 = mode_operator(space, 2, OperatorKind::number).matrix;
        Vector ket = Vector::Zero(8);
        ket(space.index_of({1, 1, 0})) = 1.0;
        CHECK((n2 * ket - ket).norm() == doctest::Approx(0.0));
    }

    TEST_CASE("operators match Kronecker construction")
    {
        for (int n_max : {1, 2, 3}) {
            const HilbertSpace space(n_max);
            for (int mode = 1; mode <= 3; ++mode) {
                const Matrix a = oracle::embedded_lower(n_max + 1, mode);
                CHECK((mode_operator(space, mode, OperatorKind::annihilation).matrix - a).norm() == 0.0);
                CHECK((mode_operator(space, mode, OperatorKind::creation).matrix - a.adjoint()).norm() == 0.0);
                CHECK((mode_operator(space, mode, OperatorKind::number).matrix - a.adjoint() * a).norm() < 1e-14);
            }
        }
    }

    TEST_CASE("commutator fails only at the cutoff")
    {
        const int n_max = 3;
        const HilbertSpace space(n_max);
        const Matrix a = mode_operator(space, 2, OperatorKind::annihilation).matrix;
        const Matrix comm = a * a.adjoint() - a.adjoint() * a;
        for (Index i = 0; i < space.total_dim(); ++i) {
            const double expected = space.occupation_of(i).n2 == n_max ? -n_max : 1.0;
            CHECK(comm(i, i).real() == doctest::Approx(expected));
        }
    }

    TEST_CASE("invalid mode")
    {
        CHECK_THROWS_AS(mode_operator(build_space(1), 0, OperatorKind::number), std::invalid_argument);
        CHECK_THROWS_AS(mode_operator(build_space(1), 4, OperatorKind::number), std::invalid_argument);
    }

    TEST_CASE("hamiltonian matrix elements")
    {
        const HilbertSpace space(1);
        SystemParams p;
        p.alpha = 0.3;
        p.epsilon = 0.7;
        const Matrix h = build_hamiltonian(space, p);
        CHECK(h(space.index_of({1, 0, 0}), space.index_of({0, 1, 0})).real() == doctest::Approx(0.7));
        CHECK(h(space.index_of({0, 0, 0}), space.index_of({0, 0, 1})).real() == doctest::Approx(0.3));
        CHECK(h(space.index_of({0, 0, 0}), space.index_of({0, 1, 0})) == complex{});
        CHECK(h(space.index_of({1, 0, 0}), space.index_of({0, 0, 1})) == complex{});

        p.delta = -0.2;
        CHECK(build_hamiltonian(space, p)(space.index_of({0, 1, 0}), space.index_of({0, 0, 1})).real() ==
              doctest::Approx(0.5));
    }

    TEST_CASE("Kerr term vanishes on the qubit space")
    {
        SystemParams p;
        CHECK(build_hamiltonian(build_space(1), p).norm() == 0.0);
        const HilbertSpace space(2);
        const Matrix h = build_hamiltonian(space, p);
        CHECK(h(space.index_of({2, 0, 0}), space.index_of({2, 0, 0})).real() == doctest::Approx(1.0));
        CHECK(h(space.index_of({2, 2, 1}), space.index_of({2, 2, 1})).real() == doctest::Approx(2.0));
    }

    TEST_CASE("hamiltonian properties over random parameters")
    {
        oracle::Random rng(11);
        for (int draw = 0; draw < 100; ++draw) {
            const int n_max = rng.integer(1, 3);
            SystemParams p = rng.params();
            p.chi = rng.uniform(0.5, 2.0);
            const HilbertSpace space(n_max);
            const Matrix h = build_hamiltonian(space, p);
            CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
            CHECK((h - oracle::hamiltonian(n_max, p)).cwiseAbs().maxCoeff() < 1e-12);
            const Matrix swap = mode_swap_13(space);
            CHECK((swap * h * swap - h).cwiseAbs().maxCoeff() == 0.0);
            CHECK((swap * swap - Matrix::Identity(space.total_dim(), space.total_dim())).norm() == 0.0);
        }
    }

    TEST_CASE("parameter validation")
    {
        SystemParams p;
        CHECK_NOTHROW(p.validate());
        p.alpha = -1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.alpha = 1.0;
        p.chi = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.chi = 1.0;
        p.kappa[1] = -0.1;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }

    TEST_CASE("enum names")
    {
        for (auto k : {DampingKind::none, DampingKind::amplitude, DampingKind::phase}) {
            CHECK(damping_kind_from_string(to_string(k)) == k);
        }
        for (auto c : {RateConvention::literal, RateConvention::reference}) {
            CHECK(rate_convention_from_string(to_string(c)) == c);
        }
        CHECK_THROWS_AS(damping_kind_from_string("thermal"), std::invalid_argument);
    }
}
