#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dispersive/model.hpp"
#include "dispersive/operator.hpp"

using namespace dispersive;

namespace {

double interior_distance(const Operator& a, const Operator& b, std::size_t max_level) {
    return max_abs_on(a.matrix() - b.matrix(), interior_indices(a.basis(), max_level));
}

}  // namespace

TEST(Basis, DimensionAndIndexRoundTrip) {
    const BasisSpec b(3, 5);
    EXPECT_EQ(b.dimension(), 40u);
    for (std::size_t i = 0; i < b.dimension(); ++i) EXPECT_EQ(b.index(b.decode(i)), i);
    // qubit 0 slowest, Fock fastest
    EXPECT_EQ(b.index({{Spin::Down, Spin::Up, Spin::Up}, 0}), 20u);
    EXPECT_EQ(b.index({{Spin::Up, Spin::Up, Spin::Down}, 3}), 8u);
    EXPECT_THROW(b.index({{Spin::Up}, 0}), InvalidArgument);
    EXPECT_THROW(b.index({{Spin::Up, Spin::Up, Spin::Up}, 5}), InvalidArgument);
}

TEST(Annihilator, TwoLevelOscillator) {
    const Operator a = annihilator(BasisSpec(0, 2));
    Eigen::Matrix2d expected;
    expected << 0, 1, 0, 0;
    EXPECT_EQ(a.matrix(), Eigen::MatrixXd(expected));
}

TEST(Annihilator, LadderElementsAndVacuum) {
    const BasisSpec b(0, 3);
    const Operator a = annihilator(b);
    EXPECT_DOUBLE_EQ(a(1, 2), std::sqrt(2.0));
    EXPECT_NEAR(a(1, 2), 1.41421356, 1e-8);
    Eigen::VectorXd vac = Eigen::VectorXd::Zero(3);
    vac(0) = 1.0;
    EXPECT_EQ((a.matrix() * vac).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Annihilator, IdentityOnQubitFactor) {
    const BasisSpec b(1, 4);
    const Operator a = annihilator(b);
    EXPECT_EQ(a.matrix().block(0, 4, 4, 4).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(a.matrix().block(0, 0, 4, 4), a.matrix().block(4, 4, 4, 4));
}

TEST(Number, DiagonalZeroToCutoff) {
    for (std::size_t n : {2u, 5u, 17u}) {
        const BasisSpec b(2, n);
        const Operator num = number(b);
        const Operator via_ladders = creator(b) * annihilator(b);
        EXPECT_LE((num.matrix() - via_ladders.matrix()).cwiseAbs().maxCoeff(), 1e-13);
        for (std::size_t i = 0; i < b.dimension(); ++i) EXPECT_EQ(num(i, i), static_cast<double>(i % n));
    }
}

TEST(Pauli, SigmaZSingleQubit) {
    const Operator z = pauli(BasisSpec(1, 1), 0, PauliAxis::Z);
    Eigen::Matrix2d expected;
    expected << 1, 0, 0, -1;
    EXPECT_EQ(z.matrix(), Eigen::MatrixXd(expected));
}

TEST(Pauli, LadderActsOnSpinStates) {
    const Operator plus = pauli(BasisSpec(1, 1), 0, PauliAxis::Plus);
    const Eigen::Vector2d up(1, 0), down(0, 1);
    EXPECT_EQ(Eigen::Vector2d(plus.matrix() * down), up);
    EXPECT_EQ(Eigen::Vector2d(plus.matrix() * up), Eigen::Vector2d::Zero());
    const Operator minus = pauli(BasisSpec(1, 1), 0, PauliAxis::Minus);
    EXPECT_EQ(Eigen::Vector2d(minus.matrix() * up), down);
}

TEST(Pauli, SigmaXOnSecondQubitIsInvolution) {
    const BasisSpec b(2, 2);
    const Operator x = pauli(b, 1, PauliAxis::X);
    EXPECT_EQ((x * x).matrix(), identity(b).matrix());
    // |u u n> <-> |u d n>: indices 0 <-> 2, 1 <-> 3
    EXPECT_EQ(x(0, 2), 1.0);
    EXPECT_EQ(x(1, 3), 1.0);
    EXPECT_EQ(x(0, 4), 0.0);
    EXPECT_EQ(x(4, 6), 1.0);
}

TEST(Pauli, LoneSigmaYRejected) {
    try {
        (void)pauli(BasisSpec(1, 2), 0, PauliAxis::Y);
        FAIL() << "expected rejection";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("complex operator unsupported"), std::string::npos);
    }
}

TEST(Pauli, QubitIndexOutOfRange) {
    EXPECT_THROW((void)pauli(BasisSpec(2, 2), 2, PauliAxis::Z), InvalidArgument);
}

TEST(Pauli, DifferentQubitsCommute) {
    const BasisSpec b(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (PauliAxis ax : {PauliAxis::X, PauliAxis::Z, PauliAxis::Plus}) {
                if (i == j) continue;
                const Operator c = commutator(pauli(b, i, ax), pauli(b, j, PauliAxis::Z));
                EXPECT_EQ(c.matrix().cwiseAbs().maxCoeff(), 0.0);
            }
}

TEST(Commutator, SelfCommutatorVanishes) {
    const BasisSpec b(1, 6);
    const Operator h = build_hamiltonian(single_qubit(1.5, 1.0, 0.05, 6), ModelKind::FullRabi);
    EXPECT_EQ(commutator(h, h).matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Commutator, BasisMismatchThrows) {
    EXPECT_THROW((void)commutator(number(BasisSpec(1, 3)), number(BasisSpec(1, 4))), BasisMismatch);
}

TEST(Commutator, CanonicalOnInterior) {
    const std::size_t n = 20;
    const BasisSpec b(1, n);
    const Operator c = commutator(annihilator(b), creator(b));
    EXPECT_LE(interior_distance(c, identity(b), n - 2), 1e-13);
    // top level corrupted by truncation: [a, a'] = 1 - N |N-1><N-1|
    EXPECT_NEAR(c(n - 1, n - 1), 1.0 - static_cast<double>(n), 1e-13);
}

TEST(Commutator, CounterRotatingRelations) {
    const std::size_t n = 20;
    const BasisSpec b(1, n);
    const double eps = 1.0;
    const double omega = 1.0;
    const Operator h0 = 0.5 * eps * pauli(b, 0, PauliAxis::Z) + omega * number(b);
    const Operator yp = counter_rotating(b, 0, Sign::Plus);
    const Operator ym = counter_rotating(b, 0, Sign::Minus);
    const Operator sz = pauli(b, 0, PauliAxis::Z);
    const Operator num = number(b);
    const Operator one = identity(b);

    EXPECT_LE(interior_distance(commutator(h0, ym), -(eps + omega) * yp, n - 2), 1e-12);
    EXPECT_LE(interior_distance(commutator(yp, ym), sz * (2.0 * num + one) - one, n - 2), 1e-12);

    const Operator a = annihilator(b);
    const Operator ad = creator(b);
    const Operator squeeze = sz * (a * a + ad * ad);
    const Operator xp = co_rotating(b, 0, Sign::Plus);
    const Operator xm = co_rotating(b, 0, Sign::Minus);
    EXPECT_LE(interior_distance(commutator(yp, xm), squeeze, n - 2), 1e-12);
    EXPECT_LE(interior_distance(commutator(xp, ym), squeeze, n - 2), 1e-12);
}

TEST(Commutator, CoRotatingRelations) {
    const std::size_t n = 20;
    const BasisSpec b(1, n);
    for (double eps : {0.3, 1.5, 2.7}) {
        const double omega = 1.0;
        const Operator h0 = 0.5 * eps * pauli(b, 0, PauliAxis::Z) + omega * number(b);
        const Operator xp = co_rotating(b, 0, Sign::Plus);
        const Operator xm = co_rotating(b, 0, Sign::Minus);
        EXPECT_LE(interior_distance(commutator(h0, xm), -(eps - omega) * xp, n - 2), 1e-12);
    }
    // the additive constant works out to +1
    const Operator sz = pauli(b, 0, PauliAxis::Z);
    const Operator one = identity(b);
    EXPECT_LE(interior_distance(commutator(co_rotating(b, 0, Sign::Plus), co_rotating(b, 0, Sign::Minus)),
                                sz * (2.0 * number(b) + one) + one, n - 2),
              1e-12);
}

TEST(ApplyComposite, CancellationAndScaling) {
    const BasisSpec b(1, 3);
    const Operator x = pauli(b, 0, PauliAxis::X);
    const Operator zero = apply_composite({{1.0, x}, {-1.0, x}});
    EXPECT_EQ(zero.matrix().cwiseAbs().maxCoeff(), 0.0);
    const Operator half = apply_composite({{0.5, x}, {0.5, Operator::zero(b)}});
    EXPECT_EQ(half.matrix(), (0.5 * x).matrix());
    EXPECT_TRUE(half.is_symmetric());
}

TEST(ApplyComposite, Errors) {
    EXPECT_THROW((void)apply_composite({}), InvalidArgument);
    EXPECT_THROW((void)apply_composite({{1.0, number(BasisSpec(1, 2))}, {1.0, number(BasisSpec(1, 3))}}),
                 BasisMismatch);
}

TEST(ApplyComposite, CoRotatingFromPartsMatchesHandMatrix) {
    const BasisSpec b(1, 2);
    const Operator xp = apply_composite({{1.0, pauli(b, 0, PauliAxis::Minus) * creator(b)},
                                         {1.0, pauli(b, 0, PauliAxis::Plus) * annihilator(b)}});
    // order |u0>, |u1>, |d0>, |d1>; X+ couples |u0> <-> |d1> only
    Eigen::Matrix4d hand = Eigen::Matrix4d::Zero();
    hand(3, 0) = 1.0;
    hand(0, 3) = 1.0;
    EXPECT_EQ(xp.matrix(), Eigen::MatrixXd(hand));
    EXPECT_EQ(xp.matrix(), co_rotating(b, 0, Sign::Plus).matrix());
    EXPECT_EQ(xp.symmetry(), Symmetry::Symmetric);
}

TEST(Symmetry, BuildingBlocksAreRealWithExpectedSymmetry) {
    const BasisSpec b(2, 7);
    for (std::size_t q = 0; q < 2; ++q) {
        EXPECT_TRUE(pauli(b, q, PauliAxis::X).is_symmetric());
        EXPECT_TRUE(pauli(b, q, PauliAxis::Z).is_symmetric());
        EXPECT_TRUE(co_rotating(b, q, Sign::Plus).is_symmetric());
        EXPECT_TRUE(counter_rotating(b, q, Sign::Plus).is_symmetric());
        EXPECT_EQ(co_rotating(b, q, Sign::Minus).symmetry(), Symmetry::Antisymmetric);
        EXPECT_EQ(counter_rotating(b, q, Sign::Minus).symmetry(), Symmetry::Antisymmetric);
    }
    EXPECT_TRUE(quadrature(b).is_symmetric());
    EXPECT_EQ(annihilator(b).symmetry(), Symmetry::General);
}

TEST(Symmetry, RandomGeneratorCombinationsStayAntisymmetric) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const BasisSpec b(2, 6);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator g = u(rng) * co_rotating(b, 0, Sign::Minus) + u(rng) * counter_rotating(b, 0, Sign::Minus) +
                           u(rng) * co_rotating(b, 1, Sign::Minus) + u(rng) * counter_rotating(b, 1, Sign::Minus);
        EXPECT_TRUE(g.is_antisymmetric());
    }
}

TEST(Operator, DimensionMismatchRejected) {
    EXPECT_THROW(Operator(BasisSpec(1, 3), Eigen::MatrixXd::Zero(5, 5)), BasisMismatch);
    EXPECT_THROW((void)(number(BasisSpec(1, 3)) + number(BasisSpec(2, 3))), BasisMismatch);
}

TEST(Interior, IndicesKeepAllQubitStates) {
    const BasisSpec b(1, 5);
    const auto idx = interior_indices(b, 2);
    EXPECT_EQ(idx, (std::vector<std::size_t>{0, 1, 2, 5, 6, 7}));
    EXPECT_EQ(max_abs_on(number(b).matrix(), idx), 2.0);
}
