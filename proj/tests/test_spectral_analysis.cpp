#include <cmath>

#include <gtest/gtest.h>

#include "dispersive/spectral.hpp"

using namespace dispersive;

namespace {

SystemSpec identical_pair(double eps, double g, std::size_t n) {
    SystemSpec s;
    s.qubits = {{eps, g}, {eps, g}};
    s.fock_cutoff = n;
    return s;
}

BranchClassification classify(const SystemSpec& s, std::size_t count) {
    return classify_branches(eig_sym(build_hamiltonian(s, ModelKind::FullRabi)), s.basis(), count);
}

// |uu>, |ud>, |du>, |dd> amplitudes of a vacuum-only state
Eigen::VectorXd vacuum_state(const BasisSpec& b, const Eigen::Vector4d& q) {
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dimension()));
    for (int k = 0; k < 4; ++k) psi(static_cast<Eigen::Index>(k * b.fock_cutoff())) = q(k);
    return psi;
}

// Frozen from the independent element-wise numpy diagonalisation.
constexpr double kShiftDown15 = 0.9940714915032863;  // eps 1.5, g 0.05, N 30
constexpr double kShiftUp15 = 1.005787264576786;

}  // namespace

TEST(Classify, UncoupledLabelsAreExact) {
    const SystemSpec s = single_qubit(1.5, 1.0, 0.0, 8);
    const auto c = classify(s, 16);
    EXPECT_TRUE(c.reliable);
    EXPECT_EQ(c.min_overlap, 1.0);
    ASSERT_EQ(c.states.size(), 16u);
    EXPECT_EQ(c.states[0].label, (BranchLabel{{Spin::Down}, 0}));
    EXPECT_EQ(c.states[1].label, (BranchLabel{{Spin::Down}, 1}));
    EXPECT_EQ(c.states[2].label, (BranchLabel{{Spin::Up}, 0}));
    EXPECT_EQ(label_string(c.states[2].label), "u:0");
}

TEST(Classify, DispersiveGroundState) {
    const auto c = classify(single_qubit(1.5, 1.0, 0.05, 30), 10);
    EXPECT_EQ(c.states[0].label, (BranchLabel{{Spin::Down}, 0}));
    EXPECT_GT(c.states[0].overlap, 0.99);
    EXPECT_TRUE(c.reliable);
}

TEST(Classify, ResonanceSplitsDoubletEvenly) {
    // counter-rotating terms tilt the doublet slightly off 50/50
    const SystemSpec s = single_qubit(1.0, 1.0, 0.05, 30);
    const auto d = eig_sym(build_hamiltonian(s, ModelKind::FullRabi));
    const auto c = classify_branches(d, s.basis(), 6);
    EXPECT_GT(c.min_overlap, 0.5);
    EXPECT_LT(c.min_overlap, 0.52);
    EXPECT_FALSE(classify_branches(d, s.basis(), 6, 0.9).reliable);
    EXPECT_TRUE(classify_branches(eig_sym(build_hamiltonian(single_qubit(1.5, 1.0, 0.05, 30), ModelKind::FullRabi)),
                                  s.basis(), 6, 0.9)
                    .reliable);
}

TEST(Classify, NearResonanceMixesAvoidedCrossing) {
    // tan(2 theta) = 2 g / Delta = 2: the (d,1)/(u,0) pair shares weight 0.72 / 0.28
    const auto c = classify(single_qubit(1.05, 1.0, 0.05, 30), 6);
    const BranchAssignment* d1 = c.find({{Spin::Down}, 1});
    ASSERT_NE(d1, nullptr);
    EXPECT_LT(d1->overlap, 0.8);
    EXPECT_GT(d1->overlap, 0.5);
    EXPECT_NEAR(d1->overlap, 0.5 * (1 + 1 / std::sqrt(5.0)), 1e-2);
}

TEST(Classify, OverlapGrowsAsCouplingShrinks) {
    double prev = 0.0;
    for (double g : {1e-1, 1e-2, 1e-3}) {
        const auto c = classify(single_qubit(1.5, 1.0, g, 20), 8);
        EXPECT_GT(c.min_overlap, prev) << g;
        prev = c.min_overlap;
    }
}

TEST(Classify, DegenerateClustersAtZeroSplitting) {
    const auto c = classify(single_qubit(0.0, 1.0, 0.1, 40), 10);
    EXPECT_TRUE(c.reliable);
    EXPECT_NE(c.find({{Spin::Down}, 0}), nullptr);
    EXPECT_NE(c.find({{Spin::Up}, 0}), nullptr);
}

TEST(Classify, BasisMismatch) {
    const auto d = eig_sym(build_hamiltonian(single_qubit(1.5, 1.0, 0.05, 5), ModelKind::FullRabi));
    EXPECT_THROW((void)classify_branches(d, BasisSpec(1, 6), 4), BasisMismatch);
}

TEST(NumericShift, ZeroCouplingGivesOmega) {
    for (Spin spin : {Spin::Up, Spin::Down}) {
        EXPECT_EQ(numeric_shift(single_qubit(1.5, 1.0, 0.0, 10), spin).frequency, 1.0);
        EXPECT_NEAR(numeric_shift(single_qubit(1.5, 1.3, 0.0, 10), spin).frequency, 1.3, 1e-15);
    }
}

TEST(NumericShift, DisplacedOscillatorIsHarmonic) {
    const auto r = numeric_shift(single_qubit(0.0, 1.0, 0.1, 60), Spin::Down);
    EXPECT_NEAR(r.frequency, 1.0, 1e-8);
    EXPECT_NEAR(r.frequency, 0.9999999999999912, 1e-12);
}

TEST(NumericShift, RedDetunedAgreesWithClosedForm) {
    const auto down = numeric_shift(single_qubit(1.5, 1.0, 0.05, 30), Spin::Down);
    const auto up = numeric_shift(single_qubit(1.5, 1.0, 0.05, 30), Spin::Up);
    EXPECT_NEAR(down.frequency, 0.994, 1e-3);
    EXPECT_NEAR(down.frequency, kShiftDown15, 1e-12);
    EXPECT_NEAR(up.frequency, kShiftUp15, 1e-12);
    EXPECT_EQ(down.fock_cutoff, 30u);
    EXPECT_GT(down.min_overlap, 0.98);
}

TEST(NumericShift, FrozenWeakAndStrongCouplingGrid) {
    const double eps[] = {0.5, 0.7, 1.3, 1.5, 2.0};
    const double weak[] = {1.0008316025768533, 1.001705507016485, 0.997663322209627, 0.9985045477080856,
                           0.9991673599673455};
    const double strong[] = {1.0129094746106004, 1.025205569143774, 0.9661802385612537, 0.9770705524845715,
                             0.9868399018420294};
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(numeric_shift(single_qubit(eps[i], 1.0, 0.025, 60), Spin::Down).frequency, weak[i], 1e-11);
        EXPECT_NEAR(numeric_shift(single_qubit(eps[i], 1.0, 0.1, 60), Spin::Down).frequency, strong[i], 1e-11);
    }
}

TEST(NumericShift, MirrorAsymmetryIsFourthOrder) {
    auto asym = [](double g) {
        const SystemSpec s = single_qubit(1.5, 1.0, g, 30);
        return numeric_shift(s, Spin::Up).frequency + numeric_shift(s, Spin::Down).frequency - 2.0;
    };
    const double r = asym(0.04) / asym(0.02);
    EXPECT_GT(r, 12.0);
    EXPECT_LT(r, 20.0);
}

TEST(NumericShift, AutomaticCutoffConverges) {
    CutoffPolicy p;
    p.automatic = true;
    const auto r = numeric_shift(single_qubit(1.5, 1.0, 0.05, 10), Spin::Down, p);
    EXPECT_GE(r.fock_cutoff, 10u);
    EXPECT_LE(r.fock_cutoff, 200u);
    EXPECT_NEAR(r.frequency, kShiftDown15, 1e-9);
}

TEST(NumericShift, AutomaticCutoffCapRaises) {
    CutoffPolicy p;
    p.automatic = true;
    p.cap = 12;
    p.step = 2;
    p.tolerance = 1e-300;
    EXPECT_THROW((void)numeric_shift(single_qubit(2.0, 1.0, 0.4, 4), Spin::Down, p), ConvergenceError);
}

TEST(NumericShift, ResonanceFailsStrictClassification) {
    EXPECT_THROW((void)numeric_shift(single_qubit(1.0, 1.0, 0.1, 30), Spin::Down, {}, 0.9), ClassificationError);
    EXPECT_NO_THROW((void)numeric_shift(single_qubit(1.5, 1.0, 0.1, 30), Spin::Down, {}, 0.9));
}

TEST(NumericShift, NeedsOneQubit) {
    EXPECT_THROW((void)numeric_shift(identical_pair(1.5, 0.05, 5), Spin::Down), InvalidArgument);
}

TEST(ReducedState, ProductVacuum) {
    const BasisSpec b(2, 5);
    const TwoQubitState rho = reduced_two_qubit_state(vacuum_state(b, {0, 0, 0, 1}), b);
    Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
    expected(3, 3) = 1.0;
    EXPECT_EQ(rho.matrix(), expected);
    EXPECT_EQ(concurrence(rho), 0.0);
}

TEST(ReducedState, SchmidtFormVacuum) {
    const double c = 0.3;
    const BasisSpec b(2, 4);
    const TwoQubitState rho = reduced_two_qubit_state(vacuum_state(b, Eigen::Vector4d(-c, 0, 0, 1) / std::sqrt(1 + c * c)), b);
    EXPECT_NEAR(rho(0, 3), -c / (1 + c * c), 1e-15);
    EXPECT_NEAR(rho(3, 3), 1 / (1 + c * c), 1e-15);
    EXPECT_NEAR((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(ReducedState, OscillatorEntanglementMixes) {
    // (|dd,0> + |uu,1>)/sqrt2 -> diag(1/2, 0, 0, 1/2)
    const BasisSpec b(2, 3);
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(12);
    psi(b.index({{Spin::Down, Spin::Down}, 0})) = std::sqrt(0.5);
    psi(b.index({{Spin::Up, Spin::Up}, 1})) = std::sqrt(0.5);
    const TwoQubitState rho = reduced_two_qubit_state(psi, b);
    EXPECT_NEAR(rho(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(rho(3, 3), 0.5, 1e-15);
    EXPECT_EQ(rho(0, 3), 0.0);
    EXPECT_EQ(concurrence(rho), 0.0);
}

TEST(ReducedState, Errors) {
    EXPECT_THROW((void)reduced_two_qubit_state(Eigen::VectorXd::Zero(6), BasisSpec(1, 3)), InvalidArgument);
    EXPECT_THROW((void)reduced_two_qubit_state(Eigen::VectorXd::Zero(6), BasisSpec(2, 3)), BasisMismatch);
    EXPECT_THROW((void)reduced_two_qubit_state(Eigen::VectorXd::Zero(12), BasisSpec(2, 3)), InvalidArgument);
}

TEST(TwoQubitStateCheck, RejectsInvalid) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity() * 0.25;
    EXPECT_NO_THROW(TwoQubitState{m});
    Eigen::Matrix4d bad_trace = m * 2;
    EXPECT_THROW(TwoQubitState{bad_trace}, InvalidArgument);
    Eigen::Matrix4d asym = m;
    asym(0, 1) = 0.1;
    EXPECT_THROW(TwoQubitState{asym}, InvalidArgument);
    Eigen::Matrix4d neg = Eigen::Vector4d(0.6, 0.6, 0.0, -0.2).asDiagonal();
    EXPECT_THROW(TwoQubitState{neg}, InvalidArgument);
}

TEST(Concurrence, BellStateIsMaximal) {
    const Eigen::Vector4d v = Eigen::Vector4d(1, 0, 0, 1) / std::sqrt(2.0);
    EXPECT_NEAR(concurrence(TwoQubitState(v * v.transpose())), 1.0, 1e-14);
    const Eigen::Vector4d w = Eigen::Vector4d(0, 1, -1, 0) / std::sqrt(2.0);
    EXPECT_NEAR(concurrence(TwoQubitState(w * w.transpose())), 1.0, 1e-14);
}

TEST(Concurrence, ProductStatesVanish) {
    const Eigen::Vector2d a(0.6, 0.8), b(std::sqrt(0.5), -std::sqrt(0.5));
    Eigen::Vector4d v;
    v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    EXPECT_NEAR(concurrence(TwoQubitState(v * v.transpose())), 0.0, 1e-14);
    EXPECT_EQ(concurrence(TwoQubitState(Eigen::Matrix4d::Identity() * 0.25)), 0.0);
}

TEST(Concurrence, SchmidtPairIsTwoAlphaBeta) {
    const double beta = 0.008 / 3.0;
    const double alpha = std::sqrt(1 - beta * beta);
    const Eigen::Vector4d v(-beta, 0, 0, alpha);
    const double c = concurrence(TwoQubitState(v * v.transpose()));
    EXPECT_NEAR(c, 2 * alpha * beta, 1e-12);
    EXPECT_NEAR(c, 0.005333314370336658, 1e-12);
}

TEST(Concurrence, InvariantUnderLocalSignFlips) {
    const Eigen::Vector4d v = Eigen::Vector4d(0.3, 0.1, -0.2, 0.9).normalized();
    const double c = concurrence(TwoQubitState(v * v.transpose()));
    const Eigen::Vector4d z1 = Eigen::Vector4d(1, 1, -1, -1).cwiseProduct(v);  // sz on qubit 1
    const Eigen::Vector4d x2(v(1), v(0), v(3), v(2));                          // sx on qubit 2
    EXPECT_NEAR(concurrence(TwoQubitState(z1 * z1.transpose())), c, 1e-13);
    EXPECT_NEAR(concurrence(TwoQubitState(x2 * x2.transpose())), c, 1e-13);
    EXPECT_NEAR(c, 2 * std::abs(v(0) * v(3) - v(1) * v(2)), 1e-13);
}

TEST(GroundState, TwoQubitRabiNearlyProduct) {
    const SystemSpec s = identical_pair(1.5, 0.05, 20);
    const GroundState gs = ground_state(s, ModelKind::FullRabi);
    const TwoQubitState rho = reduced_two_qubit_state(gs.vector, s.basis());
    EXPECT_NEAR(rho(3, 3), 0.9991955906559442, 1e-10);
    EXPECT_GT(rho(3, 3), 0.99);
    EXPECT_NEAR(gs.energy, -1.5020053508841547, 1e-12);
    EXPECT_NEAR(concurrence(rho), 0.0005329019205069951, 1e-9);
    EXPECT_GT(gs.gap, 0.0);
}

TEST(GroundState, IsingModelEntangles) {
    const SystemSpec s = identical_pair(1.5, 0.05, 20);
    const GroundState gs = ground_state(s, ModelKind::DispersiveNonRWA);
    const double c = concurrence(reduced_two_qubit_state(gs.vector, s.basis()));
    const double jbar = coupling_matrix(s, false)(0, 1);
    EXPECT_NEAR(c, jbar / 1.5, 0.25 * jbar / 1.5);
}

TEST(GroundState, XyModelStaysProduct) {
    const SystemSpec s = identical_pair(1.5, 0.05, 20);
    const GroundState gs = ground_state(s, ModelKind::DispersiveRWA);
    EXPECT_LE(concurrence(reduced_two_qubit_state(gs.vector, s.basis())), 1e-9);
}

TEST(FrameResidual, ZeroCouplingVanishes) {
    const auto r = frame_residual(single_qubit(1.5, 1.0, 0.0, 10));
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_TRUE(std::isnan(r.scaling_exponent));
}

TEST(FrameResidual, ThirdOrderScalingBothChains) {
    for (bool rwa : {true, false}) {
        const auto r = frame_residual(single_qubit(1.5, 1.0, 0.05, 40), rwa);
        EXPECT_GE(r.scaling_exponent, 2.5) << rwa;
        EXPECT_LE(r.scaling_exponent, 3.5) << rwa;
        EXPECT_LT(r.residual_half, r.residual);
    }
}

TEST(FrameResidual, TooSmallCutoff) {
    EXPECT_THROW((void)frame_residual(single_qubit(1.5, 1.0, 0.05, 4)), InvalidArgument);
}
