// spectral.hpp: physics read off exact spectra
//
// Bare-state labelling of eigenstates, oscillator frequency conditioned on a
// qubit state, two-qubit reduced states and their concurrence, and the
// scaling of the frame-transformation remainder.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dispersive/error.hpp"
#include "dispersive/formulas.hpp"
#include "dispersive/linalg.hpp"
#include "dispersive/model.hpp"
#include "dispersive/operator.hpp"
#include "dispersive/system.hpp"

namespace dispersive {

using BranchLabel = BasisState;

/// Compact label, e.g. "d:1" or "ud:0".
inline std::string label_string(const BranchLabel& l) {
    std::string s;
    for (Spin sp : l.spins) s += sp == Spin::Up ? 'u' : 'd';
    return s + ":" + std::to_string(l.fock);
}

struct BranchAssignment {
    BranchLabel label;
    double energy = 0.0;
    /// Weight of the bare state in the eigenspace (summed over a degenerate cluster).
    double overlap = 0.0;
    std::size_t eigen_index = 0;
    /// The label is not among the eigenspace's own best candidates.
    bool contested = false;
};

struct BranchClassification {
    std::vector<BranchAssignment> states;  // ascending energy
    double min_overlap = 1.0;
    std::size_t contested = 0;
    bool reliable = true;

    const BranchAssignment* find(const BranchLabel& l) const {
        for (const auto& s : states)
            if (s.label == l) return &s;
        return nullptr;
    }
};

inline constexpr double kDefaultMinOverlap = 0.5;

/// Labels the lowest `count` eigenstates by maximal weight on bare product
/// states. Eigenvalues closer than 1e-10 (relative) form one cluster whose
/// projector is used instead of individual vectors. Labels are handed out
/// greedily in descending weight; each label is used at most once. The
/// result is unreliable if any assigned weight is <= min_overlap.
inline BranchClassification classify_branches(const EigenDecomposition& decomp,
                                              const BasisSpec& basis, std::size_t count,
                                              double min_overlap = kDefaultMinOverlap) {
    const std::size_t dim = decomp.dimension();
    if (dim != basis.dimension()) throw BasisMismatch("decomposition does not match basis");
    count = std::min(count, dim);
    BranchClassification out;
    if (count == 0) return out;

    const Eigen::VectorXd& e = decomp.eigenvalues;
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * scale;

    struct Cluster {
        std::size_t first;
        std::size_t size;
    };
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < count;) {
        std::size_t j = i + 1;
        while (j < dim && e(static_cast<Eigen::Index>(j)) - e(static_cast<Eigen::Index>(j - 1)) <= tol) ++j;
        clusters.push_back({i, j - i});
        i = j;
    }

    // weights(c, b): weight of bare state b in cluster c
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(clusters.size()),
                                                    static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t k = 0; k < clusters[c].size; ++k)
            weights.row(static_cast<Eigen::Index>(c)) +=
                decomp.eigenvectors.col(static_cast<Eigen::Index>(clusters[c].first + k))
                    .cwiseAbs2()
                    .transpose();

    std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
    candidates.reserve(clusters.size() * dim);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t b = 0; b < dim; ++b)
            candidates.emplace_back(weights(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(b)), c, b);
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
        if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
        if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
        return std::get<2>(x) < std::get<2>(y);
    });

    // the k-th best weight of each cluster, k = cluster size
    std::vector<double> own_cut(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const Eigen::VectorXd r = weights.row(static_cast<Eigen::Index>(c)).transpose();
        std::vector<double> row(r.data(), r.data() + r.size());
        std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(clusters[c].size - 1),
                         row.end(), std::greater<>());
        own_cut[c] = row[clusters[c].size - 1];
    }

    std::vector<std::size_t> filled(clusters.size(), 0);
    std::vector<bool> taken(dim, false);
    std::vector<std::vector<std::pair<std::size_t, double>>> picks(clusters.size());
    std::size_t remaining = 0;
    for (const auto& c : clusters) remaining += c.size;
    for (const auto& [w, c, b] : candidates) {
        if (remaining == 0) break;
        if (taken[b] || filled[c] == clusters[c].size) continue;
        taken[b] = true;
        ++filled[c];
        --remaining;
        picks[c].emplace_back(b, w);
    }

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t k = 0; k < picks[c].size(); ++k) {
            const auto [b, w] = picks[c][k];
            BranchAssignment a;
            a.label = basis.decode(b);
            a.eigen_index = clusters[c].first + k;
            a.energy = e(static_cast<Eigen::Index>(a.eigen_index));
            a.overlap = w;
            a.contested = w < own_cut[c];
            out.min_overlap = std::min(out.min_overlap, w);
            if (a.contested) ++out.contested;
            out.states.push_back(std::move(a));
        }
    }
    out.reliable = out.min_overlap > min_overlap;
    return out;
}

/// How the Fock cutoff is chosen for spectral quantities.
struct CutoffPolicy {
    bool automatic = false;
    std::size_t step = 10;
    std::size_t cap = 200;
    double tolerance = 1e-9;
};

/// Evaluates `f` at spec.fock_cutoff, or, when automatic, raises the cutoff
/// in steps until every returned value moves by less than the tolerance on
/// the next step. Returns the values and the cutoff they belong to.
template <class F>
auto with_converged_cutoff(const SystemSpec& spec, const CutoffPolicy& policy, F&& f)
    -> std::pair<std::vector<double>, std::size_t> {
    if (!policy.automatic) return {f(spec), spec.fock_cutoff};
    std::size_t n = spec.fock_cutoff;
    std::vector<double> cur = f(with_cutoff(spec, n));
    while (n + policy.step <= policy.cap) {
        std::vector<double> next = f(with_cutoff(spec, n + policy.step));
        if (next.size() != cur.size()) throw InvalidArgument("cutoff probe changed result size");
        double change = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) change = std::max(change, std::abs(next[i] - cur[i]));
        if (change < policy.tolerance) return {cur, n};
        n += policy.step;
        cur = std::move(next);
    }
    throw ConvergenceError("fock cutoff did not converge below cap " + std::to_string(policy.cap));
}

struct NumericShift {
    double frequency = 0.0;  // E(spin, 1) - E(spin, 0)
    double energy0 = 0.0;
    double energy1 = 0.0;
    double min_overlap = 0.0;
    std::size_t fock_cutoff = 0;
};

namespace detail {

inline NumericShift numeric_shift_at(const SystemSpec& spec, Spin spin, double min_overlap) {
    const Operator h = build_hamiltonian(spec, ModelKind::FullRabi);
    const EigenDecomposition dec = eig_sym(h);
    const BasisSpec basis = spec.basis();
    const BranchClassification cls = classify_branches(dec, basis, basis.dimension(), min_overlap);
    const BranchAssignment* s0 = cls.find({{spin}, 0});
    const BranchAssignment* s1 = cls.find({{spin}, 1});
    if (s0 == nullptr || s1 == nullptr)
        throw ClassificationError(std::string("no eigenstate labelled ") + to_string(spin));
    NumericShift out;
    out.energy0 = s0->energy;
    out.energy1 = s1->energy;
    out.frequency = s1->energy - s0->energy;
    out.min_overlap = std::min(s0->overlap, s1->overlap);
    out.fock_cutoff = spec.fock_cutoff;
    if (!(out.min_overlap > min_overlap))
        throw ClassificationError("branch overlap " + std::to_string(out.min_overlap) +
                                  " too low for a " + to_string(spin) + " label");
    return out;
}

}  // namespace detail

/// Oscillator frequency with the qubit in `spin`: the splitting between the
/// exact eigenstates labelled |spin, 0> and |spin, 1> in the full Rabi model.
inline NumericShift numeric_shift(const SystemSpec& spec, Spin spin, const CutoffPolicy& policy = {},
                                  double min_overlap = kDefaultMinOverlap) {
    if (spec.n_qubits() != 1) throw InvalidArgument("numeric_shift is defined for one qubit");
    spec.validate();
    std::vector<NumericShift> probes;
    const std::size_t n = with_converged_cutoff(spec, policy, [&](const SystemSpec& s) {
                              probes.push_back(detail::numeric_shift_at(s, spin, min_overlap));
                              return std::vector<double>{probes.back().energy0, probes.back().energy1};
                          }).second;
    for (const auto& p : probes)
        if (p.fock_cutoff == n) return p;
    throw ConvergenceError("accepted cutoff has no evaluation");
}

/// Real symmetric two-qubit density matrix over |uu>, |ud>, |du>, |dd>.
class TwoQubitState {
public:
    explicit TwoQubitState(const Eigen::Matrix4d& rho) : rho_(rho) {
        if (!rho_.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
        if ((rho_ - rho_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidArgument("density matrix is not symmetric");
        rho_ = 0.5 * (rho_ + rho_.transpose()).eval();
        if (std::abs(rho_.trace() - 1.0) > 1e-10) throw InvalidArgument("density matrix trace is not 1");
        const auto dec = eig_sym(Eigen::MatrixXd(rho_));
        if (dec.eigenvalues(0) < -1e-10) throw InvalidArgument("density matrix is not positive semidefinite");
    }

    const Eigen::Matrix4d& matrix() const noexcept { return rho_; }
    double operator()(int i, int j) const { return rho_(i, j); }

private:
    Eigen::Matrix4d rho_;
};

/// Partial trace of a two-qubit-plus-oscillator pure state over the oscillator.
inline TwoQubitState reduced_two_qubit_state(const Eigen::VectorXd& psi, const BasisSpec& basis) {
    if (basis.n_qubits() != 2) throw InvalidArgument("reduced_two_qubit_state needs exactly two qubits");
    if (static_cast<std::size_t>(psi.size()) != basis.dimension())
        throw BasisMismatch("state vector does not match basis");
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-8) throw InvalidArgument("state vector is not normalised");
    const auto n = static_cast<Eigen::Index>(basis.fock_cutoff());
    // psi reshaped as 4 x N: row = qubit configuration, column = Fock level
    Eigen::MatrixXd m(4, n);
    for (Eigen::Index q = 0; q < 4; ++q) m.row(q) = psi.segment(q * n, n).transpose();
    return TwoQubitState(m * m.transpose());
}

/// Wootters concurrence. With rho real, sqrt of the eigenvalues of
/// rho (sy x sy) rho (sy x sy) are the absolute eigenvalues of
/// sqrt(rho) (sy x sy) sqrt(rho).
inline double concurrence(const TwoQubitState& state) {
    Eigen::Matrix4d flip;
    flip << 0, 0, 0, -1,
            0, 0, 1, 0,
            0, 1, 0, 0,
           -1, 0, 0, 0;
    const auto dec = eig_sym(Eigen::MatrixXd(state.matrix()));
    const Eigen::VectorXd roots = dec.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd sqrt_rho = dec.eigenvectors * roots.asDiagonal() * dec.eigenvectors.transpose();
    const Eigen::MatrixXd b = sqrt_rho * flip * sqrt_rho;
    Eigen::VectorXd s = eig_sym(0.5 * (b + b.transpose())).eigenvalues.cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<>());
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXd vector;
    /// Gap to the first excited state; zero means the ground state is degenerate.
    double gap = 0.0;
};

inline GroundState ground_state(const SystemSpec& spec, ModelKind kind) {
    const EigenDecomposition dec = eig_sym(build_hamiltonian(spec, kind));
    GroundState g;
    g.energy = dec.eigenvalues(0);
    g.vector = dec.eigenvectors.col(0);
    g.gap = dec.dimension() > 1 ? dec.eigenvalues(1) - dec.eigenvalues(0) : 0.0;
    return g;
}

struct FrameResidual {
    double residual = 0.0;       // at the spec's couplings
    double residual_half = 0.0;  // at half the couplings
    /// log2(residual / residual_half); about 3 for a correct second-order frame.
    double scaling_exponent = std::numeric_limits<double>::quiet_NaN();
};

/// Fock levels excluded at the top of the space when comparing frames.
inline constexpr std::size_t kResidualEdgeMargin = 3;

/// max-norm distance between D^T H D and the effective Hamiltonian on the
/// Fock levels n <= N - 4, after restoring the dropped c-number.
inline double frame_distance(const SystemSpec& spec, bool rwa_only) {
    spec.validate();
    spec.require_detuned();
    if (spec.fock_cutoff <= kResidualEdgeMargin + 1) throw InvalidArgument("fock cutoff too small for residual");
    const ModelKind exact = rwa_only ? ModelKind::TavisCummingsRWA : ModelKind::FullRabi;
    const ModelKind effective = rwa_only ? ModelKind::DispersiveRWA : ModelKind::DispersiveNonRWA;
    const Operator transformed = transform_frame(build_hamiltonian(spec, exact), build_generator(spec, rwa_only));
    const BasisSpec basis = spec.basis();
    const Eigen::MatrixXd diff = transformed.matrix() - build_hamiltonian(spec, effective).matrix() -
                                 energy_offset(spec, rwa_only) * identity(basis).matrix();
    return max_abs_on(diff, interior_indices(basis, spec.fock_cutoff - 1 - kResidualEdgeMargin));
}

inline FrameResidual frame_residual(const SystemSpec& spec, bool rwa_only = false) {
    FrameResidual r;
    r.residual = frame_distance(spec, rwa_only);
    r.residual_half = frame_distance(with_scaled_couplings(spec, 0.5), rwa_only);
    if (r.residual > 0.0 && r.residual_half > 0.0) r.scaling_exponent = std::log2(r.residual / r.residual_half);
    return r;
}

}  // namespace dispersive
