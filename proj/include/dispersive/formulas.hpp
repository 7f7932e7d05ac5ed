// formulas.hpp: closed-form dispersive predictions
//
// Linearised oscillator shifts with and without the rotating-wave
// approximation, the unexpanded curvature form, effective qubit-qubit
// couplings and regime checks. Pure scalar code.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dispersive/error.hpp"
#include "dispersive/operator.hpp"
#include "dispersive/system.hpp"

namespace dispersive {

struct DispersiveParams {
    double lambda = 0.0;      // g / Delta
    double lambda_bar = 0.0;  // g / nu
    double n_crit = 0.0;      // 1 / (4 lambda^2); +inf when g = 0
};

/// 1/(4 lambda^2), evaluated as (1/(2 lambda))^2 so lambda = 0.1 gives exactly 25.
inline double critical_photons(double lambda) {
    const double r = 0.5 / lambda;
    return r * r;
}

inline DispersiveParams dispersive_params(double epsilon, double omega, double g) {
    const double delta = epsilon - omega;
    if (delta == 0.0) throw InvalidArgument("zero detuning: epsilon == omega");
    DispersiveParams p;
    p.lambda = g / delta;
    p.lambda_bar = g / (epsilon + omega);
    p.n_crit = p.lambda == 0.0 ? std::numeric_limits<double>::infinity() : critical_photons(p.lambda);
    return p;
}

/// Oscillator frequency conditioned on the qubit state.
struct ShiftPrediction {
    Spin spin = Spin::Down;
    double omega_bar_rwa = 0.0;     // omega +/- g^2/Delta
    double omega_bar_nonrwa = 0.0;  // omega +/- g^2 (1/Delta + 1/nu)
    /// omega sqrt(1 +/- (2 g^2/omega)(1/Delta + 1/nu)); empty when the radicand is negative.
    std::optional<double> omega_bar_sqrt;
};

inline ShiftPrediction shift_prediction(double epsilon, double omega, double g, Spin spin) {
    const double delta = epsilon - omega;
    const double nu = epsilon + omega;
    if (delta == 0.0) throw InvalidArgument("zero detuning: epsilon == omega");
    const double sz = sigma_z_value(spin);
    const double chi = 1.0 / delta + 1.0 / nu;

    ShiftPrediction out;
    out.spin = spin;
    out.omega_bar_rwa = omega + sz * g * g / delta;
    out.omega_bar_nonrwa = omega + sz * g * g * chi;
    const double radicand = 1.0 + sz * 2.0 * g * g / omega * chi;
    if (radicand >= 0.0) out.omega_bar_sqrt = omega * std::sqrt(radicand);
    return out;
}

/// Pairwise qubit-qubit couplings. rwa: g_j g_k (1/Delta_j + 1/Delta_k);
/// otherwise g_j g_k (1/Delta_j + 1/Delta_k - 1/nu_j - 1/nu_k). Zero diagonal.
inline Eigen::MatrixXd coupling_matrix(const SystemSpec& spec, bool rwa) {
    if (spec.n_qubits() < 2) throw InvalidArgument("coupling matrix needs at least two qubits");
    spec.require_detuned();
    const auto n = static_cast<Eigen::Index>(spec.n_qubits());
    Eigen::MatrixXd j_mat = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < spec.n_qubits(); ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            const double gg = spec.qubits[j].g * spec.qubits[k].g;
            double w = 1.0 / spec.detuning(j) + 1.0 / spec.detuning(k);
            if (!rwa) w -= 1.0 / spec.sum_frequency(j) + 1.0 / spec.sum_frequency(k);
            const auto a = static_cast<Eigen::Index>(j);
            const auto b = static_cast<Eigen::Index>(k);
            j_mat(a, b) = j_mat(b, a) = gg * w;
        }
    }
    return j_mat;
}

/// c-number generated by the second-order frame transformation but absent
/// from the printed effective Hamiltonians: sum_j g_j^2/(2 Delta_j) with RWA,
/// sum_j (g_j^2/2)(1/Delta_j - 1/nu_j) without. Only needed when comparing a
/// transformed Hamiltonian entrywise against the effective one.
inline double energy_offset(const SystemSpec& spec, bool rwa) {
    spec.require_detuned();
    double c = 0.0;
    for (std::size_t j = 0; j < spec.n_qubits(); ++j) {
        const double g2 = spec.qubits[j].g * spec.qubits[j].g;
        c += rwa ? g2 / (2.0 * spec.detuning(j))
                 : 0.5 * g2 * (1.0 / spec.detuning(j) - 1.0 / spec.sum_frequency(j));
    }
    return c;
}

struct ValidityThresholds {
    double max_lambda = 0.2;     // |g/Delta| for the dispersive flag
    double max_rwa_ratio = 0.2;  // |Delta|/nu for the RWA flag
};

struct QubitValidity {
    double lambda = 0.0;
    double rwa_ratio = 0.0;
    double n_crit = 0.0;
    bool dispersive = false;
    bool rwa_valid = false;
    bool linear = false;
};

struct ValidityReport {
    std::vector<QubitValidity> qubits;

    bool all_dispersive() const {
        for (const auto& q : qubits)
            if (!q.dispersive) return false;
        return true;
    }
};

/// Annotates each qubit; never throws on a bad regime, zero detuning included.
inline ValidityReport validity_report(const SystemSpec& spec, double mean_photons,
                                      const ValidityThresholds& th = {}) {
    ValidityReport rep;
    for (std::size_t j = 0; j < spec.n_qubits(); ++j) {
        const double delta = spec.detuning(j);
        const double nu = spec.sum_frequency(j);
        const double g = spec.qubits[j].g;
        QubitValidity v;
        if (g == 0.0) {
            v.lambda = 0.0;
            v.n_crit = std::numeric_limits<double>::infinity();
        } else if (delta == 0.0) {
            v.lambda = std::numeric_limits<double>::infinity();
            v.n_crit = 0.0;
        } else {
            v.lambda = g / delta;
            v.n_crit = critical_photons(v.lambda);
        }
        v.rwa_ratio = std::abs(delta) / nu;
        v.dispersive = std::abs(v.lambda) <= th.max_lambda;
        v.rwa_valid = g == 0.0 || v.rwa_ratio <= th.max_rwa_ratio;
        v.linear = mean_photons < v.n_crit;
        rep.qubits.push_back(v);
    }
    return rep;
}

}  // namespace dispersive
