// system.hpp: physical parameters of a qubit(s)-oscillator model

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dispersive/error.hpp"
#include "dispersive/operator.hpp"

namespace dispersive {

/// One two-level system. Units are those of the oscillator frequency (hbar = 1).
struct QubitParams {
    double epsilon = 0.0;  // level splitting
    double g = 0.0;        // dipole coupling to the oscillator
};

struct SystemSpec {
    std::vector<QubitParams> qubits;
    double omega = 1.0;
    std::size_t fock_cutoff = 2;

    std::size_t n_qubits() const noexcept { return qubits.size(); }

    /// Delta_j = eps_j - omega.
    double detuning(std::size_t j) const { return qubits.at(j).epsilon - omega; }
    /// nu_j = eps_j + omega.
    double sum_frequency(std::size_t j) const { return qubits.at(j).epsilon + omega; }

    BasisSpec basis() const { return {qubits.size(), fock_cutoff}; }

    void validate() const {
        if (qubits.empty()) throw InvalidArgument("system needs at least one qubit");
        if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be positive");
        if (fock_cutoff < 2) throw InvalidArgument("fock cutoff must be at least 2");
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            const auto& q = qubits[j];
            if (!std::isfinite(q.epsilon) || q.epsilon < 0.0)
                throw InvalidArgument("qubit " + std::to_string(j) + ": epsilon must be >= 0");
            if (!std::isfinite(q.g) || q.g < 0.0)
                throw InvalidArgument("qubit " + std::to_string(j) + ": g must be >= 0");
        }
    }

    /// Throws unless every qubit is detuned from the oscillator.
    void require_detuned() const {
        for (std::size_t j = 0; j < qubits.size(); ++j)
            if (detuning(j) == 0.0)
                throw InvalidArgument("zero detuning on qubit " + std::to_string(j));
    }
};

inline SystemSpec single_qubit(double epsilon, double omega, double g, std::size_t fock_cutoff) {
    return SystemSpec{{QubitParams{epsilon, g}}, omega, fock_cutoff};
}

inline SystemSpec with_cutoff(SystemSpec spec, std::size_t fock_cutoff) {
    spec.fock_cutoff = fock_cutoff;
    return spec;
}

/// Same system with every coupling multiplied by `factor`.
inline SystemSpec with_scaled_couplings(SystemSpec spec, double factor) {
    for (auto& q : spec.qubits) q.g *= factor;
    return spec;
}

}  // namespace dispersive
