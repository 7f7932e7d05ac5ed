// model.hpp: exact and effective Hamiltonians, frame-transformation generators

#pragma once

#include <cstddef>
#include <string_view>

#include "dispersive/error.hpp"
#include "dispersive/formulas.hpp"
#include "dispersive/linalg.hpp"
#include "dispersive/operator.hpp"
#include "dispersive/system.hpp"

namespace dispersive {

enum class ModelKind {
    FullRabi,           // eps/2 sz + w a'a + g sx (a + a'), any number of qubits
    JaynesCummingsRWA,  // co-rotating coupling only, exactly one qubit
    TavisCummingsRWA,   // co-rotating coupling, any number of qubits
    DispersiveRWA,      // number-operator shift + XY pair coupling
    DispersiveNonRWA,   // (a + a')^2 shift + Ising pair coupling
};

inline constexpr std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::FullRabi: return "FullRabi";
        case ModelKind::JaynesCummingsRWA: return "JaynesCummingsRWA";
        case ModelKind::TavisCummingsRWA: return "TavisCummingsRWA";
        case ModelKind::DispersiveRWA: return "DispersiveRWA";
        case ModelKind::DispersiveNonRWA: return "DispersiveNonRWA";
    }
    return "?";
}

/// H_0 = sum_j eps_j/2 sz_j + omega a'a.
inline Operator bare_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    const BasisSpec basis = spec.basis();
    Operator h = spec.omega * number(basis);
    for (std::size_t j = 0; j < spec.n_qubits(); ++j)
        h = h + 0.5 * spec.qubits[j].epsilon * pauli(basis, j, PauliAxis::Z);
    return h;
}

/// N_exc = sum_j (sz_j + 1)/2 + a'a.
inline Operator excitation_number(const BasisSpec& basis) {
    Operator n = number(basis);
    for (std::size_t j = 0; j < basis.n_qubits(); ++j)
        n = n + 0.5 * (pauli(basis, j, PauliAxis::Z) + identity(basis));
    return n;
}

namespace detail {

inline Operator pair_xy(const BasisSpec& b, std::size_t j, std::size_t k) {
    return pauli(b, j, PauliAxis::Minus) * pauli(b, k, PauliAxis::Plus) +
           pauli(b, j, PauliAxis::Plus) * pauli(b, k, PauliAxis::Minus);
}

inline Operator pair_ising(const BasisSpec& b, std::size_t j, std::size_t k) {
    return pauli(b, j, PauliAxis::X) * pauli(b, k, PauliAxis::X);
}

inline Operator symmetrized(const Operator& a) {
    return {a.basis(), 0.5 * (a.matrix() + a.matrix().transpose())};
}

inline Operator assemble(const SystemSpec& spec, ModelKind kind) {
    spec.validate();
    const BasisSpec basis = spec.basis();
    const std::size_t nq = spec.n_qubits();
    if (kind == ModelKind::JaynesCummingsRWA && nq != 1)
        throw InvalidArgument("JaynesCummingsRWA is a single-qubit model");

    switch (kind) {
        case ModelKind::FullRabi: {
            Operator h = bare_hamiltonian(spec);
            const Operator x = quadrature(basis);
            for (std::size_t j = 0; j < nq; ++j)
                h = h + spec.qubits[j].g * (pauli(basis, j, PauliAxis::X) * x);
            return h;
        }
        case ModelKind::JaynesCummingsRWA:
        case ModelKind::TavisCummingsRWA: {
            Operator h = bare_hamiltonian(spec);
            for (std::size_t j = 0; j < nq; ++j)
                h = h + spec.qubits[j].g * co_rotating(basis, j, Sign::Plus);
            return h;
        }
        case ModelKind::DispersiveRWA: {
            spec.require_detuned();
            const Operator n = number(basis);
            Operator h = spec.omega * n;
            for (std::size_t j = 0; j < nq; ++j) {
                const double chi = spec.qubits[j].g * spec.qubits[j].g / spec.detuning(j);
                const Operator sz = pauli(basis, j, PauliAxis::Z);
                h = h + 0.5 * (spec.qubits[j].epsilon + chi) * sz + chi * (n * sz);
            }
            if (nq >= 2) {
                const Eigen::MatrixXd jm = coupling_matrix(spec, /*rwa=*/true);
                for (std::size_t j = 0; j < nq; ++j)
                    for (std::size_t k = 0; k < j; ++k)
                        h = h + jm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
                                    detail::pair_xy(basis, j, k);
            }
            return h;
        }
        case ModelKind::DispersiveNonRWA: {
            spec.require_detuned();
            const Operator x = quadrature(basis);
            const Operator x2 = x * x;
            Operator h = bare_hamiltonian(spec);
            for (std::size_t j = 0; j < nq; ++j) {
                const double g = spec.qubits[j].g;
                const double chi = 0.5 * g * g * (1.0 / spec.detuning(j) + 1.0 / spec.sum_frequency(j));
                h = h + chi * (x2 * pauli(basis, j, PauliAxis::Z));
            }
            if (nq >= 2) {
                const Eigen::MatrixXd jm = coupling_matrix(spec, /*rwa=*/false);
                for (std::size_t j = 0; j < nq; ++j)
                    for (std::size_t k = 0; k < j; ++k)
                        h = h + jm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
                                    detail::pair_ising(basis, j, k);
            }
            return h;
        }
    }
    throw InvalidArgument("unknown model kind");
}

}  // namespace detail

/// Hamiltonian of the requested kind, term by term, hbar = 1.
inline Operator build_hamiltonian(const SystemSpec& spec, ModelKind kind) {
    return detail::symmetrized(detail::assemble(spec, kind));
}

/// Antisymmetric generator S of the frame change D = e^S:
/// sum_j lambda_j X_-^j, plus lambda_bar_j Y_-^j unless rwa_only.
inline Operator build_generator(const SystemSpec& spec, bool rwa_only) {
    spec.validate();
    spec.require_detuned();
    const BasisSpec basis = spec.basis();
    Operator s = Operator::zero(basis);
    for (std::size_t j = 0; j < spec.n_qubits(); ++j) {
        const double g = spec.qubits[j].g;
        s = s + (g / spec.detuning(j)) * co_rotating(basis, j, Sign::Minus);
        if (!rwa_only) s = s + (g / spec.sum_frequency(j)) * counter_rotating(basis, j, Sign::Minus);
    }
    return s;
}

/// D^T H D with D = e^G. The product is symmetrised so the result carries an
/// exact symmetric flag.
inline Operator transform_frame(const Operator& h, const Operator& generator) {
    Operator::require_same_basis(h, generator);
    const Eigen::MatrixXd d = expm(generator.matrix());
    const Eigen::MatrixXd t = d.transpose() * h.matrix() * d;
    return {h.basis(), 0.5 * (t + t.transpose())};
}

}  // namespace dispersive
