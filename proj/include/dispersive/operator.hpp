// operator.hpp: qubit and oscillator operators on a truncated product space
//
// Basis ordering: qubit factors first (qubit 0 slowest), Fock factor last.
// Single-qubit basis order is |up>, |down> with sigma^z|up> = +|up>.
// Everything is real; sigma^y on its own is not representable and rejected.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dispersive/error.hpp"

namespace dispersive {

enum class Spin { Up = 0, Down = 1 };

/// Eigenvalue of sigma^z for the given spin.
constexpr double sigma_z_value(Spin s) noexcept { return s == Spin::Up ? 1.0 : -1.0; }

inline const char* to_string(Spin s) noexcept { return s == Spin::Up ? "up" : "down"; }

/// One product basis vector |s_0, ..., s_{k-1}, n>.
struct BasisState {
    std::vector<Spin> spins;
    std::size_t fock = 0;

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

class BasisSpec {
public:
    BasisSpec() = default;

    /// n_qubits may be zero (bare oscillator); fock_cutoff counts levels 0..N-1.
    BasisSpec(std::size_t n_qubits, std::size_t fock_cutoff)
        : n_qubits_(n_qubits), fock_cutoff_(fock_cutoff) {
        if (fock_cutoff_ < 1) throw InvalidArgument("fock cutoff must be at least 1");
        if (n_qubits_ > 16) throw InvalidArgument("too many qubits for a dense basis");
    }

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t fock_cutoff() const noexcept { return fock_cutoff_; }
    std::size_t qubit_dimension() const noexcept { return std::size_t{1} << n_qubits_; }
    std::size_t dimension() const noexcept { return qubit_dimension() * fock_cutoff_; }

    std::size_t index(const BasisState& s) const {
        if (s.spins.size() != n_qubits_) throw InvalidArgument("basis state has wrong qubit count");
        if (s.fock >= fock_cutoff_) throw InvalidArgument("fock level outside cutoff");
        std::size_t q = 0;
        for (Spin spin : s.spins) q = 2 * q + static_cast<std::size_t>(spin);
        return q * fock_cutoff_ + s.fock;
    }

    BasisState decode(std::size_t idx) const {
        if (idx >= dimension()) throw InvalidArgument("basis index out of range");
        BasisState s;
        s.fock = idx % fock_cutoff_;
        std::size_t q = idx / fock_cutoff_;
        s.spins.resize(n_qubits_);
        for (std::size_t j = n_qubits_; j-- > 0;) {
            s.spins[j] = static_cast<Spin>(q & 1U);
            q >>= 1U;
        }
        return s;
    }

    friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

private:
    std::size_t n_qubits_ = 0;
    std::size_t fock_cutoff_ = 1;
};

enum class Symmetry { Symmetric, Antisymmetric, General };

enum class PauliAxis { X, Y, Z, Plus, Minus };

/// Dense real matrix tied to a basis. The symmetry flag is derived from the
/// data by exact comparison, never asserted by the caller.
class Operator {
public:
    Operator(BasisSpec basis, Eigen::MatrixXd data) : basis_(basis), data_(std::move(data)) {
        const auto d = static_cast<Eigen::Index>(basis_.dimension());
        if (data_.rows() != d || data_.cols() != d)
            throw BasisMismatch("operator data dimension does not match basis");
        classify();
    }

    static Operator zero(const BasisSpec& basis) {
        const auto d = static_cast<Eigen::Index>(basis.dimension());
        return {basis, Eigen::MatrixXd::Zero(d, d)};
    }

    const BasisSpec& basis() const noexcept { return basis_; }
    const Eigen::MatrixXd& matrix() const noexcept { return data_; }
    /// Symmetric wins for the zero matrix, which is both.
    Symmetry symmetry() const noexcept {
        if (symmetric_) return Symmetry::Symmetric;
        return antisymmetric_ ? Symmetry::Antisymmetric : Symmetry::General;
    }
    std::size_t dimension() const noexcept { return basis_.dimension(); }

    bool is_symmetric() const noexcept { return symmetric_; }
    bool is_antisymmetric() const noexcept { return antisymmetric_; }

    double operator()(std::size_t row, std::size_t col) const {
        return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    Operator transpose() const { return {basis_, data_.transpose()}; }

    friend Operator operator+(const Operator& a, const Operator& b) {
        require_same_basis(a, b);
        return {a.basis_, a.data_ + b.data_};
    }
    friend Operator operator-(const Operator& a, const Operator& b) {
        require_same_basis(a, b);
        return {a.basis_, a.data_ - b.data_};
    }
    friend Operator operator-(const Operator& a) { return {a.basis_, -a.data_}; }
    friend Operator operator*(double c, const Operator& a) { return {a.basis_, c * a.data_}; }
    friend Operator operator*(const Operator& a, double c) { return c * a; }
    friend Operator operator*(const Operator& a, const Operator& b) {
        require_same_basis(a, b);
        return {a.basis_, a.data_ * b.data_};
    }

    static void require_same_basis(const Operator& a, const Operator& b) {
        if (!(a.basis_ == b.basis_)) throw BasisMismatch("operators live on different bases");
    }

private:
    void classify() {
        symmetric_ = true;
        antisymmetric_ = true;
        for (Eigen::Index i = 0; i < data_.rows() && (symmetric_ || antisymmetric_); ++i) {
            for (Eigen::Index j = i; j < data_.cols(); ++j) {
                if (data_(i, j) != data_(j, i)) symmetric_ = false;
                if (data_(i, j) != -data_(j, i)) antisymmetric_ = false;
            }
        }
    }

    BasisSpec basis_;
    Eigen::MatrixXd data_;
    bool symmetric_ = false;
    bool antisymmetric_ = false;
};

namespace detail {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Eigen::MatrixXd single_qubit_matrix(PauliAxis axis) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    switch (axis) {
        case PauliAxis::X: m << 0, 1, 1, 0; break;
        case PauliAxis::Z: m << 1, 0, 0, -1; break;
        case PauliAxis::Plus: m(0, 1) = 1; break;   // |up><down|
        case PauliAxis::Minus: m(1, 0) = 1; break;  // |down><up|
        case PauliAxis::Y: throw InvalidArgument("complex operator unsupported: lone sigma^y");
    }
    return m;
}

inline Eigen::MatrixXd fock_annihilator(std::size_t n_levels) {
    const auto n = static_cast<Eigen::Index>(n_levels);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

}  // namespace detail

inline Operator identity(const BasisSpec& basis) {
    const auto d = static_cast<Eigen::Index>(basis.dimension());
    return {basis, Eigen::MatrixXd::Identity(d, d)};
}

/// a with <n-1|a|n> = sqrt(n), identity on the qubit factors.
inline Operator annihilator(const BasisSpec& basis) {
    const auto q = static_cast<Eigen::Index>(basis.qubit_dimension());
    return {basis, detail::kron(Eigen::MatrixXd::Identity(q, q),
                                detail::fock_annihilator(basis.fock_cutoff()))};
}

inline Operator creator(const BasisSpec& basis) { return annihilator(basis).transpose(); }

/// a^dagger a, built directly so the diagonal is exactly 0..N-1.
inline Operator number(const BasisSpec& basis) {
    const auto d = static_cast<Eigen::Index>(basis.dimension());
    const auto n = static_cast<Eigen::Index>(basis.fock_cutoff());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = static_cast<double>(i % n);
    return {basis, std::move(m)};
}

/// a + a^dagger.
inline Operator quadrature(const BasisSpec& basis) {
    return annihilator(basis) + creator(basis);
}

/// Pauli or ladder matrix on qubit `qubit`, identity elsewhere.
inline Operator pauli(const BasisSpec& basis, std::size_t qubit, PauliAxis axis) {
    if (qubit >= basis.n_qubits()) throw InvalidArgument("qubit index out of range");
    const Eigen::MatrixXd local = detail::single_qubit_matrix(axis);
    const auto left = static_cast<Eigen::Index>(std::size_t{1} << qubit);
    const auto right = static_cast<Eigen::Index>(
        (std::size_t{1} << (basis.n_qubits() - qubit - 1)) * basis.fock_cutoff());
    return {basis, detail::kron(detail::kron(Eigen::MatrixXd::Identity(left, left), local),
                                Eigen::MatrixXd::Identity(right, right))};
}

inline Operator commutator(const Operator& a, const Operator& b) {
    Operator::require_same_basis(a, b);
    return {a.basis(), a.matrix() * b.matrix() - b.matrix() * a.matrix()};
}

/// Weighted sum sum_i c_i A_i over a shared basis.
inline Operator apply_composite(const std::vector<std::pair<double, Operator>>& terms) {
    if (terms.empty()) throw InvalidArgument("apply_composite needs at least one term");
    const BasisSpec& basis = terms.front().second.basis();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dimension()),
                                                static_cast<Eigen::Index>(basis.dimension()));
    for (const auto& [c, op] : terms) {
        if (!(op.basis() == basis)) throw BasisMismatch("apply_composite: basis mismatch");
        acc += c * op.matrix();
    }
    return {basis, std::move(acc)};
}

enum class Sign { Plus, Minus };

/// Co-rotating coupling X_{+/-} = sigma^- a^dagger +/- sigma^+ a on qubit `qubit`.
inline Operator co_rotating(const BasisSpec& basis, std::size_t qubit, Sign sign) {
    const Operator a = annihilator(basis);
    const Operator ad = creator(basis);
    const Operator lower = pauli(basis, qubit, PauliAxis::Minus) * ad;
    const Operator raise = pauli(basis, qubit, PauliAxis::Plus) * a;
    return sign == Sign::Plus ? lower + raise : lower - raise;
}

/// Counter-rotating coupling: Y_+ = sigma^+ a^dagger + sigma^- a and
/// Y_- = sigma^- a - sigma^+ a^dagger. With this sign of Y_- the relations
/// [H_0, Y_-] = -(eps + omega) Y_+ and [Y_+, Y_-] = sigma^z (2 a^dagger a + 1) - 1 hold.
inline Operator counter_rotating(const BasisSpec& basis, std::size_t qubit, Sign sign) {
    const Operator a = annihilator(basis);
    const Operator ad = creator(basis);
    const Operator both_up = pauli(basis, qubit, PauliAxis::Plus) * ad;
    const Operator both_down = pauli(basis, qubit, PauliAxis::Minus) * a;
    return sign == Sign::Plus ? both_up + both_down : both_down - both_up;
}

/// Basis indices with Fock level n <= max_level, all qubit states kept.
inline std::vector<std::size_t> interior_indices(const BasisSpec& basis, std::size_t max_level) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        if (i % basis.fock_cutoff() <= max_level) idx.push_back(i);
    return idx;
}

/// max |A_ij| over rows and columns in `idx`.
inline double max_abs_on(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
    double best = 0.0;
    for (std::size_t r : idx)
        for (std::size_t c : idx)
            best = std::max(best, std::abs(m(static_cast<Eigen::Index>(r),
                                             static_cast<Eigen::Index>(c))));
    return best;
}

}  // namespace dispersive
