// linalg.hpp: dense symmetric eigensolvers, matrix exponential, norms

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "dispersive/error.hpp"
#include "dispersive/operator.hpp"

namespace dispersive {

/// Eigenpairs sorted by ascending eigenvalue; column i of `eigenvectors`
/// belongs to `eigenvalues[i]`. Within a degenerate cluster the basis is
/// whatever the solver produced: use projectors, not individual vectors.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

enum class EigenMethod { Auto, Jacobi, HouseholderQL };

/// Auto switches from Jacobi to Householder + QL above this dimension.
inline constexpr std::size_t kJacobiMaxDimension = 64;

namespace detail {

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr int kQLMaxIterations = 60;

inline double max_off_diagonal(const Eigen::MatrixXd& a) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) best = std::max(best, std::abs(a(i, j)));
    return best;
}

[[noreturn]] inline void throw_no_convergence(const char* method, double off) {
    std::ostringstream msg;
    msg << method << " did not converge; max off-diagonal " << off;
    throw ConvergenceError(msg.str());
}

// Cyclic Jacobi with the Rutishauser form of the rotation.
inline void jacobi(Eigen::MatrixXd a, Eigen::VectorXd& w, Eigen::MatrixXd& v) {
    const Eigen::Index n = a.rows();
    v = Eigen::MatrixXd::Identity(n, n);
    const double scale = a.norm();
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() * scale;

    bool converged = (scale == 0.0);
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        double off = 0.0;
        for (Eigen::Index q = 1; q < n; ++q)
            for (Eigen::Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= tol) {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
                    a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }
    if (!converged) throw_no_convergence("jacobi", max_off_diagonal(a));
    w = a.diagonal();
}

// Householder reduction to tridiagonal form. On exit v holds the accumulated
// orthogonal transformation, d the diagonal and e the subdiagonal in e[1..n-1].
inline void householder_tridiagonalize(Eigen::MatrixXd& v, Eigen::VectorXd& d, Eigen::VectorXd& e) {
    const Eigen::Index n = v.rows();
    d.resize(n);
    e.setZero(n);
    for (Eigen::Index j = 0; j < n; ++j) d(j) = v(n - 1, j);

    for (Eigen::Index i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d(k));
        if (scale == 0.0) {
            e(i) = d(i - 1);
            for (Eigen::Index j = 0; j < i; ++j) {
                d(j) = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (Eigen::Index k = 0; k < i; ++k) {
                d(k) /= scale;
                h += d(k) * d(k);
            }
            double f = d(i - 1);
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e(i) = scale * g;
            h -= f * g;
            d(i - 1) = f - g;
            for (Eigen::Index j = 0; j < i; ++j) e(j) = 0.0;

            for (Eigen::Index j = 0; j < i; ++j) {
                f = d(j);
                v(j, i) = f;
                g = e(j) + v(j, j) * f;
                for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d(k);
                    e(k) += v(k, j) * f;
                }
                e(j) = g;
            }
            f = 0.0;
            for (Eigen::Index j = 0; j < i; ++j) {
                e(j) /= h;
                f += e(j) * d(j);
            }
            const double hh = f / (h + h);
            for (Eigen::Index j = 0; j < i; ++j) e(j) -= hh * d(j);
            for (Eigen::Index j = 0; j < i; ++j) {
                f = d(j);
                g = e(j);
                for (Eigen::Index k = j; k <= i - 1; ++k) v(k, j) -= (f * e(k) + g * d(k));
                d(j) = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d(i) = h;
    }

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d(i + 1);
        if (h != 0.0) {
            for (Eigen::Index k = 0; k <= i; ++k) d(k) = v(k, i + 1) / h;
            for (Eigen::Index j = 0; j <= i; ++j) {
                double g = 0.0;
                for (Eigen::Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (Eigen::Index k = 0; k <= i; ++k) v(k, j) -= g * d(k);
            }
        }
        for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        d(j) = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e(0) = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of v.
inline void tridiagonal_ql(Eigen::VectorXd& d, Eigen::VectorXd& e, Eigen::MatrixXd& v) {
    const Eigen::Index n = d.size();
    for (Eigen::Index i = 1; i < n; ++i) e(i - 1) = e(i);
    e(n - 1) = 0.0;

    const double eps = std::numeric_limits<double>::epsilon();
    double shift_acc = 0.0;
    double tst1 = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
        Eigen::Index m = l;
        while (m < n) {
            if (std::abs(e(m)) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kQLMaxIterations) throw_no_convergence("tridiagonal QL", std::abs(e(l)));
                double g = d(l);
                double p = (d(l + 1) - g) / (2.0 * e(l));
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d(l) = e(l) / (p + r);
                d(l + 1) = e(l) * (p + r);
                const double dl1 = d(l + 1);
                double h = g - d(l);
                for (Eigen::Index i = l + 2; i < n; ++i) d(i) -= h;
                shift_acc += h;

                p = d(m);
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e(l + 1);
                double s = 0.0, s2 = 0.0;
                for (Eigen::Index i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e(i);
                    h = c * p;
                    r = std::hypot(p, e(i));
                    e(i + 1) = s * r;
                    s = e(i) / r;
                    c = p / r;
                    p = c * d(i) - s * g;
                    d(i + 1) = h + s * (c * g + s * d(i));
                    for (Eigen::Index k = 0; k < n; ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e(l) / dl1;
                e(l) = s * p;
                d(l) = c * p;
            } while (std::abs(e(l)) > eps * tst1);
        }
        d(l) += shift_acc;
        e(l) = 0.0;
    }
}

// Ascending order; each eigenvector's largest-magnitude entry made positive.
inline EigenDecomposition sort_and_fix_signs(const Eigen::VectorXd& w, const Eigen::MatrixXd& v) {
    const auto n = w.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return w(a) < w(b); });
    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = w(src);
        Eigen::VectorXd col = v.col(src);
        Eigen::Index big = 0;
        col.cwiseAbs().maxCoeff(&big);
        if (col(big) < 0) col = -col;
        out.eigenvectors.col(k) = col;
    }
    return out;
}

}  // namespace detail

/// Full spectrum of a real symmetric matrix (asymmetry up to 1e-12 relative is
/// rounded away). Deterministic for identical input.
inline EigenDecomposition eig_sym(const Eigen::MatrixXd& a, EigenMethod method = EigenMethod::Auto) {
    if (a.rows() != a.cols()) throw InvalidArgument("eig_sym: matrix is not square");
    if (!a.allFinite()) throw InvalidArgument("eig_sym: non-finite entries");
    const double asym = a.size() ? (a - a.transpose()).cwiseAbs().maxCoeff() : 0.0;
    const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-12 * std::max(1.0, scale)) throw InvalidArgument("eig_sym: matrix is not symmetric");
    const auto n = static_cast<std::size_t>(a.rows());
    if (n == 0) return {};
    if (method == EigenMethod::Auto)
        method = n <= kJacobiMaxDimension ? EigenMethod::Jacobi : EigenMethod::HouseholderQL;

    Eigen::VectorXd w;
    Eigen::MatrixXd v;
    if (method == EigenMethod::Jacobi || n == 1) {
        detail::jacobi(0.5 * (a + a.transpose()), w, v);
    } else {
        v = 0.5 * (a + a.transpose());
        Eigen::VectorXd e;
        detail::householder_tridiagonalize(v, w, e);
        detail::tridiagonal_ql(w, e, v);
    }
    return detail::sort_and_fix_signs(w, v);
}

inline EigenDecomposition eig_sym(const Operator& a, EigenMethod method = EigenMethod::Auto) {
    if (!a.is_symmetric()) throw InvalidArgument("eig_sym: operator is not flagged symmetric");
    return eig_sym(a.matrix(), method);
}

/// Max absolute column sum.
inline double one_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

/// e^G by scaling and squaring around a truncated Taylor series. The
/// argument is scaled until ||G||_1 <= 0.5, so the series converges in a
/// handful of terms.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& g) {
    if (g.rows() != g.cols()) throw InvalidArgument("expm: matrix is not square");
    if (!g.allFinite()) throw InvalidArgument("expm: non-finite entries");
    const Eigen::Index n = g.rows();
    const double norm = one_norm(g);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXd scaled = g / std::ldexp(1.0, squarings);

    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        result += term;
        if (one_norm(term) <= 1e-18 * one_norm(result)) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

inline Operator expm(const Operator& g) { return {g.basis(), expm(g.matrix())}; }

struct Norms {
    double frobenius = 0.0;
    double max_abs = 0.0;
    /// Largest singular value from power iteration on A^T A; an estimate.
    double spectral_est = 0.0;
};

inline Norms norms(const Eigen::MatrixXd& a, int power_iterations = 50) {
    Norms out;
    if (a.size() == 0) return out;
    out.frobenius = a.norm();
    out.max_abs = a.cwiseAbs().maxCoeff();
    if (out.max_abs == 0.0) return out;

    Eigen::VectorXd x(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 1.0 + 1.0 / static_cast<double>(i + 2);
    x.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < power_iterations; ++it) {
        Eigen::VectorXd y = a.transpose() * (a * x);
        sigma2 = x.dot(y);
        const double ny = y.norm();
        if (ny == 0.0) break;
        x = y / ny;
    }
    out.spectral_est = std::sqrt(std::max(sigma2, 0.0));
    return out;
}

inline Norms norms(const Operator& a, int power_iterations = 50) {
    return norms(a.matrix(), power_iterations);
}

}  // namespace dispersive
