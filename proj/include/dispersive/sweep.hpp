// sweep.hpp: grid evaluation behind the command-line tool
//
// Each mode turns a SweepConfig into a CsvTable. Grid points are independent
// and may run on several threads; rows are always assembled in grid order.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dispersive/config.hpp"
#include "dispersive/csv.hpp"
#include "dispersive/formulas.hpp"
#include "dispersive/model.hpp"
#include "dispersive/spectral.hpp"

namespace dispersive {

/// f(0..n-1) on up to `threads` workers; results in index order. The first
/// exception by index is rethrown after all workers finish.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, std::size_t threads, F&& f) {
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), std::max<std::size_t>(n, 1));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

namespace detail {

inline CutoffPolicy policy_of(const SweepConfig& cfg) {
    CutoffPolicy p;
    p.automatic = cfg.auto_cutoff;
    return p;
}

inline void add_flag(std::string& flags, const char* f) {
    if (!flags.empty()) flags += ';';
    flags += f;
}

inline std::string format_count(std::optional<std::size_t> n) { return n ? std::to_string(*n) : std::string(); }

struct GridPoint {
    double epsilon;
    double g;
    Spin spin;
};

inline std::vector<GridPoint> grid_points(const SweepConfig& cfg, bool with_spin) {
    std::vector<GridPoint> pts;
    for (double e : cfg.epsilons)
        for (double g : cfg.couplings) {
            if (!with_spin) {
                pts.push_back({e, g, Spin::Down});
                continue;
            }
            for (Spin s : cfg.spins) pts.push_back({e, g, s});
        }
    return pts;
}

inline SystemSpec multi_qubit_spec(const SweepConfig& cfg) {
    SystemSpec s;
    s.qubits = cfg.qubits;
    s.omega = cfg.omega;
    s.fock_cutoff = cfg.fock_cutoff;
    s.validate();
    return s;
}

}  // namespace detail

/// One shift-sweep row.
struct ShiftRecord {
    double epsilon = 0.0;
    double delta = 0.0;
    double g = 0.0;
    Spin spin = Spin::Down;
    std::optional<double> shift_rwa, shift_nonrwa, shift_sqrt, shift_numeric;
    std::optional<double> err_rwa, err_nonrwa, overlap_min;
    std::optional<std::size_t> n_used;
    std::string flag;  // empty, or ';'-joined: zero_detuning, negative_radicand, classification
};

inline ShiftRecord shift_record(double epsilon, double omega, double g, Spin spin, std::size_t fock_cutoff,
                                const CutoffPolicy& policy, double min_overlap) {
    ShiftRecord r;
    r.epsilon = epsilon;
    r.delta = epsilon - omega;
    r.g = g;
    r.spin = spin;
    if (r.delta == 0.0) {
        detail::add_flag(r.flag, "zero_detuning");
    } else {
        const ShiftPrediction p = shift_prediction(epsilon, omega, g, spin);
        r.shift_rwa = p.omega_bar_rwa;
        r.shift_nonrwa = p.omega_bar_nonrwa;
        r.shift_sqrt = p.omega_bar_sqrt;
        if (!p.omega_bar_sqrt) detail::add_flag(r.flag, "negative_radicand");
    }
    try {
        const NumericShift n = numeric_shift(single_qubit(epsilon, omega, g, fock_cutoff), spin, policy, min_overlap);
        r.shift_numeric = n.frequency;
        r.overlap_min = n.min_overlap;
        r.n_used = n.fock_cutoff;
    } catch (const ClassificationError&) {
        detail::add_flag(r.flag, "classification");
    }
    if (r.shift_numeric && r.shift_rwa) {
        r.err_rwa = std::abs(*r.shift_rwa - *r.shift_numeric);
        r.err_nonrwa = std::abs(*r.shift_nonrwa - *r.shift_numeric);
    }
    return r;
}

inline CsvTable run_shift_sweep(const SweepConfig& cfg) {
    if (cfg.mode != Mode::ShiftSweep) throw InvalidArgument("config is not a shift_sweep");
    const auto pts = detail::grid_points(cfg, true);
    const CutoffPolicy policy = detail::policy_of(cfg);
    const auto recs = parallel_map<ShiftRecord>(pts.size(), cfg.threads, [&](std::size_t i) {
        return shift_record(pts[i].epsilon, cfg.omega, pts[i].g, pts[i].spin, cfg.fock_cutoff, policy,
                            cfg.min_overlap);
    });
    CsvTable t;
    t.header = {"epsilon",       "delta",   "g",       "spin",        "shift_rwa", "shift_nonrwa", "shift_sqrt",
                "shift_numeric", "err_rwa", "err_nonrwa", "overlap_min", "n_used",    "flag"};
    for (const auto& r : recs)
        t.add({format_real(r.epsilon), format_real(r.delta), format_real(r.g), std::string(to_string(r.spin)),
               format_real(r.shift_rwa), format_real(r.shift_nonrwa), format_real(r.shift_sqrt),
               format_real(r.shift_numeric), format_real(r.err_rwa), format_real(r.err_nonrwa),
               format_real(r.overlap_min), detail::format_count(r.n_used), r.flag});
    return t;
}

/// Lowest `levels` eigenvalues of each configured model with their bare labels.
inline CsvTable run_spectrum(const SweepConfig& cfg) {
    if (cfg.mode != Mode::Spectrum) throw InvalidArgument("config is not a spectrum");
    const auto pts = detail::grid_points(cfg, false);
    using Rows = std::vector<std::vector<std::string>>;
    const auto blocks = parallel_map<Rows>(pts.size(), cfg.threads, [&](std::size_t i) {
        const SystemSpec base = single_qubit(pts[i].epsilon, cfg.omega, pts[i].g, cfg.fock_cutoff);
        Rows rows;
        for (ModelKind kind : cfg.models) {
            const std::string e = format_real(pts[i].epsilon), g = format_real(pts[i].g);
            const std::string model(to_string(kind));
            try {
                const std::size_t n = with_converged_cutoff(base, detail::policy_of(cfg), [&](const SystemSpec& s) {
                                          const auto ev = eig_sym(build_hamiltonian(s, kind)).eigenvalues;
                                          const auto k = std::min<Eigen::Index>(ev.size(), static_cast<Eigen::Index>(cfg.levels));
                                          return std::vector<double>(ev.data(), ev.data() + k);
                                      }).second;
                const SystemSpec s = with_cutoff(base, n);
                const EigenDecomposition dec = eig_sym(build_hamiltonian(s, kind));
                const auto cls = classify_branches(dec, s.basis(), cfg.levels, cfg.min_overlap);
                for (std::size_t k = 0; k < cls.states.size(); ++k) {
                    const auto& a = cls.states[k];
                    rows.push_back({e, g, model, std::to_string(k), format_real(a.energy), label_string(a.label),
                                    format_real(a.overlap), std::to_string(n),
                                    a.overlap > cfg.min_overlap ? "" : "classification"});
                }
            } catch (const InvalidArgument&) {
                if (base.detuning(0) != 0.0) throw;
                rows.push_back({e, g, model, "", "", "", "", "", "zero_detuning"});
            }
        }
        return rows;
    });
    CsvTable t;
    t.header = {"epsilon", "g", "model", "index", "energy", "label", "overlap", "n_used", "flag"};
    for (const auto& b : blocks)
        for (const auto& r : b) t.add(r);
    return t;
}

/// Frame-transformation remainder for both chains at each grid point.
inline CsvTable run_residual_scan(const SweepConfig& cfg) {
    if (cfg.mode != Mode::ResidualScan) throw InvalidArgument("config is not a residual_scan");
    const auto pts = detail::grid_points(cfg, false);
    using Rows = std::vector<std::vector<std::string>>;
    const auto blocks = parallel_map<Rows>(pts.size(), cfg.threads, [&](std::size_t i) {
        const SystemSpec s = single_qubit(pts[i].epsilon, cfg.omega, pts[i].g, cfg.fock_cutoff);
        const std::string e = format_real(pts[i].epsilon), g = format_real(pts[i].g);
        Rows rows;
        for (bool rwa : {true, false}) {
            const char* chain = rwa ? "rwa" : "nonrwa";
            if (s.detuning(0) == 0.0) {
                rows.push_back({e, g, chain, "", "", "", std::to_string(s.fock_cutoff), "zero_detuning"});
                continue;
            }
            const FrameResidual r = frame_residual(s, rwa);
            const std::optional<double> expo =
                std::isnan(r.scaling_exponent) ? std::nullopt : std::optional<double>(r.scaling_exponent);
            rows.push_back({e, g, chain, format_real(r.residual), format_real(r.residual_half), format_real(expo),
                            std::to_string(s.fock_cutoff), ""});
        }
        return rows;
    });
    CsvTable t;
    t.header = {"epsilon", "g", "chain", "residual", "residual_half", "scaling_exponent", "n_used", "flag"};
    for (const auto& b : blocks)
        for (const auto& r : b) t.add(r);
    return t;
}

inline constexpr ModelKind kMultiQubitModels[] = {ModelKind::FullRabi, ModelKind::TavisCummingsRWA,
                                                  ModelKind::DispersiveRWA, ModelKind::DispersiveNonRWA};

/// Long format: quantity, model, j, k, index, value. Quantities are J, Jbar,
/// commutator_norm (with the excitation number), eigenvalue and fock_cutoff.
inline CsvTable run_effective_model(const SweepConfig& cfg) {
    if (cfg.mode != Mode::EffectiveModel) throw InvalidArgument("config is not an effective_model");
    const SystemSpec base = detail::multi_qubit_spec(cfg);
    const Eigen::MatrixXd j_rwa = coupling_matrix(base, true);
    const Eigen::MatrixXd j_bar = coupling_matrix(base, false);

    auto lowest = [&](const SystemSpec& s) {
        const auto spectra = parallel_map<Eigen::VectorXd>(std::size(kMultiQubitModels), cfg.threads, [&](std::size_t m) {
            return eig_sym(build_hamiltonian(s, kMultiQubitModels[m])).eigenvalues;
        });
        return spectra;
    };
    const std::size_t n = with_converged_cutoff(base, detail::policy_of(cfg), [&](const SystemSpec& s) {
                              std::vector<double> v;
                              for (const auto& ev : lowest(s))
                                  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(ev.size(), static_cast<Eigen::Index>(cfg.levels)); ++k)
                                      v.push_back(ev(k));
                              return v;
                          }).second;
    const SystemSpec s = with_cutoff(base, n);
    const auto spectra = lowest(s);
    const Operator nexc = excitation_number(s.basis());

    CsvTable t;
    t.header = {"quantity", "model", "j", "k", "index", "value"};
    for (std::size_t j = 0; j < s.n_qubits(); ++j)
        for (std::size_t k = j + 1; k < s.n_qubits(); ++k)
            t.add({"J", "DispersiveRWA", std::to_string(j), std::to_string(k), "",
                   format_real(j_rwa(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)))});
    for (std::size_t j = 0; j < s.n_qubits(); ++j)
        for (std::size_t k = j + 1; k < s.n_qubits(); ++k)
            t.add({"Jbar", "DispersiveNonRWA", std::to_string(j), std::to_string(k), "",
                   format_real(j_bar(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)))});
    for (ModelKind kind : kMultiQubitModels) {
        const Operator c = commutator(build_hamiltonian(s, kind), nexc);
        t.add({"commutator_norm", std::string(to_string(kind)), "", "", "", format_real(norms(c.matrix()).max_abs)});
    }
    for (std::size_t m = 0; m < std::size(kMultiQubitModels); ++m) {
        const auto& ev = spectra[m];
        for (Eigen::Index k = 0; k < std::min<Eigen::Index>(ev.size(), static_cast<Eigen::Index>(cfg.levels)); ++k)
            t.add({"eigenvalue", std::string(to_string(kMultiQubitModels[m])), "", "", std::to_string(k),
                   format_real(ev(k))});
    }
    t.add({"fock_cutoff", "", "", "", "", std::to_string(n)});
    return t;
}

struct GroundStateRecord {
    ModelKind model = ModelKind::FullRabi;
    double energy = 0.0;
    double concurrence = 0.0;
    double amp_dd = 0.0;  // <dd, 0|psi>
    double amp_uu = 0.0;  // <uu, 0|psi>
};

inline GroundStateRecord ground_state_record(const SystemSpec& spec, ModelKind kind) {
    const GroundState gs = ground_state(spec, kind);
    const BasisSpec b = spec.basis();
    GroundStateRecord r;
    r.model = kind;
    r.energy = gs.energy;
    r.concurrence = concurrence(reduced_two_qubit_state(gs.vector, b));
    r.amp_dd = gs.vector(static_cast<Eigen::Index>(b.index({{Spin::Down, Spin::Down}, 0})));
    r.amp_uu = gs.vector(static_cast<Eigen::Index>(b.index({{Spin::Up, Spin::Up}, 0})));
    return r;
}

/// Predicted |uu> admixture of the Ising ground state, -Jbar / (eps_1 + eps_2).
inline double predicted_uu_amplitude(const SystemSpec& spec) {
    if (spec.n_qubits() != 2) throw InvalidArgument("prediction needs exactly two qubits");
    return -coupling_matrix(spec, false)(0, 1) / (spec.qubits[0].epsilon + spec.qubits[1].epsilon);
}

inline CsvTable run_ground_state(const SweepConfig& cfg) {
    if (cfg.mode != Mode::GroundState) throw InvalidArgument("config is not a ground_state");
    const SystemSpec base = detail::multi_qubit_spec(cfg);
    if (base.n_qubits() != 2) throw InvalidArgument("ground_state needs exactly two qubits");
    const double predicted = predicted_uu_amplitude(base);

    auto evaluate = [&](const SystemSpec& s) {
        return parallel_map<GroundStateRecord>(std::size(kMultiQubitModels), cfg.threads, [&](std::size_t m) {
            return ground_state_record(s, kMultiQubitModels[m]);
        });
    };
    const std::size_t n = with_converged_cutoff(base, detail::policy_of(cfg), [&](const SystemSpec& s) {
                              std::vector<double> v;
                              for (const auto& r : evaluate(s)) {
                                  v.push_back(r.energy);
                                  v.push_back(r.concurrence);
                              }
                              return v;
                          }).second;
    CsvTable t;
    t.header = {"model", "energy", "concurrence", "amp_dd", "amp_uu", "amp_uu_predicted", "n_used"};
    for (const auto& r : evaluate(with_cutoff(base, n)))
        t.add({std::string(to_string(r.model)), format_real(r.energy), format_real(r.concurrence),
               format_real(r.amp_dd), format_real(r.amp_uu), format_real(predicted), std::to_string(n)});
    return t;
}

inline CsvTable run_mode(const SweepConfig& cfg) {
    switch (cfg.mode) {
        case Mode::ShiftSweep: return run_shift_sweep(cfg);
        case Mode::Spectrum: return run_spectrum(cfg);
        case Mode::EffectiveModel: return run_effective_model(cfg);
        case Mode::GroundState: return run_ground_state(cfg);
        case Mode::ResidualScan: return run_residual_scan(cfg);
    }
    throw InvalidArgument("unknown mode");
}

}  // namespace dispersive
