// config.hpp: key = value run configuration for the sweep front end
//
// One pair per line, '#' starts a comment, keys are case-sensitive. Lists
// are comma separated. Every error names the offending line or key.
//
//   mode          shift_sweep | spectrum | effective_model | ground_state | residual_scan   (required)
//   omega         oscillator frequency, default 1
//   epsilon       explicit list of qubit splittings, or
//   epsilon_min, epsilon_max, epsilon_step   inclusive grid
//   g             list of couplings
//   spin          up | down | both, default down
//   fock_cutoff   integer >= 2 or "auto", default 40
//   n_qubits      optional check on the per-qubit lists
//   qubit_epsilon, qubit_g   per-qubit lists; a single value is broadcast to n_qubits
//   model         list of Hamiltonian kinds for spectrum, default FullRabi
//   levels        eigenvalues per model, default 6
//   min_overlap   branch classification threshold, default 0.5
//   threads       worker threads for grid points, default 1
//   output        CSV path, default standard output

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dispersive/error.hpp"
#include "dispersive/model.hpp"
#include "dispersive/operator.hpp"
#include "dispersive/system.hpp"

namespace dispersive {

enum class Mode { ShiftSweep, Spectrum, EffectiveModel, GroundState, ResidualScan };

inline constexpr std::string_view to_string(Mode m) noexcept {
    switch (m) {
        case Mode::ShiftSweep: return "shift_sweep";
        case Mode::Spectrum: return "spectrum";
        case Mode::EffectiveModel: return "effective_model";
        case Mode::GroundState: return "ground_state";
        case Mode::ResidualScan: return "residual_scan";
    }
    return "?";
}

struct SweepConfig {
    Mode mode = Mode::ShiftSweep;
    double omega = 1.0;
    std::vector<double> epsilons;
    std::vector<double> couplings;
    std::vector<Spin> spins{Spin::Down};
    std::size_t fock_cutoff = 40;
    bool auto_cutoff = false;
    std::vector<QubitParams> qubits;
    std::vector<ModelKind> models{ModelKind::FullRabi};
    std::size_t levels = 6;
    double min_overlap = 0.5;
    std::size_t threads = 1;
    std::string output;
};

/// Starting cutoff when fock_cutoff = auto.
inline constexpr std::size_t kAutoCutoffStart = 10;

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct ConfigLine {
    std::size_t number;
    std::string value;
};

inline ConfigError line_error(std::size_t line, const std::string& what) {
    return ConfigError("line " + std::to_string(line) + ": " + what);
}

inline double parse_real(const ConfigLine& l, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw line_error(l.number, "malformed number '" + std::string(text) + "'");
    return v;
}

inline std::size_t parse_count(const ConfigLine& l) {
    const std::string_view text = trim(l.value);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw line_error(l.number, "malformed integer '" + std::string(text) + "'");
    return v;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) return out;
        start = comma + 1;
    }
}

inline std::vector<double> parse_reals(const ConfigLine& l) {
    std::vector<double> out;
    for (auto item : split_list(l.value)) out.push_back(parse_real(l, item));
    return out;
}

inline Mode parse_mode(const ConfigLine& l) {
    for (Mode m : {Mode::ShiftSweep, Mode::Spectrum, Mode::EffectiveModel, Mode::GroundState, Mode::ResidualScan})
        if (l.value == to_string(m)) return m;
    throw line_error(l.number, "unknown mode '" + l.value + "'");
}

inline ModelKind parse_model(const ConfigLine& l, std::string_view name) {
    for (ModelKind k : {ModelKind::FullRabi, ModelKind::JaynesCummingsRWA, ModelKind::TavisCummingsRWA,
                        ModelKind::DispersiveRWA, ModelKind::DispersiveNonRWA})
        if (name == to_string(k)) return k;
    throw line_error(l.number, "unknown model '" + std::string(name) + "'");
}

// Grid points are snapped to 1e-12 so that accumulated rounding never moves
// a nominal point such as epsilon = omega off its exact value.
inline std::vector<double> inclusive_grid(double lo, double hi, double step) {
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    return out;
}

}  // namespace detail

inline SweepConfig parse_config(std::string_view text) {
    static const char* const known[] = {"mode",       "omega",         "epsilon", "epsilon_min", "epsilon_max",
                                        "epsilon_step", "g",           "spin",    "fock_cutoff", "n_qubits",
                                        "qubit_epsilon", "qubit_g",    "model",   "levels",      "min_overlap",
                                        "threads",    "output"};
    std::map<std::string, detail::ConfigLine> kv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw detail::line_error(line_no, "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw detail::line_error(line_no, "unknown key '" + key + "'");
        if (value.empty()) throw detail::line_error(line_no, "empty value for '" + key + "'");
        if (kv.count(key)) throw detail::line_error(line_no, "duplicate key '" + key + "'");
        kv.emplace(key, detail::ConfigLine{line_no, value});
    }

    auto get = [&](const char* key) -> const detail::ConfigLine* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const char* key) -> const detail::ConfigLine& {
        const auto* l = get(key);
        if (l == nullptr) throw ConfigError(std::string("missing required key '") + key + "'");
        return *l;
    };

    SweepConfig cfg;
    cfg.mode = detail::parse_mode(require("mode"));

    if (const auto* l = get("omega")) {
        cfg.omega = detail::parse_real(*l, l->value);
        if (cfg.omega <= 0.0) throw detail::line_error(l->number, "omega must be positive");
    }
    if (const auto* l = get("fock_cutoff")) {
        if (l->value == "auto") {
            cfg.auto_cutoff = true;
            cfg.fock_cutoff = kAutoCutoffStart;
        } else {
            cfg.fock_cutoff = detail::parse_count(*l);
            if (cfg.fock_cutoff < 2) throw detail::line_error(l->number, "fock_cutoff must be at least 2");
        }
    }
    if (const auto* l = get("spin")) {
        if (l->value == "up") cfg.spins = {Spin::Up};
        else if (l->value == "down") cfg.spins = {Spin::Down};
        else if (l->value == "both") cfg.spins = {Spin::Up, Spin::Down};
        else throw detail::line_error(l->number, "spin must be up, down or both");
    }
    if (const auto* l = get("model")) {
        cfg.models.clear();
        for (auto name : detail::split_list(l->value)) cfg.models.push_back(detail::parse_model(*l, name));
    }
    if (const auto* l = get("levels")) {
        cfg.levels = detail::parse_count(*l);
        if (cfg.levels == 0) throw detail::line_error(l->number, "levels must be positive");
    }
    if (const auto* l = get("min_overlap")) {
        cfg.min_overlap = detail::parse_real(*l, l->value);
        if (cfg.min_overlap < 0.0 || cfg.min_overlap >= 1.0)
            throw detail::line_error(l->number, "min_overlap must lie in [0, 1)");
    }
    if (const auto* l = get("threads")) {
        cfg.threads = detail::parse_count(*l);
        if (cfg.threads == 0) throw detail::line_error(l->number, "threads must be positive");
    }
    if (const auto* l = get("output")) cfg.output = l->value;

    const bool grid_mode = cfg.mode == Mode::ShiftSweep || cfg.mode == Mode::Spectrum || cfg.mode == Mode::ResidualScan;
    if (grid_mode) {
        const auto* list = get("epsilon");
        const auto* lo = get("epsilon_min");
        if (list != nullptr && lo != nullptr) throw detail::line_error(lo->number, "give either epsilon or epsilon_min/max/step");
        if (list != nullptr) {
            cfg.epsilons = detail::parse_reals(*list);
        } else {
            const auto& mn = require("epsilon_min");
            const auto& mx = require("epsilon_max");
            const auto& st = require("epsilon_step");
            const double a = detail::parse_real(mn, mn.value);
            const double b = detail::parse_real(mx, mx.value);
            const double step = detail::parse_real(st, st.value);
            if (step <= 0.0) throw detail::line_error(st.number, "epsilon_step must be positive");
            if (b < a) throw detail::line_error(mx.number, "epsilon_max below epsilon_min");
            cfg.epsilons = detail::inclusive_grid(a, b, step);
        }
        const auto& gl = require("g");
        cfg.couplings = detail::parse_reals(gl);
        for (double e : cfg.epsilons)
            if (e < 0.0) throw ConfigError("epsilon values must be non-negative");
        for (double g : cfg.couplings)
            if (g < 0.0) throw detail::line_error(gl.number, "g values must be non-negative");
        if (cfg.mode == Mode::ResidualScan && cfg.auto_cutoff)
            throw detail::line_error(get("fock_cutoff")->number, "residual_scan needs a fixed fock_cutoff");
    } else {
        const auto& el = require("qubit_epsilon");
        const auto& gl = require("qubit_g");
        std::vector<double> eps = detail::parse_reals(el);
        std::vector<double> gs = detail::parse_reals(gl);
        std::size_t n = std::max(eps.size(), gs.size());
        if (const auto* l = get("n_qubits")) {
            n = detail::parse_count(*l);
            for (auto* v : {&eps, &gs})
                if (v->size() == 1) v->assign(n, v->front());
            if (eps.size() != n) throw detail::line_error(el.number, "qubit_epsilon does not have n_qubits entries");
            if (gs.size() != n) throw detail::line_error(gl.number, "qubit_g does not have n_qubits entries");
        } else {
            if (eps.size() == 1) eps.assign(n, eps.front());
            if (gs.size() == 1) gs.assign(n, gs.front());
            if (eps.size() != gs.size()) throw detail::line_error(gl.number, "qubit_g and qubit_epsilon differ in length");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (eps[j] < 0.0) throw detail::line_error(el.number, "qubit_epsilon must be non-negative");
            if (gs[j] < 0.0) throw detail::line_error(gl.number, "qubit_g must be non-negative");
            cfg.qubits.push_back({eps[j], gs[j]});
        }
        if (cfg.qubits.size() < 2) throw detail::line_error(el.number, "multi-qubit modes need at least two qubits");
        if (cfg.mode == Mode::GroundState && cfg.qubits.size() != 2)
            throw detail::line_error(el.number, "ground_state needs exactly two qubits");
    }
    return cfg;
}

inline SweepConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace dispersive
