// Copyright 2026 The lagmzi developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file scan.hpp
/// Declarative parameter sweeps over the closed forms, figure presets
/// bundling the published parameter choices, and deterministic CSV/JSON
/// emission. Sweep points are evaluated in parallel and reassembled in
/// input order, so output bytes do not depend on scheduling.
#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lagmzi/closed_form.hpp"
#include "lagmzi/qfi.hpp"

#ifndef LAGMZI_VERSION
#define LAGMZI_VERSION "0.0.0"
#endif

namespace lagmzi {

inline const char *library_version() { return LAGMZI_VERSION; }

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runs fn(0..count-1) on up to `workers` threads. Exceptions must be
/// handled inside fn; results should be written to index-addressed slots.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn &&fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    const int threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), count));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                fn(i);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

inline int default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

enum class SweepVariable { R, Phi, T1, T2, Eta, N };
enum class ScanScenario { Ideal, External, Internal, Qfi };
enum class Column {
    SweepValue,
    Parity,
    Sensitivity,
    Qfi,
    Qcrb,
    Sql,
    Hl,
    Nbar,
    PhiOpt,
    SensitivityOpt,
    GammaOpt,
};

inline const char *to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::R: return "r";
    case SweepVariable::Phi: return "phi";
    case SweepVariable::T1: return "t1";
    case SweepVariable::T2: return "t2";
    case SweepVariable::Eta: return "eta";
    case SweepVariable::N: return "n";
    }
    return "?";
}

inline const char *to_string(ScanScenario s) {
    switch (s) {
    case ScanScenario::Ideal: return "ideal";
    case ScanScenario::External: return "external";
    case ScanScenario::Internal: return "internal";
    case ScanScenario::Qfi: return "qfi";
    }
    return "?";
}

inline const char *to_string(Column c) {
    switch (c) {
    case Column::SweepValue: return "sweep";
    case Column::Parity: return "parity";
    case Column::Sensitivity: return "sensitivity";
    case Column::Qfi: return "qfi";
    case Column::Qcrb: return "qcrb";
    case Column::Sql: return "sql";
    case Column::Hl: return "hl";
    case Column::Nbar: return "nbar";
    case Column::PhiOpt: return "phi_opt";
    case Column::SensitivityOpt: return "sensitivity_opt";
    case Column::GammaOpt: return "gamma_opt";
    }
    return "?";
}

/// One parameter sweep: which variable runs, the fixed values of the
/// others, the loss scenario and the requested output columns. When `nbar`
/// is set the squeezing parameter is derived per point from the energy
/// target instead of being fixed.
struct ScanSpec {
    SweepVariable sweep = SweepVariable::R;
    std::vector<double> values;
    ScanScenario scenario = ScanScenario::Ideal;
    int n = 0;
    double r = 0.7;
    double phi = 0.1;
    double t1 = 1.0;
    double t2 = 1.0;
    double eta = 1.0;
    std::optional<double> nbar;
    std::vector<Column> outputs;
    double derivative_step = 1e-5;
    double phi_lo = 1e-4;
    double phi_hi = 1.0;
};

inline std::vector<double> linear_range(double lo, double hi, int count) {
    if (count < 1 || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw usage_error("range: need finite bounds and count >= 1");
    }
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    }
    return v;
}

inline std::vector<Column> default_columns(ScanScenario scenario) {
    if (scenario == ScanScenario::Qfi) {
        return {Column::SweepValue, Column::Qfi, Column::Qcrb, Column::Nbar,
                Column::Sql, Column::Hl};
    }
    return {Column::SweepValue, Column::Parity, Column::Sensitivity,
            Column::Nbar, Column::Sql, Column::Hl};
}

inline void validate(const ScanSpec &spec) {
    if (spec.values.empty()) {
        throw usage_error("scan: empty sweep range");
    }
    for (const double v : spec.values) {
        if (!std::isfinite(v)) {
            throw usage_error("scan: non-finite sweep value");
        }
    }
    if (spec.nbar && spec.sweep == SweepVariable::R) {
        throw usage_error("scan: fixed-energy mode cannot sweep r");
    }
    switch (spec.sweep) {
    case SweepVariable::T1:
        if (spec.scenario != ScanScenario::External) {
            throw usage_error("scan: sweeping t1 requires the external scenario");
        }
        break;
    case SweepVariable::T2:
        if (spec.scenario != ScanScenario::Internal) {
            throw usage_error("scan: sweeping t2 requires the internal scenario");
        }
        break;
    case SweepVariable::Eta:
        if (spec.scenario != ScanScenario::Qfi) {
            throw usage_error("scan: sweeping eta requires the qfi scenario");
        }
        break;
    case SweepVariable::N:
        for (const double v : spec.values) {
            if (v < 0.0 || v != std::floor(v)) {
                throw usage_error("scan: n sweep values must be integers >= 0");
            }
        }
        break;
    default:
        break;
    }
    const bool qfi = spec.scenario == ScanScenario::Qfi;
    for (const Column c : spec.outputs) {
        const bool parity_like = c == Column::Parity || c == Column::Sensitivity ||
                                 c == Column::PhiOpt || c == Column::SensitivityOpt;
        const bool qfi_like = c == Column::Qfi || c == Column::Qcrb ||
                              c == Column::GammaOpt;
        if (qfi && parity_like) {
            throw usage_error(std::string("scan: column '") + to_string(c) +
                              "' needs a parity scenario");
        }
        if (!qfi && qfi_like) {
            throw usage_error(std::string("scan: column '") + to_string(c) +
                              "' needs the qfi scenario");
        }
    }
}

struct SweepRow {
    double sweep_value = 0.0;
    std::vector<double> cells; // aligned with result columns; may hold inf
    std::string error;         // empty when the point evaluated cleanly
};

struct SweepResult {
    ScanSpec spec;
    std::vector<std::string> column_names;
    std::vector<SweepRow> rows;
};

namespace detail {

struct PointParams {
    int n;
    double r, phi, t1, t2, eta;
};

inline PointParams resolve_point(const ScanSpec &spec, double value) {
    PointParams p{spec.n, spec.r, spec.phi, spec.t1, spec.t2, spec.eta};
    switch (spec.sweep) {
    case SweepVariable::R: p.r = value; break;
    case SweepVariable::Phi: p.phi = value; break;
    case SweepVariable::T1: p.t1 = value; break;
    case SweepVariable::T2: p.t2 = value; break;
    case SweepVariable::Eta: p.eta = value; break;
    case SweepVariable::N: p.n = static_cast<int>(value); break;
    }
    if (spec.nbar) {
        p.r = r_for_energy(*spec.nbar, p.n);
    }
    return p;
}

inline SchemeParams scheme_params(const ScanScenario scenario,
                                  const PointParams &p) {
    SchemeParams s;
    s.n = p.n;
    s.r = p.r;
    s.phi = p.phi;
    switch (scenario) {
    case ScanScenario::Ideal:
        s.scenario = Scenario::Ideal;
        s.transmissivity = 1.0;
        break;
    case ScanScenario::External:
        s.scenario = Scenario::External;
        s.transmissivity = p.t1;
        break;
    case ScanScenario::Internal:
        s.scenario = Scenario::Internal;
        s.transmissivity = p.t2;
        break;
    case ScanScenario::Qfi:
        throw usage_error("scan: parity columns need a parity scenario");
    }
    return s;
}

} // namespace detail

/// Evaluates the sweep. Divergent sensitivities become +infinity (rendered
/// "inf"); any other per-point failure lands in the row's error cell
/// without aborting the remaining points.
inline SweepResult run_sweep(ScanSpec spec, int workers = default_workers()) {
    if (spec.outputs.empty()) {
        spec.outputs = default_columns(spec.scenario);
    }
    validate(spec);
    SweepResult result;
    result.spec = spec;
    for (const Column c : spec.outputs) {
        result.column_names.emplace_back(
            c == Column::SweepValue ? to_string(spec.sweep) : to_string(c));
    }
    result.rows.resize(spec.values.size());
    parallel_for(spec.values.size(), workers, [&](std::size_t i) {
        SweepRow &row = result.rows[i];
        row.sweep_value = spec.values[i];
        row.cells.assign(spec.outputs.size(),
                         std::numeric_limits<double>::quiet_NaN());
        try {
            const auto p = detail::resolve_point(spec, spec.values[i]);
            std::optional<PhiOptimum> phi_opt;
            for (std::size_t c = 0; c < spec.outputs.size(); ++c) {
                const Column col = spec.outputs[c];
                double v = std::numeric_limits<double>::quiet_NaN();
                switch (col) {
                case Column::SweepValue:
                    v = spec.values[i];
                    break;
                case Column::Parity:
                    v = parity(detail::scheme_params(spec.scenario, p));
                    break;
                case Column::Sensitivity:
                    try {
                        v = sensitivity(detail::scheme_params(spec.scenario, p),
                                        spec.derivative_step);
                    } catch (const divergent_sensitivity_error &) {
                        v = std::numeric_limits<double>::infinity();
                    }
                    break;
                case Column::Qfi:
                    v = qfi_lossy(QfiParams{p.n, p.r, p.eta});
                    break;
                case Column::Qcrb:
                    v = qcrb(qfi_lossy(QfiParams{p.n, p.r, p.eta}));
                    break;
                case Column::Sql:
                    v = sql(mean_total_photons(p.n, p.r));
                    break;
                case Column::Hl:
                    v = hl(mean_total_photons(p.n, p.r));
                    break;
                case Column::Nbar:
                    v = mean_total_photons(p.n, p.r);
                    break;
                case Column::PhiOpt:
                case Column::SensitivityOpt:
                    if (!phi_opt) {
                        phi_opt = optimal_sensitivity_over_phi(
                            detail::scheme_params(spec.scenario, p), spec.phi_lo,
                            spec.phi_hi, spec.derivative_step);
                    }
                    v = col == Column::PhiOpt ? phi_opt->phi : phi_opt->value;
                    break;
                case Column::GammaOpt:
                    v = gamma_opt(QfiParams{p.n, p.r, p.eta});
                    break;
                }
                row.cells[c] = v;
            }
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    });
    return result;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

inline std::string compact_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline std::string format_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::json to_json(const ScanSpec &spec) {
    nlohmann::json j;
    j["sweep"] = to_string(spec.sweep);
    j["scenario"] = to_string(spec.scenario);
    j["values"] = spec.values;
    j["n"] = spec.n;
    j["r"] = spec.r;
    j["phi"] = spec.phi;
    j["t1"] = spec.t1;
    j["t2"] = spec.t2;
    j["eta"] = spec.eta;
    if (spec.nbar) {
        j["nbar"] = *spec.nbar;
    }
    j["derivative_step"] = spec.derivative_step;
    j["phi_window"] = {spec.phi_lo, spec.phi_hi};
    std::vector<std::string> cols;
    for (const Column c : spec.outputs) {
        cols.emplace_back(to_string(c));
    }
    j["outputs"] = cols;
    return j;
}

/// CSV with a '#'-prefixed JSON manifest line, a header row and one row per
/// sweep point; floats carry 17 significant digits.
inline std::string to_csv(const SweepResult &result) {
    std::ostringstream out;
    nlohmann::json meta;
    meta["spec"] = to_json(result.spec);
    meta["version"] = library_version();
    out << "# " << meta.dump() << "\n";
    for (std::size_t c = 0; c < result.column_names.size(); ++c) {
        out << (c ? "," : "") << result.column_names[c];
    }
    out << ",error\n";
    for (const auto &row : result.rows) {
        for (std::size_t c = 0; c < row.cells.size(); ++c) {
            out << (c ? "," : "") << format_double(row.cells[c]);
        }
        out << ',' << row.error << "\n";
    }
    return out.str();
}

inline nlohmann::json to_json(const SweepResult &result) {
    nlohmann::json j;
    j["spec"] = to_json(result.spec);
    j["version"] = library_version();
    j["columns"] = result.column_names;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : result.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const double v : row.cells) {
            if (std::isnan(v)) {
                r.push_back(nullptr);
            } else if (std::isinf(v)) {
                r.push_back(v > 0 ? "inf" : "-inf");
            } else {
                r.push_back(v);
            }
        }
        if (!row.error.empty()) {
            r.push_back(row.error);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

// ---------------------------------------------------------------------------
// figure presets
// ---------------------------------------------------------------------------

struct SeriesSpec {
    std::string label;
    ScanSpec spec;
};

struct FigurePreset {
    std::string name;
    std::string title;
    std::vector<SeriesSpec> series;
};

namespace detail {

inline ScanSpec sens_vs_r(int n, double phi, ScanScenario sc, double t,
                          std::optional<double> nbar = std::nullopt) {
    ScanSpec s;
    s.sweep = SweepVariable::R;
    s.values = linear_range(0.1, 1.5, 50);
    s.scenario = sc;
    s.n = n;
    s.phi = phi;
    (sc == ScanScenario::Internal ? s.t2 : s.t1) = t;
    s.nbar = nbar;
    s.outputs = {Column::SweepValue, Column::Sensitivity, Column::Nbar,
                 Column::Sql, Column::Hl};
    return s;
}

inline ScanSpec sens_vs_phi(int n, double r, ScanScenario sc, double t,
                            std::optional<double> nbar = std::nullopt) {
    ScanSpec s;
    s.sweep = SweepVariable::Phi;
    s.values = linear_range(0.001, 1.2, 60);
    s.scenario = sc;
    s.n = n;
    s.r = r;
    (sc == ScanScenario::Internal ? s.t2 : s.t1) = t;
    s.nbar = nbar;
    s.outputs = {Column::SweepValue, Column::Parity, Column::Sensitivity};
    return s;
}

inline ScanSpec sens_vs_t(int n, double r, double phi, ScanScenario sc) {
    ScanSpec s;
    s.sweep = sc == ScanScenario::Internal ? SweepVariable::T2 : SweepVariable::T1;
    s.values = linear_range(0.7, 1.0, 31);
    s.scenario = sc;
    s.n = n;
    s.r = r;
    s.phi = phi;
    s.outputs = {Column::SweepValue, Column::Sensitivity};
    return s;
}

inline ScanSpec limits_vs_r(int n) {
    ScanSpec s;
    s.sweep = SweepVariable::R;
    s.values = linear_range(0.1, 1.5, 50);
    s.scenario = ScanScenario::Ideal;
    s.n = n;
    s.phi = 0.1;
    s.outputs = {Column::SweepValue, Column::Nbar, Column::Sql, Column::Hl};
    return s;
}

inline ScanSpec fig8_series(int n, double phi, ScanScenario sc, double t,
                            bool optimized) {
    ScanSpec s = sens_vs_r(n, phi, sc, t);
    s.values = linear_range(0.2, 1.5, 40);
    if (optimized) {
        s.outputs = {Column::SweepValue, Column::PhiOpt, Column::SensitivityOpt,
                     Column::Nbar, Column::Sql, Column::Hl};
        s.phi_lo = 1e-4;
        s.phi_hi = 1.0;
    }
    return s;
}

inline ScanSpec qfi_vs_eta(int n, double r) {
    ScanSpec s;
    s.sweep = SweepVariable::Eta;
    s.values = linear_range(0.3, 1.0, 36);
    s.scenario = ScanScenario::Qfi;
    s.n = n;
    s.r = r;
    s.outputs = {Column::SweepValue, Column::Qfi};
    return s;
}

inline ScanSpec qfi_vs_r(int n, double eta, bool bound_columns) {
    ScanSpec s;
    s.sweep = SweepVariable::R;
    s.values = linear_range(0.1, 1.5, 50);
    s.scenario = ScanScenario::Qfi;
    s.n = n;
    s.eta = eta;
    s.outputs = bound_columns
                    ? std::vector<Column>{Column::SweepValue, Column::Qcrb,
                                          Column::Nbar, Column::Sql, Column::Hl}
                    : std::vector<Column>{Column::SweepValue, Column::Qfi};
    return s;
}

inline void add_fig8_panel(std::map<std::string, FigurePreset> &m,
                           const std::string &name, int n, double phi,
                           double t) {
    FigurePreset f;
    f.name = name;
    f.title = "sensitivity vs r against the quantum limits, order " +
              std::to_string(n);
    f.series = {
        {"external_fixed_phi", fig8_series(n, phi, ScanScenario::External, t, false)},
        {"internal_fixed_phi", fig8_series(n, phi, ScanScenario::Internal, t, false)},
        {"external_opt_phi", fig8_series(n, phi, ScanScenario::External, t, true)},
        {"internal_opt_phi", fig8_series(n, phi, ScanScenario::Internal, t, true)},
    };
    m.emplace(name, std::move(f));
}

} // namespace detail

/// The preset table. Fixed parameters come from the published figure
/// captions; sweep ranges are library defaults. The panels that fix the
/// phase while discussing a phase-optimized comparison emit both the
/// fixed-phase and the optimized series.
inline const std::map<std::string, FigurePreset> &figure_presets() {
    static const std::map<std::string, FigurePreset> presets = [] {
        std::map<std::string, FigurePreset> m;
        auto family = [&](const std::string &name, const std::string &title,
                          auto make) {
            FigurePreset f;
            f.name = name;
            f.title = title;
            for (int n = 0; n <= 3; ++n) {
                make(f, n);
            }
            m.emplace(name, std::move(f));
        };

        family("fig3a", "external loss: sensitivity vs squeezing, phi=0.001",
               [](FigurePreset &f, int n) {
                   for (double t : {1.0, 0.95}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_t1_" + compact_double(t),
                            detail::sens_vs_r(n, 0.001, ScanScenario::External, t)});
                   }
               });
        family("fig3b", "external loss: sensitivity vs transmissivity, r=0.7",
               [](FigurePreset &f, int n) {
                   f.series.push_back(
                       {"n" + std::to_string(n),
                        detail::sens_vs_t(n, 0.7, 0.05, ScanScenario::External)});
               });
        family("fig4a", "external loss: sensitivity vs phase, r=0.7",
               [](FigurePreset &f, int n) {
                   for (double t : {1.0, 0.95}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_t1_" + compact_double(t),
                            detail::sens_vs_phi(n, 0.7, ScanScenario::External, t)});
                   }
               });
        family("fig4b", "external loss: sensitivity vs phase, nbar=8",
               [](FigurePreset &f, int n) {
                   for (double t : {1.0, 0.95}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_t1_" + compact_double(t),
                            detail::sens_vs_phi(n, 0.7, ScanScenario::External, t,
                                                8.0)});
                   }
               });
        family("fig5a", "internal loss: sensitivity vs squeezing, phi=0.001",
               [](FigurePreset &f, int n) {
                   for (double t : {1.0, 0.95}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_t2_" + compact_double(t),
                            detail::sens_vs_r(n, 0.001, ScanScenario::Internal, t)});
                   }
               });
        family("fig5b", "internal loss: sensitivity vs transmissivity, r=0.7",
               [](FigurePreset &f, int n) {
                   f.series.push_back(
                       {"n" + std::to_string(n),
                        detail::sens_vs_t(n, 0.7, 0.05, ScanScenario::Internal)});
               });
        family("fig6a", "internal loss: sensitivity vs phase, r=0.7",
               [](FigurePreset &f, int n) {
                   for (double t : {1.0, 0.95}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_t2_" + compact_double(t),
                            detail::sens_vs_phi(n, 0.7, ScanScenario::Internal, t)});
                   }
               });
        family("fig6b", "internal loss: sensitivity vs phase, nbar=8",
               [](FigurePreset &f, int n) {
                   for (double t : {1.0, 0.95}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_t2_" + compact_double(t),
                            detail::sens_vs_phi(n, 0.7, ScanScenario::Internal, t,
                                                8.0)});
                   }
               });
        family("fig7", "external vs internal loss at phi=0.05, r=0.7",
               [](FigurePreset &f, int n) {
                   f.series.push_back(
                       {"n" + std::to_string(n) + "_external",
                        detail::sens_vs_t(n, 0.7, 0.05, ScanScenario::External)});
                   f.series.push_back(
                       {"n" + std::to_string(n) + "_internal",
                        detail::sens_vs_t(n, 0.7, 0.05, ScanScenario::Internal)});
               });
        detail::add_fig8_panel(m, "fig8a", 0, 0.2, 0.96);
        detail::add_fig8_panel(m, "fig8b", 1, 0.15, 0.95);
        detail::add_fig8_panel(m, "fig8c", 2, 0.12, 0.95);
        detail::add_fig8_panel(m, "fig8d", 3, 0.1, 0.95);
        family("fig10", "lossy Fisher information vs transmissivity, r=0.7",
               [](FigurePreset &f, int n) {
                   f.series.push_back(
                       {"n" + std::to_string(n), detail::qfi_vs_eta(n, 0.7)});
               });
        family("fig11a", "Fisher information vs squeezing",
               [](FigurePreset &f, int n) {
                   for (double eta : {1.0, 0.8}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_eta_" + compact_double(eta),
                            detail::qfi_vs_r(n, eta, false)});
                   }
               });
        family("fig11b", "phase bound vs squeezing",
               [](FigurePreset &f, int n) {
                   for (double eta : {1.0, 0.8}) {
                       f.series.push_back(
                           {"n" + std::to_string(n) + "_eta_" + compact_double(eta),
                            detail::qfi_vs_r(n, eta, true)});
                   }
               });
        for (int n = 0; n <= 3; ++n) {
            FigurePreset f;
            f.name = "fig12" + std::string(1, static_cast<char>('a' + n));
            f.title = "phase bound vs squeezing against the quantum limits, "
                      "order " +
                      std::to_string(n);
            for (double eta : {1.0, 0.8}) {
                f.series.push_back({"eta_" + compact_double(eta),
                                    detail::qfi_vs_r(n, eta, true)});
            }
            m.emplace(f.name, std::move(f));
        }
        return m;
    }();
    return presets;
}

/// Runs every series of a preset and writes one CSV (or JSON) per series
/// plus a JSON manifest. Output is a pure function of the preset and the
/// library version, so consecutive runs are byte-identical.
inline std::vector<std::filesystem::path>
run_figure_preset(const std::string &name, const std::filesystem::path &out_dir,
                  int workers = default_workers(),
                  const std::string &format = "csv") {
    const auto &presets = figure_presets();
    const auto it = presets.find(name);
    if (it == presets.end()) {
        std::string known;
        for (const auto &[key, unused] : presets) {
            known += known.empty() ? key : ", " + key;
        }
        throw usage_error("unknown figure preset '" + name + "'; expected one of " +
                          known);
    }
    if (format != "csv" && format != "json") {
        throw usage_error("figure: format must be csv or json");
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    nlohmann::json manifest;
    manifest["preset"] = it->second.name;
    manifest["title"] = it->second.title;
    manifest["version"] = library_version();
    nlohmann::json series_meta = nlohmann::json::array();
    for (const auto &series : it->second.series) {
        const SweepResult result = run_sweep(series.spec, workers);
        const std::filesystem::path file =
            out_dir / (name + "__" + series.label + "." + format);
        std::ofstream out(file, std::ios::binary);
        if (!out) {
            throw std::runtime_error("figure: cannot write " + file.string());
        }
        if (format == "csv") {
            out << to_csv(result);
        } else {
            out << to_json(result).dump(2) << "\n";
        }
        written.push_back(file);
        nlohmann::json meta;
        meta["label"] = series.label;
        meta["file"] = file.filename().string();
        meta["spec"] = to_json(series.spec);
        series_meta.push_back(std::move(meta));
    }
    manifest["series"] = std::move(series_meta);
    const std::filesystem::path mf = out_dir / (name + "__manifest.json");
    std::ofstream out(mf, std::ios::binary);
    out << manifest.dump(2) << "\n";
    written.push_back(mf);
    return written;
}

} // namespace lagmzi
