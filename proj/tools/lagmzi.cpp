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

// Command-line front end: parameter sweeps, figure presets, phase
// optimization, verification runs, energy solving and state dumps.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lagmzi/fock.hpp"
#include "lagmzi/scan.hpp"
#include "lagmzi/verify.hpp"

namespace {

using namespace lagmzi;

struct CommonParams {
    int n = 0;
    double r = 0.7;
    double phi = 0.1;
    double t1 = 1.0;
    double t2 = 1.0;
    double eta = 1.0;
    std::optional<double> nbar;
    std::string scenario = "ideal";
    int workers = default_workers();
    double deriv_step = 1e-5;
};

ScanScenario parse_scenario(const std::string &name) {
    if (name == "ideal") return ScanScenario::Ideal;
    if (name == "external") return ScanScenario::External;
    if (name == "internal") return ScanScenario::Internal;
    if (name == "qfi") return ScanScenario::Qfi;
    throw usage_error("unknown scenario '" + name +
                      "' (expected ideal|external|internal|qfi)");
}

SweepVariable parse_sweep(const std::string &name) {
    if (name == "r") return SweepVariable::R;
    if (name == "phi") return SweepVariable::Phi;
    if (name == "t1") return SweepVariable::T1;
    if (name == "t2") return SweepVariable::T2;
    if (name == "eta") return SweepVariable::Eta;
    if (name == "n") return SweepVariable::N;
    throw usage_error("unknown sweep variable '" + name +
                      "' (expected r|phi|t1|t2|eta|n)");
}

Column parse_column(const std::string &name) {
    for (const Column c :
         {Column::SweepValue, Column::Parity, Column::Sensitivity, Column::Qfi,
          Column::Qcrb, Column::Sql, Column::Hl, Column::Nbar, Column::PhiOpt,
          Column::SensitivityOpt, Column::GammaOpt}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw usage_error("unknown column '" + name + "'");
}

std::vector<double> parse_range(const std::string &text) {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3) {
        throw usage_error("--range expects lo:hi:count");
    }
    return linear_range(lo, hi, count);
}

void write_output(const std::string &text, const std::string &out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + out_path);
    }
    out << text;
}

std::string default_out_dir() {
    const char *env = std::getenv("LAGMZI_OUT_DIR");
    return env != nullptr ? env : ".";
}

SchemeParams scheme_from(const CommonParams &c) {
    SchemeParams p;
    p.n = c.n;
    p.r = c.nbar ? r_for_energy(*c.nbar, c.n) : c.r;
    p.phi = c.phi;
    switch (parse_scenario(c.scenario)) {
    case ScanScenario::Ideal:
        p.scenario = Scenario::Ideal;
        break;
    case ScanScenario::External:
        p.scenario = Scenario::External;
        p.transmissivity = c.t1;
        break;
    case ScanScenario::Internal:
        p.scenario = Scenario::Internal;
        p.transmissivity = c.t2;
        break;
    case ScanScenario::Qfi:
        throw usage_error("this subcommand needs a parity scenario");
    }
    return p;
}

void add_common(CLI::App *cmd, CommonParams &c) {
    cmd->add_option("--n", c.n, "excitation order");
    cmd->add_option("--r", c.r, "squeezing parameter");
    cmd->add_option("--phi", c.phi, "phase shift (shifted convention)");
    cmd->add_option("--t1", c.t1, "external-loss transmissivity");
    cmd->add_option("--t2", c.t2, "internal-loss transmissivity");
    cmd->add_option("--eta", c.eta, "loss transmissivity of the Fisher model");
    cmd->add_option("--nbar", c.nbar,
                    "fix the total mean photon number (derives r)");
    cmd->add_option("--scenario", c.scenario,
                    "ideal|external|internal|qfi");
    cmd->add_option("--workers", c.workers, "worker threads");
    cmd->add_option("--deriv-step", c.deriv_step,
                    "central-difference step for sensitivities");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Parity-detection phase estimation for a "
                 "Mach-Zehnder interferometer fed with squeezed "
                 "twin-Fock states"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "read options from a TOML config file");
    app.set_version_flag("--version", library_version());

    CommonParams common;
    std::string range_text;
    std::string values_text;
    std::string sweep_name = "r";
    std::string columns_text;
    std::string out_path;
    std::string out_dir = default_out_dir();
    std::string format = "csv";
    std::string level = "quick";
    double lo = 1e-4;
    double hi = 1.0;
    int cutoff = -1;
    double tail_tol = 1e-12;

    CLI::App *sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, common);
    sweep->add_option("--sweep", sweep_name, "swept variable: r|phi|t1|t2|eta|n");
    sweep->add_option("--range", range_text, "sweep range lo:hi:count");
    sweep->add_option("--values", values_text, "explicit sweep values, comma separated");
    sweep->add_option("--columns", columns_text, "output columns, comma separated");
    sweep->add_option("--out", out_path, "output file (default stdout)");
    sweep->add_option("--format", format, "csv|json");

    CLI::App *figure =
        app.add_subcommand("figure", "emit the data bundle of a figure preset");
    std::string preset;
    figure->add_option("preset", preset, "preset name, e.g. fig3a");
    figure->add_option("--out-dir", out_dir,
                       "output directory (default $LAGMZI_OUT_DIR or .)");
    figure->add_option("--format", format, "csv|json");
    figure->add_option("--workers", common.workers, "worker threads");
    figure->add_flag("--list", "list available presets");

    CLI::App *optimize =
        app.add_subcommand("optimize-phi", "minimize sensitivity over the phase");
    add_common(optimize, common);
    optimize->add_option("--lo", lo, "lower edge of the search window");
    optimize->add_option("--hi", hi, "upper edge of the search window");
    optimize->add_option("--format", format, "text|json");

    CLI::App *verify =
        app.add_subcommand("verify", "run the cross-validation battery");
    verify->add_option("--level", level, "quick|full");
    verify->add_option("--workers", common.workers, "worker threads");
    verify->add_option("--format", format, "text|json");
    verify->add_option("--out", out_path, "write the report to a file");

    CLI::App *energy =
        app.add_subcommand("energy-solve", "squeezing parameter for a target energy");
    energy->add_option("--nbar", common.nbar, "target total mean photon number")
        ->required();
    energy->add_option("--n", common.n, "excitation order");

    CLI::App *dump = app.add_subcommand(
        "state-dump", "dump the input state amplitudes as JSON");
    dump->add_option("--n", common.n, "excitation order");
    dump->add_option("--r", common.r, "squeezing parameter");
    dump->add_option("--cutoff", cutoff, "per-mode cutoff (default: derived)");
    dump->add_option("--tail-tol", tail_tol, "truncation tolerance");
    dump->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            ScanSpec spec;
            spec.sweep = parse_sweep(sweep_name);
            if (!range_text.empty()) {
                spec.values = parse_range(range_text);
            }
            if (!values_text.empty()) {
                std::stringstream ss(values_text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    spec.values.push_back(std::stod(item));
                }
            }
            spec.scenario = parse_scenario(common.scenario);
            spec.n = common.n;
            spec.r = common.r;
            spec.phi = common.phi;
            spec.t1 = common.t1;
            spec.t2 = common.t2;
            spec.eta = common.eta;
            spec.nbar = common.nbar;
            spec.derivative_step = common.deriv_step;
            if (!columns_text.empty()) {
                std::stringstream ss(columns_text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    spec.outputs.push_back(parse_column(item));
                }
            }
            const SweepResult result = run_sweep(spec, common.workers);
            write_output(format == "json" ? to_json(result).dump(2) + "\n"
                                          : to_csv(result),
                         out_path);
        } else if (figure->parsed()) {
            if (figure->count("--list") > 0) {
                for (const auto &[name, f] : figure_presets()) {
                    std::printf("%-8s %s\n", name.c_str(), f.title.c_str());
                }
                return 0;
            }
            if (preset.empty()) {
                throw usage_error("figure: preset name required (or --list)");
            }
            const auto files =
                run_figure_preset(preset, out_dir, common.workers, format);
            for (const auto &f : files) {
                std::printf("%s\n", f.string().c_str());
            }
        } else if (optimize->parsed()) {
            const auto opt = optimal_sensitivity_over_phi(scheme_from(common), lo,
                                                          hi, common.deriv_step);
            if (format == "json") {
                nlohmann::json j;
                j["phi_opt"] = opt.phi;
                j["sensitivity"] = opt.value;
                std::printf("%s\n", j.dump().c_str());
            } else {
                std::printf("phi_opt=%.17g sensitivity=%.17g\n", opt.phi,
                            opt.value);
            }
        } else if (verify->parsed()) {
            const GridLevel grid =
                level == "full" ? GridLevel::Full : GridLevel::Quick;
            const auto results = run_verification(grid, common.workers);
            bool all = true;
            std::string text;
            for (const auto &c : results) {
                char line[256];
                std::snprintf(line, sizeof(line),
                              "[%s] criterion %d: %-60s max_error=%.3e "
                              "tolerance=%.1e\n",
                              c.pass ? "PASS" : "FAIL", c.criterion,
                              c.name.c_str(), c.max_error, c.tolerance);
                text += line;
                all = all && c.pass;
            }
            const std::string payload =
                format == "json" ? to_json(results).dump(2) + "\n" : text;
            write_output(payload, out_path);
            if (!out_path.empty() && format != "json") {
                std::fputs(text.c_str(), stdout);
            }
            return all ? 0 : 1;
        } else if (energy->parsed()) {
            std::printf("%.17g\n", r_for_energy(*common.nbar, common.n));
        } else if (dump->parsed()) {
            const int c =
                cutoff > 0 ? cutoff : default_state_cutoff(common.n, common.r, tail_tol);
            const auto psi = build_laguerre_state(common.n, common.r, c, tail_tol);
            nlohmann::json arr = nlohmann::json::array();
            for (int k = 0; k <= c; ++k) {
                for (int l = 0; l <= c; ++l) {
                    const Complex a = psi.at(k, l);
                    if (a != Complex{0.0, 0.0}) {
                        arr.push_back({{"k", k},
                                       {"l", l},
                                       {"re", a.real()},
                                       {"im", a.imag()}});
                    }
                }
            }
            nlohmann::json j;
            j["n"] = common.n;
            j["r"] = common.r;
            j["cutoff"] = c;
            j["amplitudes"] = arr;
            write_output(j.dump(2) + "\n", out_path);
        }
    } catch (const usage_error &e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
