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

/// @file verify.hpp
/// The cross-validation battery: every closed form checked against the
/// Fock-space simulator, the analytic reductions, the bound properties and
/// the qualitative figure claims. Each check reports its worst error and
/// passes or fails against a pinned tolerance. The quick grid covers
/// excitation orders up to 1, the full grid up to 3.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <unistd.h>
#include <vector>

#include "lagmzi/closed_form.hpp"
#include "lagmzi/fock.hpp"
#include "lagmzi/qfi.hpp"
#include "lagmzi/scan.hpp"

namespace lagmzi {

enum class GridLevel { Quick, Full };

/// For equality checks max_error is the worst |difference| (relative where
/// noted in the name); for one-sided checks it is the worst signed margin,
/// positive meaning violation.
struct CheckResult {
    int criterion;
    std::string name;
    double max_error;
    double tolerance;
    bool pass;
};

namespace verify_detail {

inline CheckResult make_result(int criterion, std::string name, double err,
                               double tol) {
    return CheckResult{criterion, std::move(name), err, tol, err <= tol};
}

struct GroupErrors {
    double parity_ideal = 0.0;
    double parity_external = 0.0;
    double parity_internal = 0.0;
    double reduction_external = 0.0;
    double reduction_internal = 0.0;
    double moments_rel = 0.0;
    double qfi_rel = 0.0;
};

/// One (n, r) cell of the verification grid: a shared simulator pipeline
/// serves the parity comparisons of all phases/transmissivities plus the
/// probe-moment and Fisher-information identities.
inline GroupErrors run_group(int n, double r, const std::vector<double> &phis,
                             const std::vector<double> &ts) {
    GroupErrors ge;
    const int cutoff = default_pipeline_cutoff(n, r);
    const MziOracle oracle(cutoff);
    const TwoModeState psi = build_laguerre_state(n, r, cutoff);
    for (const double phi : phis) {
        const SchemeParams ideal{n, r, phi, Scenario::Ideal, 1.0};
        const double closed_ideal = parity_ideal(ideal);
        ge.parity_ideal = std::max(
            ge.parity_ideal, std::abs(closed_ideal - oracle.parity_ideal(psi, phi)));
        for (const double t : ts) {
            const double ce =
                parity_external({n, r, phi, Scenario::External, t});
            const double ci =
                parity_internal({n, r, phi, Scenario::Internal, t});
            ge.parity_external = std::max(
                ge.parity_external, std::abs(ce - oracle.parity_external(psi, phi, t)));
            ge.parity_internal = std::max(
                ge.parity_internal, std::abs(ci - oracle.parity_internal(psi, phi, t)));
            if (t == 1.0) {
                ge.reduction_external =
                    std::max(ge.reduction_external, std::abs(ce - closed_ideal));
                ge.reduction_internal =
                    std::max(ge.reduction_internal, std::abs(ci - closed_ideal));
            }
        }
    }
    // probe identities behind the first splitter
    const TwoModeState probe = oracle.after_first_splitter(psi);
    const PhotonMoments om = photon_moments(probe);
    const MomentSet cm = moments_closed_form(n, r);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    ge.moments_rel = std::max({rel(om.mean_a, cm.mean_a), rel(om.mean_b, cm.mean_b),
                               rel(om.mean_a2, cm.mean_a2),
                               rel(om.mean_b2, cm.mean_b2),
                               rel(om.cross, cm.cross)});
    double j1 = 0.0;
    double j2 = 0.0;
    for (int k = 0; k <= cutoff; ++k) {
        for (int l = 0; l <= cutoff; ++l) {
            const double p = std::norm(probe.at(k, l));
            if (p == 0.0) {
                continue;
            }
            const double v = 0.5 * (k - l);
            j1 += v * p;
            j2 += v * v * p;
        }
    }
    ge.qfi_rel = rel(4.0 * (j2 - j1 * j1), qfi_ideal(n, r));
    return ge;
}

inline Eigen::MatrixXcd sector_generator(int which, int total, int box) {
    const int lo = std::max(0, total - box);
    const int hi = std::min(total, box);
    const int d = hi - lo + 1;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const int k = lo + i;
        if (which == 3) {
            g(i, i) = 0.5 * (k - (total - k));
        } else if (i + 1 < d) {
            const double c = 0.5 * std::sqrt(double(k + 1) * (total - k));
            if (which == 1) {
                g(i + 1, i) = c;
                g(i, i + 1) = c;
            } else { // raising quadrature coupling
                g(i + 1, i) = Complex{0.0, -c};
                g(i, i + 1) = Complex{0.0, c};
            }
        }
    }
    return g;
}

inline Eigen::MatrixXcd unitary_of(const Eigen::MatrixXcd &generator,
                                   double angle) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(generator);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases[i] = std::polar(1.0, -angle * es.eigenvalues()[i]);
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double read_file_bytes(const std::filesystem::path &p, std::string &out) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return 0.0;
}

} // namespace verify_detail

/// Criterion 1 + 3 (parity part) + 4: simulator equivalence of all three
/// parity scenarios, lossless reductions and probe identities, evaluated
/// on the shared (n, r) pipeline grid.
inline std::vector<CheckResult> verify_parity_and_probe(GridLevel level,
                                                        int workers) {
    const int nmax = level == GridLevel::Quick ? 1 : 3;
    const std::vector<double> rs{0.3, 0.7, 1.0};
    const std::vector<double> phis{0.01, 0.05, 0.2, 0.5};
    const std::vector<double> ts{1.0, 0.95, 0.8};
    std::vector<std::pair<int, double>> groups;
    for (int n = 0; n <= nmax; ++n) {
        for (const double r : rs) {
            groups.emplace_back(n, r);
        }
    }
    std::vector<verify_detail::GroupErrors> errors(groups.size());
    parallel_for(groups.size(), workers, [&](std::size_t i) {
        errors[i] = verify_detail::run_group(groups[i].first, groups[i].second,
                                             phis, ts);
    });
    verify_detail::GroupErrors worst;
    for (const auto &e : errors) {
        worst.parity_ideal = std::max(worst.parity_ideal, e.parity_ideal);
        worst.parity_external = std::max(worst.parity_external, e.parity_external);
        worst.parity_internal = std::max(worst.parity_internal, e.parity_internal);
        worst.reduction_external =
            std::max(worst.reduction_external, e.reduction_external);
        worst.reduction_internal =
            std::max(worst.reduction_internal, e.reduction_internal);
        worst.moments_rel = std::max(worst.moments_rel, e.moments_rel);
        worst.qfi_rel = std::max(worst.qfi_rel, e.qfi_rel);
    }
    using verify_detail::make_result;
    return {
        make_result(1, "parity ideal closed-form vs simulator", worst.parity_ideal,
                    1e-8),
        make_result(1, "parity external closed-form vs simulator",
                    worst.parity_external, 1e-8),
        make_result(1, "parity internal closed-form vs simulator",
                    worst.parity_internal, 1e-8),
        make_result(3, "external reduction at unit transmissivity",
                    worst.reduction_external, 1e-12),
        make_result(3, "internal reduction at unit transmissivity",
                    worst.reduction_internal, 1e-12),
        make_result(4, "probe moments closed-form vs simulator (relative)",
                    worst.moments_rel, 1e-10),
        make_result(4, "Fisher information closed-form vs simulator (relative)",
                    worst.qfi_rel, 1e-8),
    };
}

/// Criterion 2: the order-0 sensitivity closed form and its limits.
inline std::vector<CheckResult> verify_tmsv_reductions() {
    using verify_detail::make_result;
    double sens_rel = 0.0;
    for (const double r : {0.3, 0.7, 1.0}) {
        for (const double phi : linear_range(0.01, 1.0, 100)) {
            const double exact = tmsv_sensitivity(r, phi);
            const double generic =
                sensitivity({0, r, phi, Scenario::Ideal, 1.0});
            sens_rel = std::max(sens_rel, std::abs(generic - exact) / exact);
        }
    }
    double limit_rel = 0.0;
    double qcrb_rel = 0.0;
    for (const double r : {0.3, 0.7, 1.0, 1.4436}) {
        limit_rel = std::max(limit_rel, std::abs(tmsv_sensitivity(r, 1e-8) *
                                                     std::sinh(2.0 * r) -
                                                 1.0));
        const double nbar = 2.0 * std::sinh(r) * std::sinh(r);
        const double direct = qcrb(qfi_ideal(0, r));
        qcrb_rel = std::max(qcrb_rel,
                            std::abs(direct * std::sinh(2.0 * r) - 1.0));
        qcrb_rel = std::max(
            qcrb_rel,
            std::abs(direct * std::sqrt(nbar * nbar + 2.0 * nbar) - 1.0));
    }
    return {
        make_result(2, "order-0 sensitivity matches its closed form (relative)",
                    sens_rel, 1e-8),
        make_result(2, "order-0 sensitivity limit at vanishing phase", limit_rel,
                    1e-8),
        make_result(2, "order-0 phase bound identity (relative)", qcrb_rel, 1e-12),
    };
}

/// Criterion 3 (Fisher part): the lossy bound collapses at unit
/// transmissivity.
inline std::vector<CheckResult> verify_lossless_qfi(GridLevel level) {
    const int nmax = level == GridLevel::Quick ? 1 : 3;
    double rel = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        for (const double r : {0.3, 0.7, 1.0}) {
            rel = std::max(rel, std::abs(qfi_lossy({n, r, 1.0}) /
                                             qfi_ideal(n, r) -
                                         1.0));
        }
    }
    return {verify_detail::make_result(
        3, "lossy Fisher bound reduces to the lossless value (relative)", rel,
        1e-12)};
}

/// Criterion 5: minimizer dominance on a dense interpolation grid and the
/// upper-bound property against the exact mixed-state value.
inline std::vector<CheckResult> verify_bound_properties(GridLevel level) {
    using verify_detail::make_result;
    const int nmax = level == GridLevel::Quick ? 1 : 3;
    const std::vector<std::tuple<int, double, double>> combos{
        {0, 0.3, 0.6}, {0, 0.7, 0.8}, {1, 0.3, 0.8},
        {1, 0.7, 0.6}, {1, 1.0, 0.8}, {2, 0.5, 0.9},
        {2, 1.0, 0.6}, {3, 0.7, 0.8}, {3, 1.0, 0.9}};
    double dominance = -std::numeric_limits<double>::infinity();
    for (const auto &[n, r, eta] : combos) {
        if (n > nmax) {
            continue;
        }
        const QfiParams p{n, r, eta};
        const double opt = cq_bound(p, gamma_opt(p));
        for (int i = 0; i <= 3000; ++i) {
            const double gamma = -2.0 + 3.0 * i / 3000.0;
            dominance = std::max(dominance, opt - cq_bound(p, gamma));
        }
    }
    double bound_margin = -std::numeric_limits<double>::infinity();
    for (const int n : {0, 1}) {
        if (n > nmax) {
            continue;
        }
        for (const double r : {0.5, 0.6}) {
            for (const double eta : {0.6, 0.8}) {
                const auto model = lossy_phase_density_model(n, r, eta, 15);
                const double exact = mixed_state_qfi(model, 0.4);
                bound_margin =
                    std::max(bound_margin, exact - qfi_lossy({n, r, eta}));
            }
        }
    }
    return {
        make_result(5, "optimal interpolation dominates a 3001-point grid",
                    dominance, 1e-12),
        make_result(5, "variational bound stays above the exact mixed value",
                    bound_margin, 1e-6),
    };
}

/// Criterion 6: the qualitative figure claims as inequalities.
inline std::vector<CheckResult> verify_figure_claims(GridLevel level,
                                                     int workers) {
    using verify_detail::make_result;
    const int nmax = level == GridLevel::Quick ? 1 : 3;
    std::vector<CheckResult> out;

    // (a) internal loss never hurts more than external loss at phi=0.05, r=0.7
    {
        const auto ts = linear_range(0.7, 0.999, 16);
        std::vector<double> margins(static_cast<std::size_t>(nmax + 1) * ts.size());
        parallel_for(margins.size(), workers, [&](std::size_t i) {
            const int n = static_cast<int>(i / ts.size());
            const double t = ts[i % ts.size()];
            const double ext = sensitivity({n, 0.7, 0.05, Scenario::External, t});
            const double in = sensitivity({n, 0.7, 0.05, Scenario::Internal, t});
            margins[i] = in - ext;
        });
        double worst = -std::numeric_limits<double>::infinity();
        for (const double m : margins) {
            worst = std::max(worst, m);
        }
        out.push_back(make_result(
            6, "internal-loss sensitivity <= external-loss sensitivity", worst,
            1e-9));
    }
    // (b) sensitivity improves with the excitation order near the optimum
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (const double t1 : {1.0, 0.95}) {
            double prev = 0.0;
            for (int n = 0; n <= nmax; ++n) {
                const double v = sensitivity({n, 0.7, 0.001, Scenario::External, t1});
                if (n > 0) {
                    worst = std::max(worst, v - prev);
                }
                prev = v;
            }
        }
        out.push_back(make_result(
            6, "sensitivity decreases with excitation order", worst, 0.0));
    }
    // (c) the lossy Fisher bound is monotone in transmissivity and order
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (const double r : {0.3, 0.7, 1.0}) {
            for (int n = 0; n <= nmax; ++n) {
                double prev = -std::numeric_limits<double>::infinity();
                for (const double eta : {0.5, 0.8, 1.0}) {
                    const double f = qfi_lossy({n, r, eta});
                    worst = std::max(worst, prev - f);
                    prev = f;
                }
            }
            for (const double eta : {0.5, 0.8, 1.0}) {
                double prev = -std::numeric_limits<double>::infinity();
                for (int n = 0; n <= nmax; ++n) {
                    const double f = qfi_lossy({n, r, eta});
                    worst = std::max(worst, prev - f);
                    prev = f;
                }
            }
        }
        out.push_back(make_result(
            6, "lossy Fisher bound nondecreasing in transmissivity and order",
            worst, 1e-12));
    }
    // (d) the order-0 lossless phase bound beats the Heisenberg limit
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (const double r : linear_range(0.2, 1.5, 27)) {
            worst = std::max(worst, qcrb(qfi_ideal(0, r)) -
                                        hl(mean_total_photons(0, r)));
        }
        out.push_back(make_result(
            6, "order-0 phase bound lies below the Heisenberg limit", worst, 0.0));
    }
    // (e) loss pushes the optimal phase strictly away from zero
    if (nmax >= 1) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int n = 1; n <= nmax; ++n) {
            const auto opt = optimal_sensitivity_over_phi(
                {n, 0.7, 0.0, Scenario::External, 0.95}, 1e-4, 1.0);
            worst = std::max(worst, 0.005 - opt.phi);
        }
        out.push_back(make_result(
            6, "lossy optimum deviates from zero phase by more than 0.005",
            worst, 0.0));
    }
    return out;
}

/// Criterion 7: the interferometer composition identity, checked sector by
/// sector on the subspace the truncation represents faithfully (total
/// photon number within the per-mode box).
inline std::vector<CheckResult> verify_composition_identity(int box = 8) {
    double worst = 0.0;
    for (const double phi : {0.1, 0.7}) {
        for (int total = 0; total <= box; ++total) {
            using verify_detail::sector_generator;
            using verify_detail::unitary_of;
            const auto b1 =
                unitary_of(sector_generator(1, total, box), std::numbers::pi / 2.0);
            const auto b2 = unitary_of(sector_generator(1, total, box),
                                       -std::numbers::pi / 2.0);
            const auto u = unitary_of(sector_generator(3, total, box), phi);
            const auto direct = unitary_of(sector_generator(2, total, box), phi);
            const Eigen::MatrixXcd diff = b2 * u * b1 - direct;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
            worst = std::max(worst, svd.singularValues().maxCoeff());
        }
    }
    return {verify_detail::make_result(
        7, "splitter-phase-splitter composition equals the rotated generator",
        worst, 1e-10)};
}

/// Criterion 8: figure presets are byte-deterministic across runs.
inline std::vector<CheckResult>
verify_determinism(int workers, const std::vector<std::string> &presets = {
                                    "fig10", "fig7"}) {
    namespace fs = std::filesystem;
    const fs::path base =
        fs::temp_directory_path() /
        ("lagmzi-verify-" + std::to_string(::getpid()));
    double differing = 0.0;
    for (const auto &preset : presets) {
        const auto first = run_figure_preset(preset, base / "a", workers);
        const auto second = run_figure_preset(preset, base / "b", workers);
        for (std::size_t i = 0; i < first.size(); ++i) {
            std::string bytes_a;
            std::string bytes_b;
            verify_detail::read_file_bytes(first[i], bytes_a);
            verify_detail::read_file_bytes(second[i], bytes_b);
            if (bytes_a.empty() || bytes_a != bytes_b) {
                differing += 1.0;
            }
        }
    }
    std::error_code ec;
    fs::remove_all(base, ec);
    return {verify_detail::make_result(
        8, "figure presets are byte-identical across consecutive runs",
        differing, 0.0)};
}

/// The whole battery.
inline std::vector<CheckResult> run_verification(GridLevel level,
                                                 int workers = default_workers()) {
    std::vector<CheckResult> all;
    auto append = [&](std::vector<CheckResult> v) {
        for (auto &c : v) {
            all.push_back(std::move(c));
        }
    };
    append(verify_parity_and_probe(level, workers));
    append(verify_tmsv_reductions());
    append(verify_lossless_qfi(level));
    append(verify_bound_properties(level));
    append(verify_figure_claims(level, workers));
    append(verify_composition_identity());
    append(verify_determinism(workers));
    return all;
}

inline nlohmann::json to_json(const std::vector<CheckResult> &results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &c : results) {
        nlohmann::json j;
        j["criterion"] = c.criterion;
        j["name"] = c.name;
        j["max_error"] = c.max_error;
        j["tolerance"] = c.tolerance;
        j["pass"] = c.pass;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace lagmzi
