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

/// @file qfi.hpp
/// Quantum Fisher information of the squeezed twin-Fock probe: the
/// lossless closed form, the photon-moment set behind the first splitter,
/// and the variational Kraus upper bound under photon loss with its
/// interpolation-parameter minimization.
#pragma once

#include <cmath>
#include <stdexcept>

namespace lagmzi {

struct QfiParams {
    int n = 0;
    double r = 0.0;
    double eta = 1.0; // loss-channel transmissivity on mode b
};

inline void validate(const QfiParams &p) {
    if (p.n < 0) {
        throw std::domain_error("QfiParams: negative excitation order");
    }
    if (p.r < 0.0 || !std::isfinite(p.r)) {
        throw std::domain_error("QfiParams: invalid squeezing parameter");
    }
    if (p.eta <= 0.0 || p.eta > 1.0) {
        throw std::domain_error("QfiParams: eta outside (0, 1]");
    }
}

/// Lossless Fisher information; monotone increasing in both arguments.
inline double qfi_ideal(int n, double r) {
    if (n < 0 || r < 0.0) {
        throw std::domain_error("qfi_ideal: invalid parameters");
    }
    const double s = std::sinh(2.0 * r);
    return (2.0 + 3.0 * s * s) * n * (n + 1.0) + s * s;
}

/// Cramer-Rao phase bound 1/sqrt(F).
inline double qcrb(double fisher_information) {
    if (!(fisher_information > 0.0)) {
        throw std::domain_error("qcrb: Fisher information must be positive");
    }
    return 1.0 / std::sqrt(fisher_information);
}

/// Photon-number moments of the probe behind the first splitter. The two
/// modes are symmetric by construction.
struct MomentSet {
    double mean_a, mean_b, mean_a2, mean_b2, cross;

    [[nodiscard]] double variance_a() const { return mean_a2 - mean_a * mean_a; }
    [[nodiscard]] double variance_b() const { return mean_b2 - mean_b * mean_b; }
    [[nodiscard]] double covariance() const { return cross - mean_a * mean_b; }
};

inline MomentSet moments_closed_form(int n, double r) {
    if (n < 0 || r < 0.0) {
        throw std::domain_error("moments_closed_form: invalid parameters");
    }
    const double ch2 = std::cosh(r) * std::cosh(r);
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double s2r = std::sinh(2.0 * r) * std::sinh(2.0 * r);
    const double nn = static_cast<double>(n);
    MomentSet m{};
    m.mean_a = nn * ch2 + (nn + 1.0) * sh2;
    m.mean_b = m.mean_a;
    m.mean_a2 = (3.0 * nn * nn + nn) * ch2 * ch2 / 2.0 +
                (3.0 * nn * nn + 5.0 * nn + 2.0) * sh2 * sh2 / 2.0 +
                (3.0 * nn * nn + 3.0 * nn + 1.0) * s2r / 2.0;
    m.mean_b2 = m.mean_a2;
    m.cross = (nn * nn - nn) * ch2 * ch2 / 2.0 +
              (nn * nn + 3.0 * nn + 2.0) * sh2 * sh2 / 2.0 +
              (nn * nn + nn) * s2r / 2.0;
    return m;
}

/// Variational upper bound on the lossy Fisher information for one choice
/// of the Kraus interpolation parameter gamma. At eta = 1 the gamma
/// dependence collapses and the bound equals the lossless value.
inline double cq_bound(const QfiParams &p, double gamma) {
    validate(p);
    const MomentSet m = moments_closed_form(p.n, p.r);
    const double s = p.eta + gamma * p.eta - gamma;
    return m.variance_a() + s * s * m.variance_b() - 2.0 * s * m.covariance() +
           (1.0 + gamma) * (1.0 + gamma) * p.eta * (1.0 - p.eta) * m.mean_b;
}

/// Minimizing interpolation parameter of cq_bound (the bound is an upward
/// parabola in gamma for eta < 1, flat at eta = 1).
inline double gamma_opt(const QfiParams &p) {
    validate(p);
    const MomentSet m = moments_closed_form(p.n, p.r);
    const double denom =
        (1.0 - p.eta) * m.variance_b() + p.eta * m.mean_b;
    if (denom <= 0.0) {
        throw std::domain_error("gamma_opt: degenerate denominator (vacuum probe)");
    }
    return (p.eta * m.variance_b() - m.covariance() - p.eta * m.mean_b) / denom;
}

/// Optimized loss-robust Fisher-information bound.
inline double qfi_lossy(const QfiParams &p) {
    return cq_bound(p, gamma_opt(p));
}

} // namespace lagmzi
