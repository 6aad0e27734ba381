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

/// @file closed_form.hpp
/// Analytic parity signals and phase sensitivities for the squeezed
/// twin-Fock interferometer: ideal operation, loss before detection
/// (external) and loss between the phase shifter and the second splitter
/// (internal), plus energy bookkeeping and the phase optimizer.
///
/// Every phase argument is in the shifted convention (the signal optimum of
/// the lossless interferometer sits at phi = 0); physical_phase() converts
/// for direct Fock-space simulation.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "lagmzi/series.hpp"

namespace lagmzi {

/// Signals a stationary point of the parity signal, where error
/// propagation gives no finite phase uncertainty.
struct divergent_sensitivity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scenario { Ideal, External, Internal };

/// One evaluation point. `transmissivity` is the loss-channel transmission
/// (T1 for External, T2 for Internal, ignored for Ideal).
struct SchemeParams {
    int n = 0;
    double r = 0.0;
    double phi = 0.0;
    Scenario scenario = Scenario::Ideal;
    double transmissivity = 1.0;
};

inline void validate(const SchemeParams &p) {
    if (p.n < 0) {
        throw std::domain_error("SchemeParams: negative excitation order");
    }
    if (p.r < 0.0 || !std::isfinite(p.r)) {
        throw std::domain_error("SchemeParams: invalid squeezing parameter");
    }
    if (p.scenario != Scenario::Ideal &&
        (p.transmissivity <= 0.0 || p.transmissivity > 1.0)) {
        throw std::domain_error("SchemeParams: transmissivity outside (0, 1]");
    }
}

/// Scalar coefficient set of the lossless parity generating function.
struct IdealCoefficients {
    double a0, a1, a2, a3, a4, omega0;

    static IdealCoefficients make(double r, double phi) {
        const double th = std::tanh(r);
        const double ch = std::cosh(r);
        const double sech2 = 1.0 / (ch * ch);
        const double w0 =
            1.0 - 2.0 * th * th * std::cos(2.0 * phi) + th * th * th * th;
        IdealCoefficients c{};
        c.omega0 = w0;
        c.a0 = sech2 / std::sqrt(w0);
        c.a1 = std::sin(2.0 * phi) * th / (2.0 * w0 * ch * ch);
        c.a2 = (std::cos(2.0 * phi) - 1.0) * (th + th * th * th) / w0;
        c.a3 = std::sin(phi) * std::cosh(2.0 * r) * sech2 * sech2 / w0;
        c.a4 = -std::cos(phi) * sech2 * sech2 / w0;
        return c;
    }

    [[nodiscard]] QuadraticExponent exponent() const {
        QuadraticExponent q;
        q.add(Var::X, Var::X, a1);
        q.add(Var::T, Var::T, a1);
        q.add(Var::Y, Var::Y, -a1);
        q.add(Var::Tau, Var::Tau, -a1);
        q.add(Var::X, Var::Y, a2);
        q.add(Var::T, Var::Tau, a2);
        q.add(Var::Y, Var::Tau, a3);
        q.add(Var::X, Var::T, -a3);
        q.add(Var::X, Var::Tau, a4);
        q.add(Var::Y, Var::T, a4);
        return q;
    }
};

/// Coefficients of the generating function with loss between the second
/// splitter and the detector.
struct ExternalCoefficients {
    double eps1, eps2, eps3, omega1, c1;
    LinearForm mu, kappa;
    QuadraticExponent exponent;

    static ExternalCoefficients make(double r, double phi, double t1) {
        const double th = std::tanh(r);
        const double sech = 1.0 / std::cosh(r);
        ExternalCoefficients c{};
        c.eps1 = -t1 * std::cos(phi);
        c.eps2 = 1.0 - t1 * (1.0 + std::sin(phi));
        c.eps3 = 1.0 - t1 * (1.0 - std::sin(phi));
        const double s = c.eps1 * c.eps1 + c.eps2 * c.eps3;
        c.omega1 = (s * th * th - 1.0) * (s * th * th - 1.0) -
                   4.0 * c.eps1 * c.eps1 * c.eps2 * c.eps3 * th * th * th * th;
        c.c1 = sech * sech / std::sqrt(c.omega1);
        c.mu = LinearForm(c.eps1 * sech * th, c.eps3 * sech * th, sech,
                          2.0 * c.eps1 * c.eps3 * th * th * sech);
        c.kappa = LinearForm(c.eps2 * sech, c.eps1 * sech, 0.0, s * sech * th);
        QuadraticExponent q = (c.mu * c.kappa) * Complex{(1.0 - s * th * th) / c.omega1, 0.0};
        q += (c.mu * c.mu) * Complex{c.eps1 * c.eps2 * th / c.omega1, 0.0};
        q += (c.kappa * c.kappa) *
             Complex{c.eps1 * c.eps3 * th * th * th / c.omega1, 0.0};
        q.add(Var::X, Var::Tau, c.eps1 * sech * sech);
        q.add(Var::Y, Var::Tau, c.eps3 * sech * sech);
        q.add(Var::Tau, Var::Tau, c.eps1 * c.eps3 * sech * sech * th);
        q.add(Var::T, Var::Tau, -th);
        q.add(Var::X, Var::Y, -th);
        c.exponent = q;
        return c;
    }
};

/// Coefficients of the generating function with loss between the phase
/// shifter and the second splitter. The cross coupling is complex here;
/// the assembled signal has a vanishing imaginary part.
struct InternalCoefficients {
    double x1, x3, e, omega2;
    Complex x2, d1;
    LinearForm mu, kappa;
    QuadraticExponent exponent;

    static InternalCoefficients make(double r, double phi, double t2) {
        const double th = std::tanh(r);
        const double sech = 1.0 / std::cosh(r);
        const double st = std::sqrt(t2);
        InternalCoefficients c{};
        c.x1 = -(2.0 * st * std::sin(phi) + 1.0 + t2) / 2.0;
        c.x3 = (2.0 * st * std::sin(phi) - 1.0 - t2) / 2.0;
        c.x2 = ((t2 + 1.0) * (t2 + 1.0) -
                4.0 * t2 * std::sin(phi) * std::sin(phi)) /
               (2.0 * (Complex{0.0, t2 - 1.0} + 2.0 * st * std::cos(phi)));
        const Complex x2c = std::conj(c.x2);
        c.e = std::norm(c.x2) + c.x1 * c.x3 + c.x3 + c.x1 + 1.0;
        c.omega2 = (1.0 - c.e * th * th) * (1.0 - c.e * th * th) -
                   4.0 * std::norm(c.x2) * (c.x1 + 1.0) * (c.x3 + 1.0) * th *
                       th * th * th;
        c.d1 = sech * sech / std::sqrt(Complex{c.omega2, 0.0});
        c.mu = LinearForm((c.x1 + 1.0) * sech * th, -x2c * sech * th,
                          -2.0 * (c.x1 + 1.0) * x2c * th * th * sech, sech);
        c.kappa = LinearForm(-c.x2 * sech, (c.x3 + 1.0) * sech, c.e * sech * th,
                             0.0);
        QuadraticExponent q =
            (c.mu * c.kappa) * Complex{(1.0 - c.e * th * th) / c.omega2, 0.0};
        q += (c.mu * c.mu) * (-c.x2 * (c.x3 + 1.0) * th / c.omega2);
        q += (c.kappa * c.kappa) *
             ((-c.x1 * x2c - x2c) * th * th * th / c.omega2);
        q.add(Var::X, Var::T, (c.x1 + 1.0) * sech * sech);
        q.add(Var::Y, Var::T, -x2c * sech * sech);
        q.add(Var::T, Var::T, (-c.x1 * x2c - x2c) * sech * sech * th);
        q.add(Var::X, Var::Y, -th);
        q.add(Var::T, Var::Tau, -th);
        c.exponent = q;
        return c;
    }
};

namespace detail {

inline Complex evaluate_generating_function(const QuadraticExponent &q,
                                            Complex prefactor, int n) {
    const MultiSeries s = series_from_quadratic(q, n);
    return prefactor * extract_dn(series_exp(s), n);
}

} // namespace detail

inline double parity_ideal(const SchemeParams &p) {
    validate(p);
    const auto c = IdealCoefficients::make(p.r, p.phi);
    return detail::evaluate_generating_function(c.exponent(), Complex{c.a0, 0.0},
                                                p.n)
        .real();
}

inline double parity_external(const SchemeParams &p) {
    validate(p);
    const auto c = ExternalCoefficients::make(p.r, p.phi, p.transmissivity);
    return detail::evaluate_generating_function(c.exponent, Complex{c.c1, 0.0},
                                                p.n)
        .real();
}

inline double parity_internal(const SchemeParams &p) {
    validate(p);
    const auto c = InternalCoefficients::make(p.r, p.phi, p.transmissivity);
    const Complex v = detail::evaluate_generating_function(c.exponent, c.d1, p.n);
    if (std::abs(v.imag()) > 1e-10) {
        throw std::runtime_error("parity_internal: imaginary residue " +
                                 std::to_string(v.imag()));
    }
    return v.real();
}

inline double parity(const SchemeParams &p) {
    switch (p.scenario) {
    case Scenario::Ideal:
        return parity_ideal(p);
    case Scenario::External:
        return parity_external(p);
    case Scenario::Internal:
        return parity_internal(p);
    }
    throw std::logic_error("parity: unknown scenario");
}

/// Error-propagation phase uncertainty sqrt(1 - P^2) / |dP/dphi| with a
/// Richardson-extrapolated central difference for the slope.
inline double sensitivity(const SchemeParams &p, double derivative_step = 1e-5) {
    validate(p);
    auto at = [&](double phi) {
        SchemeParams q = p;
        q.phi = phi;
        return parity(q);
    };
    const double h = derivative_step;
    auto central = [&](double step) {
        return (at(p.phi + step) - at(p.phi - step)) / (2.0 * step);
    };
    const double d = (4.0 * central(h / 2.0) - central(h)) / 3.0;
    if (std::abs(d) < 1e-12) {
        throw divergent_sensitivity_error(
            "sensitivity: parity signal is stationary at this phase");
    }
    const double pi_val = at(p.phi);
    const double variance = std::max(0.0, 1.0 - pi_val * pi_val);
    return std::sqrt(variance) / std::abs(d);
}

/// Exact sensitivity of the squeezed-vacuum special case (order 0).
inline double tmsv_sensitivity(double r, double phi) {
    if (r <= 0.0) {
        throw std::domain_error("tmsv_sensitivity: r must be positive");
    }
    const double c = std::cos(phi);
    if (std::abs(c) < 1e-12) {
        throw divergent_sensitivity_error("tmsv_sensitivity: cos(phi) = 0");
    }
    const double th = std::tanh(r);
    const double w0 =
        1.0 - 2.0 * th * th * std::cos(2.0 * phi) + th * th * th * th;
    return w0 * std::cosh(r) * std::cosh(r) / (2.0 * th * c);
}

/// Total mean photon number of the input state.
inline double mean_total_photons(int n, double r) {
    if (n < 0 || r < 0.0) {
        throw std::domain_error("mean_total_photons: invalid parameters");
    }
    return 2.0 * n * std::cosh(2.0 * r) + 2.0 * std::sinh(r) * std::sinh(r);
}

/// Squeezing parameter reproducing a target mean photon number at fixed
/// excitation order (exact inversion of the energy formula).
inline double r_for_energy(double nbar, int n) {
    if (n < 0) {
        throw std::domain_error("r_for_energy: negative order");
    }
    if (nbar < 2.0 * n) {
        throw std::domain_error("r_for_energy: energy below the twin-Fock floor");
    }
    const double arg = (nbar + 1.0) / (2.0 * n + 1.0);
    if (arg <= 1.0) {
        return 0.0;
    }
    return 0.5 * std::acosh(arg);
}

inline double sql(double nbar) {
    if (nbar <= 0.0) {
        throw std::domain_error("sql: nonpositive photon number");
    }
    return 1.0 / std::sqrt(nbar);
}

inline double hl(double nbar) {
    if (nbar <= 0.0) {
        throw std::domain_error("hl: nonpositive photon number");
    }
    return 1.0 / nbar;
}

struct PhiOptimum {
    double phi;
    double value;
};

/// Minimizes sensitivity over the shifted phase on [lo, hi]: a 64-point
/// coarse scan selects the bracketing basin, then golden-section search
/// narrows it below 1e-6. Divergent points are treated as +infinity.
inline PhiOptimum optimal_sensitivity_over_phi(const SchemeParams &base,
                                               double lo, double hi,
                                               double derivative_step = 1e-5) {
    if (!(lo < hi)) {
        throw std::invalid_argument("optimal_sensitivity_over_phi: interval");
    }
    auto eval = [&](double phi) {
        SchemeParams p = base;
        p.phi = phi;
        try {
            return sensitivity(p, derivative_step);
        } catch (const divergent_sensitivity_error &) {
            return std::numeric_limits<double>::infinity();
        }
    };
    constexpr int kCoarse = 64;
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    std::array<double, kCoarse> xs{};
    std::array<double, kCoarse> vs{};
    for (int i = 0; i < kCoarse; ++i) {
        xs[i] = lo + (hi - lo) * i / (kCoarse - 1);
        vs[i] = eval(xs[i]);
        if (vs[i] < best_val) {
            best_val = vs[i];
            best = i;
        }
    }
    if (best < 0) {
        throw divergent_sensitivity_error(
            "optimal_sensitivity_over_phi: no finite sensitivity on the grid");
    }
    double a = xs[std::max(0, best - 1)];
    double b = xs[std::min(kCoarse - 1, best + 1)];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > 1e-6) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    const double xm = 0.5 * (a + b);
    return PhiOptimum{xm, eval(xm)};
}

} // namespace lagmzi
