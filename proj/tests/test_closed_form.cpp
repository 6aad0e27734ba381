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

#include "lagmzi/closed_form.hpp"
#include "lagmzi/fock.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

using namespace lagmzi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SchemeParams ideal(int n, double r, double phi) {
    return SchemeParams{n, r, phi, Scenario::Ideal, 1.0};
}
SchemeParams external(int n, double r, double phi, double t1) {
    return SchemeParams{n, r, phi, Scenario::External, t1};
}
SchemeParams internal(int n, double r, double phi, double t2) {
    return SchemeParams{n, r, phi, Scenario::Internal, t2};
}

double oracle_ideal(int n, double r, double phi) {
    const int cutoff = default_pipeline_cutoff(n, r);
    return MziOracle(cutoff).parity_ideal(build_laguerre_state(n, r, cutoff), phi);
}

} // namespace

TEST_CASE("lossless parity of the squeezed vacuum collapses to a scalar") {
    const double r = 0.7;
    const double phi = 0.3;
    const auto c = IdealCoefficients::make(r, phi);
    const double expected = (1.0 - std::tanh(r) * std::tanh(r)) / std::sqrt(c.omega0);
    CHECK_THAT(parity_ideal(ideal(0, r, phi)), WithinAbs(expected, 1e-14));
    // at the operating point the signal is exactly one for any squeezing
    CHECK_THAT(parity_ideal(ideal(0, 1.1, 0.0)), WithinAbs(1.0, 1e-13));
    CHECK_THAT(parity_ideal(ideal(0, 0.4, 0.0)), WithinAbs(1.0, 1e-13));
}

TEST_CASE("lossless parity agrees with the simulator") {
    CHECK_THAT(parity_ideal(ideal(2, 0.7, 0.15)),
               WithinAbs(oracle_ideal(2, 0.7, 0.15), 1e-9));
    CHECK_THAT(parity_ideal(ideal(1, 0.7, 0.2)),
               WithinAbs(oracle_ideal(1, 0.7, 0.2), 1e-9));
}

TEST_CASE("external-loss parity") {
    SECTION("unit transmissivity reduces to the lossless form") {
        for (double phi : {0.05, 0.2, 0.5}) {
            CHECK_THAT(parity_external(external(1, 0.7, phi, 1.0)),
                       WithinAbs(parity_ideal(ideal(1, 0.7, phi)), 1e-12));
            CHECK_THAT(parity_external(external(3, 0.4, phi, 1.0)),
                       WithinAbs(parity_ideal(ideal(3, 0.4, phi)), 1e-12));
        }
    }
    SECTION("order zero collapses to the loss-modified scalar") {
        const auto c = ExternalCoefficients::make(0.7, 0.05, 0.95);
        const double sech2 = 1.0 - std::tanh(0.7) * std::tanh(0.7);
        CHECK_THAT(parity_external(external(0, 0.7, 0.05, 0.95)),
                   WithinAbs(sech2 / std::sqrt(c.omega1), 1e-14));
    }
    SECTION("matches the loss-channel simulator") {
        const int cutoff = default_pipeline_cutoff(3, 0.7);
        const MziOracle mzi(cutoff);
        const auto psi = build_laguerre_state(3, 0.7, cutoff);
        CHECK_THAT(parity_external(external(3, 0.7, 0.05, 0.95)),
                   WithinAbs(mzi.parity_external(psi, 0.05, 0.95), 1e-9));
    }
}

TEST_CASE("internal-loss parity") {
    SECTION("unit transmissivity reduces to the lossless form") {
        CHECK_THAT(parity_internal(internal(2, 0.7, 0.1, 1.0)),
                   WithinAbs(parity_ideal(ideal(2, 0.7, 0.1)), 1e-12));
    }
    SECTION("order zero collapses to the loss-modified scalar") {
        const auto c = InternalCoefficients::make(0.7, 0.1, 0.9);
        const double sech2 = 1.0 - std::tanh(0.7) * std::tanh(0.7);
        CHECK(c.omega2 > 0.0);
        CHECK_THAT(parity_internal(internal(0, 0.7, 0.1, 0.9)),
                   WithinAbs(sech2 / std::sqrt(c.omega2), 1e-14));
    }
    SECTION("matches the loss-channel simulator") {
        const int cutoff = default_pipeline_cutoff(1, 0.7);
        const MziOracle mzi(cutoff);
        const auto psi = build_laguerre_state(1, 0.7, cutoff);
        CHECK_THAT(parity_internal(internal(1, 0.7, 0.05, 0.95)),
                   WithinAbs(mzi.parity_internal(psi, 0.05, 0.95), 1e-9));
    }
}

TEST_CASE("parity magnitudes stay physical") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rdist(0.1, 1.2);
    std::uniform_real_distribution<double> pdist(0.0, 1.5);
    std::uniform_real_distribution<double> tdist(0.5, 1.0);
    for (int i = 0; i < 40; ++i) {
        const int n = i % 4;
        const double r = rdist(rng);
        const double phi = pdist(rng);
        const double t = tdist(rng);
        CHECK(std::abs(parity_ideal(ideal(n, r, phi))) <= 1.0 + 1e-10);
        CHECK(std::abs(parity_external(external(n, r, phi, t))) <= 1.0 + 1e-10);
        CHECK(std::abs(parity_internal(internal(n, r, phi, t))) <= 1.0 + 1e-10);
    }
}

TEST_CASE("squeezed-vacuum sensitivity closed form") {
    SECTION("matches the generic error-propagation path") {
        for (double phi : {0.05, 0.3, 0.7}) {
            CHECK_THAT(sensitivity(ideal(0, 0.7, phi)),
                       WithinRel(tmsv_sensitivity(0.7, phi), 1e-8));
        }
    }
    SECTION("known scalars") {
        CHECK_THAT(tmsv_sensitivity(0.7, 0.0),
                   WithinRel(1.0 / std::sinh(1.4), 1e-14));
        // small-squeezing divergence ~ 1/(2r)
        CHECK_THAT(tmsv_sensitivity(1e-4, 0.1) * 2e-4, WithinRel(1.0, 1e-2));
    }
    SECTION("stationary phases are reported, not returned") {
        CHECK_THROWS_AS(tmsv_sensitivity(0.7, std::numbers::pi / 2.0),
                        divergent_sensitivity_error);
        CHECK_THROWS_AS(sensitivity(ideal(0, 0.7, 0.0)),
                        divergent_sensitivity_error);
    }
}

TEST_CASE("loss degrades sensitivity near the operating point") {
    for (int n = 0; n <= 3; ++n) {
        for (double r : {0.3, 0.7, 1.0}) {
            for (double phi : {0.01, 0.05}) {
                const double base = sensitivity(ideal(n, r, phi));
                CHECK(sensitivity(external(n, r, phi, 0.9)) >= base - 1e-9);
                CHECK(sensitivity(internal(n, r, phi, 0.9)) >= base - 1e-9);
            }
        }
    }
}

TEST_CASE("external loss hurts at least as much as internal loss") {
    for (int n = 0; n <= 3; ++n) {
        for (double t : {0.8, 0.9, 0.95}) {
            CHECK(sensitivity(internal(n, 0.7, 0.05, t)) <=
                  sensitivity(external(n, 0.7, 0.05, t)) + 1e-9);
        }
    }
}

TEST_CASE("energy bookkeeping") {
    CHECK_THAT(mean_total_photons(0, 0.7),
               WithinAbs(2.0 * std::sinh(0.7) * std::sinh(0.7), 1e-14));
    CHECK_THAT(mean_total_photons(1, 0.0), WithinAbs(2.0, 1e-14));
    CHECK_THAT(mean_total_photons(1, 0.7),
               WithinAbs(2.0 * std::cosh(1.4) +
                             2.0 * std::sinh(0.7) * std::sinh(0.7),
                         1e-13));

    CHECK_THAT(r_for_energy(8.0, 0), WithinAbs(0.5 * std::acosh(9.0), 1e-14));
    CHECK_THAT(r_for_energy(8.0, 3),
               WithinAbs(0.5 * std::acosh(9.0 / 7.0), 1e-14));
    CHECK_THAT(r_for_energy(6.0, 3), WithinAbs(0.0, 1e-14));
    CHECK_THAT(mean_total_photons(3, r_for_energy(8.0, 3)),
               WithinAbs(8.0, 1e-12));
    CHECK_THROWS_AS(r_for_energy(3.9, 2), std::domain_error);

    CHECK_THAT(sql(4.0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(hl(4.0), WithinAbs(0.25, 1e-15));
    CHECK_THAT(sql(8.0), WithinAbs(1.0 / std::sqrt(8.0), 1e-15));
    CHECK_THAT(hl(8.0), WithinAbs(0.125, 1e-15));
    CHECK_THAT(sql(mean_total_photons(0, r_for_energy(8.0, 0))),
               WithinAbs(1.0 / std::sqrt(8.0), 1e-12));
}

TEST_CASE("phase optimization") {
    SECTION("lossless squeezed vacuum optimizes at the low end") {
        const auto opt =
            optimal_sensitivity_over_phi(ideal(0, 0.7, 0.0), 1e-4, 1.0);
        CHECK(opt.phi < 0.01);
        CHECK_THAT(opt.value, WithinRel(1.0 / std::sinh(1.4), 1e-3));
    }
    SECTION("loss pushes the optimum away from zero") {
        const auto ext =
            optimal_sensitivity_over_phi(external(1, 0.7, 0.0, 0.95), 1e-4, 1.0);
        CHECK(ext.phi > 0.005);
        const auto inl =
            optimal_sensitivity_over_phi(internal(1, 0.7, 0.0, 0.95), 1e-4, 1.0);
        CHECK(inl.phi > 0.005);
        CHECK(inl.value <= ext.value + 1e-9);
    }
}

TEST_CASE("signal denominator is bounded below by its lossless floor") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rdist(0.05, 1.4);
    std::uniform_real_distribution<double> pdist(0.0, 3.14);
    for (int i = 0; i < 200; ++i) {
        const double r = rdist(rng);
        const double phi = pdist(rng);
        const auto c = IdealCoefficients::make(r, phi);
        const double sech4 = std::pow(1.0 / std::cosh(r), 4.0);
        CHECK(c.omega0 >= sech4 - 1e-14);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(parity_external(external(1, 0.7, 0.1, 0.0)),
                    std::domain_error);
    CHECK_THROWS_AS(parity_internal(internal(1, 0.7, 0.1, 1.5)),
                    std::domain_error);
    CHECK_THROWS_AS(parity_ideal(ideal(-1, 0.7, 0.1)), std::domain_error);
    CHECK_THROWS_AS(parity_ideal(ideal(1, -0.7, 0.1)), std::domain_error);
}
