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

#include "lagmzi/qfi.hpp"
#include "lagmzi/fock.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

using namespace lagmzi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("lossless Fisher information closed form") {
    for (double r : {0.2, 0.7, 1.1}) {
        const double s = std::sinh(2.0 * r);
        CHECK_THAT(qfi_ideal(0, r), WithinAbs(s * s, 1e-12));
    }
    CHECK_THAT(qfi_ideal(1, 0.0), WithinAbs(4.0, 1e-15));
    // monotone in both parameters
    CHECK(qfi_ideal(2, 0.7) > qfi_ideal(1, 0.7));
    CHECK(qfi_ideal(1, 0.9) > qfi_ideal(1, 0.7));
}

TEST_CASE("lossless Fisher information matches the simulator") {
    for (const auto &[n, r] : {std::pair{1, 0.5}, std::pair{3, 0.7}}) {
        const int cutoff = default_pipeline_cutoff(n, r);
        CHECK_THAT(pure_state_qfi(build_laguerre_state(n, r, cutoff)),
                   WithinRel(qfi_ideal(n, r), 1e-8));
    }
}

TEST_CASE("Cramer-Rao bound") {
    CHECK_THAT(qcrb(4.0), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(qcrb(0.0), std::domain_error);
    CHECK_THROWS_AS(qcrb(-1.0), std::domain_error);
    // order-0 identity: 1/sinh(2r) = 1/sqrt(nbar^2 + 2 nbar)
    for (double r : {0.3, 0.7, 1.2}) {
        const double nbar = 2.0 * std::sinh(r) * std::sinh(r);
        CHECK_THAT(qcrb(qfi_ideal(0, r)),
                   WithinRel(1.0 / std::sinh(2.0 * r), 1e-12));
        CHECK_THAT(qcrb(qfi_ideal(0, r)),
                   WithinRel(1.0 / std::sqrt(nbar * nbar + 2.0 * nbar), 1e-12));
    }
    // loss loosens the bound
    CHECK(qcrb(qfi_lossy({1, 0.7, 0.8})) > qcrb(qfi_ideal(1, 0.7)));
}

TEST_CASE("probe moments closed form") {
    SECTION("order zero") {
        for (double r : {0.3, 0.8}) {
            const auto m = moments_closed_form(0, r);
            CHECK_THAT(m.mean_a, WithinAbs(std::sinh(r) * std::sinh(r), 1e-13));
            CHECK_THAT(m.cross, WithinAbs(std::pow(std::sinh(r), 4.0), 1e-13));
        }
    }
    SECTION("bare twin-Fock") {
        const auto m = moments_closed_form(1, 0.0);
        CHECK_THAT(m.mean_a, WithinAbs(1.0, 1e-15));
        CHECK_THAT(m.mean_a2, WithinAbs(2.0, 1e-15));
        CHECK_THAT(m.cross, WithinAbs(0.0, 1e-15));
    }
    SECTION("mode symmetry is exact") {
        const auto m = moments_closed_form(2, 0.6);
        CHECK(m.mean_a == m.mean_b);
        CHECK(m.mean_a2 == m.mean_b2);
        CHECK(m.variance_a() >= 0.0);
    }
    SECTION("against the simulator") {
        const int cutoff = default_pipeline_cutoff(2, 0.5);
        const auto probe = apply_number_conserving_unitary(
            build_laguerre_state(2, 0.5, cutoff), Generator::J1,
            std::numbers::pi / 2.0);
        const auto o = photon_moments(probe);
        const auto c = moments_closed_form(2, 0.5);
        CHECK_THAT(o.mean_a, WithinRel(c.mean_a, 1e-10));
        CHECK_THAT(o.mean_a2, WithinRel(c.mean_a2, 1e-10));
        CHECK_THAT(o.cross, WithinRel(c.cross, 1e-10));
    }
}

TEST_CASE("variational bound in the lossless limit is flat and tight") {
    for (double gamma : {-1.0, -0.37, 0.0, 0.8}) {
        CHECK_THAT(cq_bound({1, 0.7, 1.0}, gamma),
                   WithinRel(qfi_ideal(1, 0.7), 1e-12));
    }
    CHECK_THAT(qfi_lossy({1, 0.7, 1.0}), WithinRel(qfi_ideal(1, 0.7), 1e-12));
}

TEST_CASE("interpolation optimum") {
    SECTION("stationarity of the closed-form minimizer") {
        for (const auto &[n, r, eta] :
             {std::tuple{0, 0.7, 0.8}, std::tuple{1, 0.5, 0.6},
              std::tuple{3, 1.0, 0.9}}) {
            const QfiParams p{n, r, eta};
            const double g = gamma_opt(p);
            // the bound is an exact parabola in gamma, so the central
            // difference has no truncation error; a wide step just damps
            // rounding noise
            const double h = 1e-3;
            const double deriv =
                (cq_bound(p, g + h) - cq_bound(p, g - h)) / (2.0 * h);
            CHECK_THAT(deriv, WithinAbs(0.0, 1e-9));
        }
    }
    SECTION("dominates a dense grid") {
        for (const auto &[n, r, eta] :
             {std::tuple{0, 0.7, 0.8}, std::tuple{2, 0.5, 0.6}}) {
            const QfiParams p{n, r, eta};
            const double opt = cq_bound(p, gamma_opt(p));
            for (int i = 0; i <= 3000; ++i) {
                const double gamma = -2.0 + 3.0 * i / 3000.0;
                REQUIRE(opt <= cq_bound(p, gamma) + 1e-12);
            }
        }
    }
    SECTION("degenerate vacuum probe is rejected") {
        CHECK_THROWS_AS(gamma_opt({0, 0.0, 0.8}), std::domain_error);
    }
}

TEST_CASE("lossy Fisher bound") {
    SECTION("upper-bounds the exact value") {
        const auto model = lossy_phase_density_model(0, 0.5, 0.8, 15);
        const double exact = mixed_state_qfi(model, 0.4);
        CHECK(qfi_lossy({0, 0.5, 0.8}) >= exact - 1e-6);
    }
    SECTION("monotone in transmissivity and order") {
        for (int n = 0; n <= 3; ++n) {
            for (double r : {0.3, 0.7, 1.0}) {
                double prev = 0.0;
                for (double eta : {0.5, 0.8, 1.0}) {
                    const double f = qfi_lossy({n, r, eta});
                    CHECK(f >= prev - 1e-12);
                    prev = f;
                }
            }
        }
        for (double eta : {0.5, 0.8, 1.0}) {
            for (double r : {0.3, 0.7, 1.0}) {
                double prev = 0.0;
                for (int n = 0; n <= 3; ++n) {
                    const double f = qfi_lossy({n, r, eta});
                    CHECK(f >= prev - 1e-12);
                    prev = f;
                }
            }
        }
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(qfi_lossy({1, 0.5, 0.0}), std::domain_error);
        CHECK_THROWS_AS(qfi_lossy({1, 0.5, 1.2}), std::domain_error);
        CHECK_THROWS_AS(qfi_lossy({-1, 0.5, 0.9}), std::domain_error);
    }
}
