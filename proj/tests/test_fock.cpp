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

#include "lagmzi/fock.hpp"
#include "lagmzi/qfi.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

using namespace lagmzi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double fidelity(const TwoModeState &a, const TwoModeState &b) {
    return std::abs(a.inner(b));
}

} // namespace

TEST_CASE("order-0 state is the squeezed-vacuum geometric ladder") {
    const double r = 0.7;
    const auto psi = build_laguerre_state(0, r, 40);
    const double sech = 1.0 / std::cosh(r);
    for (int m = 0; m <= 10; ++m) {
        CHECK_THAT(psi.at(m, m).real(),
                   WithinAbs(sech * std::pow(std::tanh(r), m), 1e-12));
    }
    // off-diagonal amplitudes vanish identically
    for (int k = 0; k <= 40; ++k) {
        for (int l = 0; l <= 40; ++l) {
            if (k != l) {
                REQUIRE(psi.at(k, l) == Complex{0.0, 0.0});
            }
        }
    }
}

TEST_CASE("state energy matches the closed form") {
    for (int n = 0; n <= 3; ++n) {
        for (double r : {0.3, 0.7, 1.0}) {
            const int cutoff = default_state_cutoff(n, r);
            const auto psi = build_laguerre_state(n, r, cutoff);
            const auto m = photon_moments(psi);
            const double expected =
                2.0 * n * std::cosh(2.0 * r) + 2.0 * std::sinh(r) * std::sinh(r);
            CHECK_THAT(m.mean_a + m.mean_b, WithinRel(expected, 1e-10));
        }
    }
}

TEST_CASE("ladder construction agrees with the squeezer exponential") {
    for (int n = 0; n <= 3; ++n) {
        for (double r : {0.3, 0.5, 1.0}) {
            const int cutoff = std::max(40, default_state_cutoff(n, r) + 8);
            const auto ladder = build_laguerre_state(n, r, cutoff);
            const auto direct = build_squeezed_twin_fock_expm(n, r, cutoff);
            CHECK(fidelity(ladder, direct) >= 1.0 - 1e-10);
        }
    }
}

TEST_CASE("low squeezing returns the bare twin-Fock state") {
    const auto psi = build_laguerre_state(2, 1e-12, 10);
    CHECK(psi.at(2, 2) == Complex{1.0, 0.0});
}

TEST_CASE("construction error paths") {
    CHECK_THROWS_AS(build_laguerre_state(0, 1.0, 5), truncation_error);
    CHECK_THROWS_AS(build_laguerre_state(1, -0.5, 10), std::domain_error);
    CHECK_THROWS_AS(build_laguerre_state(4, 0.5, 3), std::invalid_argument);
}

TEST_CASE("vacuum is invariant under the beam splitter") {
    const auto vac = TwoModeState::basis(8, 0, 0);
    const auto out = apply_number_conserving_unitary(vac, Generator::J1,
                                                     std::numbers::pi / 2.0);
    CHECK_THAT(std::abs(out.at(0, 0) - Complex{1.0, 0.0}), WithinAbs(0.0, 1e-14));
}

TEST_CASE("single photon picks up the phase-generator eigenphase") {
    const auto one = TwoModeState::basis(6, 1, 0);
    const double phi = 0.37;
    const auto out = apply_number_conserving_unitary(one, Generator::J3, phi);
    const Complex expected = std::polar(1.0, -phi / 2.0);
    CHECK_THAT(std::abs(out.at(1, 0) - expected), WithinAbs(0.0, 1e-14));
}

TEST_CASE("twin photons bunch at a balanced splitter") {
    const auto in = TwoModeState::basis(6, 1, 1);
    const auto out = apply_number_conserving_unitary(in, Generator::J1,
                                                     std::numbers::pi / 2.0);
    CHECK_THAT(std::abs(out.at(1, 1)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::norm(out.at(2, 0)), WithinAbs(0.5, 1e-13));
    CHECK_THAT(std::norm(out.at(0, 2)), WithinAbs(0.5, 1e-13));
    CHECK_THAT(photon_moments(out).mean_a, WithinAbs(1.0, 1e-13));
}

TEST_CASE("number-conserving unitaries preserve norm and sectors") {
    const auto psi = build_laguerre_state(2, 0.6, 30, 1e-6);
    const auto out = apply_number_conserving_unitary(psi, Generator::J1, 0.9);
    CHECK_THAT(out.squared_norm(), WithinAbs(1.0, 1e-12));
    // input lives on even totals only; the splitter must not leak amplitude
    // into odd totals
    for (int k = 0; k <= 30; ++k) {
        for (int l = 0; l <= 30; ++l) {
            if ((k + l) % 2 == 1) {
                REQUIRE(out.at(k, l) == Complex{0.0, 0.0});
            }
        }
    }
}

TEST_CASE("lossless channel is the identity and keeps purity") {
    const auto psi = build_laguerre_state(1, 0.5, 20, 1e-8);
    const auto rho = apply_loss_channel(psi, Mode::B, 1.0);
    const auto expected = TwoModeDensity::from_pure(psi);
    CHECK((rho.matrix() - expected.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single photon attenuates binomially") {
    const auto psi = TwoModeState::basis(4, 0, 1);
    const auto rho = apply_loss_channel(psi, Mode::B, 0.95);
    CHECK_THAT(rho.matrix()(rho.index(0, 1), rho.index(0, 1)).real(),
               WithinAbs(0.95, 1e-14));
    CHECK_THAT(rho.matrix()(rho.index(0, 0), rho.index(0, 0)).real(),
               WithinAbs(0.05, 1e-14));
    CHECK_THAT(rho.trace_real(), WithinAbs(1.0, 1e-14));
    CHECK(rho.hermiticity_defect() < 1e-14);
}

TEST_CASE("loss channel preserves trace and positivity on a generic state") {
    const auto psi = apply_number_conserving_unitary(
        build_laguerre_state(1, 0.4, 14, 1e-6), Generator::J1, 0.7);
    for (Mode mode : {Mode::A, Mode::B}) {
        const auto rho = apply_loss_channel(psi, mode, 0.8);
        CHECK_THAT(rho.trace_real(), WithinAbs(1.0, 1e-12));
        CHECK(rho.hermiticity_defect() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    CHECK_THROWS_AS(apply_loss_channel(psi, Mode::B, 0.0), std::domain_error);
    CHECK_THROWS_AS(apply_loss_channel(psi, Mode::B, -0.2), std::domain_error);
}

TEST_CASE("density-route loss equals the pure-component sum") {
    const auto psi = apply_number_conserving_unitary(
        build_laguerre_state(1, 0.5, 16, 1e-6), Generator::J1, std::numbers::pi / 2.0);
    const double t = 0.85;
    const auto rho = apply_loss_channel(psi, Mode::B, t);
    double from_members = 0.0;
    for (const auto &m : loss_kraus_members(psi, Mode::B, t)) {
        from_members += parity_expectation(m);
    }
    CHECK_THAT(parity_expectation(rho), WithinAbs(from_members, 1e-12));
}

TEST_CASE("loss on a density composes with loss on the pure state") {
    const auto psi = apply_number_conserving_unitary(
        build_laguerre_state(1, 0.4, 12, 1e-6), Generator::J1, 0.5);
    const auto once = apply_loss_channel(psi, Mode::B, 0.9 * 0.8);
    const auto twice =
        apply_loss_channel(apply_loss_channel(psi, Mode::B, 0.9), Mode::B, 0.8);
    CHECK((once.matrix() - twice.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parity of simple states") {
    CHECK_THAT(parity_expectation(TwoModeState::basis(3, 0, 0)),
               WithinAbs(1.0, 1e-15));
    CHECK_THAT(parity_expectation(TwoModeState::basis(3, 0, 1)),
               WithinAbs(-1.0, 1e-15));
    CHECK_THAT(parity_expectation(TwoModeState::basis(3, 2, 1), Mode::A),
               WithinAbs(1.0, 1e-15));
}

TEST_CASE("interferometer parity of the squeezed vacuum matches its closed scalar") {
    const double r = 0.7;
    const double phi = 0.3; // shifted convention
    const int cutoff = default_pipeline_cutoff(0, r);
    const MziOracle mzi(cutoff);
    const double th = std::tanh(r);
    const double w0 =
        1.0 - 2.0 * th * th * std::cos(2.0 * phi) + th * th * th * th;
    const double expected = (1.0 - th * th) / std::sqrt(w0);
    const double got = mzi.parity_ideal(build_laguerre_state(0, r, cutoff), phi);
    CHECK_THAT(got, WithinAbs(expected, 1e-10));
    CHECK(std::abs(got) <= 1.0 + 1e-10);
}

TEST_CASE("photon moments behind the first splitter match the closed forms") {
    for (int n = 0; n <= 3; ++n) {
        for (double r : {0.3, 0.7, 1.0}) {
            const int cutoff = default_pipeline_cutoff(n, r);
            const auto probe = apply_number_conserving_unitary(
                build_laguerre_state(n, r, cutoff), Generator::J1,
                std::numbers::pi / 2.0);
            const auto m = photon_moments(probe);
            const auto c = moments_closed_form(n, r);
            CHECK_THAT(m.mean_a, WithinRel(c.mean_a, 1e-10));
            CHECK_THAT(m.mean_b, WithinRel(c.mean_b, 1e-10));
            CHECK_THAT(m.mean_a2, WithinRel(c.mean_a2, 1e-10));
            CHECK_THAT(m.mean_b2, WithinRel(c.mean_b2, 1e-10));
            if (n == 0) {
                CHECK_THAT(m.cross,
                           WithinAbs(std::pow(std::sinh(r), 4.0), 1e-10));
            } else {
                CHECK_THAT(m.cross, WithinRel(c.cross, 1e-10));
            }
        }
    }
}

TEST_CASE("hong-ou-mandel probe has uncorrelated modes at zero squeezing") {
    const auto probe = apply_number_conserving_unitary(
        TwoModeState::basis(6, 1, 1), Generator::J1, std::numbers::pi / 2.0);
    CHECK_THAT(photon_moments(probe).cross, WithinAbs(0.0, 1e-13));
}

TEST_CASE("pure-state Fisher information matches the closed form") {
    const double s14 = std::sinh(1.4);
    CHECK_THAT(pure_state_qfi(build_laguerre_state(0, 0.7, 60)),
               WithinRel(s14 * s14, 1e-10));
    CHECK_THAT(pure_state_qfi(build_laguerre_state(1, 1e-12, 12)),
               WithinAbs(4.0, 1e-10));
    const int cutoff = default_pipeline_cutoff(3, 0.9);
    CHECK_THAT(pure_state_qfi(build_laguerre_state(3, 0.9, cutoff)),
               WithinRel(qfi_ideal(3, 0.9), 1e-8));
}

TEST_CASE("exact mixed-state Fisher information") {
    SECTION("lossless limit reproduces the pure-state value") {
        const int cutoff = 19;
        const auto model = lossy_phase_density_model(0, 0.3, 1.0, cutoff);
        const double pure = pure_state_qfi(build_laguerre_state(0, 0.3, cutoff, 1.0));
        CHECK_THAT(mixed_state_qfi(model, 0.4), WithinAbs(pure, 1e-6));
    }
    SECTION("lossy value stays below the variational bound") {
        for (const auto &[n, r, eta] : {std::tuple{0, 0.5, 0.8},
                                        std::tuple{1, 0.5, 0.8}}) {
            const auto model = lossy_phase_density_model(n, r, eta, 15);
            const double exact = mixed_state_qfi(model, 0.4);
            const double bound = qfi_lossy(QfiParams{n, r, eta});
            CHECK(exact <= bound + 1e-6);
        }
    }
    SECTION("rejects a non-Hermitian input") {
        auto bad = [](double) {
            TwoModeDensity rho(2);
            rho.matrix()(0, 1) = Complex{1.0, 0.0};
            return rho;
        };
        CHECK_THROWS_AS(mixed_state_qfi(bad, 0.1), invalid_density_error);
    }
}

TEST_CASE("default cutoffs grow with squeezing and order") {
    CHECK(default_state_cutoff(0, 0.3) < default_state_cutoff(0, 1.0));
    CHECK(default_state_cutoff(0, 0.7) < default_state_cutoff(3, 0.7));
    CHECK(default_pipeline_cutoff(1, 0.7) == 2 * default_state_cutoff(1, 0.7));
    CHECK(default_state_cutoff(2, 0.0) == 2);
}
