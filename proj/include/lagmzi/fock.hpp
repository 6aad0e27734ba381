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

/// @file fock.hpp
/// Truncated two-mode Fock-space simulator: squeezed twin-Fock state
/// construction, number-conserving interferometer unitaries, photon-loss
/// channels, parity/moment observables and exact quantum Fisher
/// information. Serves as the brute-force ground truth for every closed
/// form in the library.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lagmzi/series.hpp"

namespace lagmzi {

/// Raised when a requested cutoff cannot hold the state to the requested
/// truncation tolerance.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a matrix handed in as a density operator fails the
/// Hermiticity / positivity checks.
struct invalid_density_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { A, B };
enum class Generator { J1, J3 };

/// Converts the shifted phase used by all closed forms (and all public
/// APIs) to the physical interferometer phase.
inline double physical_phase(double shifted_phi) {
    return shifted_phi + std::numbers::pi / 2.0;
}

/// Pure two-mode state on the truncated Fock basis |k, l>,
/// 0 <= k, l <= cutoff. Amplitudes are stored row-major in k.
class TwoModeState {
  public:
    explicit TwoModeState(int cutoff)
        : cutoff_(cutoff),
          amps_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cutoff + 1) *
                                       (cutoff + 1))) {
        if (cutoff < 0) {
            throw std::invalid_argument("TwoModeState: negative cutoff");
        }
    }

    static TwoModeState basis(int cutoff, int k, int l) {
        TwoModeState s(cutoff);
        s.at(k, l) = Complex{1.0, 0.0};
        return s;
    }

    [[nodiscard]] int cutoff() const { return cutoff_; }
    [[nodiscard]] Eigen::Index dim() const { return amps_.size(); }

    [[nodiscard]] Complex &at(int k, int l) { return amps_[index(k, l)]; }
    [[nodiscard]] Complex at(int k, int l) const { return amps_[index(k, l)]; }

    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const { return amps_; }
    [[nodiscard]] Eigen::VectorXcd &amplitudes() { return amps_; }

    [[nodiscard]] double squared_norm() const { return amps_.squaredNorm(); }

    void normalize() {
        const double n = amps_.norm();
        if (n > 0.0) {
            amps_ /= n;
        }
    }

    [[nodiscard]] Complex inner(const TwoModeState &other) const {
        return amps_.dot(other.amps_); // conjugates *this
    }

    [[nodiscard]] Eigen::Index index(int k, int l) const {
        if (k < 0 || l < 0 || k > cutoff_ || l > cutoff_) {
            throw std::out_of_range("TwoModeState: index outside cutoff");
        }
        return static_cast<Eigen::Index>(k) * (cutoff_ + 1) + l;
    }

  private:
    int cutoff_;
    Eigen::VectorXcd amps_;
};

/// Mixed two-mode state: dense Hermitian matrix over the same basis.
class TwoModeDensity {
  public:
    explicit TwoModeDensity(int cutoff)
        : cutoff_(cutoff),
          mat_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cutoff + 1) *
                                          (cutoff + 1),
                                      static_cast<Eigen::Index>(cutoff + 1) *
                                          (cutoff + 1))) {
        if (cutoff < 0) {
            throw std::invalid_argument("TwoModeDensity: negative cutoff");
        }
    }

    static TwoModeDensity from_pure(const TwoModeState &psi) {
        TwoModeDensity rho(psi.cutoff());
        rho.mat_ = psi.amplitudes() * psi.amplitudes().adjoint();
        return rho;
    }

    [[nodiscard]] int cutoff() const { return cutoff_; }
    [[nodiscard]] Eigen::Index dim() const { return mat_.rows(); }
    [[nodiscard]] const Eigen::MatrixXcd &matrix() const { return mat_; }
    [[nodiscard]] Eigen::MatrixXcd &matrix() { return mat_; }

    [[nodiscard]] double trace_real() const { return mat_.trace().real(); }

    [[nodiscard]] double hermiticity_defect() const {
        return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    }

    [[nodiscard]] Eigen::Index index(int k, int l) const {
        if (k < 0 || l < 0 || k > cutoff_ || l > cutoff_) {
            throw std::out_of_range("TwoModeDensity: index outside cutoff");
        }
        return static_cast<Eigen::Index>(k) * (cutoff_ + 1) + l;
    }

  private:
    int cutoff_;
    Eigen::MatrixXcd mat_;
};

namespace detail {

inline int sector_low(int total, int cutoff) { return std::max(0, total - cutoff); }
inline int sector_high(int total, int cutoff) { return std::min(total, cutoff); }
inline int sector_size(int total, int cutoff) {
    return sector_high(total, cutoff) - sector_low(total, cutoff) + 1;
}

} // namespace detail

/// Eigendecomposed total-photon-number sector blocks of the beam-splitter
/// generator (a^+ b + a b^+)/2 for one cutoff. Application of
/// exp(-i*angle*J1) is then exact per sector for any angle. Sectors with
/// total > cutoff are truncated boxes; they are only touched by amplitudes
/// already below the truncation tolerance.
class BeamSplitterBlocks {
  public:
    explicit BeamSplitterBlocks(int cutoff) : cutoff_(cutoff) {
        blocks_.reserve(2 * cutoff + 1);
        for (int total = 0; total <= 2 * cutoff; ++total) {
            const int lo = detail::sector_low(total, cutoff);
            const int d = detail::sector_size(total, cutoff);
            Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d, d);
            for (int i = 0; i + 1 < d; ++i) {
                const int k = lo + i; // couples |k, total-k> and |k+1, total-k-1>
                const double g =
                    0.5 * std::sqrt(static_cast<double>(k + 1) * (total - k));
                gen(i, i + 1) = g;
                gen(i + 1, i) = g;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gen);
            blocks_.push_back({es.eigenvectors(), es.eigenvalues()});
        }
    }

    [[nodiscard]] int cutoff() const { return cutoff_; }

    /// exp(-i * angle * J1) |psi>
    [[nodiscard]] TwoModeState apply(const TwoModeState &psi, double angle) const {
        if (psi.cutoff() != cutoff_) {
            throw std::invalid_argument("BeamSplitterBlocks: cutoff mismatch");
        }
        TwoModeState out(cutoff_);
        Eigen::VectorXcd vec, rotated;
        for (int total = 0; total <= 2 * cutoff_; ++total) {
            const int lo = detail::sector_low(total, cutoff_);
            const int d = detail::sector_size(total, cutoff_);
            vec.resize(d);
            bool empty = true;
            for (int i = 0; i < d; ++i) {
                vec[i] = psi.at(lo + i, total - lo - i);
                if (vec[i] != Complex{0.0, 0.0}) {
                    empty = false;
                }
            }
            if (empty) {
                continue;
            }
            const auto &[vecs, vals] = blocks_[total];
            rotated = vecs.transpose() * vec;
            for (int i = 0; i < d; ++i) {
                rotated[i] *= std::polar(1.0, -angle * vals[i]);
            }
            rotated = vecs * rotated;
            for (int i = 0; i < d; ++i) {
                out.at(lo + i, total - lo - i) = rotated[i];
            }
        }
        return out;
    }

  private:
    struct Block {
        Eigen::MatrixXd vectors;
        Eigen::VectorXd values;
    };
    int cutoff_;
    std::vector<Block> blocks_;
};

/// exp(-i * phi * J3) with J3 = (n_a - n_b)/2; diagonal, so exact.
inline TwoModeState apply_phase_shift(const TwoModeState &psi, double phi) {
    TwoModeState out(psi.cutoff());
    for (int k = 0; k <= psi.cutoff(); ++k) {
        for (int l = 0; l <= psi.cutoff(); ++l) {
            const Complex a = psi.at(k, l);
            if (a != Complex{0.0, 0.0}) {
                out.at(k, l) = a * std::polar(1.0, -phi * 0.5 * (k - l));
            }
        }
    }
    return out;
}

/// exp(-i * angle * generator). Both generators conserve the total photon
/// number, so amplitude never crosses sector boundaries.
inline TwoModeState apply_number_conserving_unitary(const TwoModeState &psi,
                                                    Generator generator,
                                                    double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("apply_number_conserving_unitary: angle");
    }
    if (generator == Generator::J3) {
        return apply_phase_shift(psi, angle);
    }
    return BeamSplitterBlocks(psi.cutoff()).apply(psi, angle);
}

namespace detail {

inline double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) {
        b *= static_cast<double>(n - k + i) / i;
    }
    return b;
}

/// sqrt(C(l, j) (1-T)^j T^(l-j)): amplitude weight of losing exactly j of l
/// photons through a transmissivity-T channel. Evaluated in log space.
inline double loss_weight(int l, int j, double transmissivity) {
    if (j > l) {
        return 0.0;
    }
    if (transmissivity >= 1.0) {
        return j == 0 ? 1.0 : 0.0;
    }
    const double logc = std::lgamma(l + 1.0) - std::lgamma(j + 1.0) -
                        std::lgamma(l - j + 1.0);
    const double loga = j * std::log1p(-transmissivity) +
                        (l - j) * std::log(transmissivity);
    return std::exp(0.5 * (logc + loga));
}

} // namespace detail

/// Smallest per-mode cutoff holding the diagonal-ladder state to tail_tol.
/// The geometric ladder weight q^m is amplified by (m+1)^(2+2n): 2n powers
/// for the excitation's polynomial growth of the amplitudes and 2 more so
/// that second photon moments (not just the norm) stay inside the
/// tolerance. The result is inflated by the n ladder steps of the
/// excitation.
inline int default_state_cutoff(int n, double r, double tail_tol = 1e-12) {
    if (n < 0) {
        throw std::invalid_argument("default_state_cutoff: negative order");
    }
    if (r < 1e-8) {
        return n;
    }
    const double logq = 2.0 * std::log(std::tanh(r));
    const double weight = 2.0 + 2.0 * n;
    std::vector<double> logterm;
    double logmax = -std::numeric_limits<double>::infinity();
    int m = 0;
    while (true) {
        const double lt = weight * std::log1p(static_cast<double>(m)) + m * logq;
        logterm.push_back(lt);
        logmax = std::max(logmax, lt);
        if (m > 8 && lt < logmax + std::log(tail_tol) - 12.0) {
            break;
        }
        if (m > 200000) {
            throw std::invalid_argument("default_state_cutoff: r too large");
        }
        ++m;
    }
    double total = 0.0;
    for (const double lt : logterm) {
        total += std::exp(lt - logmax);
    }
    double suffix = 0.0;
    int cut = static_cast<int>(logterm.size()) - 1;
    for (int i = static_cast<int>(logterm.size()) - 1; i >= 0; --i) {
        suffix += std::exp(logterm[i] - logmax);
        if (suffix >= tail_tol * total) {
            cut = i + 1;
            break;
        }
        cut = i;
    }
    return cut + n;
}

/// Per-mode cutoff for full interferometer pipelines: twice the state
/// support, so every populated total-photon sector stays complete after
/// beam splitting.
inline int default_pipeline_cutoff(int n, double r, double tail_tol = 1e-12) {
    return 2 * default_state_cutoff(n, r, tail_tol);
}

/// Squeezed twin-Fock state built from its diagonal-ladder expansion: the
/// Laguerre-polynomial excitation acting on the squeezed vacuum ladder,
/// renormalized on the truncated space. Amplitudes with k != l are exactly
/// zero. For r below 1e-8 the squeezer is the identity and |n,n> is
/// returned directly (the expansion parameter 2/sinh 2r is singular
/// there).
inline TwoModeState build_laguerre_state(int n, double r, int cutoff,
                                         double tail_tol = 1e-12) {
    if (n < 0) {
        throw std::invalid_argument("build_laguerre_state: negative order");
    }
    if (r < 0.0) {
        throw std::domain_error("build_laguerre_state: negative squeezing");
    }
    if (cutoff < n) {
        throw std::invalid_argument("build_laguerre_state: cutoff below order");
    }
    if (r < 1e-8) {
        return TwoModeState::basis(cutoff, n, n);
    }
    const double u = 2.0 / std::sinh(2.0 * r);
    const double th = std::tanh(r);
    const double sech = 1.0 / std::cosh(r);
    std::vector<double> ladder(cutoff + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        // L_n expansion term: C(n,k) (-u)^k / k! applied as k ladder raises
        double ck = detail::binomial(n, k) * std::pow(-u, k);
        for (int i = 2; i <= k; ++i) {
            ck /= i;
        }
        for (int m = 0; m + k <= cutoff; ++m) {
            double raise = 1.0; // (m+k)!/m!
            for (int i = m + 1; i <= m + k; ++i) {
                raise *= i;
            }
            ladder[m + k] += ck * std::pow(th, m) * raise;
        }
    }
    const double scale = sech * std::pow(-th, n);
    double captured = 0.0;
    for (auto &c : ladder) {
        c *= scale;
        captured += c * c;
    }
    if (captured < 1.0 - tail_tol) {
        throw truncation_error("build_laguerre_state: cutoff too small for "
                               "requested tail tolerance");
    }
    TwoModeState psi(cutoff);
    const double inv = 1.0 / std::sqrt(captured);
    for (int m = 0; m <= cutoff; ++m) {
        psi.at(m, m) = Complex{ladder[m] * inv, 0.0};
    }
    return psi;
}

/// Independent construction of the same state: exp{r(a^+b^+ - ab)} applied
/// to |n,n> by sub-stepped Taylor series (each sub-step has generator norm
/// <= 1, so the series converges to machine precision in a few dozen
/// terms). Used as the cross-construction oracle in tests.
inline TwoModeState build_squeezed_twin_fock_expm(int n, double r, int cutoff) {
    if (n < 0 || cutoff < n) {
        throw std::invalid_argument("build_squeezed_twin_fock_expm: order");
    }
    TwoModeState psi = TwoModeState::basis(cutoff, n, n);
    if (r == 0.0) {
        return psi;
    }
    const int steps =
        std::max(1, static_cast<int>(std::ceil(std::abs(r) * (2.0 * cutoff + 2.0))));
    const double dt = 1.0 / steps;
    auto apply_generator = [&](const TwoModeState &v) {
        TwoModeState w(cutoff);
        for (int k = 0; k <= cutoff; ++k) {
            for (int l = 0; l <= cutoff; ++l) {
                const Complex a = v.at(k, l);
                if (a == Complex{0.0, 0.0}) {
                    continue;
                }
                if (k + 1 <= cutoff && l + 1 <= cutoff) {
                    w.at(k + 1, l + 1) +=
                        r * std::sqrt(double(k + 1) * (l + 1)) * a;
                }
                if (k >= 1 && l >= 1) {
                    w.at(k - 1, l - 1) -= r * std::sqrt(double(k) * l) * a;
                }
            }
        }
        return w;
    };
    for (int s = 0; s < steps; ++s) {
        TwoModeState acc = psi;
        TwoModeState term = psi;
        for (int p = 1; p <= 64; ++p) {
            term = apply_generator(term);
            term.amplitudes() *= dt / p;
            acc.amplitudes() += term.amplitudes();
            if (term.amplitudes().norm() < 1e-18) {
                break;
            }
        }
        psi = std::move(acc);
    }
    psi.normalize();
    return psi;
}

/// Unnormalized pure components K_j |psi> of the transmissivity-T loss
/// channel on one mode (K_j annihilates exactly j photons). Their squared
/// norms sum to one; generation stops once the remaining mass drops below
/// drop_tol. drop_tol = 0 keeps every component.
inline std::vector<TwoModeState> loss_kraus_members(const TwoModeState &psi,
                                                    Mode mode,
                                                    double transmissivity,
                                                    double drop_tol = 0.0) {
    if (transmissivity <= 0.0 || transmissivity > 1.0) {
        throw std::domain_error("loss_kraus_members: transmissivity");
    }
    const int c = psi.cutoff();
    std::vector<TwoModeState> members;
    if (transmissivity == 1.0) {
        members.push_back(psi);
        return members;
    }
    double accumulated = 0.0;
    for (int j = 0; j <= c; ++j) {
        TwoModeState m(c);
        for (int k = 0; k <= c; ++k) {
            for (int l = j; l <= c; ++l) {
                const Complex a = mode == Mode::B ? psi.at(k, l) : psi.at(l, k);
                if (a == Complex{0.0, 0.0}) {
                    continue;
                }
                const Complex v = a * detail::loss_weight(l, j, transmissivity);
                if (mode == Mode::B) {
                    m.at(k, l - j) += v;
                } else {
                    m.at(l - j, k) += v;
                }
            }
        }
        accumulated += m.squared_norm();
        members.push_back(std::move(m));
        if (drop_tol > 0.0 && 1.0 - accumulated < drop_tol) {
            break;
        }
    }
    return members;
}

/// Exact Kraus-sum loss channel producing the mixed state. Quadratic in the
/// basis size; intended for moderate cutoffs.
inline TwoModeDensity apply_loss_channel(const TwoModeState &psi, Mode mode,
                                         double transmissivity) {
    const auto members = loss_kraus_members(psi, mode, transmissivity);
    TwoModeDensity rho(psi.cutoff());
    for (const auto &m : members) {
        rho.matrix().noalias() += m.amplitudes() * m.amplitudes().adjoint();
    }
    return rho;
}

inline TwoModeDensity apply_loss_channel(const TwoModeDensity &rho, Mode mode,
                                         double transmissivity) {
    if (transmissivity <= 0.0 || transmissivity > 1.0) {
        throw std::domain_error("apply_loss_channel: transmissivity");
    }
    const int c = rho.cutoff();
    if (transmissivity == 1.0) {
        return rho;
    }
    TwoModeDensity out(c);
    auto src_index = [&](int k, int l) {
        return mode == Mode::B ? rho.index(k, l) : rho.index(l, k);
    };
    for (int j = 0; j <= c; ++j) {
        for (int k = 0; k <= c; ++k) {
            for (int l = 0; l + j <= c; ++l) {
                const double wl = detail::loss_weight(l + j, j, transmissivity);
                if (wl == 0.0) {
                    continue;
                }
                for (int k2 = 0; k2 <= c; ++k2) {
                    for (int l2 = 0; l2 + j <= c; ++l2) {
                        const double wr =
                            detail::loss_weight(l2 + j, j, transmissivity);
                        const Complex v =
                            rho.matrix()(src_index(k, l + j), src_index(k2, l2 + j));
                        if (v == Complex{0.0, 0.0}) {
                            continue;
                        }
                        out.matrix()(src_index(k, l), src_index(k2, l2)) +=
                            wl * wr * v;
                    }
                }
            }
        }
    }
    return out;
}

/// <(-1)^{n_mode}>
inline double parity_expectation(const TwoModeState &psi, Mode mode = Mode::B) {
    double s = 0.0;
    for (int k = 0; k <= psi.cutoff(); ++k) {
        for (int l = 0; l <= psi.cutoff(); ++l) {
            const double p = std::norm(psi.at(k, l));
            if (p == 0.0) {
                continue;
            }
            const int photons = mode == Mode::B ? l : k;
            s += (photons % 2 == 0) ? p : -p;
        }
    }
    return s;
}

inline double parity_expectation(const TwoModeDensity &rho, Mode mode = Mode::B) {
    double s = 0.0;
    for (int k = 0; k <= rho.cutoff(); ++k) {
        for (int l = 0; l <= rho.cutoff(); ++l) {
            const double p = rho.matrix()(rho.index(k, l), rho.index(k, l)).real();
            const int photons = mode == Mode::B ? l : k;
            s += (photons % 2 == 0) ? p : -p;
        }
    }
    return s;
}

struct PhotonMoments {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double mean_a2 = 0.0;
    double mean_b2 = 0.0;
    double cross = 0.0;
};

inline PhotonMoments photon_moments(const TwoModeState &psi) {
    PhotonMoments m;
    for (int k = 0; k <= psi.cutoff(); ++k) {
        for (int l = 0; l <= psi.cutoff(); ++l) {
            const double p = std::norm(psi.at(k, l));
            if (p == 0.0) {
                continue;
            }
            m.mean_a += k * p;
            m.mean_b += l * p;
            m.mean_a2 += double(k) * k * p;
            m.mean_b2 += double(l) * l * p;
            m.cross += double(k) * l * p;
        }
    }
    return m;
}

/// Interferometer pipeline with a cached beam-splitter decomposition.
/// All phases are taken in the shifted convention and converted
/// internally. The first splitter is exp(-i pi J1/2), the second its
/// inverse, the phase generator J3.
class MziOracle {
  public:
    explicit MziOracle(int cutoff) : blocks_(cutoff) {}

    [[nodiscard]] int cutoff() const { return blocks_.cutoff(); }

    [[nodiscard]] TwoModeState after_first_splitter(const TwoModeState &in) const {
        return blocks_.apply(in, std::numbers::pi / 2.0);
    }

    [[nodiscard]] TwoModeState output(const TwoModeState &in,
                                      double shifted_phi) const {
        TwoModeState s = after_first_splitter(in);
        s = apply_phase_shift(s, physical_phase(shifted_phi));
        return blocks_.apply(s, -std::numbers::pi / 2.0);
    }

    [[nodiscard]] double parity_ideal(const TwoModeState &in,
                                      double shifted_phi) const {
        return parity_expectation(output(in, shifted_phi));
    }

    /// Loss on mode b after the second splitter, before detection.
    [[nodiscard]] double parity_external(const TwoModeState &in, double shifted_phi,
                                         double t1,
                                         double drop_tol = 1e-14) const {
        const TwoModeState out = output(in, shifted_phi);
        double s = 0.0;
        for (const auto &m : loss_kraus_members(out, Mode::B, t1, drop_tol)) {
            s += parity_expectation(m);
        }
        return s;
    }

    /// Loss on mode b between the phase shifter and the second splitter.
    [[nodiscard]] double parity_internal(const TwoModeState &in, double shifted_phi,
                                         double t2,
                                         double drop_tol = 1e-14) const {
        TwoModeState s = after_first_splitter(in);
        s = apply_phase_shift(s, physical_phase(shifted_phi));
        double p = 0.0;
        for (const auto &m : loss_kraus_members(s, Mode::B, t2, drop_tol)) {
            p += parity_expectation(blocks_.apply(m, -std::numbers::pi / 2.0));
        }
        return p;
    }

    [[nodiscard]] const BeamSplitterBlocks &blocks() const { return blocks_; }

  private:
    BeamSplitterBlocks blocks_;
};

/// Phase-estimation Fisher information of a pure probe: 4 Var(J3) on the
/// state behind the first splitter.
inline double pure_state_qfi(const TwoModeState &input) {
    const TwoModeState probe =
        apply_number_conserving_unitary(input, Generator::J1,
                                        std::numbers::pi / 2.0);
    double m1 = 0.0;
    double m2 = 0.0;
    for (int k = 0; k <= probe.cutoff(); ++k) {
        for (int l = 0; l <= probe.cutoff(); ++l) {
            const double p = std::norm(probe.at(k, l));
            if (p == 0.0) {
                continue;
            }
            const double j3 = 0.5 * (k - l);
            m1 += j3 * p;
            m2 += j3 * j3 * p;
        }
    }
    return 4.0 * (m2 - m1 * m1);
}

/// Exact Fisher information of a phase-parameterized mixed state, from the
/// eigendecomposition of rho and a Richardson-extrapolated central
/// difference for d(rho)/d(phi). Dense; keep the total dimension modest.
inline double
mixed_state_qfi(const std::function<TwoModeDensity(double)> &rho_of_phi,
                double phi, double fd_step = 1e-4) {
    const TwoModeDensity rho0 = rho_of_phi(phi);
    if (rho0.hermiticity_defect() > 1e-12) {
        throw invalid_density_error("mixed_state_qfi: not Hermitian");
    }
    auto central = [&](double h) {
        Eigen::MatrixXcd d =
            (rho_of_phi(phi + h).matrix() - rho_of_phi(phi - h).matrix()) /
            (2.0 * h);
        return d;
    };
    const Eigen::MatrixXcd d1 = central(fd_step);
    const Eigen::MatrixXcd d2 = central(fd_step / 2.0);
    const Eigen::MatrixXcd drho = (4.0 * d2 - d1) / 3.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (rho0.matrix() + rho0.matrix().adjoint()));
    const auto &vals = es.eigenvalues();
    if (vals.minCoeff() < -1e-10) {
        throw invalid_density_error("mixed_state_qfi: negative eigenvalue");
    }
    const Eigen::MatrixXcd a = es.eigenvectors().adjoint() * drho * es.eigenvectors();
    constexpr double floor = 1e-12;
    double f = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        for (Eigen::Index j = 0; j < vals.size(); ++j) {
            const double s = vals[i] + vals[j];
            if (s > floor) {
                f += 2.0 * std::norm(a(i, j)) / s;
            }
        }
    }
    return f;
}

/// phi -> rho builder for the lossy phase channel on mode b: loss with
/// transmissivity eta applied to the probe behind the first splitter,
/// then the phase shift. The channel itself does not depend on where the
/// loss sits relative to the phase, so this one representative suffices
/// for the exact-Fisher-information check.
inline std::function<TwoModeDensity(double)>
lossy_phase_density_model(int n, double r, double eta, int cutoff) {
    const TwoModeState probe = apply_number_conserving_unitary(
        build_laguerre_state(n, r, cutoff, 1.0), Generator::J1,
        std::numbers::pi / 2.0);
    auto members = std::make_shared<std::vector<TwoModeState>>(
        loss_kraus_members(probe, Mode::B, eta));
    return [members, cutoff](double phi) {
        TwoModeDensity rho(cutoff);
        for (const auto &m : *members) {
            const TwoModeState shifted = apply_phase_shift(m, phi);
            rho.matrix().noalias() +=
                shifted.amplitudes() * shifted.amplitudes().adjoint();
        }
        return rho;
    };
}

} // namespace lagmzi
