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

/// @file series.hpp
/// Truncated power-series algebra in the four auxiliary variables
/// (x, y, t, tau) with complex coefficients, plus the mixed-derivative
/// coefficient-extraction functional used to evaluate parity generating
/// functions.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lagmzi {

using Complex = std::complex<double>;

/// The four auxiliary expansion variables.
enum class Var : int { X = 0, Y = 1, T = 2, Tau = 3 };

constexpr int kNumVars = 4;

/// A purely quadratic polynomial over {x, y, t, tau}: one complex
/// coefficient per unordered variable pair, squares included (10 slots).
/// Constant and linear parts are zero by construction.
class QuadraticExponent {
  public:
    QuadraticExponent() = default;

    /// Slot index for the unordered pair (a, b).
    static constexpr int pair_index(Var a, Var b) {
        int i = static_cast<int>(a);
        int j = static_cast<int>(b);
        if (i > j) {
            std::swap(i, j);
        }
        // row-start offsets for i = 0..3 in the packed upper triangle
        constexpr int offset[kNumVars] = {0, 4, 7, 9};
        return offset[i] + (j - i);
    }

    void add(Var a, Var b, Complex c) { coeff_[pair_index(a, b)] += c; }

    [[nodiscard]] Complex coefficient(Var a, Var b) const {
        return coeff_[pair_index(a, b)];
    }

    QuadraticExponent &operator+=(const QuadraticExponent &other) {
        for (std::size_t s = 0; s < coeff_.size(); ++s) {
            coeff_[s] += other.coeff_[s];
        }
        return *this;
    }

    QuadraticExponent &operator*=(Complex scale) {
        for (auto &c : coeff_) {
            c *= scale;
        }
        return *this;
    }

    friend QuadraticExponent operator*(QuadraticExponent q, Complex scale) {
        q *= scale;
        return q;
    }

  private:
    std::array<Complex, 10> coeff_{};
};

/// A linear form c_x x + c_y y + c_t t + c_tau tau. Products of two linear
/// forms expand into a QuadraticExponent; this is how the bilinear pieces
/// of the loss-case generating functions are assembled.
class LinearForm {
  public:
    LinearForm() = default;
    LinearForm(Complex cx, Complex cy, Complex ct, Complex ctau)
        : coeff_{cx, cy, ct, ctau} {}

    Complex &operator[](Var v) { return coeff_[static_cast<int>(v)]; }
    Complex operator[](Var v) const { return coeff_[static_cast<int>(v)]; }

    friend QuadraticExponent operator*(const LinearForm &u, const LinearForm &v) {
        QuadraticExponent q;
        for (int i = 0; i < kNumVars; ++i) {
            for (int j = 0; j < kNumVars; ++j) {
                const Complex c = u.coeff_[i] * v.coeff_[j];
                if (c != Complex{0.0, 0.0}) {
                    q.add(static_cast<Var>(i), static_cast<Var>(j), c);
                }
            }
        }
        return q;
    }

  private:
    std::array<Complex, 4> coeff_{};
};

/// Truncated multivariate power series: a dense complex coefficient table
/// over exponent tuples (i, j, k, m) with every exponent <= degree_cap.
/// Arithmetic drops any product term whose per-variable degree exceeds the
/// cap, so a cap of n is exact for everything that can reach the
/// (n, n, n, n) coefficient.
class MultiSeries {
  public:
    explicit MultiSeries(int degree_cap)
        : cap_(degree_cap),
          coeff_(static_cast<std::size_t>(side()) * side() * side() * side()) {
        if (degree_cap < 0) {
            throw std::invalid_argument("MultiSeries: degree_cap must be >= 0");
        }
    }

    [[nodiscard]] int degree_cap() const { return cap_; }
    [[nodiscard]] int side() const { return cap_ + 1; }
    [[nodiscard]] std::size_t table_size() const { return coeff_.size(); }

    [[nodiscard]] Complex coeff(int i, int j, int k, int m) const {
        return coeff_[index(i, j, k, m)];
    }

    void set_coeff(int i, int j, int k, int m, Complex value) {
        coeff_[index(i, j, k, m)] = value;
    }

    void add_coeff(int i, int j, int k, int m, Complex value) {
        coeff_[index(i, j, k, m)] += value;
    }

    MultiSeries &operator+=(const MultiSeries &other) {
        check_same_cap(other);
        for (std::size_t s = 0; s < coeff_.size(); ++s) {
            coeff_[s] += other.coeff_[s];
        }
        return *this;
    }

    friend MultiSeries operator+(MultiSeries a, const MultiSeries &b) {
        a += b;
        return a;
    }

    MultiSeries &operator*=(Complex scale) {
        for (auto &c : coeff_) {
            c *= scale;
        }
        return *this;
    }

    friend MultiSeries operator*(MultiSeries a, Complex scale) {
        a *= scale;
        return a;
    }

    /// Cap-truncating product.
    friend MultiSeries operator*(const MultiSeries &a, const MultiSeries &b) {
        a.check_same_cap(b);
        const int side = a.side();
        MultiSeries r(a.cap_);
        for (int i1 = 0; i1 < side; ++i1)
            for (int j1 = 0; j1 < side; ++j1)
                for (int k1 = 0; k1 < side; ++k1)
                    for (int m1 = 0; m1 < side; ++m1) {
                        const Complex ca = a.coeff(i1, j1, k1, m1);
                        if (ca == Complex{0.0, 0.0}) {
                            continue;
                        }
                        for (int i2 = 0; i1 + i2 < side; ++i2)
                            for (int j2 = 0; j1 + j2 < side; ++j2)
                                for (int k2 = 0; k1 + k2 < side; ++k2)
                                    for (int m2 = 0; m1 + m2 < side; ++m2) {
                                        const Complex cb = b.coeff(i2, j2, k2, m2);
                                        if (cb == Complex{0.0, 0.0}) {
                                            continue;
                                        }
                                        r.add_coeff(i1 + i2, j1 + j2, k1 + k2,
                                                    m1 + m2, ca * cb);
                                    }
                    }
        return r;
    }

    [[nodiscard]] MultiSeries conjugated() const {
        MultiSeries r(cap_);
        for (std::size_t s = 0; s < coeff_.size(); ++s) {
            r.coeff_[s] = std::conj(coeff_[s]);
        }
        return r;
    }

    [[nodiscard]] bool is_zero() const {
        for (const auto &c : coeff_) {
            if (c != Complex{0.0, 0.0}) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto &c : coeff_) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

  private:
    [[nodiscard]] std::size_t index(int i, int j, int k, int m) const {
        if (i < 0 || j < 0 || k < 0 || m < 0 || i > cap_ || j > cap_ || k > cap_ ||
            m > cap_) {
            throw std::out_of_range("MultiSeries: exponent outside degree cap");
        }
        const auto s = static_cast<std::size_t>(side());
        return ((static_cast<std::size_t>(i) * s + j) * s + k) * s + m;
    }

    void check_same_cap(const MultiSeries &other) const {
        if (other.cap_ != cap_) {
            throw std::invalid_argument("MultiSeries: degree caps differ");
        }
    }

    int cap_;
    std::vector<Complex> coeff_;
};

/// Embeds a quadratic exponent as a series. Pairs whose exponent tuple does
/// not fit under the cap (squares with cap < 2, any pair with cap < 1) are
/// dropped; they cannot contribute to any in-cap coefficient.
inline MultiSeries series_from_quadratic(const QuadraticExponent &q,
                                         int degree_cap) {
    MultiSeries s(degree_cap);
    for (int i = 0; i < kNumVars; ++i) {
        for (int j = i; j < kNumVars; ++j) {
            const Complex c =
                q.coefficient(static_cast<Var>(i), static_cast<Var>(j));
            if (c == Complex{0.0, 0.0}) {
                continue;
            }
            int e[kNumVars] = {0, 0, 0, 0};
            e[i] += 1;
            e[j] += 1;
            if (e[0] > degree_cap || e[1] > degree_cap || e[2] > degree_cap ||
                e[3] > degree_cap) {
                continue;
            }
            s.add_coeff(e[0], e[1], e[2], e[3], c);
        }
    }
    return s;
}

/// exp(s) truncated to the cap. Requires a zero constant term. Since every
/// term of s has total degree >= 2, powers beyond 2*cap cannot reach any
/// in-cap exponent tuple, so the power sum terminates exactly.
inline MultiSeries series_exp(const MultiSeries &s) {
    if (s.coeff(0, 0, 0, 0) != Complex{0.0, 0.0}) {
        throw std::invalid_argument("series_exp: nonzero constant term");
    }
    const int cap = s.degree_cap();
    MultiSeries result(cap);
    result.set_coeff(0, 0, 0, 0, Complex{1.0, 0.0});
    MultiSeries term = result;
    for (int p = 1; p <= 2 * cap; ++p) {
        term = term * s;
        term *= Complex{1.0 / p, 0.0};
        if (term.is_zero()) {
            break;
        }
        result += term;
    }
    return result;
}

/// The order-n mixed-derivative-at-zero functional: (n!)^2 times the
/// coefficient of x^n y^n t^n tau^n.
inline Complex extract_dn(const MultiSeries &s, int n) {
    if (n < 0) {
        throw std::invalid_argument("extract_dn: negative order");
    }
    if (s.degree_cap() < n) {
        throw std::invalid_argument("extract_dn: degree cap below order");
    }
    double fac = 1.0;
    for (int i = 2; i <= n; ++i) {
        fac *= i;
    }
    return (fac * fac) * s.coeff(n, n, n, n);
}

} // namespace lagmzi
