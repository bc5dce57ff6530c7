// Copyright 2026 The roi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Binary measurement uncertainty: squared Wasserstein-2 distances between
 * +-1 valued distributions, their worst case over states for a pair of
 * POVMs, the uncertainty sum of the A^gamma / B^gamma family, variances and
 * the correlation coefficient of a joint observable.
 *
 * A^gamma is noisy_z(gamma); B^gamma is the second margin of Lueders(A^gamma)
 * followed by sharp X, i.e. noisy_x(cos 2 gamma).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "roilab/linalg.hpp"
#include "roilab/measurements.hpp"
#include "roilab/qubit.hpp"

namespace roilab {

/// Minimum of Delta(A,Z)^2 + Delta(B,X)^2 over jointly measurable binary qubit pairs.
inline constexpr double kBlwMinimum = 2.0 * (2.0 - std::numbers::sqrt2);
inline constexpr double kBlwOptimalGamma = std::numbers::pi / 8.0;
inline constexpr double kVarianceFloor = 1e-12;

struct BinaryDist {
    double p_plus = 0.5;

    BinaryDist() = default;
    explicit BinaryDist(double p) : p_plus(p) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorCode::OutOfRange, "probability " + std::to_string(p) + " outside [0, 1]");
        }
    }

    [[nodiscard]] double p_minus() const noexcept { return 1.0 - p_plus; }
    [[nodiscard]] double mean() const noexcept { return 2.0 * p_plus - 1.0; }
    [[nodiscard]] double variance() const noexcept { return 4.0 * p_plus * (1.0 - p_plus); }
};

/// Squared Wasserstein-2 distance between two +-1 distributions: 4|p1 - p2|.
inline double w2_sq(const BinaryDist &d1, const BinaryDist &d2) { return 4.0 * std::abs(d1.p_plus - d2.p_plus); }

/// sup_rho w2_sq(P(rho), Q(rho)) = 4 max|eig(P+ - Q+)|.
inline double worst_case_delta_sq(const BinaryPovm &p, const BinaryPovm &q) {
    if (p.dim() != q.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "POVMs act on different spaces");
    }
    return 4.0 * spectral_radius((p.plus() - q.plus()).hermitian_part());
}

/// A^gamma
inline BinaryPovm blw_first(double gamma) { return noisy_z(gamma); }

/// B^gamma, realised sequentially.
inline BinaryPovm blw_second(double gamma) {
    return margins(sequential_joint(lueders_instrument(noisy_z(gamma)), sharp_x())).second;
}

/// G^gamma_{a,b} = I_a^*(X_b)
inline JointPovm blw_joint(double gamma) { return sequential_joint(lueders_instrument(noisy_z(gamma)), sharp_x()); }

struct UncertaintyRow {
    double gamma = 0.0;
    double delta_A_sq = 0.0;
    double delta_B_sq = 0.0;
    double sum = 0.0;
};

/// delta_A_sq / delta_B_sq / sum are taken at the grid argmin gamma_grid;
/// gamma_star and min_sum are the closed-form optimum.
struct UncertaintyReport {
    double gamma_grid = 0.0;
    double delta_A_sq = 0.0;
    double delta_B_sq = 0.0;
    double sum = 0.0;
    double gamma_star = kBlwOptimalGamma;
    double min_sum = kBlwMinimum;
    std::vector<UncertaintyRow> rows;
};

inline UncertaintyRow blw_row(double gamma) {
    gamma = checked_gamma(gamma);
    UncertaintyRow r{gamma, worst_case_delta_sq(blw_first(gamma), sharp_z()),
                     worst_case_delta_sq(blw_second(gamma), sharp_x()), 0.0};
    r.sum = r.delta_A_sq + r.delta_B_sq;
    return r;
}

/// 2[2 - sin 2g - cos 2g]
inline double blw_sum_closed_form(double gamma) {
    return 2.0 * (2.0 - std::sin(2.0 * gamma) - std::cos(2.0 * gamma));
}

/// n equally spaced angles covering [0, pi/4].
inline std::vector<double> uniform_gamma_grid(std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::EmptyGrid, "a uniform grid needs at least 2 points");
    }
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = kQuarterPi * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

inline UncertaintyReport blw_sum_scan(std::span<const double> grid) {
    if (grid.size() < 3) {
        throw Error(ErrorCode::EmptyGrid, "scan needs at least 3 grid points, got " + std::to_string(grid.size()));
    }
    UncertaintyReport rep;
    rep.rows.reserve(grid.size());
    std::size_t best = 0;
    for (double g : grid) {
        rep.rows.push_back(blw_row(g));
        if (rep.rows.back().sum < rep.rows[best].sum) {
            best = rep.rows.size() - 1;
        }
    }
    const auto &b = rep.rows[best];
    rep.gamma_grid = b.gamma;
    rep.delta_A_sq = b.delta_A_sq;
    rep.delta_B_sq = b.delta_B_sq;
    rep.sum = b.sum;
    return rep;
}

/// gamma,delta_A_sq,delta_B_sq,sum at 12 significant digits.
inline void write_scan_csv(std::ostream &out, const UncertaintyReport &rep) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << "gamma,delta_A_sq,delta_B_sq,sum\n" << std::setprecision(12);
    for (const auto &r : rep.rows) {
        out << r.gamma << ',' << r.delta_A_sq << ',' << r.delta_B_sq << ',' << r.sum << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

/// 4p(1-p) with p = tr[P+ rho].
inline double variance(const BinaryPovm &p, const CMatrix &rho) {
    return BinaryDist(born_prob(p.plus(), rho)).variance();
}

/// Var(A^gamma, rho) + Var(B^gamma, rho) = 2 - r_x^2 cos^2 2g - r_z^2 sin^2 2g.
inline double uncertainty_sum(double gamma, const CMatrix &rho) {
    gamma = checked_gamma(gamma);
    const auto r = QubitState(rho).bloch();
    const double c = std::cos(2.0 * gamma);
    const double s = std::sin(2.0 * gamma);
    return 2.0 - r.x * r.x * c * c - r.z * r.z * s * s;
}

/// Correlation coefficient of the two margins of a joint distribution
/// mu = (mu_{++}, mu_{+-}, mu_{-+}, mu_{--}).
inline double correlation(const std::array<double, 4> &mu) {
    const double pa = mu[0] + mu[1];
    const double pb = mu[0] + mu[2];
    const double var_a = 4.0 * pa * (1.0 - pa);
    const double var_b = 4.0 * pb * (1.0 - pb);
    if (var_a <= kVarianceFloor || var_b <= kVarianceFloor) {
        throw Error(ErrorCode::UndefinedCorrelation, "a marginal variance vanishes");
    }
    const double ab = mu[0] - mu[1] - mu[2] + mu[3];
    return (ab - (2.0 * pa - 1.0) * (2.0 * pb - 1.0)) / std::sqrt(var_a * var_b);
}

/// Same coefficient with the marginal probabilities and variances supplied
/// separately, as when they come from independent measured tables.
inline double correlation(const std::array<double, 4> &mu, double p, double q, double var_a, double var_b) {
    if (var_a <= kVarianceFloor || var_b <= kVarianceFloor) {
        throw Error(ErrorCode::UndefinedCorrelation, "a marginal variance vanishes");
    }
    const double ab = mu[0] - mu[1] - mu[2] + mu[3];
    return (ab - (2.0 * p - 1.0) * (2.0 * q - 1.0)) / std::sqrt(var_a * var_b);
}

inline double correlation(const JointPovm &j, const CMatrix &rho) {
    std::array<double, 4> mu{};
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            mu[JointPovm::slot(a, b)] = born_prob(j.at(a, b), rho);
        }
    }
    return std::clamp(correlation(mu), -1.0, 1.0);
}

/// sin 4g / (2 + sin 4g)
inline double corr_bound(double gamma) {
    gamma = checked_gamma(gamma);
    const double s = std::sin(4.0 * gamma);
    return s / (2.0 + s);
}

/// Delta_2(Z, A^gamma)^2 + Delta_2(X, B^gamma)^2 on one state.
inline double delta_sq_sum(double gamma, const CMatrix &rho) {
    const double p = born_prob(blw_first(gamma).plus(), rho);
    const double p_sharp = born_prob(sharp_z().plus(), rho);
    const double q = born_prob(blw_second(gamma).plus(), rho);
    const double q_sharp = born_prob(sharp_x().plus(), rho);
    return w2_sq(BinaryDist(p_sharp), BinaryDist(p)) + w2_sq(BinaryDist(q_sharp), BinaryDist(q));
}

} // namespace roilab
