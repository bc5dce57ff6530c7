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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "roilab/blw.hpp"
#include "roilab/qubit.hpp"
#include "test_util.hpp"

namespace roilab {
namespace {

using testing::Rng;
constexpr double kPi = std::numbers::pi;
constexpr double kPi8 = kPi / 8.0;
constexpr double kPi4 = kPi / 4.0;

template <class F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidArgument;
}

TEST(W2, Examples) {
    EXPECT_NEAR(w2_sq(BinaryDist(1.0), BinaryDist(0.854)), 0.584, 1e-12);
    EXPECT_NEAR(w2_sq(BinaryDist(1.0), BinaryDist(0.5 + 0.5 / std::numbers::sqrt2)), 0.586, 5e-4);
    EXPECT_NEAR(w2_sq(BinaryDist(0.5 + 0.5 / std::numbers::sqrt2), BinaryDist(0.75)), 0.414, 5e-4);
    EXPECT_EQ(w2_sq(BinaryDist(0.3), BinaryDist(0.3)), 0.0);
    EXPECT_EQ(code_of([] { BinaryDist(1.2); }), ErrorCode::OutOfRange);
}

TEST(BinaryDist, Moments) {
    const BinaryDist d(0.75);
    EXPECT_DOUBLE_EQ(d.p_minus(), 0.25);
    EXPECT_DOUBLE_EQ(d.mean(), 0.5);
    EXPECT_DOUBLE_EQ(d.variance(), 0.75);
}

TEST(WorstCase, FamilyFormulas) {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
        const double g = testing::random_gamma(rng);
        ASSERT_NEAR(worst_case_delta_sq(noisy_z(g), sharp_z()), 2.0 * (1.0 - std::sin(2 * g)), 1e-12);
        ASSERT_NEAR(worst_case_delta_sq(blw_second(g), sharp_x()), 2.0 * (1.0 - std::cos(2 * g)), 1e-12);
    }
    EXPECT_EQ(worst_case_delta_sq(sharp_x(), sharp_x()), 0.0);
    EXPECT_EQ(code_of([] { worst_case_delta_sq(sharp_x(), trivial_povm(3)); }), ErrorCode::DimensionMismatch);
}

TEST(WorstCase, MatchesSampledSupremum) {
    Rng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = testing::random_unbiased_povm(rng);
        const auto q = testing::random_unbiased_povm(rng);
        double sup = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const CMatrix rho = testing::random_ket(rng).density();
            sup = std::max(sup, w2_sq(BinaryDist(born_prob(p.plus(), rho)), BinaryDist(born_prob(q.plus(), rho))));
        }
        const double spectral = worst_case_delta_sq(p, q);
        EXPECT_LE(sup, spectral + 1e-12);
        EXPECT_NEAR(sup, spectral, 1e-3 * std::max(1.0, spectral) + 2e-3);
    }
}

TEST(BlwScan, ThreePointGrid) {
    const std::vector<double> grid{0.0, kPi8, kPi4};
    const auto r = blw_sum_scan(grid);
    EXPECT_NEAR(r.gamma_grid, kPi8, 1e-15);
    EXPECT_NEAR(r.sum, kBlwMinimum, 1e-12);
    EXPECT_NEAR(r.min_sum, 2.0 * (2.0 - std::numbers::sqrt2), 1e-15);
    EXPECT_DOUBLE_EQ(r.gamma_star, kPi8);
    EXPECT_NEAR(r.rows.front().sum, 2.0, 1e-12);
    EXPECT_NEAR(r.rows.back().sum, 2.0, 1e-12);
    for (const auto &row : r.rows) {
        EXPECT_NEAR(row.sum, row.delta_A_sq + row.delta_B_sq, 1e-12);
        EXPECT_NEAR(row.sum, blw_sum_closed_form(row.gamma), 1e-12);
    }
}

TEST(BlwScan, DenseGridArgmin) {
    const auto grid = uniform_gamma_grid(10000);
    const auto r = blw_sum_scan(grid);
    EXPECT_LE(std::abs(r.gamma_grid - kPi8), kPi4 / 9999.0 + 1e-15);
    EXPECT_NEAR(r.sum, r.delta_A_sq + r.delta_B_sq, 1e-12);
}

TEST(BlwScan, Errors) {
    const std::vector<double> two{0.0, 0.1};
    EXPECT_EQ(code_of([&] { blw_sum_scan(two); }), ErrorCode::EmptyGrid);
    const std::vector<double> bad{0.0, 0.1, 2.0};
    EXPECT_EQ(code_of([&] { blw_sum_scan(bad); }), ErrorCode::OutOfRange);
}

TEST(BlwScan, CsvLayout) {
    const std::vector<double> grid{0.0, kPi8, kPi4};
    std::ostringstream out;
    write_scan_csv(out, blw_sum_scan(grid));
    const std::string s = out.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "gamma,delta_A_sq,delta_B_sq,sum");
    EXPECT_NE(s.find("1.17157287525"), std::string::npos);
}

TEST(Variance, Examples) {
    EXPECT_NEAR(variance(noisy_z(kPi8), states::H().density()), 0.5, 1e-12);
    EXPECT_NEAR(variance(blw_second(kPi8), states::H().density()), 1.0, 1e-12);
    EXPECT_NEAR(variance(sharp_z(), states::V().density()), 0.0, 1e-15);
}

TEST(UncertaintySum, Examples) {
    Rng rng(43);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_NEAR(uncertainty_sum(kPi8, testing::random_real_ket(rng).density()), 1.5, 1e-12);
    }
    EXPECT_NEAR(uncertainty_sum(kPi8, states::psi_minus().density()), 1.5, 1e-12);
    EXPECT_NEAR(variance(noisy_z(kPi8), states::psi_minus().density()), 0.75, 1e-12);
    EXPECT_NEAR(uncertainty_sum(0.0, states::plus().density()), 1.0, 1e-12);
    EXPECT_NEAR(uncertainty_sum(0.0, states::minus().density()), 1.0, 1e-12);
}

TEST(UncertaintySum, MatchesVariancesAndTwoBranchBound) {
    Rng rng(44);
    for (int i = 0; i < 10000; ++i) {
        const double g = testing::random_gamma(rng);
        const CMatrix rho = testing::random_qubit_state(rng);
        const double s = uncertainty_sum(g, rho);
        ASSERT_NEAR(s, variance(blw_first(g), rho) + variance(blw_second(g), rho), 1e-12);
        const double c = std::cos(2 * g);
        const double sn = std::sin(2 * g);
        const double bound = g <= kPi8 ? 2.0 - c * c : 2.0 - sn * sn;
        ASSERT_GE(s, bound - 1e-12);
    }
}

TEST(DeltaSqSum, PiEighthMaximum) {
    Rng rng(45);
    const double cap = 2.0 * (std::numbers::sqrt2 - 1.0);
    for (int i = 0; i < 2000; ++i) {
        const CMatrix rho = testing::random_qubit_state(rng);
        const auto r = bloch_vector(rho);
        const double v = delta_sq_sum(kPi8, rho);
        ASSERT_NEAR(v, (2.0 - std::numbers::sqrt2) * (std::abs(r.x) + std::abs(r.z)), 1e-12);
        ASSERT_LE(v, cap + 1e-12);
    }
    const double h = 1.0 / std::numbers::sqrt2;
    EXPECT_NEAR(delta_sq_sum(kPi8, density_from_bloch({h, 0.0, h})), cap, 1e-12);
}

TEST(Correlation, Extremes) {
    const auto g = blw_joint(kPi8);
    EXPECT_NEAR(correlation(g, states::psi_minus().density()), -1.0 / 3.0, 1e-10);
    EXPECT_NEAR(correlation(g, states::psi_plus().density()), 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(correlation(g, 0.5 * pauli::I()), 0.0, 1e-15);
}

TEST(Correlation, ClosedFormAndBound) {
    Rng rng(46);
    for (int i = 0; i < 10000; ++i) {
        const double gm = testing::uniform(rng, 0.01, kPi4 - 0.01);
        const CMatrix rho = testing::random_qubit_state(rng);
        const auto r = bloch_vector(rho);
        const double vz = 1.0 - r.z * r.z * std::pow(std::sin(2 * gm), 2);
        const double vx = 1.0 - r.x * r.x * std::pow(std::cos(2 * gm), 2);
        if (vz < 1e-6 || vx < 1e-6) continue;
        const double c = correlation(blw_joint(gm), rho);
        ASSERT_NEAR(c, -r.z * std::sin(2 * gm) * r.x * std::cos(2 * gm) / std::sqrt(vz * vx), 1e-9);
        ASSERT_LE(std::abs(c), corr_bound(gm) + 1e-9);
    }
}

TEST(Correlation, SignFlipSymmetry) {
    const std::array<double, 4> mu{0.4, 0.1, 0.2, 0.3};
    // relabel the second outcome: swap (a,+) and (a,-)
    const std::array<double, 4> flipped{0.1, 0.4, 0.3, 0.2};
    EXPECT_NEAR(correlation(mu), -correlation(flipped), 1e-15);
}

TEST(Correlation, Undefined) {
    EXPECT_EQ(code_of([] { correlation(blw_joint(0.0), states::plus().density()); }),
              ErrorCode::UndefinedCorrelation);
    EXPECT_EQ(code_of([] { correlation(std::array<double, 4>{1.0, 0.0, 0.0, 0.0}); }),
              ErrorCode::UndefinedCorrelation);
}

TEST(CorrBound, Examples) {
    EXPECT_NEAR(corr_bound(kPi8), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(corr_bound(0.0), 0.0);
    EXPECT_NEAR(corr_bound(kPi / 16.0), 0.26120387496, 1e-10);
}

} // namespace
} // namespace roilab
