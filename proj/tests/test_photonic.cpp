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

#include <cmath>
#include <numbers>

#include "roilab/photonic.hpp"
#include "test_util.hpp"

namespace roilab {
namespace {

using testing::Rng;
constexpr double kPi8 = std::numbers::pi / 8.0;
constexpr double kPi4 = std::numbers::pi / 4.0;
const double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

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

double amp_distance(const StageState &x, const StageState &y) {
    if (x.index() != y.index()) return 1e9;
    if (const auto *k = std::get_if<Ket>(&x)) {
        const auto &l = std::get<Ket>(y);
        return std::abs(k->alpha - l.alpha) + std::abs(k->beta - l.beta);
    }
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        d += std::abs(std::get<PathPolState>(x).amp[i] - std::get<PathPolState>(y).amp[i]);
    }
    return d;
}

TEST(Propagate, StageNineFormula) {
    Rng rng(51);
    for (int i = 0; i < 200; ++i) {
        const Ket in = testing::random_ket(rng);
        const double g = testing::random_gamma(rng);
        const Ket out = propagate(in, g, Branch::Plus).output();
        EXPECT_LE(std::abs(out.alpha - kHalfSqrt2 * in.alpha * (std::cos(g) + std::sin(g))), 1e-14);
        EXPECT_LE(std::abs(out.beta - kHalfSqrt2 * in.beta * (std::cos(g) - std::sin(g))), 1e-14);
        const Ket minus = propagate(in, g, Branch::Minus).output();
        EXPECT_LE(std::abs(minus.alpha - kHalfSqrt2 * in.alpha * (std::cos(g) - std::sin(g))), 1e-14);
        EXPECT_LE(std::abs(minus.beta - kHalfSqrt2 * in.beta * (std::cos(g) + std::sin(g))), 1e-14);
    }
}

TEST(Propagate, GammaZeroHalvesNorm) {
    const Ket in = states::psi_minus();
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const Ket out = propagate(in, 0.0, b).output();
        EXPECT_NEAR(out.norm_sq(), 0.5, 1e-15);
        EXPECT_LE(std::abs(out.alpha - in.alpha / std::numbers::sqrt2), 1e-15);
        EXPECT_LE(std::abs(out.beta - in.beta / std::numbers::sqrt2), 1e-15);
    }
}

TEST(Propagate, VerticalNeverFiresPlusAtQuarterPi) {
    EXPECT_NEAR(propagate(states::V(), kPi4, Branch::Plus).output().norm_sq(), 0.0, 1e-30);
}

TEST(Propagate, StageLabelsAndCount) {
    const auto t = propagate(states::H(), kPi8, Branch::Plus);
    const std::vector<std::string> labels{"in", "2", "3", "4", "5", "6", "7", "8", "9"};
    ASSERT_EQ(t.stages.size(), labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_EQ(t.stages[i].label, labels[i]);
    EXPECT_DOUBLE_EQ(t.phi, kPi8);
    EXPECT_TRUE(std::holds_alternative<Ket>(t.stages.back().state));
}

TEST(Propagate, OnlyStageSixLosesNorm) {
    Rng rng(52);
    for (int i = 0; i < 200; ++i) {
        const auto t = propagate(testing::random_ket(rng), testing::random_gamma(rng),
                                 i % 2 ? Branch::Plus : Branch::Minus);
        for (std::size_t s = 1; s < t.stages.size(); ++s) {
            if (t.stages[s].label == "6") {
                ASSERT_LE(t.stages[s].norm_sq(), t.stages[s - 1].norm_sq() + 1e-12);
                continue;
            }
            ASSERT_NEAR(t.stages[s].norm_sq(), t.stages[s - 1].norm_sq(), 1e-12);
        }
        for (const auto &st : t.stages) ASSERT_LE(st.norm_sq(), 1.0 + 1e-12);
    }
}

TEST(Propagate, MatchesBoxedStages) {
    Rng rng(53);
    for (int i = 0; i < 300; ++i) {
        const Ket in = testing::random_ket(rng);
        const double g = testing::random_gamma(rng);
        for (Branch b : {Branch::Plus, Branch::Minus}) {
            const auto numeric = propagate(in, g, b);
            const auto boxed = boxed_stages(in, g, b);
            ASSERT_EQ(numeric.stages.size(), boxed.stages.size());
            for (std::size_t s = 0; s < numeric.stages.size(); ++s) {
                ASSERT_LE(amp_distance(numeric.stages[s].state, boxed.stages[s].state), 1e-13)
                    << "stage " << numeric.stages[s].label;
            }
        }
    }
}

TEST(Propagate, ComposedOperatorIsKraus) {
    Rng rng(54);
    for (int i = 0; i < 100; ++i) {
        const double g = testing::random_gamma(rng);
        const auto instr = lueders_instrument(noisy_z(g));
        EXPECT_LE(frobenius_distance(composed_operator(g, Branch::Plus), instr.kraus(kPlus).front()), 1e-13);
        EXPECT_LE(frobenius_distance(composed_operator(g, Branch::Minus), instr.kraus(kMinus).front()), 1e-13);
    }
}

TEST(Branch, AngleValidation) {
    EXPECT_EQ(branch_from_angle(kPi8), Branch::Plus);
    EXPECT_EQ(branch_from_angle(-kPi8), Branch::Minus);
    EXPECT_EQ(code_of([] { branch_from_angle(0.1); }), ErrorCode::InvalidBranch);
    EXPECT_EQ(code_of([] { propagate(states::H(), 0.1, 0.2); }), ErrorCode::InvalidBranch);
    EXPECT_EQ(branch_outcome(Branch::Minus), kMinus);
}

TEST(Propagate, RejectsUnnormalisedInput) {
    EXPECT_EQ(code_of([] { propagate(Ket{1.0, 1.0}, 0.1, Branch::Plus); }), ErrorCode::NotState);
    EXPECT_EQ(code_of([] { propagate(states::H(), 1.0, Branch::Plus); }), ErrorCode::OutOfRange);
}

TEST(PipelineVsLueders, Grid) {
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 40.0;
        for (int j = 0; j < 25; ++j) {
            const double g = kPi4 * j / 24.0;
            const Ket in{std::cos(t), std::sin(t) * Complex(std::cos(3.0 * t), std::sin(3.0 * t))};
            worst = std::max(worst, pipeline_vs_lueders(in, g));
            const double total =
                propagate(in, g, Branch::Plus).output().norm_sq() + propagate(in, g, Branch::Minus).output().norm_sq();
            ASSERT_NEAR(total, 1.0, 1e-10);
        }
    }
    EXPECT_LE(worst, 1e-10);
    EXPECT_LE(pipeline_vs_lueders(states::H(), kPi4), 1e-15);
}

TEST(PipelineVsLueders, PlusStateBranchTraces) {
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        EXPECT_NEAR(propagate(states::plus(), kPi8, b).output().norm_sq(), 0.5, 1e-14);
    }
}

TEST(Tomography, Examples) {
    EXPECT_NEAR(tomography_prob(states::H(), kPi8, kPlus, states::plus()), 0.427, 5e-4);
    EXPECT_NEAR(tomography_prob(states::minus(), kPi4, kPlus, states::H()), 0.5, 1e-14);
    Rng rng(55);
    for (int i = 0; i < 50; ++i) {
        const Ket in = testing::random_real_ket(rng);
        for (int a : kOutcomes) {
            ASSERT_NEAR(tomography_prob(in, 0.0, a, states::y_plus()), 0.25, 1e-14);
        }
    }
    EXPECT_EQ(code_of([] { tomography_prob(states::H(), 0.0, kPlus, Ket{1.0, 1.0}); }), ErrorCode::InvalidArgument);
}

TEST(Tomography, ClosedFormAgreement) {
    Rng rng(56);
    for (int i = 0; i < 1000; ++i) {
        const Ket in = testing::random_ket(rng);
        const Ket proj = testing::random_ket(rng);
        const double g = testing::random_gamma(rng);
        for (int a : kOutcomes) {
            ASSERT_NEAR(tomography_prob(in, g, a, proj), tomography_closed_form(in, g, a, proj), 1e-12);
        }
    }
}

TEST(Tomography, BasesResolveIdentityAndMacrorealism) {
    Rng rng(57);
    for (int i = 0; i < 500; ++i) {
        const Ket in = testing::random_ket(rng);
        const double g = testing::random_gamma(rng);
        double z_margin = 0.0;
        for (int a : kOutcomes) {
            double six = 0.0;
            for (const auto &p : tomography_projectors()) six += tomography_prob(in, g, a, p.ket);
            ASSERT_NEAR(six, 3.0 * born_prob(noisy_z(g).effect(a), in.density()), 1e-12);
            z_margin += tomography_prob(in, g, a, states::H());
        }
        ASSERT_NEAR(z_margin, std::norm(in.alpha), 1e-12);
    }
}

TEST(Tomography, ComplexInputShiftsYRows) {
    const Ket in = states::y_plus();
    EXPECT_NEAR(tomography_prob(in, 0.0, kPlus, states::y_plus()), 0.5, 1e-14);
    EXPECT_NEAR(tomography_prob(in, 0.0, kPlus, states::y_minus()), 0.0, 1e-14);
}

TEST(MixedNoisyX, Examples) {
    const double eta = 1.0 / std::numbers::sqrt2;
    EXPECT_NEAR(mixed_noisy_x_prob(states::plus(), eta), 0.854, 5e-4);
    EXPECT_NEAR(mixed_noisy_x_prob(states::psi_minus(), eta), 0.75, 1e-12);
    for (const auto &s : states::canonical()) EXPECT_NEAR(mixed_noisy_x_prob(s.ket, 0.0), 0.5, 1e-14);
    Rng rng(58);
    for (int i = 0; i < 500; ++i) {
        const Ket in = testing::random_real_ket(rng);
        const double e = testing::uniform(rng);
        ASSERT_NEAR(mixed_noisy_x_prob(in, e), born_prob(noisy_x(e).plus(), in.density()), 1e-12);
    }
    EXPECT_EQ(code_of([] { mixed_noisy_x_prob(states::H(), 1.5); }), ErrorCode::OutOfRange);
}

TEST(TomographyTable, Layout) {
    const auto t = tomography_table(kPi8);
    ASSERT_EQ(t.projectors.size(), 6u);
    ASSERT_EQ(t.states.size(), 5u);
    EXPECT_EQ(t.projectors.front(), "X+");
    EXPECT_EQ(t.projectors.back(), "Z-");
    EXPECT_NEAR(t.at(0, 0, kPlus), 0.427, 5e-4);
    EXPECT_EQ(t.values[0].size(), 10u);
}

} // namespace
} // namespace roilab
