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

// Random generators shared by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "roilab/linalg.hpp"
#include "roilab/measurements.hpp"
#include "roilab/qubit.hpp"

namespace roilab::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng &rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double normal(Rng &rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline double random_gamma(Rng &rng) { return uniform(rng, 0.0, std::numbers::pi / 4.0); }

/// Haar-random pure qubit state.
inline Ket random_ket(Rng &rng) {
    Complex a(normal(rng), normal(rng));
    Complex b(normal(rng), normal(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

/// cos t |H> + sin t |V> with t uniform on the circle.
inline Ket random_real_ket(Rng &rng) {
    const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    return {std::cos(t), std::sin(t)};
}

inline BlochVector random_bloch_ball(Rng &rng) {
    while (true) {
        BlochVector r{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
        if (r.length() <= 1.0) return r;
    }
}

/// Mixed or pure qubit state from the Bloch ball (half of the draws are pure).
inline CMatrix random_qubit_state(Rng &rng) {
    if (uniform(rng) < 0.5) return random_ket(rng).density();
    return density_from_bloch(random_bloch_ball(rng));
}

inline CMatrix random_matrix(Rng &rng, std::size_t d) {
    CMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            m(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    return m;
}

inline CMatrix random_hermitian(Rng &rng, std::size_t d) { return random_matrix(rng, d).hermitian_part(); }

inline CMatrix random_psd(Rng &rng, std::size_t d) {
    const CMatrix x = random_matrix(rng, d);
    return (x.adjoint() * x).hermitian_part();
}

inline CMatrix random_density(Rng &rng, std::size_t d) {
    CMatrix p = random_psd(rng, d);
    return p * (1.0 / p.trace().real());
}

/// Unbiased qubit POVM 1/2 (1 +- m.sigma) with |m| <= 1.
inline BinaryPovm random_unbiased_povm(Rng &rng) { return unbiased_qubit_povm(random_bloch_ball(rng)); }

/// Binary instrument with two random Kraus operators per outcome.
inline Instrument random_instrument(Rng &rng, std::size_t d) {
    std::vector<CMatrix> ks;
    CMatrix s(d);
    for (int i = 0; i < 4; ++i) {
        ks.push_back(random_matrix(rng, d));
        s += ks.back().adjoint() * ks.back();
    }
    const CMatrix inv_sqrt = herm_eig(s.hermitian_part()).reconstruct([](double x) { return 1.0 / std::sqrt(x); });
    for (auto &k : ks) {
        k = k * inv_sqrt;
    }
    return Instrument({{kPlus, {ks[0], ks[1]}}, {kMinus, {ks[2], ks[3]}}});
}

} // namespace roilab::testing
