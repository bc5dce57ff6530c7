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
 * Qubit conventions: the polarisation basis {|H>, |V>} is the computational
 * basis, sigma_z = |H><H| - |V><V|, sigma_x = |H><V| + |V><H| and
 * sigma_y = -i|H><V| + i|V><H|.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "roilab/linalg.hpp"

namespace roilab {

namespace pauli {

inline CMatrix I() { return CMatrix::identity(2); }
inline CMatrix X() { return CMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline CMatrix Y() { return CMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
inline CMatrix Z() { return CMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

} // namespace pauli

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double length() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Pure polarisation state alpha|H> + beta|V>.
struct Ket {
    Complex alpha{1.0};
    Complex beta{0.0};

    [[nodiscard]] std::vector<Complex> vec() const { return {alpha, beta}; }
    [[nodiscard]] double norm_sq() const { return std::norm(alpha) + std::norm(beta); }
    [[nodiscard]] CMatrix density() const {
        const auto v = vec();
        return CMatrix::projector(v);
    }
};

/// rho = (1 + r.sigma) / 2
inline CMatrix density_from_bloch(const BlochVector &r) {
    return 0.5 * (pauli::I() + r.x * pauli::X() + r.y * pauli::Y() + r.z * pauli::Z());
}

inline BlochVector bloch_vector(const CMatrix &rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "Bloch vector needs a 2x2 operator");
    }
    return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline BlochVector bloch_vector(const Ket &k) { return bloch_vector(k.density()); }

/// Qubit density matrix with its Bloch-vector view; validated on construction.
class QubitState {
  public:
    explicit QubitState(CMatrix rho) : rho_(std::move(rho)) {
        if (rho_.dim() != 2) {
            throw Error(ErrorCode::DimensionMismatch, "qubit state must be 2x2");
        }
        require_state(rho_);
    }
    explicit QubitState(const Ket &k) : QubitState(k.density()) {}
    explicit QubitState(const BlochVector &r) : QubitState(density_from_bloch(r)) {}

    [[nodiscard]] const CMatrix &matrix() const noexcept { return rho_; }
    [[nodiscard]] BlochVector bloch() const { return bloch_vector(rho_); }

  private:
    CMatrix rho_;
};

/// The named input states used by the experiment tables and the CLI.
///
/// psi-minus = cos(pi/8)|H> + sin(pi/8)|V> is the maximally anti-correlated
/// state for the optimal joint measurement; psi-plus flips the |V> sign.
struct NamedState {
    std::string name;
    Ket ket;
};

namespace states {

inline Ket H() { return {1.0, 0.0}; }
inline Ket V() { return {0.0, 1.0}; }
inline Ket plus() { return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}; }
inline Ket minus() { return {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0}; }
inline Ket psi_minus() { return {std::cos(std::numbers::pi / 8.0), std::sin(std::numbers::pi / 8.0)}; }
inline Ket psi_plus() { return {std::cos(std::numbers::pi / 8.0), -std::sin(std::numbers::pi / 8.0)}; }
inline Ket y_plus() { return {std::numbers::sqrt2 / 2.0, Complex(0.0, std::numbers::sqrt2 / 2.0)}; }
inline Ket y_minus() { return {std::numbers::sqrt2 / 2.0, Complex(0.0, -std::numbers::sqrt2 / 2.0)}; }

/// The five table columns, in table order.
inline std::vector<NamedState> canonical() {
    return {{"H", H()}, {"V", V()}, {"plus", plus()}, {"minus", minus()}, {"psi-minus", psi_minus()}};
}

inline Ket by_name(std::string_view name) {
    if (name == "H") return H();
    if (name == "V") return V();
    if (name == "plus") return plus();
    if (name == "minus") return minus();
    if (name == "psi-minus") return psi_minus();
    if (name == "psi-plus") return psi_plus();
    throw Error(ErrorCode::ConfigError, "unknown state name '" + std::string(name) + "'");
}

} // namespace states

/// Tomography projectors X+, X-, Y+, Y-, Z+, Z- as kets, in table row order.
struct Projector {
    std::string name;
    Ket ket;
};

inline std::vector<Projector> tomography_projectors() {
    return {{"X+", states::plus()},   {"X-", states::minus()}, {"Y+", states::y_plus()},
            {"Y-", states::y_minus()}, {"Z+", states::H()},     {"Z-", states::V()}};
}

inline Ket projector_by_name(std::string_view name) {
    for (const auto &p : tomography_projectors()) {
        if (p.name == name) {
            return p.ket;
        }
    }
    throw Error(ErrorCode::ConfigError, "unknown projector '" + std::string(name) + "'");
}

} // namespace roilab
