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
 * Binary POVMs, Kraus-form instruments, their Heisenberg duals and the
 * joint POVMs produced by measuring two observables in sequence.
 *
 * Outcomes are the integers +1 and -1 throughout. The gamma-parametrised
 * family noisy_z(gamma) = (1 +- sin(2 gamma) sigma_z) / 2 with its Lueders
 * instrument is the first measurement of the experiment; a sharp or noisy X
 * read-out is the second.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roilab/linalg.hpp"
#include "roilab/qubit.hpp"

namespace roilab {

inline constexpr int kPlus = +1;
inline constexpr int kMinus = -1;
inline constexpr std::array<int, 2> kOutcomes = {kPlus, kMinus};

/// 0 for +1, 1 for -1.
inline std::size_t outcome_index(int a) {
    if (a == kPlus) return 0;
    if (a == kMinus) return 1;
    throw Error(ErrorCode::UnknownOutcome, "outcome " + std::to_string(a) + " is not +1 or -1");
}

/// Ordered effect pair (E+, E-) with E+ + E- = 1.
class BinaryPovm {
  public:
    BinaryPovm(CMatrix plus, CMatrix minus, double tol = kPsdTol)
        : plus_(std::move(plus)), minus_(std::move(minus)) {
        plus_.require_same_dim(minus_);
        if (!is_effect(plus_, tol) || !is_effect(minus_, tol)) {
            throw Error(ErrorCode::NotEffect, "effects must satisfy 0 <= E <= 1");
        }
        if (frobenius_distance(plus_ + minus_, CMatrix::identity(dim())) > tol) {
            throw Error(ErrorCode::InvalidPovm, "effects do not sum to the identity");
        }
    }

    /// (E, 1 - E)
    static BinaryPovm from_plus(const CMatrix &plus, double tol = kPsdTol) {
        return {plus, CMatrix::identity(plus.dim()) - plus, tol};
    }

    [[nodiscard]] const CMatrix &plus() const noexcept { return plus_; }
    [[nodiscard]] const CMatrix &minus() const noexcept { return minus_; }
    [[nodiscard]] const CMatrix &effect(int a) const { return outcome_index(a) == 0 ? plus_ : minus_; }
    [[nodiscard]] std::size_t dim() const noexcept { return plus_.dim(); }

  private:
    CMatrix plus_;
    CMatrix minus_;
};

inline double max_effect_distance(const BinaryPovm &p, const BinaryPovm &q) {
    return std::max(frobenius_distance(p.plus(), q.plus()), frobenius_distance(p.minus(), q.minus()));
}

/// Outcome-indexed Kraus lists; the sum of K^dagger K over everything is 1.
class Instrument {
  public:
    using KrausMap = std::map<int, std::vector<CMatrix>>;

    explicit Instrument(KrausMap kraus, double tol = kPsdTol) : kraus_(std::move(kraus)) {
        if (kraus_.empty()) {
            throw Error(ErrorCode::InvalidInstrument, "instrument has no outcomes");
        }
        dim_ = 0;
        for (const auto &[a, ks] : kraus_) {
            if (ks.empty()) {
                throw Error(ErrorCode::InvalidInstrument, "outcome " + std::to_string(a) + " has no Kraus operators");
            }
            for (const auto &k : ks) {
                if (dim_ == 0) {
                    dim_ = k.dim();
                } else if (k.dim() != dim_) {
                    throw Error(ErrorCode::DimensionMismatch, "Kraus operators of different dimension");
                }
            }
        }
        CMatrix total(dim_);
        for (const auto &[a, ks] : kraus_) {
            total += induced_effect(a);
        }
        const double defect = frobenius_distance(total, CMatrix::identity(dim_));
        if (defect > tol) {
            throw Error(ErrorCode::InvalidInstrument, "not trace preserving, defect " + std::to_string(defect));
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const KrausMap &kraus_map() const noexcept { return kraus_; }

    [[nodiscard]] std::vector<int> outcomes() const {
        std::vector<int> r;
        for (const auto &[a, ks] : kraus_) {
            r.push_back(a);
        }
        return r;
    }

    [[nodiscard]] const std::vector<CMatrix> &kraus(int a) const {
        const auto it = kraus_.find(a);
        if (it == kraus_.end()) {
            throw Error(ErrorCode::UnknownOutcome, "instrument has no outcome " + std::to_string(a));
        }
        return it->second;
    }

    /// sum_k K_{a,k}^dagger K_{a,k}
    [[nodiscard]] CMatrix induced_effect(int a) const {
        CMatrix e(dim_);
        for (const auto &k : kraus(a)) {
            e += k.adjoint() * k;
        }
        return e.hermitian_part();
    }

    /// Only for instruments with outcomes exactly {+1, -1}.
    [[nodiscard]] BinaryPovm induced_povm() const {
        require_binary();
        return {induced_effect(kPlus), induced_effect(kMinus)};
    }

    void require_binary() const {
        if (kraus_.size() != 2 || !kraus_.contains(kPlus) || !kraus_.contains(kMinus)) {
            throw Error(ErrorCode::UnknownOutcome, "expected an instrument with outcomes +1 and -1");
        }
    }

  private:
    KrausMap kraus_;
    std::size_t dim_ = 0;
};

/// Four effects G_{a,b}, a, b in {+1, -1}, summing to the identity.
class JointPovm {
  public:
    /// Effects in the order (++, +-, -+, --).
    explicit JointPovm(std::array<CMatrix, 4> effects, double tol = kPsdTol) : effects_(std::move(effects)) {
        CMatrix total(effects_[0].dim());
        for (const auto &g : effects_) {
            total += g;
            if (!is_psd(g, tol)) {
                throw Error(ErrorCode::InvalidJointPovm, "joint effect is not positive semidefinite");
            }
        }
        if (frobenius_distance(total, CMatrix::identity(total.dim())) > tol) {
            throw Error(ErrorCode::InvalidJointPovm, "joint effects do not sum to the identity");
        }
    }

    static std::size_t slot(int a, int b) { return 2 * outcome_index(a) + outcome_index(b); }

    [[nodiscard]] const CMatrix &at(int a, int b) const { return effects_[slot(a, b)]; }
    [[nodiscard]] const std::array<CMatrix, 4> &effects() const noexcept { return effects_; }
    [[nodiscard]] std::size_t dim() const noexcept { return effects_[0].dim(); }

  private:
    std::array<CMatrix, 4> effects_;
};

// ---------------------------------------------------------------------------
// Families

inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// gamma must lie in [0, pi/4]; the Kraus square roots stop being the
/// positive roots outside it.
inline double checked_gamma(double gamma) {
    constexpr double slack = 1e-12;
    if (!(gamma >= -slack && gamma <= kQuarterPi + slack)) {
        throw Error(ErrorCode::OutOfRange, "gamma " + std::to_string(gamma) + " outside [0, pi/4]");
    }
    return std::clamp(gamma, 0.0, kQuarterPi);
}

/// A^gamma_+- = (1 +- sin(2 gamma) sigma_z) / 2
inline BinaryPovm noisy_z(double gamma) {
    const double s = std::sin(2.0 * checked_gamma(gamma));
    return {0.5 * (pauli::I() + s * pauli::Z()), 0.5 * (pauli::I() - s * pauli::Z())};
}

/// X^eta_+- = (1 +- eta sigma_x) / 2
inline BinaryPovm noisy_x(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "visibility " + std::to_string(eta) + " outside [0, 1]");
    }
    return {0.5 * (pauli::I() + eta * pauli::X()), 0.5 * (pauli::I() - eta * pauli::X())};
}

/// (1 +- eta sigma_y) / 2
inline BinaryPovm noisy_y(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "visibility " + std::to_string(eta) + " outside [0, 1]");
    }
    return {0.5 * (pauli::I() + eta * pauli::Y()), 0.5 * (pauli::I() - eta * pauli::Y())};
}

inline BinaryPovm sharp_z() { return noisy_z(kQuarterPi); }
inline BinaryPovm sharp_x() { return noisy_x(1.0); }
inline BinaryPovm sharp_y() { return noisy_y(1.0); }

/// (1/2, 1/2) in any dimension.
inline BinaryPovm trivial_povm(std::size_t dim) {
    const CMatrix half = 0.5 * CMatrix::identity(dim);
    return {half, half};
}

/// (1 + m.sigma)/2, (1 - m.sigma)/2
inline BinaryPovm unbiased_qubit_povm(const BlochVector &m) {
    const CMatrix ms = m.x * pauli::X() + m.y * pauli::Y() + m.z * pauli::Z();
    return {0.5 * (pauli::I() + ms), 0.5 * (pauli::I() - ms)};
}

// ---------------------------------------------------------------------------
// Instruments

/// One Kraus operator per outcome, K_a = sqrt(E_a).
inline Instrument lueders_instrument(const BinaryPovm &p) {
    return Instrument({{kPlus, {psd_sqrt(p.plus())}}, {kMinus, {psd_sqrt(p.minus())}}});
}

/// rho -> rho / 2 for both outcomes: the "no measurement" first step.
inline Instrument trivial_instrument(std::size_t dim) {
    return lueders_instrument(trivial_povm(dim));
}

/// Sub-normalised post-measurement state sum_k K rho K^dagger.
inline CMatrix apply(const Instrument &instr, int a, const CMatrix &rho) {
    const auto &ks = instr.kraus(a);
    rho.require_same_dim(ks.front());
    CMatrix out(rho.dim());
    for (const auto &k : ks) {
        out += k * rho * k.adjoint();
    }
    return out.hermitian_part();
}

/// Heisenberg dual sum_k K^dagger M K, so tr[dual(M) rho] = tr[M apply(rho)].
inline CMatrix heisenberg(const Instrument &instr, int a, const CMatrix &m) {
    const auto &ks = instr.kraus(a);
    m.require_same_dim(ks.front());
    CMatrix out(m.dim());
    for (const auto &k : ks) {
        out += k.adjoint() * m * k;
    }
    return out;
}

/// sum_a apply(instr, a, rho)
inline CMatrix total_channel(const Instrument &instr, const CMatrix &rho) {
    CMatrix out(rho.dim());
    for (int a : instr.outcomes()) {
        out += apply(instr, a, rho);
    }
    return out;
}

/// Heisenberg dual of the total channel.
inline CMatrix total_channel_dual(const Instrument &instr, const CMatrix &m) {
    CMatrix out(m.dim());
    for (int a : instr.outcomes()) {
        out += heisenberg(instr, a, m);
    }
    return out;
}

/// G_{a,b} = I_a^*(F_b): first the instrument, then the final POVM.
inline JointPovm sequential_joint(const Instrument &instr, const BinaryPovm &final_povm) {
    instr.require_binary();
    if (instr.dim() != final_povm.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "instrument and final POVM act on different spaces");
    }
    std::array<CMatrix, 4> g;
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            g[JointPovm::slot(a, b)] = heisenberg(instr, a, final_povm.effect(b)).hermitian_part();
        }
    }
    return JointPovm(std::move(g));
}

/// (sum_b G_{a,b})_a and (sum_a G_{a,b})_b
inline std::pair<BinaryPovm, BinaryPovm> margins(const JointPovm &j) {
    BinaryPovm first(j.at(kPlus, kPlus) + j.at(kPlus, kMinus), j.at(kMinus, kPlus) + j.at(kMinus, kMinus));
    BinaryPovm second(j.at(kPlus, kPlus) + j.at(kMinus, kPlus), j.at(kPlus, kMinus) + j.at(kMinus, kMinus));
    return {std::move(first), std::move(second)};
}

// ---------------------------------------------------------------------------
// Joint measurability

struct JmReport {
    bool feasible = false;
    std::optional<JointPovm> witness;
    /// Max of margin Frobenius error and PSD violation of the reported point.
    double residual = 0.0;
    int iterations = 0;
    /// Closed-form verdict, present for unbiased qubit pairs.
    std::optional<bool> analytic_verdict;
    /// Which route decided: a witness construction, "alternating-projections",
    /// "farkas-certificate" or "analytic".
    std::string method;
};

namespace detail {

/// Bloch vector m if P+ = (1 + m.sigma)/2 within tol, i.e. an unbiased qubit effect.
inline std::optional<BlochVector> unbiased_bloch(const BinaryPovm &p, double tol) {
    if (p.dim() != 2) {
        return std::nullopt;
    }
    if (std::abs(p.plus().trace() - Complex(1.0)) > tol) {
        return std::nullopt;
    }
    const CMatrix d = 2.0 * p.plus() - pauli::I();
    return BlochVector{d(1, 0).real(), d(1, 0).imag(), 0.5 * (d(0, 0) - d(1, 1)).real()};
}

inline double dist3(const BlochVector &a, const BlochVector &b, double sign) {
    const double x = a.x + sign * b.x;
    const double y = a.y + sign * b.y;
    const double z = a.z + sign * b.z;
    return std::sqrt(x * x + y * y + z * z);
}

/// |m+n| + |m-n|
inline double unbiased_criterion(const BlochVector &m, const BlochVector &n) {
    return dist3(m, n, 1.0) + dist3(m, n, -1.0);
}

/// Max over the four margin equations of the Frobenius error.
inline double margin_error(const std::array<CMatrix, 4> &g, const BinaryPovm &p, const BinaryPovm &q) {
    double err = 0.0;
    for (int a : kOutcomes) {
        const CMatrix row = g[JointPovm::slot(a, kPlus)] + g[JointPovm::slot(a, kMinus)];
        err = std::max(err, frobenius_distance(row, p.effect(a)));
    }
    for (int b : kOutcomes) {
        const CMatrix col = g[JointPovm::slot(kPlus, b)] + g[JointPovm::slot(kMinus, b)];
        err = std::max(err, frobenius_distance(col, q.effect(b)));
    }
    return err;
}

inline double psd_violation(const std::array<CMatrix, 4> &g) {
    double v = 0.0;
    for (const auto &x : g) {
        v = std::max(v, -min_eigenvalue(x.hermitian_part()));
    }
    return v;
}

inline double joint_residual(const std::array<CMatrix, 4> &g, const BinaryPovm &p, const BinaryPovm &q) {
    return std::max(margin_error(g, p, q), psd_violation(g));
}

/// Accepts a candidate if it passes validation at the given tolerance.
inline std::optional<JointPovm> validated_witness(const std::array<CMatrix, 4> &g, const BinaryPovm &p,
                                                  const BinaryPovm &q, double tol, double *residual) {
    const double r = joint_residual(g, p, q);
    if (r > tol) {
        return std::nullopt;
    }
    try {
        JointPovm j(g, std::max(tol, kPsdTol));
        if (residual != nullptr) {
            *residual = r;
        }
        return j;
    } catch (const Error &) {
        return std::nullopt;
    }
}

/// Solves A x = b by Gaussian elimination with partial pivoting; nullopt if
/// a pivot falls below 1e-12 (singular map).
inline std::optional<std::vector<Complex>> solve_linear(std::vector<std::vector<Complex>> a, std::vector<Complex> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][col]) < 1e-12) {
            return std::nullopt;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a[r][col] / a[col][col];
            if (f == Complex(0.0)) {
                continue;
            }
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<Complex> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Complex s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

/// Retrieving effect R with Phi^*(R) = target, Phi the total channel of the
/// Lueders instrument of p. nullopt when Phi^* is singular or R is no effect.
inline std::optional<BinaryPovm> retrieving_povm(const Instrument &lueders, const CMatrix &target, double tol) {
    const std::size_t d = target.dim();
    const std::size_t n = d * d;
    std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            CMatrix e(d);
            e(i, j) = 1.0;
            const CMatrix img = total_channel_dual(lueders, e);
            for (std::size_t r = 0; r < n; ++r) {
                a[r][i * d + j] = img.data()[r];
            }
        }
    }
    std::vector<Complex> b(target.data().begin(), target.data().end());
    const auto x = solve_linear(std::move(a), std::move(b));
    if (!x) {
        return std::nullopt;
    }
    CMatrix r(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            r(i, j) = (*x)[i * d + j];
        }
    }
    try {
        return BinaryPovm::from_plus(r.hermitian_part(), tol);
    } catch (const Error &) {
        return std::nullopt;
    }
}

struct Candidate {
    std::string name;
    std::array<CMatrix, 4> effects;
};

inline std::vector<Candidate> witness_candidates(const BinaryPovm &p, const BinaryPovm &q, double tol,
                                                 const std::optional<std::pair<BlochVector, BlochVector>> &bloch) {
    std::vector<Candidate> out;
    const std::size_t d = p.dim();
    const CMatrix zero(d);

    // Identical POVMs: G_{a,a} = P_a.
    if (max_effect_distance(p, q) <= tol) {
        out.push_back({"identical", {p.plus(), zero, zero, p.minus()}});
    }

    // Sequential realisation: Lueders instrument of p, then a retrieving
    // measurement whose total-channel dual is q.
    try {
        const Instrument lp = lueders_instrument(p);
        if (auto r = retrieving_povm(lp, q.plus(), tol)) {
            std::array<CMatrix, 4> g;
            for (int a : kOutcomes) {
                for (int b : kOutcomes) {
                    g[JointPovm::slot(a, b)] = heisenberg(lp, a, r->effect(b)).hermitian_part();
                }
            }
            out.push_back({"sequential-retrieval", std::move(g)});
        }
    } catch (const Error &) {
    }

    // Commuting effects: G_{a,b} = P_a Q_b.
    const CMatrix comm = p.plus() * q.plus() - q.plus() * p.plus();
    if (comm.frobenius_norm() <= tol) {
        std::array<CMatrix, 4> g;
        for (int a : kOutcomes) {
            for (int b : kOutcomes) {
                g[JointPovm::slot(a, b)] = (p.effect(a) * q.effect(b)).hermitian_part();
            }
        }
        out.push_back({"commuting-product", std::move(g)});
    }

    // Unbiased qubits: G_{a,b} = [(1 + a b c) 1 + (a m + b n).sigma] / 4 with
    // c = (|m+n| - |m-n|) / 2.
    if (bloch) {
        const auto &[m, n] = *bloch;
        const double c = 0.5 * (dist3(m, n, 1.0) - dist3(m, n, -1.0));
        std::array<CMatrix, 4> g;
        for (int a : kOutcomes) {
            for (int b : kOutcomes) {
                const BlochVector v{a * m.x + b * n.x, a * m.y + b * n.y, a * m.z + b * n.z};
                g[JointPovm::slot(a, b)] =
                    0.25 * ((1.0 + a * b * c) * pauli::I() + v.x * pauli::X() + v.y * pauli::Y() + v.z * pauli::Z());
            }
        }
        out.push_back({"analytic-witness", std::move(g)});
    }
    return out;
}

/// Orthogonal projection onto {G : row sums = P, column sums = Q}.
inline void project_affine(std::array<CMatrix, 4> &g, const BinaryPovm &p, const BinaryPovm &q) {
    const std::size_t d = p.dim();
    std::array<CMatrix, 2> row_err{CMatrix(d), CMatrix(d)};
    std::array<CMatrix, 2> col_err{CMatrix(d), CMatrix(d)};
    CMatrix total_err = -CMatrix::identity(d);
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            const CMatrix &x = g[JointPovm::slot(a, b)];
            row_err[outcome_index(a)] += x;
            col_err[outcome_index(b)] += x;
            total_err += x;
        }
    }
    for (int a : kOutcomes) {
        row_err[outcome_index(a)] -= p.effect(a);
    }
    for (int b : kOutcomes) {
        col_err[outcome_index(b)] -= q.effect(b);
    }
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            CMatrix &x = g[JointPovm::slot(a, b)];
            x -= 0.5 * row_err[outcome_index(a)];
            x -= 0.5 * col_err[outcome_index(b)];
            x += 0.25 * total_err;
        }
    }
}

/// Farkas test on the direction w = Y - X. Its component orthogonal to the
/// affine set has the form F_a + H_b; if that is PSD (after the cheapest
/// identity shift) while sum tr[F_a P_a] + tr[H_b Q_b] < 0, no joint POVM exists.
inline bool farkas_certifies_infeasible(const std::array<CMatrix, 4> &w, const BinaryPovm &p, const BinaryPovm &q) {
    const std::size_t d = p.dim();
    std::array<CMatrix, 2> rows{CMatrix(d), CMatrix(d)};
    std::array<CMatrix, 2> cols{CMatrix(d), CMatrix(d)};
    CMatrix total(d);
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            const CMatrix &x = w[JointPovm::slot(a, b)];
            rows[outcome_index(a)] += x;
            cols[outcome_index(b)] += x;
            total += x;
        }
    }
    // F_a = rows_a / 2 - total / 4, H_b = cols_b / 2.
    std::array<CMatrix, 2> f{0.5 * rows[0] - 0.25 * total, 0.5 * rows[1] - 0.25 * total};
    std::array<CMatrix, 2> h{0.5 * cols[0], 0.5 * cols[1]};
    double shift = 0.0;
    double scale = 0.0;
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            const CMatrix wab = (f[outcome_index(a)] + h[outcome_index(b)]).hermitian_part();
            shift = std::max(shift, -min_eigenvalue(wab));
            scale = std::max(scale, wab.frobenius_norm());
        }
    }
    if (scale == 0.0) {
        return false;
    }
    double value = shift * static_cast<double>(d);
    for (int a : kOutcomes) {
        value += trace_product(f[outcome_index(a)], p.effect(a));
    }
    for (int b : kOutcomes) {
        value += trace_product(h[outcome_index(b)], q.effect(b));
    }
    return value < -1e-12 * scale;
}

} // namespace detail

inline constexpr int kJmIterationCap = 100000;

/// Alternating projections between the PSD cone (per effect) and the affine
/// margin constraints. Returns a report only when a certificate was found
/// (a witness within tol, or a Farkas separator); otherwise throws
/// NoConvergence carrying the last residual.
inline JmReport jm_feasible_numeric(const BinaryPovm &p, const BinaryPovm &q, double tol,
                                    int max_iterations = kJmIterationCap) {
    p.plus().require_same_dim(q.plus());
    const std::size_t d = p.dim();
    std::array<CMatrix, 4> x{CMatrix(d), CMatrix(d), CMatrix(d), CMatrix(d)};
    detail::project_affine(x, p, q);

    double residual = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        std::array<CMatrix, 4> y;
        double violation = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto e = herm_eig(x[k].hermitian_part());
            violation = std::max(violation, -e.eigenvalues.front());
            y[k] = e.reconstruct([](double v) { return std::max(v, 0.0); }).hermitian_part();
        }
        // x satisfies the margins exactly, so its residual is its PSD violation.
        if (violation <= tol) {
            if (auto w = detail::validated_witness(x, p, q, 10.0 * tol, &residual)) {
                return {true, std::move(w), residual, it, std::nullopt, "alternating-projections"};
            }
        }
        if (it % 8 == 0) {
            std::array<CMatrix, 4> dir;
            for (std::size_t k = 0; k < 4; ++k) {
                dir[k] = y[k] - x[k];
            }
            if (detail::farkas_certifies_infeasible(dir, p, q)) {
                return {false, std::nullopt, violation, it, std::nullopt, "farkas-certificate"};
            }
        }
        residual = violation;
        x = std::move(y);
        detail::project_affine(x, p, q);
    }
    throw Error(ErrorCode::NoConvergence, "alternating projections stopped at residual " + std::to_string(residual) +
                                              " after " + std::to_string(max_iterations) + " iterations");
}

/// Decides whether (p, q) admit a joint POVM.
///
/// Order: closed-form criterion for unbiased qubit pairs; explicit witness
/// constructions validated at 10 tol; alternating projections with
/// certificates. When the numeric route cannot decide, the closed form is
/// used if available and NoConvergence is thrown otherwise.
inline JmReport jm_feasible(const BinaryPovm &p, const BinaryPovm &q, double tol = 1e-8) {
    if (p.dim() != q.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "POVMs act on different spaces");
    }
    if (!(tol >= 1e-8)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance must be at least 1e-8");
    }

    std::optional<bool> analytic;
    std::optional<std::pair<BlochVector, BlochVector>> bloch;
    const auto mp = detail::unbiased_bloch(p, kPsdTol);
    const auto mq = detail::unbiased_bloch(q, kPsdTol);
    if (mp && mq) {
        bloch = std::make_pair(*mp, *mq);
        analytic = detail::unbiased_criterion(*mp, *mq) <= 2.0 + 1e-12;
    }

    if (analytic.value_or(true)) {
        for (auto &cand : detail::witness_candidates(p, q, 10.0 * tol, bloch)) {
            double residual = 0.0;
            if (auto w = detail::validated_witness(cand.effects, p, q, 10.0 * tol, &residual)) {
                return {true, std::move(w), residual, 0, analytic, cand.name};
            }
        }
    }

    try {
        JmReport r = jm_feasible_numeric(p, q, tol);
        r.analytic_verdict = analytic;
        if (analytic && *analytic != r.feasible) {
            // The closed form is exact; a disagreeing numeric verdict means
            // the pair sits within tolerance of the boundary.
            r.feasible = *analytic;
            r.witness.reset();
            r.method = "analytic";
        }
        return r;
    } catch (const Error &e) {
        if (e.code() != ErrorCode::NoConvergence || !analytic) {
            throw;
        }
        return {*analytic, std::nullopt, std::nan(""), kJmIterationCap, analytic, "analytic"};
    }
}

} // namespace roilab
