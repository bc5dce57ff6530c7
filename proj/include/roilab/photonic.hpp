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
 * Jones-calculus model of the displaced-beam interferometer that realises
 * the noisy Z instrument. Amplitudes live on path (x) polarisation with
 * index 2*path + pol, pol 0 = H and pol 1 = V.
 *
 *   in   alpha|H> + beta|V>
 *   2    beam displacer: H -> path 0, V -> path 1
 *   3    flip V -> H on path 1
 *   4    HWP(gamma/2) on path 0, HWP(-gamma/2) on path 1 (labelled a phase shift
 *        on the bench; the element is a polarisation rotation)
 *   5    HWP(phi) on both paths
 *   6    PBS, transmitted H only (the single non-unitary element)
 *   7    flip H -> V on path 0
 *   8    beam displacer merge: |0V> -> V, |1H> -> H
 *   9    swap H <-> V
 *
 * phi = +pi/8 gives outcome +, phi = -pi/8 stands in for the reflected port.
 * HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "roilab/linalg.hpp"
#include "roilab/measurements.hpp"
#include "roilab/qubit.hpp"

namespace roilab {

struct PathPolState {
    std::array<Complex, 4> amp{};

    static constexpr std::size_t index(int path, int pol) { return static_cast<std::size_t>(2 * path + pol); }
    [[nodiscard]] Complex at(int path, int pol) const { return amp[index(path, pol)]; }
    [[nodiscard]] double norm_sq() const {
        double s = 0.0;
        for (const auto &c : amp) {
            s += std::norm(c);
        }
        return s;
    }
};

using StageState = std::variant<Ket, PathPolState>;

struct Stage {
    std::string label;
    StageState state;

    [[nodiscard]] double norm_sq() const {
        return std::visit([](const auto &s) { return s.norm_sq(); }, state);
    }
};

struct PipelineTrace {
    std::vector<Stage> stages;
    double gamma = 0.0;
    double phi = 0.0;

    /// Psi_9, always a bare polarisation state.
    [[nodiscard]] const Ket &output() const { return std::get<Ket>(stages.back().state); }
};

enum class Branch { Plus, Minus };

inline constexpr double kBranchAngle = std::numbers::pi / 8.0;
inline constexpr double kBranchTol = 1e-12;

inline double branch_angle(Branch b) { return b == Branch::Plus ? kBranchAngle : -kBranchAngle; }
inline int branch_outcome(Branch b) { return b == Branch::Plus ? kPlus : kMinus; }
inline Branch branch_for_outcome(int a) { return outcome_index(a) == 0 ? Branch::Plus : Branch::Minus; }

inline Branch branch_from_angle(double phi) {
    if (std::abs(phi - kBranchAngle) <= kBranchTol) return Branch::Plus;
    if (std::abs(phi + kBranchAngle) <= kBranchTol) return Branch::Minus;
    throw Error(ErrorCode::InvalidBranch, "wave-plate angle must be +-pi/8, got " + std::to_string(phi));
}

namespace optics {

inline CMatrix hwp(double theta) {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    return CMatrix{{c, s}, {s, -c}};
}

/// 2x2 polarisation element on one path, identity on the other.
inline CMatrix on_path(int path, const CMatrix &u) {
    CMatrix out = CMatrix::identity(4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out(PathPolState::index(path, i), PathPolState::index(path, j)) = u(i, j);
        }
    }
    return out;
}

/// Independent 2x2 elements on path 0 and path 1.
inline CMatrix per_path(const CMatrix &u0, const CMatrix &u1) { return on_path(0, u0) * on_path(1, u1); }

inline CMatrix pbs_transmit() {
    const std::array<double, 4> keep{1.0, 0.0, 1.0, 0.0};
    return CMatrix::diagonal(keep);
}

inline PathPolState act(const CMatrix &m, const PathPolState &s) {
    const auto v = m.apply(s.amp);
    PathPolState out;
    std::copy(v.begin(), v.end(), out.amp.begin());
    return out;
}

inline PathPolState displace(const Ket &k) {
    PathPolState s;
    s.amp[PathPolState::index(0, 0)] = k.alpha;
    s.amp[PathPolState::index(1, 1)] = k.beta;
    return s;
}

/// Only |0V> and |1H> reach the common output port.
inline Ket merge(const PathPolState &s) { return {s.at(1, 0), s.at(0, 1)}; }

inline Ket act(const CMatrix &m, const Ket &k) {
    const auto v = m.apply(k.vec());
    return {v[0], v[1]};
}

} // namespace optics

inline void require_normalised(const Ket &k) {
    if (std::abs(k.norm_sq() - 1.0) > 1e-10) {
        throw Error(ErrorCode::NotState, "input polarisation state has squared norm " + std::to_string(k.norm_sq()));
    }
}

/// Element-by-element propagation.
inline PipelineTrace propagate(const Ket &in, double gamma, Branch branch) {
    require_normalised(in);
    gamma = checked_gamma(gamma);
    const double phi = branch_angle(branch);
    using namespace optics;

    PipelineTrace t{{}, gamma, phi};
    t.stages.push_back({"in", in});
    const PathPolState s2 = displace(in);
    t.stages.push_back({"2", s2});
    const PathPolState s3 = act(on_path(1, pauli::X()), s2);
    t.stages.push_back({"3", s3});
    const PathPolState s4 = act(per_path(hwp(gamma / 2.0), hwp(-gamma / 2.0)), s3);
    t.stages.push_back({"4", s4});
    const PathPolState s5 = act(per_path(hwp(phi), hwp(phi)), s4);
    t.stages.push_back({"5", s5});
    const PathPolState s6 = act(pbs_transmit(), s5);
    t.stages.push_back({"6", s6});
    const PathPolState s7 = act(on_path(0, pauli::X()), s6);
    t.stages.push_back({"7", s7});
    const Ket s8 = merge(s7);
    t.stages.push_back({"8", s8});
    t.stages.push_back({"9", act(pauli::X(), s8)});
    return t;
}

inline PipelineTrace propagate(const Ket &in, double gamma, double phi) {
    return propagate(in, gamma, branch_from_angle(phi));
}

/// The same stages written out from their closed-form amplitudes.
inline PipelineTrace boxed_stages(const Ket &in, double gamma, Branch branch) {
    require_normalised(in);
    gamma = checked_gamma(gamma);
    const double phi = branch_angle(branch);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double c2 = std::cos(2.0 * phi), s2 = std::sin(2.0 * phi);
    const Complex a = in.alpha, b = in.beta;
    const auto ix = PathPolState::index;

    PipelineTrace t{{}, gamma, phi};
    t.stages.push_back({"in", in});

    PathPolState p;
    p.amp[ix(0, 0)] = a;
    p.amp[ix(1, 1)] = b;
    t.stages.push_back({"2", p});

    p = {};
    p.amp[ix(0, 0)] = a;
    p.amp[ix(1, 0)] = b;
    t.stages.push_back({"3", p});

    p = {};
    p.amp[ix(0, 0)] = a * cg;
    p.amp[ix(0, 1)] = a * sg;
    p.amp[ix(1, 0)] = b * cg;
    p.amp[ix(1, 1)] = -b * sg;
    t.stages.push_back({"4", p});

    p = {};
    p.amp[ix(0, 0)] = a * (cg * c2 + sg * s2);
    p.amp[ix(0, 1)] = a * (cg * s2 - sg * c2);
    p.amp[ix(1, 0)] = b * (cg * c2 - sg * s2);
    p.amp[ix(1, 1)] = b * (cg * s2 + sg * c2);
    t.stages.push_back({"5", p});

    const Complex up = a * (cg * c2 + sg * s2);
    const Complex down = b * (cg * c2 - sg * s2);
    p = {};
    p.amp[ix(0, 0)] = up;
    p.amp[ix(1, 0)] = down;
    t.stages.push_back({"6", p});

    p = {};
    p.amp[ix(0, 1)] = up;
    p.amp[ix(1, 0)] = down;
    t.stages.push_back({"7", p});

    t.stages.push_back({"8", Ket{down, up}});
    t.stages.push_back({"9", Ket{up, down}});
    return t;
}

/// Psi_in -> Psi_9 as one 2x2 operator.
inline CMatrix composed_operator(double gamma, Branch branch) {
    const Ket h = propagate(states::H(), gamma, branch).output();
    const Ket v = propagate(states::V(), gamma, branch).output();
    return CMatrix{{h.alpha, v.alpha}, {h.beta, v.beta}};
}

/// max over branches of || |Psi9><Psi9| - K rho K ||_F with K the Lueders Kraus operator.
inline double pipeline_vs_lueders(const Ket &in, double gamma) {
    const auto instr = lueders_instrument(noisy_z(gamma));
    const CMatrix rho = in.density();
    double worst = 0.0;
    for (Branch br : {Branch::Plus, Branch::Minus}) {
        const CMatrix out = propagate(in, gamma, br).output().density();
        worst = std::max(worst, frobenius_distance(out, apply(instr, branch_outcome(br), rho)));
    }
    return worst;
}

/// <phi| I_a(rho_in) |phi> read off the pipeline output.
inline double tomography_prob(const Ket &in, double gamma, int outcome, const Ket &projector) {
    if (std::abs(projector.norm_sq() - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidArgument, "projector ket is not normalised");
    }
    const Ket out = propagate(in, gamma, branch_for_outcome(outcome)).output();
    const Complex amp = std::conj(projector.alpha) * out.alpha + std::conj(projector.beta) * out.beta;
    return std::norm(amp);
}

/// (1/2)[|a|^2|c|^2 + |b|^2|d|^2 + 2 Re(a conj(b) conj(c) d) cos 2g +- (|a|^2|c|^2 - |b|^2|d|^2) sin 2g]
/// with Psi_in = a|H> + b|V> and projector c|H> + d|V>.
inline double tomography_closed_form(const Ket &in, double gamma, int outcome, const Ket &projector) {
    gamma = checked_gamma(gamma);
    const double sign = outcome_index(outcome) == 0 ? 1.0 : -1.0;
    const Complex a = in.alpha, b = in.beta, c = projector.alpha, d = projector.beta;
    const double ac = std::norm(a) * std::norm(c);
    const double bd = std::norm(b) * std::norm(d);
    const double cross = 2.0 * (a * std::conj(b) * std::conj(c) * d).real();
    return 0.5 * (ac + bd + cross * std::cos(2.0 * gamma) + sign * (ac - bd) * std::sin(2.0 * gamma));
}

/// tr[X^eta_+ rho_in] assembled from gamma = 0 data: eta times the sharp X
/// margin plus (1 - eta) times the trivial-POVM value summed from the Y rows.
inline double mixed_noisy_x_prob(const Ket &in, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "visibility must lie in [0, 1]");
    }
    const Ket xp = states::plus();
    const double sharp = tomography_prob(in, 0.0, kPlus, xp) + tomography_prob(in, 0.0, kMinus, xp);
    const double trivial = tomography_prob(in, 0.0, kPlus, states::y_plus()) +
                           tomography_prob(in, 0.0, kPlus, states::y_minus());
    return eta * sharp + (1.0 - eta) * trivial;
}

/// Six projector rows by (state, outcome) columns, outcome + before -.
struct TomographyTable {
    double gamma = 0.0;
    std::vector<std::string> projectors;
    std::vector<std::string> states;
    /// values[row][2 * state + (outcome == + ? 0 : 1)]
    std::vector<std::vector<double>> values;

    [[nodiscard]] double at(std::size_t row, std::size_t state, int outcome) const {
        return values.at(row).at(2 * state + outcome_index(outcome));
    }
};

inline TomographyTable tomography_table(double gamma, const std::vector<NamedState> &inputs = states::canonical()) {
    TomographyTable t;
    t.gamma = checked_gamma(gamma);
    for (const auto &s : inputs) {
        t.states.push_back(s.name);
    }
    for (const auto &p : tomography_projectors()) {
        t.projectors.push_back(p.name);
        std::vector<double> row;
        for (const auto &s : inputs) {
            for (int a : kOutcomes) {
                row.push_back(tomography_prob(s.ket, t.gamma, a, p.ket));
            }
        }
        t.values.push_back(std::move(row));
    }
    return t;
}

} // namespace roilab
