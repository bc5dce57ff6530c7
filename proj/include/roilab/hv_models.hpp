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
 * Two-step sequential statistics p(a, b | x, y) and the hidden-variable
 * conditions evaluated on them:
 *
 *  - no-signalling in time (NSIT): sum_a p(a,b|x,y) = p(b|y), the testable
 *    content of macrorealism with non-invasive measurability;
 *  - retrievability of information (RoI): sum_a p(a,b|0,y) =
 *    sum_a p(a,b|x,y_a), where the final setting y_a may depend on the
 *    first outcome.
 *
 * The setting label "0" means no first measurement. It is modelled by the
 * instrument rho -> rho/2 per outcome, so p(a,b|0,y) = p(b|y)/2.
 *
 * HvModel holds a finite hidden-variable model for one wired context
 * (x, y_a) and one reference context (0, y); classical_to_quantum and
 * quantum_to_classical convert between such models and diagonal-state /
 * joint-POVM realisations.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "roilab/linalg.hpp"
#include "roilab/measurements.hpp"

namespace roilab {

inline constexpr double kStatsTol = 1e-9;
inline const std::string kNoMeasurement = "0";

struct StatsRecord {
    int a = kPlus;
    int b = kPlus;
    std::string x;
    std::string y;
    double p = 0.0;
};

/// Immutable probability table over (a, b, x, y).
class SequentialStats {
  public:
    SequentialStats(std::vector<std::string> first_settings, std::vector<std::string> second_settings,
                    const std::vector<StatsRecord> &records, double tol = kStatsTol)
        : first_(std::move(first_settings)), second_(std::move(second_settings)) {
        const std::set<std::string> firsts(first_.begin(), first_.end());
        const std::set<std::string> seconds(second_.begin(), second_.end());
        if (!firsts.contains(kNoMeasurement)) {
            throw Error(ErrorCode::InvalidStats, "first settings must include the no-measurement label \"0\"");
        }
        for (const auto &r : records) {
            outcome_index(r.a);
            outcome_index(r.b);
            if (!firsts.contains(r.x) || !seconds.contains(r.y)) {
                throw Error(ErrorCode::InvalidStats, "record uses undeclared setting (" + r.x + ", " + r.y + ")");
            }
            if (!(r.p >= 0.0 && r.p <= 1.0)) {
                throw Error(ErrorCode::InvalidStats, "probability " + std::to_string(r.p) + " outside [0, 1]");
            }
            if (!table_.emplace(std::make_tuple(r.x, r.y, r.a, r.b), r.p).second) {
                throw Error(ErrorCode::InvalidStats, "duplicate record for (" + r.x + ", " + r.y + ")");
            }
            contexts_.emplace(r.x, r.y);
        }
        for (const auto &[x, y] : contexts_) {
            double total = 0.0;
            for (int a : kOutcomes) {
                for (int b : kOutcomes) {
                    const auto it = table_.find(std::make_tuple(x, y, a, b));
                    if (it == table_.end()) {
                        throw Error(ErrorCode::InvalidStats, "incomplete table for (" + x + ", " + y + ")");
                    }
                    total += it->second;
                }
            }
            if (std::abs(total - 1.0) > tol) {
                throw Error(ErrorCode::InvalidStats, "table for (" + x + ", " + y + ") sums to " + std::to_string(total));
            }
            if (x == kNoMeasurement) {
                for (int b : kOutcomes) {
                    if (std::abs(p(kPlus, b, x, y) - p(kMinus, b, x, y)) > tol) {
                        throw Error(ErrorCode::InvalidStats,
                                    "no-measurement rows must split p(b|y) evenly over a (setting " + y + ")");
                    }
                }
            }
        }
    }

    [[nodiscard]] const std::vector<std::string> &first_settings() const noexcept { return first_; }
    [[nodiscard]] const std::vector<std::string> &second_settings() const noexcept { return second_; }

    [[nodiscard]] bool has(std::string_view x, std::string_view y) const {
        return contexts_.contains({std::string(x), std::string(y)});
    }

    /// p(a, b | x, y)
    [[nodiscard]] double p(int a, int b, std::string_view x, std::string_view y) const {
        const auto it = table_.find(std::make_tuple(std::string(x), std::string(y), a, b));
        if (it == table_.end()) {
            throw Error(ErrorCode::MissingSetting,
                        "no entry for (" + std::string(x) + ", " + std::string(y) + ")");
        }
        return it->second;
    }

    /// sum_a p(a, b | x, y)
    [[nodiscard]] double second_marginal(int b, std::string_view x, std::string_view y) const {
        return p(kPlus, b, x, y) + p(kMinus, b, x, y);
    }

    [[nodiscard]] std::vector<StatsRecord> records() const {
        std::vector<StatsRecord> out;
        out.reserve(table_.size());
        for (const auto &[key, value] : table_) {
            const auto &[x, y, a, b] = key;
            out.push_back({a, b, x, y, value});
        }
        return out;
    }

  private:
    std::vector<std::string> first_;
    std::vector<std::string> second_;
    std::map<std::tuple<std::string, std::string, int, int>, double> table_;
    std::set<std::pair<std::string, std::string>> contexts_;
};

/// Final setting chosen from the first outcome; uniform() is the non-adaptive case.
struct AdaptiveSetting {
    std::string on_plus;
    std::string on_minus;

    static AdaptiveSetting uniform(std::string label) { return {label, label}; }
    [[nodiscard]] const std::string &for_outcome(int a) const { return outcome_index(a) == 0 ? on_plus : on_minus; }
};

/// Result of an NSIT or RoI check. signed_gap is lhs - rhs at worst_b.
struct ConditionReport {
    bool holds = true;
    double max_violation = 0.0;
    int worst_b = kPlus;
    double signed_gap = 0.0;
};

/// sum_a p(a,b|x,y) against p(b|y) = sum_a p(a,b|0,y).
inline ConditionReport check_nsit(const SequentialStats &stats, std::string_view x, std::string_view y,
                                  double tol = kStatsTol) {
    if (!stats.has(x, y) || !stats.has(kNoMeasurement, y)) {
        throw Error(ErrorCode::MissingSetting, "NSIT needs (" + std::string(x) + ", " + std::string(y) +
                                                   ") and (0, " + std::string(y) + ")");
    }
    ConditionReport r;
    for (int b : kOutcomes) {
        const double gap = stats.second_marginal(b, x, y) - stats.second_marginal(b, kNoMeasurement, y);
        if (b == kPlus || std::abs(gap) > r.max_violation) {
            r.max_violation = std::abs(gap);
            r.worst_b = b;
            r.signed_gap = gap;
        }
    }
    r.holds = r.max_violation <= tol;
    return r;
}

/// sum_a p(a,b|0,y) against sum_a p(a,b|x,y_a).
inline ConditionReport check_roi(const SequentialStats &stats, std::string_view x, const AdaptiveSetting &y_a,
                                 std::string_view y, double tol = kStatsTol) {
    if (!stats.has(kNoMeasurement, y)) {
        throw Error(ErrorCode::MissingSetting, "RoI needs (0, " + std::string(y) + ")");
    }
    for (int a : kOutcomes) {
        if (!stats.has(x, y_a.for_outcome(a))) {
            throw Error(ErrorCode::MissingSetting,
                        "RoI needs (" + std::string(x) + ", " + y_a.for_outcome(a) + ")");
        }
    }
    ConditionReport r;
    for (int b : kOutcomes) {
        double wired = 0.0;
        for (int a : kOutcomes) {
            wired += stats.p(a, b, x, y_a.for_outcome(a));
        }
        const double gap = stats.second_marginal(b, kNoMeasurement, y) - wired;
        if (b == kPlus || std::abs(gap) > r.max_violation) {
            r.max_violation = std::abs(gap);
            r.worst_b = b;
            r.signed_gap = gap;
        }
    }
    r.holds = r.max_violation <= tol;
    return r;
}

struct FirstSetting {
    std::string label;
    Instrument instrument;
};

struct SecondSetting {
    std::string label;
    BinaryPovm povm;
};

/// Quantum sequential statistics p(a,b|x,y) = tr[F^y_b I^x_a(rho)] for every
/// pair of settings, plus the "0" rows from the trivial instrument.
inline SequentialStats sequential_stats(const CMatrix &rho, const std::vector<FirstSetting> &firsts,
                                        const std::vector<SecondSetting> &seconds) {
    require_state(rho);
    std::vector<FirstSetting> all{{kNoMeasurement, trivial_instrument(rho.dim())}};
    for (const auto &f : firsts) {
        if (f.label == kNoMeasurement) {
            throw Error(ErrorCode::InvalidStats, "label \"0\" is reserved for no measurement");
        }
        f.instrument.require_binary();
        all.push_back(f);
    }
    std::vector<std::string> first_labels;
    std::vector<std::string> second_labels;
    std::vector<StatsRecord> records;
    for (const auto &s : seconds) {
        second_labels.push_back(s.label);
    }
    for (const auto &f : all) {
        first_labels.push_back(f.label);
        for (int a : kOutcomes) {
            const CMatrix post = apply(f.instrument, a, rho);
            for (const auto &s : seconds) {
                for (int b : kOutcomes) {
                    const double p = std::clamp(trace_product(s.povm.effect(b), post), 0.0, 1.0);
                    records.push_back({a, b, f.label, s.label, p});
                }
            }
        }
    }
    return {first_labels, second_labels, records};
}

// ---------------------------------------------------------------------------
// Hidden-variable models

/// Responses of one hidden state lambda: the joint distribution in the wired
/// context (x, y_a), slots (++, +-, -+, --), and p(b|0,y,lambda), slots (+, -).
struct HvResponse {
    std::array<double, 4> joint{};
    std::array<double, 2> reference{};
};

struct HvModel {
    std::vector<double> weights;
    std::vector<HvResponse> responses;

    void validate(double tol = kStatsTol) const {
        if (weights.empty() || weights.size() != responses.size()) {
            throw Error(ErrorCode::InvalidModel, "weights and responses must be non-empty and of equal length");
        }
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= -tol)) {
                throw Error(ErrorCode::InvalidModel, "negative weight");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > tol) {
            throw Error(ErrorCode::InvalidModel, "weights sum to " + std::to_string(total));
        }
        for (const auto &r : responses) {
            double js = 0.0;
            for (double v : r.joint) {
                if (!(v >= -tol && v <= 1.0 + tol)) {
                    throw Error(ErrorCode::InvalidModel, "joint response outside [0, 1]");
                }
                js += v;
            }
            const double rs = r.reference[0] + r.reference[1];
            if (!(r.reference[0] >= -tol && r.reference[1] >= -tol)) {
                throw Error(ErrorCode::InvalidModel, "reference response outside [0, 1]");
            }
            if (std::abs(js - 1.0) > tol || std::abs(rs - 1.0) > tol) {
                throw Error(ErrorCode::InvalidModel, "response is not a normalised distribution");
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

/// Statistics implied by the hidden-variable decomposition
/// p = sum_lambda p(lambda) p(.|lambda).
struct HvStatistics {
    std::array<double, 4> joint{};
    std::array<double, 2> reference{};
};

inline HvStatistics hv_statistics(const HvModel &model) {
    model.validate();
    HvStatistics s;
    for (std::size_t l = 0; l < model.size(); ++l) {
        for (std::size_t k = 0; k < 4; ++k) {
            s.joint[k] += model.weights[l] * model.responses[l].joint[k];
        }
        for (std::size_t k = 0; k < 2; ++k) {
            s.reference[k] += model.weights[l] * model.responses[l].reference[k];
        }
    }
    return s;
}

/// max_b | sum_l p(l) p(b|0,y,l) - sum_{a,l} p(l) p(a,b|x,y_a,l) |
inline double roi_chain_residual(const HvModel &model) {
    const auto s = hv_statistics(model);
    double worst = 0.0;
    for (int b : kOutcomes) {
        const std::size_t ib = outcome_index(b);
        const double wired = s.joint[JointPovm::slot(kPlus, b)] + s.joint[JointPovm::slot(kMinus, b)];
        worst = std::max(worst, std::abs(s.reference[ib] - wired));
    }
    return worst;
}

/// The model as a SequentialStats table with settings {"0", x} x {y, y_wired}.
/// The wired context is stored under a single label, so only non-adaptive
/// wirings round-trip through this view.
inline SequentialStats to_sequential_stats(const HvModel &model, const std::string &x, const std::string &y_wired,
                                           const std::string &y) {
    const auto s = hv_statistics(model);
    std::vector<StatsRecord> records;
    for (int a : kOutcomes) {
        for (int b : kOutcomes) {
            records.push_back({a, b, kNoMeasurement, y, 0.5 * s.reference[outcome_index(b)]});
            records.push_back({a, b, x, y_wired, s.joint[JointPovm::slot(a, b)]});
        }
    }
    std::vector<std::string> seconds{y};
    if (y_wired != y) {
        seconds.push_back(y_wired);
    }
    return {{kNoMeasurement, x}, seconds, records};
}

struct QuantumRealisation {
    CMatrix state;
    JointPovm joint;
    BinaryPovm reference;
};

/// Diagonal realisation of a classical model:
/// rho = sum p(l)|l><l|, G_{a,b} = sum p(a,b|l)|l><l|, B_b = sum p(b|0,l)|l><l|.
///
/// Requires the averaged retrievability premise and the margin identity
/// sum_a G_{a,b} = B_b, which for diagonal operators means it holds for
/// every lambda separately.
inline QuantumRealisation classical_to_quantum(const HvModel &model) {
    model.validate();
    if (roi_chain_residual(model) > kStatsTol) {
        throw Error(ErrorCode::InvalidModel, "retrievability premise fails by " +
                                                 std::to_string(roi_chain_residual(model)));
    }
    const std::size_t d = model.size();
    std::vector<double> rho_diag(d);
    std::array<std::vector<double>, 4> g_diag;
    std::array<std::vector<double>, 2> b_diag;
    for (auto &v : g_diag) v.resize(d);
    for (auto &v : b_diag) v.resize(d);
    for (std::size_t l = 0; l < d; ++l) {
        rho_diag[l] = std::max(model.weights[l], 0.0);
        for (std::size_t k = 0; k < 4; ++k) {
            g_diag[k][l] = std::clamp(model.responses[l].joint[k], 0.0, 1.0);
        }
        for (std::size_t k = 0; k < 2; ++k) {
            b_diag[k][l] = std::clamp(model.responses[l].reference[k], 0.0, 1.0);
        }
    }
    std::array<CMatrix, 4> g;
    for (std::size_t k = 0; k < 4; ++k) {
        g[k] = CMatrix::diagonal(g_diag[k]);
    }
    QuantumRealisation out{CMatrix::diagonal(rho_diag), JointPovm(g, kStatsTol),
                           BinaryPovm(CMatrix::diagonal(b_diag[0]), CMatrix::diagonal(b_diag[1]), kStatsTol)};
    for (int b : kOutcomes) {
        const CMatrix margin = out.joint.at(kPlus, b) + out.joint.at(kMinus, b);
        if (frobenius_distance(margin, out.reference.effect(b)) > 1e-10) {
            throw Error(ErrorCode::InvalidModel,
                        "sum_a G_{a,b} differs from B_b: the premise holds only on average, not per hidden state");
        }
    }
    return out;
}

/// Hidden states = eigenvectors of rho with weights = eigenvalues;
/// p(a,b|x,y_a,l) = <l| I_a^*(R_b) |l> and p(b|0,y,l) = <l| B_b |l>, where R is
/// the retrieving POVM and B_b = sum_a I_a^*(R_b) its effective second margin.
inline HvModel quantum_to_classical(const CMatrix &rho, const Instrument &instr, const BinaryPovm &retrieving) {
    require_state(rho);
    instr.require_binary();
    if (instr.dim() != rho.dim() || retrieving.dim() != rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "state, instrument and retrieving POVM must share a space");
    }
    const JointPovm g = sequential_joint(instr, retrieving);
    const BinaryPovm second = margins(g).second;
    const auto eig = herm_eig(rho);

    HvModel m;
    for (std::size_t l = 0; l < eig.eigenvalues.size(); ++l) {
        const auto &v = eig.eigenvectors[l];
        m.weights.push_back(std::max(eig.eigenvalues[l], 0.0));
        HvResponse r;
        for (int a : kOutcomes) {
            for (int b : kOutcomes) {
                r.joint[JointPovm::slot(a, b)] = std::max(expectation(g.at(a, b), v).real(), 0.0);
            }
        }
        for (int b : kOutcomes) {
            r.reference[outcome_index(b)] = std::max(expectation(second.effect(b), v).real(), 0.0);
        }
        m.responses.push_back(r);
    }
    return m;
}

} // namespace roilab
