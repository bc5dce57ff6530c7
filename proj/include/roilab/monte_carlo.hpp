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
 * Shot-noise simulation of the sequential tomography experiment.
 *
 * For every input state the first settings are "0" and one noisy Z setting
 * per angle (label "gamma=<angle>"); the second settings are the bases X, Y
 * and Z. Each (first setting, basis) block of four cells is a multinomial
 * draw of N photons, realised as a chain of conditional binomials so every
 * cell is marginally Binomial(N, p). Each conditional draw runs on its own
 * counter-based substream keyed by (seed, state, angle, outcome, projector).
 *
 * The "0" block samples b from p(b|y) and books half of each count against
 * a = +1 and half against a = -1.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "roilab/datasets.hpp"
#include "roilab/hv_models.hpp"
#include "roilab/photonic.hpp"
#include "roilab/qubit.hpp"
#include "roilab/rng.hpp"

namespace roilab {

/// Standard error 0.02 at p = 1/2.
inline constexpr std::uint64_t kDefaultShots = 625;

inline const std::array<std::string, 3> kBases{"X", "Y", "Z"};

inline std::string projector_name(const std::string &basis, int b) { return basis + (b == kPlus ? "+" : "-"); }

/// "0", "pi/8", "pi/4", "pi/16" and "3pi/16" exactly; 12 significant digits otherwise.
inline std::string format_gamma(double g) {
    constexpr double pi = std::numbers::pi;
    const std::array<std::pair<double, const char *>, 5> named{
        {{0.0, "0"}, {pi / 16.0, "pi/16"}, {pi / 8.0, "pi/8"}, {3.0 * pi / 16.0, "3pi/16"}, {pi / 4.0, "pi/4"}}};
    for (const auto &[v, name] : named) {
        if (std::abs(g - v) <= 1e-12) return name;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", g);
    return buf;
}

/// Radians or symbolic "[k]pi[/n]" (also "k*pi/n").
inline double parse_gamma(std::string_view text) {
    auto s = detail::trim(text);
    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string_view::npos) {
        try {
            return parse_number(s);
        } catch (const Error &) {
            throw Error(ErrorCode::ConfigError, "cannot read angle '" + std::string(text) + "'");
        }
    }
    auto coeff_text = detail::trim(s.substr(0, pi_pos));
    if (!coeff_text.empty() && coeff_text.back() == '*') coeff_text.remove_suffix(1);
    auto rest = detail::trim(s.substr(pi_pos + 2));
    double coeff = 1.0;
    double denom = 1.0;
    if (!coeff_text.empty()) {
        const auto c = detail::parse_double(coeff_text);
        if (!c) throw Error(ErrorCode::ConfigError, "cannot read angle '" + std::string(text) + "'");
        coeff = *c;
    }
    if (!rest.empty()) {
        if (rest.front() != '/') throw Error(ErrorCode::ConfigError, "cannot read angle '" + std::string(text) + "'");
        const auto d = detail::parse_double(rest.substr(1));
        if (!d || *d == 0.0) throw Error(ErrorCode::ConfigError, "cannot read angle '" + std::string(text) + "'");
        denom = *d;
    }
    return coeff * std::numbers::pi / denom;
}

inline std::string gamma_setting(double g) { return "gamma=" + format_gamma(g); }

/// p(first outcome a, projector | state, gamma) from some source of numbers.
using TomographySource = std::function<double(const NamedState &, double gamma, int a, const Projector &)>;

inline TomographySource theory_source() {
    return [](const NamedState &s, double gamma, int a, const Projector &p) {
        return tomography_prob(s.ket, gamma, a, p.ket);
    };
}

struct MonteCarloConfig {
    std::vector<NamedState> states = states::canonical();
    std::vector<double> gammas{0.0, std::numbers::pi / 8.0, std::numbers::pi / 4.0};
    std::uint64_t shots = kDefaultShots;
    std::uint64_t seed = 0;
};

using StatsKey = std::tuple<std::string, std::string, int, int>;

struct MonteCarloRun {
    NamedState state;
    std::vector<double> gammas;
    SequentialStats stats;
    /// sqrt(p(1 - p) / N) at the exact probability, keyed (x, y, a, b).
    std::map<StatsKey, double> standard_error;
};

inline std::uint64_t state_id(const NamedState &s) {
    std::uint64_t h = hash_label(s.name);
    for (double v : {s.ket.alpha.real(), s.ket.alpha.imag(), s.ket.beta.real(), s.ket.beta.imag()}) {
        h = mix64(h ^ angle_bits(v));
    }
    return h;
}

inline MonteCarloRun simulate_state(const NamedState &s, std::vector<double> gammas, std::uint64_t shots,
                                    std::uint64_t seed) {
    if (shots == 0) {
        throw Error(ErrorCode::ConfigError, "shot count must be at least 1");
    }
    require_normalised(s.ket);
    const double n = static_cast<double>(shots);
    const std::uint64_t sid = state_id(s);
    std::vector<std::string> firsts{kNoMeasurement};
    std::vector<StatsRecord> records;
    std::map<StatsKey, double> se;
    auto book = [&](int a, int b, const std::string &x, const std::string &y, double p_hat, double p_exact) {
        records.push_back({a, b, x, y, p_hat});
        se[{x, y, a, b}] = std::sqrt(std::max(p_exact * (1.0 - p_exact), 0.0) / n);
    };

    for (const auto &y : kBases) {
        const Ket phi = projector_by_name(projector_name(y, kPlus));
        const Complex amp = std::conj(phi.alpha) * s.ket.alpha + std::conj(phi.beta) * s.ket.beta;
        const double p_plus = std::clamp(std::norm(amp), 0.0, 1.0);
        auto rng = CounterRng::substream(seed, {sid, hash_label(kNoMeasurement), 0, hash_label(projector_name(y, kPlus))});
        const auto k = draw_binomial(shots, p_plus, rng);
        for (int a : kOutcomes) {
            book(a, kPlus, kNoMeasurement, y, 0.5 * static_cast<double>(k) / n, 0.5 * p_plus);
            book(a, kMinus, kNoMeasurement, y, 0.5 * static_cast<double>(shots - k) / n, 0.5 * (1.0 - p_plus));
        }
    }

    for (double g : gammas) {
        const std::string x = gamma_setting(g);
        firsts.push_back(x);
        for (const auto &y : kBases) {
            std::array<double, 4> p{};
            for (int a : kOutcomes) {
                for (int b : kOutcomes) {
                    p[JointPovm::slot(a, b)] =
                        std::clamp(tomography_prob(s.ket, g, a, projector_by_name(projector_name(y, b))), 0.0, 1.0);
                }
            }
            std::uint64_t remaining = shots;
            double mass = 1.0;
            for (int a : kOutcomes) {
                for (int b : kOutcomes) {
                    const std::size_t slot = JointPovm::slot(a, b);
                    std::uint64_t k = remaining;
                    if (slot < 3) {
                        const double cond = mass > 0.0 ? std::clamp(p[slot] / mass, 0.0, 1.0) : 0.0;
                        auto rng = CounterRng::substream(
                            seed, {sid, angle_bits(g), static_cast<std::uint64_t>(a + 2),
                                   hash_label(projector_name(y, b))});
                        k = draw_binomial(remaining, cond, rng);
                    }
                    remaining -= k;
                    mass -= p[slot];
                    book(a, b, x, y, static_cast<double>(k) / n, p[slot]);
                }
            }
        }
    }
    return {s, std::move(gammas), SequentialStats(firsts, {kBases.begin(), kBases.end()}, records), std::move(se)};
}

inline std::vector<double> unique_gammas(const std::vector<double> &gammas) {
    std::vector<double> out;
    for (double g : gammas) {
        g = checked_gamma(g);
        if (std::none_of(out.begin(), out.end(), [&](double h) { return format_gamma(h) == format_gamma(g); })) {
            out.push_back(g);
        }
    }
    return out;
}

inline std::vector<MonteCarloRun> monte_carlo(const MonteCarloConfig &cfg) {
    if (cfg.shots == 0) {
        throw Error(ErrorCode::ConfigError, "shot count must be at least 1");
    }
    if (cfg.states.empty()) {
        throw Error(ErrorCode::ConfigError, "no input states configured");
    }
    const auto gammas = unique_gammas(cfg.gammas);
    std::vector<MonteCarloRun> runs;
    for (const auto &s : cfg.states) {
        runs.push_back(simulate_state(s, gammas, cfg.shots, cfg.seed));
    }
    return runs;
}

/// Empirical tomography cells read back from simulated runs.
inline TomographySource monte_carlo_source(std::vector<MonteCarloRun> runs) {
    return [runs = std::move(runs)](const NamedState &s, double gamma, int a, const Projector &p) {
        for (const auto &r : runs) {
            if (r.state.name == s.name) {
                const std::string basis = p.name.substr(0, 1);
                const int b = p.name.back() == '+' ? kPlus : kMinus;
                return r.stats.p(a, b, gamma_setting(gamma), basis);
            }
        }
        throw Error(ErrorCode::ConfigError, "no simulated run for state '" + s.name + "'");
    };
}

/// Measured cells from the three reference tomography tables; NaN where the
/// tables have no entry.
inline TomographySource reference_source(std::vector<Dataset> tables) {
    return [tables = std::move(tables)](const NamedState &s, double gamma, int a, const Projector &p) {
        std::string id = gamma == 0.0 ? "gamma0" : "gamma_" + format_gamma(gamma);
        id.erase(std::remove(id.begin(), id.end(), '/'), id.end());
        for (const auto &t : tables) {
            if (t.id == id) {
                if (const auto *row = t.find(p.name + "|" + s.name + "|" + (a == kPlus ? "+" : "-"))) {
                    return row->experimental;
                }
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
}

} // namespace roilab
