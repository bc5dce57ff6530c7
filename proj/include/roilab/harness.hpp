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
 * Scenario runners and comparison against the reference datasets.
 *
 * Every reported number is derived from tomography cells
 * p(a, projector | state, gamma), whichever source supplies them (exact
 * theory, simulated shots, or the measured tables). The derivations follow
 * the way the measured tables were assembled:
 *
 *   p        = sum_a-block of X rows at outcome +    (first margin, A^gamma)
 *   q        = X+ summed over first outcomes         (second margin, B^gamma)
 *   q_sharp  = X+ summed over outcomes at gamma = 0
 *   p_sharp  = Z+ summed over outcomes at gamma = 0
 *   direct   = eta q_sharp + (1 - eta)(Y+ + Y-)|_{a=+, gamma=0}, eta = cos 2 gamma
 *   mu_ab    = cell(X_b, a)
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "roilab/blw.hpp"
#include "roilab/datasets.hpp"
#include "roilab/measurements.hpp"
#include "roilab/monte_carlo.hpp"
#include "roilab/photonic.hpp"
#include "roilab/qubit.hpp"
#include "roilab/serialize.hpp"

namespace roilab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
/// Largest |theory - measured| the reference tables are expected to show.
inline constexpr double kExperimentalSpread = 0.05;
/// Printed theory values are rounded to three decimals.
inline constexpr double kPrintedTheoryTol = 5e-4;

// ---------------------------------------------------------------------------
// Derived quantities

inline double cell(const TomographySource &src, const NamedState &s, const std::string &projector, double gamma,
                   int a) {
    return src(s, gamma, a, Projector{projector, projector_by_name(projector)});
}

/// Value of a named quantity for one state; gamma is the first-measurement angle.
inline double quantity(std::string_view name, const TomographySource &src, const NamedState &s, double gamma) {
    auto summed = [&](const std::string &proj, double g) { return cell(src, s, proj, g, kPlus) + cell(src, s, proj, g, kMinus); };
    auto p = [&] { return cell(src, s, "X+", gamma, kPlus) + cell(src, s, "X-", gamma, kPlus); };
    auto q = [&] { return summed("X+", gamma); };
    auto q_sharp = [&] { return summed("X+", 0.0); };
    auto p_sharp = [&] { return summed("Z+", 0.0); };
    auto mu = [&] {
        return std::array<double, 4>{cell(src, s, "X+", gamma, kPlus), cell(src, s, "X-", gamma, kPlus),
                                     cell(src, s, "X+", gamma, kMinus), cell(src, s, "X-", gamma, kMinus)};
    };

    if (name == "p") return p();
    if (name == "q" || name == "sequential") return q();
    if (name == "q_sharp") return q_sharp();
    if (name == "p_sharp") return p_sharp();
    if (name == "margin_Z+") return summed("Z+", gamma);
    if (name == "direct") {
        const double eta = std::cos(2.0 * gamma);
        return eta * q_sharp() + (1.0 - eta) * (cell(src, s, "Y+", 0.0, kPlus) + cell(src, s, "Y-", 0.0, kPlus));
    }
    if (name == "var_A") return 4.0 * p() * (1.0 - p());
    if (name == "var_B") return 4.0 * q() * (1.0 - q());
    if (name == "S") return 4.0 * p() * (1.0 - p()) + 4.0 * q() * (1.0 - q());
    if (name == "delta_sq") return 4.0 * std::abs(q_sharp() - q());
    if (name == "delta_sq_sum") return 4.0 * std::abs(q_sharp() - q()) + 4.0 * std::abs(p_sharp() - p());
    if (name == "mu++") return mu()[0];
    if (name == "mu+-") return mu()[1];
    if (name == "mu-+") return mu()[2];
    if (name == "mu--") return mu()[3];
    if (name == "corr") {
        const auto m = mu();
        if (std::any_of(m.begin(), m.end(), [](double v) { return std::isnan(v); })) return kNaN;
        return correlation(m);
    }
    throw Error(ErrorCode::ConfigError, "unknown quantity '" + std::string(name) + "'");
}

inline NamedState named_state(std::string_view name) { return {std::string(name), states::by_name(name)}; }

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
    std::string label;
    double theory = kNaN;
    double simulated = kNaN;
    double experimental = kNaN;
    /// |theory - experimental|
    double abs_dev_theory = kNaN;
    /// |simulated - experimental|
    double abs_dev_paper = kNaN;
};

struct ComparisonReport {
    std::string title;
    std::vector<ReportRow> rows;
    double worst_dev = 0.0;
    bool passed = true;

    void add(std::string label, double theory, double simulated = kNaN, double experimental = kNaN) {
        rows.push_back({std::move(label), theory, simulated, experimental, std::abs(theory - experimental),
                        std::abs(simulated - experimental)});
    }

    /// worst_dev = max finite |theory - experimental|; PASS iff it is within the spread.
    void finalize() {
        worst_dev = 0.0;
        for (const auto &r : rows) {
            if (std::isfinite(r.abs_dev_theory)) worst_dev = std::max(worst_dev, r.abs_dev_theory);
        }
        passed = worst_dev <= kExperimentalSpread + 1e-12;
    }

    [[nodiscard]] const ReportRow *find(std::string_view label) const {
        for (const auto &r : rows) {
            if (r.label == label) return &r;
        }
        return nullptr;
    }
};

inline std::string format_number(double v, int digits) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string format_fixed3(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
    return buf;
}

inline void write_report_csv(std::ostream &out, const ComparisonReport &rep) {
    out << "label,theory,theory_3dp,simulated,experimental,abs_dev_theory,abs_dev_paper\n";
    for (const auto &r : rep.rows) {
        out << r.label << ',' << format_number(r.theory, 17) << ',' << format_fixed3(r.theory) << ','
            << format_number(r.simulated, 12) << ',' << format_number(r.experimental, 12) << ','
            << format_number(r.abs_dev_theory, 12) << ',' << format_number(r.abs_dev_paper, 12) << '\n';
    }
}

inline Json to_json(const ComparisonReport &rep) {
    auto num = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(v); };
    Json rows = Json::array();
    for (const auto &r : rep.rows) {
        rows.push_back({{"label", r.label},
                        {"theory", num(r.theory)},
                        {"simulated", num(r.simulated)},
                        {"experimental", num(r.experimental)},
                        {"abs_dev_theory", num(r.abs_dev_theory)},
                        {"abs_dev_paper", num(r.abs_dev_paper)}});
    }
    return {{"title", rep.title}, {"passed", rep.passed}, {"worst_dev", rep.worst_dev}, {"rows", std::move(rows)}};
}

inline void write_tomography_csv(std::ostream &out, const TomographyTable &t) {
    out << "projector";
    for (const auto &s : t.states) {
        out << ',' << s << "|+," << s << "|-";
    }
    out << '\n';
    for (std::size_t i = 0; i < t.projectors.size(); ++i) {
        out << t.projectors[i];
        for (double v : t.values[i]) {
            out << ',' << format_number(v, 17);
        }
        out << '\n';
    }
}

/// Write via a sibling temporary and rename into place.
inline void write_atomically(const std::filesystem::path &path, const std::string &content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into place at " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Reference datasets

/// Angle of the first measurement behind a dataset.
inline double dataset_gamma(std::string_view id) {
    if (id == "gamma0") return 0.0;
    if (id == "gamma_pi4") return std::numbers::pi / 4.0;
    if (id == "gamma_pi8") return std::numbers::pi / 8.0;
    if (is_dataset_id(id)) return std::numbers::pi / 8.0;
    throw Error(ErrorCode::UnknownDataset, "unknown dataset '" + std::string(id) + "'");
}

inline bool is_tomography_dataset(std::string_view id) {
    return id == "gamma0" || id == "gamma_pi8" || id == "gamma_pi4";
}

/// Evaluate one dataset label ("X+|H|+" or "p|H") from a source.
inline double evaluate_label(std::string_view dataset, std::string_view label, const TomographySource &src) {
    const double gamma = dataset_gamma(dataset);
    const auto parts = detail::split(label, '|');
    if (is_tomography_dataset(dataset)) {
        if (parts.size() != 3 || (parts[2] != "+" && parts[2] != "-")) {
            throw Error(ErrorCode::ParseError, "bad tomography label '" + std::string(label) + "'");
        }
        return cell(src, named_state(parts[1]), std::string(parts[0]), gamma, parts[2] == "+" ? kPlus : kMinus);
    }
    if (parts.size() != 2) {
        throw Error(ErrorCode::ParseError, "bad quantity label '" + std::string(label) + "'");
    }
    return quantity(parts[0], src, named_state(parts[1]), gamma);
}

struct RunRow {
    std::string label;
    double theory = kNaN;
    double simulated = kNaN;
};

struct RunOutput {
    std::string dataset;
    std::vector<RunRow> rows;
};

/// Theory (and optionally simulated) values for every row of a dataset.
inline RunOutput dataset_run(const Dataset &ds, const std::optional<TomographySource> &simulated = {}) {
    RunOutput out{ds.id, {}};
    const auto theory = theory_source();
    for (const auto &row : ds.rows) {
        out.rows.push_back({row.label, evaluate_label(ds.id, row.label, theory),
                            simulated ? evaluate_label(ds.id, row.label, *simulated) : kNaN});
    }
    return out;
}

inline ComparisonReport compare_to_reference(const RunOutput &run, const Dataset &ds) {
    if (run.rows.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty run output for dataset '" + ds.id + "'");
    }
    if (run.dataset != ds.id) {
        throw Error(ErrorCode::InvalidArgument, "run belongs to '" + run.dataset + "', not '" + ds.id + "'");
    }
    ComparisonReport rep;
    rep.title = ds.id;
    for (const auto &ref : ds.rows) {
        const auto it = std::find_if(run.rows.begin(), run.rows.end(), [&](const RunRow &r) { return r.label == ref.label; });
        if (it == run.rows.end()) {
            throw Error(ErrorCode::ConfigError, ds.id + ": run has no value for '" + ref.label + "'");
        }
        if (ref.theory && !(std::abs(*ref.theory - it->theory) <= kPrintedTheoryTol)) {
            throw Error(ErrorCode::TheoryMismatch, ds.id + ": '" + ref.label + "' computes " +
                                                       format_number(it->theory, 6) + ", table prints " +
                                                       format_number(*ref.theory, 6));
        }
        rep.add(ref.label, it->theory, it->simulated, ref.experimental);
    }
    for (const auto &r : run.rows) {
        if (!ds.find(r.label)) {
            throw Error(ErrorCode::ConfigError, ds.id + ": unexpected label '" + r.label + "'");
        }
    }
    rep.finalize();
    return rep;
}

inline std::vector<Dataset> load_tomography_tables(const std::filesystem::path &dir) {
    return {load_dataset(dir, "gamma0"), load_dataset(dir, "gamma_pi8"), load_dataset(dir, "gamma_pi4")};
}

/// Simulated source covering the canonical states at the three table angles.
inline TomographySource reference_monte_carlo(std::uint64_t shots, std::uint64_t seed) {
    return monte_carlo_source(monte_carlo({states::canonical(),
                                           {0.0, std::numbers::pi / 8.0, std::numbers::pi / 4.0}, shots, seed}));
}

// ---------------------------------------------------------------------------
// Scenarios

enum class ScenarioKind { Macrorealistic, Retrieving, NoRetrieving, Table, BlwScan, JmCheck, Corr };
enum class OutputFormat { Csv, Json };

inline ScenarioKind parse_scenario(std::string_view s) {
    if (s == "macrorealistic") return ScenarioKind::Macrorealistic;
    if (s == "retrieving") return ScenarioKind::Retrieving;
    if (s == "no_retrieving" || s == "no-retrieving") return ScenarioKind::NoRetrieving;
    if (s == "table") return ScenarioKind::Table;
    if (s == "blw_scan" || s == "blw-scan") return ScenarioKind::BlwScan;
    if (s == "jm_check" || s == "jm-check") return ScenarioKind::JmCheck;
    if (s == "corr") return ScenarioKind::Corr;
    throw Error(ErrorCode::ConfigError, "unknown scenario '" + std::string(s) + "'");
}

inline std::string_view to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Macrorealistic: return "macrorealistic";
    case ScenarioKind::Retrieving: return "retrieving";
    case ScenarioKind::NoRetrieving: return "no_retrieving";
    case ScenarioKind::Table: return "table";
    case ScenarioKind::BlwScan: return "blw_scan";
    case ScenarioKind::JmCheck: return "jm_check";
    case ScenarioKind::Corr: return "corr";
    }
    return "unknown";
}

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw Error(ErrorCode::ConfigError, "unknown output format '" + std::string(s) + "'");
}

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Table;
    std::vector<double> gammas;
    std::vector<NamedState> states;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> output;
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::filesystem::path> data_dir;
};

inline std::vector<double> default_gammas(ScenarioKind k) {
    constexpr double pi = std::numbers::pi;
    switch (k) {
    case ScenarioKind::Macrorealistic:
    case ScenarioKind::Table: return {0.0, pi / 8.0, pi / 4.0};
    case ScenarioKind::BlwScan: return uniform_gamma_grid(10001);
    default: return {pi / 8.0};
    }
}

/// Fills defaults and checks ranges; ConfigError on anything unusable.
inline ScenarioConfig validated(ScenarioConfig cfg) {
    if (cfg.shots && *cfg.shots == 0) {
        throw Error(ErrorCode::ConfigError, "shots must be at least 1");
    }
    if (cfg.gammas.empty()) {
        cfg.gammas = default_gammas(cfg.scenario);
    }
    for (double &g : cfg.gammas) {
        try {
            g = checked_gamma(g);
        } catch (const Error &e) {
            throw Error(ErrorCode::ConfigError, e.what());
        }
    }
    if (cfg.scenario != ScenarioKind::BlwScan) {
        cfg.gammas = unique_gammas(cfg.gammas);
    }
    if (cfg.states.empty()) {
        cfg.states = states::canonical();
    }
    for (const auto &s : cfg.states) {
        if (std::abs(s.ket.norm_sq() - 1.0) > 1e-10) {
            throw Error(ErrorCode::ConfigError, "state '" + s.name + "' is not normalised");
        }
    }
    return cfg;
}

namespace detail {

inline std::string row_label(std::string_view quantity, const NamedState &s, double gamma) {
    return std::string(quantity) + "|" + s.name + "|" + gamma_setting(gamma);
}

inline TomographySource experimental_source(const ScenarioConfig &cfg) {
    const auto dir = resolve_data_dir(cfg.data_dir);
    const bool explicit_dir = cfg.data_dir.has_value() || std::getenv("ROI_LAB_DATA") != nullptr;
    try {
        return reference_source(load_tomography_tables(dir));
    } catch (const Error &e) {
        if (explicit_dir) throw;
        return [](const NamedState &, double, int, const Projector &) { return kNaN; };
    }
}

inline double safe_quantity(std::string_view name, const TomographySource &src, const NamedState &s, double gamma) {
    try {
        return quantity(name, src, s, gamma);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::UndefinedCorrelation) return kNaN;
        throw;
    }
}

} // namespace detail

inline ComparisonReport run_scenario_report(const ScenarioConfig &raw) {
    const ScenarioConfig cfg = validated(raw);
    ComparisonReport rep;
    rep.title = std::string(to_string(cfg.scenario));

    const auto theory = theory_source();
    std::optional<TomographySource> sim;
    if (cfg.shots && cfg.scenario != ScenarioKind::BlwScan && cfg.scenario != ScenarioKind::JmCheck) {
        auto gammas = cfg.gammas;
        gammas.push_back(0.0);
        sim = monte_carlo_source(monte_carlo({cfg.states, gammas, *cfg.shots, cfg.seed}));
    }
    const bool uses_tables = cfg.scenario != ScenarioKind::BlwScan && cfg.scenario != ScenarioKind::JmCheck;
    const TomographySource measured =
        uses_tables ? detail::experimental_source(cfg)
                    : TomographySource([](const NamedState &, double, int, const Projector &) { return kNaN; });

    auto add_quantity = [&](std::string_view name, const NamedState &s, double g) {
        rep.add(detail::row_label(name, s, g), detail::safe_quantity(name, theory, s, g),
                sim ? detail::safe_quantity(name, *sim, s, g) : kNaN, detail::safe_quantity(name, measured, s, g));
    };

    switch (cfg.scenario) {
    case ScenarioKind::Macrorealistic:
        for (double g : cfg.gammas) {
            for (const auto &s : cfg.states) add_quantity("margin_Z+", s, g);
        }
        break;
    case ScenarioKind::Retrieving:
        for (double g : cfg.gammas) {
            for (const auto &s : cfg.states) {
                add_quantity("direct", s, g);
                add_quantity("sequential", s, g);
            }
        }
        break;
    case ScenarioKind::NoRetrieving:
        for (double g : cfg.gammas) {
            for (const auto &s : cfg.states) {
                add_quantity("q_sharp", s, g);
                add_quantity("q", s, g);
                add_quantity("delta_sq", s, g);
            }
        }
        break;
    case ScenarioKind::Table:
        for (double g : cfg.gammas) {
            for (const auto &p : tomography_projectors()) {
                for (const auto &s : cfg.states) {
                    for (int a : kOutcomes) {
                        const std::string label = p.name + "|" + s.name + "|" + (a == kPlus ? "+" : "-") + "|" +
                                                  gamma_setting(g);
                        rep.add(label, theory(s, g, a, p), sim ? (*sim)(s, g, a, p) : kNaN, measured(s, g, a, p));
                    }
                }
            }
        }
        break;
    case ScenarioKind::BlwScan: {
        const auto scan = blw_sum_scan(cfg.gammas);
        for (const auto &r : scan.rows) {
            const std::string g = "|" + gamma_setting(r.gamma);
            rep.add("delta_A_sq" + g, r.delta_A_sq);
            rep.add("delta_B_sq" + g, r.delta_B_sq);
            rep.add("sum" + g, r.sum);
        }
        rep.add("grid_argmin", scan.gamma_grid);
        rep.add("grid_min_sum", scan.sum);
        rep.add("gamma_star", scan.gamma_star);
        rep.add("min_sum", scan.min_sum);
        break;
    }
    case ScenarioKind::JmCheck:
        for (double g : cfg.gammas) {
            const auto jm = jm_feasible(blw_first(g), blw_second(g));
            const std::string suffix = "|" + gamma_setting(g);
            rep.add("feasible" + suffix, jm.feasible ? 1.0 : 0.0);
            rep.add("residual" + suffix, jm.residual);
            rep.add("iterations" + suffix, static_cast<double>(jm.iterations));
        }
        {
            const auto zx = jm_feasible(sharp_z(), sharp_x());
            rep.add("feasible|Z,X", zx.feasible ? 1.0 : 0.0);
        }
        break;
    case ScenarioKind::Corr:
        for (double g : cfg.gammas) {
            rep.add("bound|" + gamma_setting(g), corr_bound(g));
            for (const auto &s : cfg.states) add_quantity("corr", s, g);
        }
        break;
    }
    rep.finalize();
    return rep;
}

inline std::string render(const ComparisonReport &rep, OutputFormat fmt) {
    std::ostringstream out;
    if (fmt == OutputFormat::Json) {
        out << to_json(rep).dump(2) << '\n';
    } else {
        write_report_csv(out, rep);
    }
    return out.str();
}

/// Runs the scenario and, when an output path is configured, writes it atomically.
inline ComparisonReport run_scenario(const ScenarioConfig &cfg) {
    auto rep = run_scenario_report(cfg);
    if (cfg.output) {
        write_atomically(*cfg.output, render(rep, cfg.format));
    }
    return rep;
}

} // namespace roilab
