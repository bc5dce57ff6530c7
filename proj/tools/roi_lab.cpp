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

// roi_lab: command-line front end for scenarios, tables, simulation and
// dataset comparison. Exit status 0 = PASS, 2 = comparison failure, 1 = error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "roilab/harness.hpp"

namespace {

using namespace roilab;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

struct CommonOptions {
    std::vector<std::string> gammas;
    std::vector<std::string> states;
    std::vector<std::string> alpha_beta;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::optional<std::string> out;
    std::optional<std::string> data_dir;
};

void add_common(CLI::App &cmd, CommonOptions &o) {
    cmd.add_option("--gamma", o.gammas, "first-measurement angle, radians or symbolic (pi/8); repeatable");
    cmd.add_option("--state", o.states, "named input state: H, V, plus, minus, psi-minus, psi-plus; repeatable");
    cmd.add_option("--alpha-beta", o.alpha_beta, "custom input state as re,im,re,im; repeatable");
    cmd.add_option("--shots", o.shots, "shots per measurement context (enables simulation)");
    cmd.add_option("--seed", o.seed, "simulation seed");
    cmd.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--out", o.out, "output file (written atomically); stdout if absent");
    cmd.add_option("--data-dir", o.data_dir, "directory holding the reference datasets");
}

Ket parse_alpha_beta(const std::string &text) {
    const auto parts = detail::split(text, ',');
    if (parts.size() != 4) {
        throw Error(ErrorCode::ConfigError, "--alpha-beta expects re,im,re,im, got '" + text + "'");
    }
    double v[4];
    for (std::size_t i = 0; i < 4; ++i) {
        const auto d = detail::parse_double(parts[i]);
        if (!d) throw Error(ErrorCode::ConfigError, "--alpha-beta: cannot read '" + std::string(parts[i]) + "'");
        v[i] = *d;
    }
    return {Complex(v[0], v[1]), Complex(v[2], v[3])};
}

ScenarioConfig to_config(const CommonOptions &o, ScenarioKind kind) {
    ScenarioConfig cfg;
    cfg.scenario = kind;
    for (const auto &g : o.gammas) cfg.gammas.push_back(parse_gamma(g));
    for (const auto &s : o.states) cfg.states.push_back(named_state(s));
    for (std::size_t i = 0; i < o.alpha_beta.size(); ++i) {
        cfg.states.push_back({"custom" + std::to_string(i + 1), parse_alpha_beta(o.alpha_beta[i])});
    }
    cfg.shots = o.shots;
    cfg.seed = o.seed;
    cfg.format = parse_format(o.format);
    if (o.out) cfg.output = *o.out;
    if (o.data_dir) cfg.data_dir = *o.data_dir;
    return validated(cfg);
}

void emit(const std::optional<std::string> &out, const std::string &content) {
    if (out) {
        write_atomically(*out, content);
    } else {
        std::cout << content;
    }
}

int report_exit(const ComparisonReport &rep) {
    std::fprintf(stderr, "%s: %s (worst |theory - experimental| = %.4f)\n", rep.title.c_str(),
                 rep.passed ? "PASS" : "FAIL", rep.worst_dev);
    return rep.passed ? kExitPass : kExitFail;
}

int run_report(const CommonOptions &o, ScenarioKind kind) {
    const auto cfg = to_config(o, kind);
    const auto rep = run_scenario_report(cfg);
    emit(o.out, render(rep, cfg.format));
    return report_exit(rep);
}

int run_table(const CommonOptions &o) {
    auto cfg = to_config(o, ScenarioKind::Table);
    std::ostringstream text;
    Json doc = Json::array();
    for (double g : cfg.gammas) {
        const auto t = tomography_table(g, cfg.states);
        if (cfg.format == OutputFormat::Json) {
            doc.push_back({{"gamma", format_gamma(g)}, {"projectors", t.projectors}, {"states", t.states},
                           {"values", t.values}});
        } else {
            text << "# gamma=" << format_gamma(g) << '\n';
            write_tomography_csv(text, t);
        }
    }
    emit(o.out, cfg.format == OutputFormat::Json ? doc.dump(2) + "\n" : text.str());
    return kExitPass;
}

int run_mc(const CommonOptions &o) {
    const auto cfg = to_config(o, ScenarioKind::Table);
    const auto runs = monte_carlo({cfg.states, cfg.gammas, cfg.shots.value_or(kDefaultShots), cfg.seed});
    std::ostringstream text;
    if (cfg.format == OutputFormat::Json) {
        Json doc = Json::array();
        for (const auto &r : runs) {
            Json se = Json::array();
            for (const auto &[key, v] : r.standard_error) {
                const auto &[x, y, a, b] = key;
                se.push_back({{"x", x}, {"y", y}, {"a", a}, {"b", b}, {"standard_error", v}});
            }
            doc.push_back({{"state", r.state.name}, {"stats", to_json(r.stats)}, {"standard_errors", se}});
        }
        text << doc.dump(2) << '\n';
    } else {
        text << "state,x,y,a,b,p,standard_error\n";
        for (const auto &r : runs) {
            for (const auto &rec : r.stats.records()) {
                text << r.state.name << ',' << rec.x << ',' << rec.y << ',' << rec.a << ',' << rec.b << ','
                     << format_number(rec.p, 12) << ','
                     << format_number(r.standard_error.at({rec.x, rec.y, rec.a, rec.b}), 12) << '\n';
            }
        }
    }
    emit(o.out, text.str());
    return kExitPass;
}

int run_blw(const CommonOptions &o, std::size_t points) {
    auto cfg = to_config(o, ScenarioKind::BlwScan);
    const auto grid = o.gammas.empty() ? uniform_gamma_grid(points) : cfg.gammas;
    const auto scan = blw_sum_scan(grid);
    std::ostringstream text;
    if (cfg.format == OutputFormat::Json) {
        Json rows = Json::array();
        for (const auto &r : scan.rows) {
            rows.push_back({{"gamma", r.gamma}, {"delta_A_sq", r.delta_A_sq}, {"delta_B_sq", r.delta_B_sq},
                            {"sum", r.sum}});
        }
        text << Json{{"grid_argmin", scan.gamma_grid}, {"grid_min_sum", scan.sum}, {"gamma_star", scan.gamma_star},
                     {"min_sum", scan.min_sum}, {"rows", rows}}
                    .dump(2)
             << '\n';
    } else {
        write_scan_csv(text, scan);
    }
    emit(o.out, text.str());
    std::fprintf(stderr, "grid argmin gamma = %.12g, sum = %.12g; closed-form minimum %.12g at pi/8\n",
                 scan.gamma_grid, scan.sum, scan.min_sum);
    return kExitPass;
}

int run_compare(const CommonOptions &o, std::vector<std::string> ids) {
    const auto cfg = to_config(o, ScenarioKind::Table);
    const auto dir = resolve_data_dir(cfg.data_dir);
    if (ids.empty()) ids.assign(dataset_ids().begin(), dataset_ids().end());
    std::optional<TomographySource> sim;
    if (cfg.shots) sim = reference_monte_carlo(*cfg.shots, cfg.seed);

    bool all_pass = true;
    std::ostringstream text;
    Json doc = Json::array();
    for (const auto &id : ids) {
        const auto ds = load_dataset(dir, id);
        const auto rep = compare_to_reference(dataset_run(ds, sim), ds);
        all_pass = all_pass && rep.passed;
        if (cfg.format == OutputFormat::Json) {
            doc.push_back(to_json(rep));
        } else {
            text << "# dataset " << id << '\n';
            write_report_csv(text, rep);
        }
        report_exit(rep);
    }
    emit(o.out, cfg.format == OutputFormat::Json ? doc.dump(2) + "\n" : text.str());
    std::fprintf(stderr, "overall: %s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"roi_lab: sequential-measurement retrievability toolkit"};
    app.require_subcommand(1);

    CommonOptions scenario_opts, table_opts, mc_opts, blw_opts, jm_opts, corr_opts, compare_opts;
    std::string scenario_name;
    std::size_t blw_points = 10001;
    std::vector<std::string> compare_ids;

    auto *scenario = app.add_subcommand("scenario", "run one scenario and compare with the reference tables");
    scenario->add_option("name", scenario_name,
                         "macrorealistic | retrieving | no_retrieving | table | blw_scan | jm_check | corr")
        ->required();
    add_common(*scenario, scenario_opts);

    auto *table = app.add_subcommand("table", "regenerate the tomography tables");
    add_common(*table, table_opts);

    auto *mc = app.add_subcommand("mc", "shot-noise simulation of the tomography experiment");
    add_common(*mc, mc_opts);

    auto *blw = app.add_subcommand("blw-scan", "scan the uncertainty sum over gamma");
    add_common(*blw, blw_opts);
    blw->add_option("--points", blw_points, "uniform grid size when no --gamma is given")->check(CLI::Range(3, 10000000));

    auto *jm = app.add_subcommand("jm-check", "joint-measurability verdicts for the gamma family");
    add_common(*jm, jm_opts);

    auto *corr = app.add_subcommand("corr", "correlation of the sequential joint measurement");
    add_common(*corr, corr_opts);

    auto *compare = app.add_subcommand("compare", "compare computed values with the shipped datasets");
    compare->add_option("datasets", compare_ids, "dataset ids (default: all)");
    add_common(*compare, compare_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*scenario) return run_report(scenario_opts, parse_scenario(scenario_name));
        if (*table) return run_table(table_opts);
        if (*mc) return run_mc(mc_opts);
        if (*blw) return run_blw(blw_opts, blw_points);
        if (*jm) return run_report(jm_opts, ScenarioKind::JmCheck);
        if (*corr) return run_report(corr_opts, ScenarioKind::Corr);
        if (*compare) return run_compare(compare_opts, compare_ids);
    } catch (const Error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
