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
 * Reference datasets: transcribed measured tables, one CSV per table.
 *
 *   # comment lines (provenance)
 *   label,theory,experimental
 *   X+|H|+,0.427,0.417
 *
 * Theory cells may be blank and may be written as fractions ("3/8", "-1/3").
 */

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "roilab/error.hpp"

namespace roilab {

struct DatasetRow {
    std::string label;
    std::optional<double> theory;
    double experimental = 0.0;
};

struct Dataset {
    std::string id;
    std::vector<std::string> provenance;
    std::vector<DatasetRow> rows;

    [[nodiscard]] const DatasetRow *find(std::string_view label) const {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const DatasetRow &r) { return r.label == label; });
        return it == rows.end() ? nullptr : &*it;
    }
};

inline const std::array<std::string_view, 8> &dataset_ids() {
    static const std::array<std::string_view, 8> ids{"gamma0",        "gamma_pi8", "gamma_pi4", "variances",
                                                     "retrieving",    "no_retrieving", "delta_sum", "correlation"};
    return ids;
}

inline bool is_dataset_id(std::string_view id) {
    const auto &ids = dataset_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace detail

/// Decimal or fraction "n/d"; ParseError otherwise.
inline double parse_number(std::string_view text) {
    const auto s = detail::trim(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto n = detail::parse_double(s.substr(0, slash));
        const auto d = detail::parse_double(s.substr(slash + 1));
        if (n && d && *d != 0.0) {
            return *n / *d;
        }
    } else if (const auto v = detail::parse_double(s)) {
        return *v;
    }
    throw Error(ErrorCode::ParseError, "cannot read number '" + std::string(text) + "'");
}

inline Dataset parse_dataset(std::string id, std::istream &in) {
    Dataset ds{std::move(id), {}, {}};
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            ds.provenance.emplace_back(detail::trim(t.substr(1)));
            continue;
        }
        const auto f = detail::split(t, ',');
        if (!header) {
            if (f.size() != 3 || detail::trim(f[0]) != "label" || detail::trim(f[1]) != "theory" ||
                detail::trim(f[2]) != "experimental") {
                throw Error(ErrorCode::ParseError, ds.id + ": expected header 'label,theory,experimental'");
            }
            header = true;
            continue;
        }
        if (f.size() != 3) {
            throw Error(ErrorCode::ParseError, ds.id + ":" + std::to_string(lineno) + ": expected 3 fields");
        }
        DatasetRow row{std::string(detail::trim(f[0])), std::nullopt, 0.0};
        try {
            if (!detail::trim(f[1]).empty()) row.theory = parse_number(f[1]);
            row.experimental = parse_number(f[2]);
        } catch (const Error &e) {
            throw Error(ErrorCode::ParseError, ds.id + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (row.label.empty() || ds.find(row.label)) {
            throw Error(ErrorCode::ParseError, ds.id + ":" + std::to_string(lineno) + ": empty or repeated label");
        }
        ds.rows.push_back(std::move(row));
    }
    if (!header) {
        throw Error(ErrorCode::ParseError, ds.id + ": missing header");
    }
    return ds;
}

inline Dataset load_dataset(const std::filesystem::path &dir, std::string_view id) {
    if (!is_dataset_id(id)) {
        throw Error(ErrorCode::UnknownDataset, "unknown dataset '" + std::string(id) + "'");
    }
    const auto path = dir / (std::string(id) + ".csv");
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return parse_dataset(std::string(id), in);
}

#ifndef ROI_LAB_DEFAULT_DATA_DIR
#define ROI_LAB_DEFAULT_DATA_DIR "data"
#endif

/// ROI_LAB_DATA, then the explicit directory, then the build-time default.
inline std::filesystem::path resolve_data_dir(const std::optional<std::filesystem::path> &explicit_dir = {}) {
    if (const char *env = std::getenv("ROI_LAB_DATA"); env && *env) {
        return env;
    }
    if (explicit_dir) {
        return *explicit_dir;
    }
    return ROI_LAB_DEFAULT_DATA_DIR;
}

} // namespace roilab
