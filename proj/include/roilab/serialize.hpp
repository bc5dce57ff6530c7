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
 * JSON documents for operators, POVMs, instruments, sequential statistics and
 * pipeline traces. Complex numbers are [re, im] pairs; matrices are row-major
 * lists of them.
 *
 *   povm:        {"dimension": d, "outcomes": [1, -1], "effects": [M+, M-]}
 *   instrument:  {"dimension": d, "outcomes": [...], "kraus": {"1": [K...], "-1": [K...]}}
 *   stats:       {"first_settings": [...], "second_settings": [...],
 *                 "records": [{"a", "b", "x", "y", "p"}...]}
 */

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "roilab/hv_models.hpp"
#include "roilab/linalg.hpp"
#include "roilab/measurements.hpp"
#include "roilab/photonic.hpp"

namespace roilab {

using Json = nlohmann::json;

namespace detail {

template <typename F>
auto parsing(const char *what, F &&f) {
    try {
        return f();
    } catch (const Json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("malformed ") + what + ": " + e.what());
    }
}

} // namespace detail

inline Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json &j) {
    return detail::parsing("complex number", [&] {
        if (!j.is_array() || j.size() != 2) {
            throw Error(ErrorCode::ParseError, "complex number must be [re, im]");
        }
        return Complex(j.at(0).get<double>(), j.at(1).get<double>());
    });
}

inline Json to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            row.push_back(to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMatrix matrix_from_json(const Json &j, std::size_t dim) {
    return detail::parsing("matrix", [&] {
        if (!j.is_array() || j.size() != dim) {
            throw Error(ErrorCode::ParseError, "matrix must have " + std::to_string(dim) + " rows");
        }
        CMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (!j[i].is_array() || j[i].size() != dim) {
                throw Error(ErrorCode::ParseError, "matrix row " + std::to_string(i) + " has wrong length");
            }
            for (std::size_t k = 0; k < dim; ++k) {
                m(i, k) = complex_from_json(j[i][k]);
            }
        }
        return m;
    });
}

inline Json to_json(const BinaryPovm &p) {
    return {{"dimension", p.dim()},
            {"outcomes", Json::array({kPlus, kMinus})},
            {"effects", Json::array({to_json(p.plus()), to_json(p.minus())})}};
}

inline BinaryPovm povm_from_json(const Json &j) {
    return detail::parsing("POVM", [&] {
        const auto dim = j.at("dimension").get<std::size_t>();
        const auto outcomes = j.at("outcomes").get<std::vector<int>>();
        if (outcomes != std::vector<int>{kPlus, kMinus}) {
            throw Error(ErrorCode::InvalidPovm, "binary POVM outcomes must be [1, -1]");
        }
        const auto &e = j.at("effects");
        if (!e.is_array() || e.size() != 2) {
            throw Error(ErrorCode::InvalidPovm, "binary POVM needs exactly two effects");
        }
        return BinaryPovm(matrix_from_json(e[0], dim), matrix_from_json(e[1], dim));
    });
}

inline Json to_json(const Instrument &instr) {
    Json kraus = Json::object();
    for (const auto &[a, ops] : instr.kraus_map()) {
        Json list = Json::array();
        for (const auto &k : ops) {
            list.push_back(to_json(k));
        }
        kraus[std::to_string(a)] = std::move(list);
    }
    return {{"dimension", instr.dim()}, {"outcomes", instr.outcomes()}, {"kraus", std::move(kraus)}};
}

inline Instrument instrument_from_json(const Json &j) {
    return detail::parsing("instrument", [&] {
        const auto dim = j.at("dimension").get<std::size_t>();
        Instrument::KrausMap map;
        for (int a : j.at("outcomes").get<std::vector<int>>()) {
            auto &ops = map[a];
            for (const auto &k : j.at("kraus").at(std::to_string(a))) {
                ops.push_back(matrix_from_json(k, dim));
            }
        }
        return Instrument(std::move(map));
    });
}

inline Json to_json(const SequentialStats &s) {
    Json records = Json::array();
    for (const auto &r : s.records()) {
        records.push_back({{"a", r.a}, {"b", r.b}, {"x", r.x}, {"y", r.y}, {"p", r.p}});
    }
    return {{"first_settings", s.first_settings()},
            {"second_settings", s.second_settings()},
            {"records", std::move(records)}};
}

inline SequentialStats stats_from_json(const Json &j) {
    return detail::parsing("sequential statistics", [&] {
        std::vector<StatsRecord> records;
        for (const auto &r : j.at("records")) {
            records.push_back({r.at("a").get<int>(), r.at("b").get<int>(), r.at("x").get<std::string>(),
                               r.at("y").get<std::string>(), r.at("p").get<double>()});
        }
        return SequentialStats(j.at("first_settings").get<std::vector<std::string>>(),
                               j.at("second_settings").get<std::vector<std::string>>(), records);
    });
}

inline Json to_json(const PipelineTrace &t) {
    Json stages = Json::array();
    for (const auto &s : t.stages) {
        Json amps = Json::array();
        std::string space;
        if (const auto *k = std::get_if<Ket>(&s.state)) {
            space = "polarisation";
            amps = Json::array({to_json(k->alpha), to_json(k->beta)});
        } else {
            space = "path-polarisation";
            for (const auto &c : std::get<PathPolState>(s.state).amp) {
                amps.push_back(to_json(c));
            }
        }
        stages.push_back({{"label", s.label}, {"space", space}, {"amplitudes", std::move(amps)},
                          {"norm_sq", s.norm_sq()}});
    }
    return {{"gamma", t.gamma}, {"phi", t.phi}, {"stages", std::move(stages)}};
}

} // namespace roilab
