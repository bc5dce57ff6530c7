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

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "roilab/datasets.hpp"

namespace roilab {
namespace {

template <class F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidArgument;
}

TEST(ParseNumber, DecimalsAndFractions) {
    EXPECT_DOUBLE_EQ(parse_number("0.427"), 0.427);
    EXPECT_DOUBLE_EQ(parse_number(" 3/4 "), 0.75);
    EXPECT_DOUBLE_EQ(parse_number("-1/3"), -1.0 / 3.0);
    EXPECT_DOUBLE_EQ(parse_number("+1"), 1.0);
    EXPECT_EQ(code_of([] { parse_number("abc"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_number("1/0"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_number(""); }), ErrorCode::ParseError);
}

TEST(ParseDataset, CommentsBlankTheoryAndRows) {
    std::istringstream in("# provenance line\n\nlabel,theory,experimental\nX+|H|+,0.427,0.417\nS|H,,1.562\n");
    const auto ds = parse_dataset("gamma_pi8", in);
    ASSERT_EQ(ds.rows.size(), 2u);
    ASSERT_EQ(ds.provenance.size(), 1u);
    EXPECT_EQ(ds.provenance[0], "provenance line");
    EXPECT_DOUBLE_EQ(*ds.rows[0].theory, 0.427);
    EXPECT_FALSE(ds.rows[1].theory.has_value());
    EXPECT_DOUBLE_EQ(ds.find("S|H")->experimental, 1.562);
    EXPECT_EQ(ds.find("nope"), nullptr);
}

TEST(ParseDataset, Errors) {
    auto parse = [](const std::string &text) {
        std::istringstream in(text);
        return parse_dataset("x", in);
    };
    EXPECT_EQ(code_of([&] { parse("a,b,c\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { parse("# only comments\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { parse("label,theory,experimental\nr,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { parse("label,theory,experimental\nr,1,x\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { parse("label,theory,experimental\nr,1,1\nr,1,1\n"); }), ErrorCode::ParseError);
}

TEST(LoadDataset, ShippedFiles) {
    const auto dir = resolve_data_dir();
    for (auto id : dataset_ids()) {
        const auto ds = load_dataset(dir, id);
        EXPECT_FALSE(ds.rows.empty()) << id;
        EXPECT_FALSE(ds.provenance.empty()) << id;
    }
    EXPECT_EQ(load_dataset(dir, "gamma0").rows.size(), 60u);
    EXPECT_EQ(load_dataset(dir, "gamma_pi8").rows.size(), 60u);
    EXPECT_EQ(load_dataset(dir, "gamma_pi4").rows.size(), 60u);
    const auto pi8 = load_dataset(dir, "gamma_pi8");
    EXPECT_DOUBLE_EQ(*pi8.find("X+|H|+")->theory, 0.427);
    EXPECT_DOUBLE_EQ(pi8.find("X+|H|+")->experimental, 0.417);
}

TEST(LoadDataset, Errors) {
    EXPECT_EQ(code_of([] { load_dataset(resolve_data_dir(), "bogus"); }), ErrorCode::UnknownDataset);
    EXPECT_EQ(code_of([] { load_dataset("/nonexistent/dir", "gamma0"); }), ErrorCode::IoError);
}

TEST(ResolveDataDir, EnvironmentOverridesExplicit) {
    ::unsetenv("ROI_LAB_DATA");
    EXPECT_EQ(resolve_data_dir(std::filesystem::path("/a")), std::filesystem::path("/a"));
    ::setenv("ROI_LAB_DATA", "/from/env", 1);
    EXPECT_EQ(resolve_data_dir(std::filesystem::path("/a")), std::filesystem::path("/from/env"));
    ::unsetenv("ROI_LAB_DATA");
    EXPECT_EQ(resolve_data_dir(), std::filesystem::path(ROI_LAB_DEFAULT_DATA_DIR));
}

} // namespace
} // namespace roilab
