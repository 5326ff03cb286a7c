// Copyright 2026 The csdtc Authors
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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "csdtc/errors.h"
#include "csdtc/text_format.h"

namespace csdtc {
namespace {

TEST(TextFormat, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(-35.5), "-35.5");
    EXPECT_EQ(format_number(3.0), "3");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(parse_number(format_number(x)), x);
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(TextFormat, ParseNumber) {
    EXPECT_EQ(parse_number("+2.5"), 2.5);
    EXPECT_EQ(parse_number("-1e-3"), -1e-3);
    EXPECT_THROW(parse_number("1.5x"), ConfigError);
    EXPECT_THROW(parse_number(""), ConfigError);
}

TEST(TextFormat, GridIsInclusive) {
    const auto g = parse_grid("-0.5:0.5:101");
    ASSERT_EQ(g.size(), 101u);
    EXPECT_EQ(g.front(), -0.5);
    EXPECT_EQ(g.back(), 0.5);
    EXPECT_NEAR(g[50], 0.0, 1e-15);
    EXPECT_EQ(parse_grid("5:100:96")[1], 6.0);
}

TEST(TextFormat, SingleValueGrid) {
    const auto g = parse_grid("0.25");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0], 0.25);
}

TEST(TextFormat, MalformedGrids) {
    EXPECT_THROW(parse_grid(""), ConfigError);
    EXPECT_THROW(parse_grid("1:2"), ConfigError);
    EXPECT_THROW(parse_grid("1:2:0"), ConfigError);
    EXPECT_THROW(parse_grid("1:2:x"), ConfigError);
    EXPECT_THROW(parse_grid("a:2:3"), ConfigError);
    EXPECT_THROW(parse_grid("1:2:3:4"), ConfigError);
}

}  // namespace
}  // namespace csdtc
