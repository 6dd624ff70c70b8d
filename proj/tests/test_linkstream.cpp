// Copyright 2026 The lsgrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lsgrec/linkstream.hpp"
#include "test_util.hpp"

namespace lsgrec {
namespace {

LinkStream Parse(const std::string& text, ParseOptions options = {}) {
  std::istringstream in(text);
  return ParseLinkStream(in, options);
}

Event Rated(Timestamp t, const char* u, const char* i, double r) { return {t, u, i, r}; }

TEST(ParseLinkStream, ThreeTsvLines) {
  const auto s = Parse("a\tx\t10\nb\tx\t11\na\ty\t12\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.users(), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(s.items(), (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(s.span(), (TimeSpan{10, 12}));
  EXPECT_FALSE(s.events()[0].rating.has_value());
}

TEST(ParseLinkStream, NonNumericTimestampNamesLine) {
  try {
    Parse("a\tx\t10\nb\tx\tyesterday\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseLinkStream, OutOfOrderRecordsAreSorted) {
  const auto s = Parse("b\tx\t30\na\ty\t10\na\tx\t10\nc\tz\t20\n");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.events()[0].item, "x");
  EXPECT_EQ(s.events()[1].item, "y");
  EXPECT_EQ(s.events()[2].t, 20);
  EXPECT_EQ(s.events()[3].t, 30);
}

TEST(ParseLinkStream, EmptyInput) {
  try {
    Parse("\n# only a comment\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_STREQ(e.what(), "empty stream");
  }
}

TEST(ParseLinkStream, MissingFieldNamesLine) {
  EXPECT_THROW(Parse("a\tx\t1\nb\tx\n"), ParseError);
}

TEST(ParseLinkStream, RatingOutOfRange) {
  EXPECT_THROW(Parse("a\tx\t1\t7\n"), ParseError);
}

TEST(ParseLinkStream, HeaderWithNamedColumnsAndRatings) {
  const auto s = Parse("rating,timestamp,item,user\n4,2007-01-01,p1,alice\n2.5,5,p2,bob\n",
                       {InputFormat::kCsv, std::nullopt, std::nullopt});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.events()[0].user, "bob");
  EXPECT_DOUBLE_EQ(*s.events()[0].rating, 2.5);
  EXPECT_EQ(s.events()[1].t, 1167609600);
  EXPECT_EQ(s.events()[1].item, "p1");
}

TEST(ParseLinkStream, QuotedCsvFields) {
  const auto s = Parse("\"a, b\",\"x\"\"1\",3\n", {InputFormat::kCsv, std::nullopt, std::nullopt});
  EXPECT_EQ(s.events()[0].user, "a, b");
  EXPECT_EQ(s.events()[0].item, "x\"1");
}

TEST(ParseLinkStream, ExplicitColumns) {
  const ParseOptions options{InputFormat::kTsv, ColumnMap{2, 3, 1, 0}, std::nullopt};
  const auto s = Parse("4\t100\tu\ti\n", options);
  EXPECT_EQ(s.events()[0].user, "u");
  EXPECT_EQ(s.events()[0].t, 100);
  EXPECT_DOUBLE_EQ(*s.events()[0].rating, 4.0);
  // An explicit rating column must be filled.
  EXPECT_THROW(Parse("\t100\tu\ti\n", options), ParseError);
}

TEST(ParseLinkStream, SpanOverrideDropsOutsideEvents) {
  const auto s = Parse("a\tx\t1\na\ty\t5\na\tz\t9\n",
                       {InputFormat::kTsv, std::nullopt, TimeSpan{2, 20}});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.events()[0].t, 5);
  EXPECT_EQ(s.span(), (TimeSpan{2, 20}));
}

TEST(ParseTimestamp, Formats) {
  EXPECT_EQ(ParseTimestamp("1280000000"), 1280000000);
  EXPECT_EQ(ParseTimestamp("1970-01-02"), 86400);
  EXPECT_EQ(ParseTimestamp("2010-05-10T01:02:03Z"), 1273453323);
  EXPECT_EQ(ParseTimestamp("2010-05-10 01:02"), 1273453320);
  EXPECT_FALSE(ParseTimestamp("2010-02-30"));
  EXPECT_FALSE(ParseTimestamp("12ab"));
  EXPECT_EQ(FormatTimestamp(1273453323), "2010-05-10T01:02:03Z");
}

TEST(LinkStream, RejectsEventOutsideSpan) {
  EXPECT_THROW(LinkStream({{5, "u", "i", std::nullopt}}, TimeSpan{0, 4}), std::invalid_argument);
  EXPECT_THROW(LinkStream({{5, "", "i", std::nullopt}}), std::invalid_argument);
}

TEST(FilterPositive, DropsBelowUserMean) {
  const LinkStream s({Rated(1, "u", "a", 5), Rated(2, "u", "b", 1), Rated(3, "u", "c", 3)});
  const auto out = FilterPositive(s, 2.5);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.events()[0].item, "a");
  EXPECT_EQ(out.events()[1].item, "c");
  EXPECT_EQ(out.span(), s.span());
}

TEST(FilterPositive, AllTopRatingsUnchanged) {
  const LinkStream s({Rated(1, "u", "a", 5), Rated(2, "v", "b", 5), Rated(3, "u", "c", 5)});
  EXPECT_EQ(FilterPositive(s, 2.5).events(), s.events());
}

TEST(FilterPositive, SingleLowRatingRemovesUser) {
  const LinkStream s({Rated(1, "u", "a", 2), Rated(2, "v", "b", 4)});
  const auto out = FilterPositive(s, 2.5);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_FALSE(out.users().contains("u"));
}

TEST(FilterPositive, RequiresRatings) {
  const LinkStream s({Rated(1, "u", "a", 4), {2, "u", "b", std::nullopt}});
  try {
    FilterPositive(s, 2.5);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "rating required for positive filtering");
  }
}

TEST(FilterPositive, NeverAddsOrAltersEvents) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> stars(0, 5);
  for (int round = 0; round < 20; ++round) {
    auto base = testing::RandomStream(rng, 6, 8, 40, 100);
    std::vector<Event> rated = base.events();
    for (auto& e : rated) e.rating = stars(rng);
    const LinkStream s(rated, base.span());
    const auto out = FilterPositive(s, 2.5);
    EXPECT_LE(out.size(), s.size());
    for (const auto& e : out.events()) {
      EXPECT_NE(std::find(s.events().begin(), s.events().end(), e), s.events().end());
      EXPECT_GE(*e.rating, 2.5);
    }
  }
}

TEST(FilterMinActivity, ThresholdOneKeepsEverything) {
  const auto s = testing::GuidingExample();
  EXPECT_EQ(FilterMinActivity(s, {1, 1}).events(), s.events());
}

TEST(FilterMinActivity, GuidingExampleUsersHaveFourEvents) {
  const auto s = testing::GuidingExample();
  EXPECT_EQ(FilterMinActivity(s, {3, 1}).events(), s.events());
  EXPECT_EQ(FilterMinActivity(s, {4, 1}).events(), s.events());
  EXPECT_TRUE(FilterMinActivity(s, {5, 1}).empty());
}

TEST(FilterMinActivity, Cascades) {
  // B's single event goes first; then s has one event left, which takes A's
  // s event with it. A keeps its two t events.
  const LinkStream s({{1, "A", "s", std::nullopt},
                      {2, "A", "t", std::nullopt},
                      {3, "A", "t", std::nullopt},
                      {4, "B", "s", std::nullopt}});
  const auto out = FilterMinActivity(s, {2, 2});
  ASSERT_EQ(out.size(), 2u);
  for (const auto& e : out.events()) {
    EXPECT_EQ(e.user, "A");
    EXPECT_EQ(e.item, "t");
  }
}

TEST(FilterMinActivity, SoundAndIdempotentOnRandomStreams) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> sigma(0, 5);
  for (int round = 0; round < 50; ++round) {
    const auto s = testing::RandomStream(rng, 10, 12, 80, 1000);
    const FilterConfig cfg{sigma(rng), sigma(rng)};
    const auto once = FilterMinActivity(s, cfg);
    std::map<std::string, int> per_user;
    std::map<std::string, int> per_item;
    for (const auto& e : once.events()) {
      ++per_user[e.user];
      ++per_item[e.item];
    }
    for (const auto& [u, c] : per_user) EXPECT_GE(c, cfg.sigma_u);
    for (const auto& [i, c] : per_item) EXPECT_GE(c, cfg.sigma_i);
    EXPECT_EQ(FilterMinActivity(once, cfg).events(), once.events());
    for (std::size_t k = 1; k < once.size(); ++k) {
      EXPECT_LE(once.events()[k - 1].t, once.events()[k].t);
    }
  }
}

TEST(SplitWindows, EqualPartition) {
  std::vector<Event> events;
  for (Timestamp t = 0; t <= 80; t += 5) events.push_back({t, "u", "i", std::nullopt});
  const auto slices = SplitWindows(LinkStream(events, TimeSpan{0, 80}), 8);
  ASSERT_EQ(slices.size(), 8u);
  for (int k = 0; k < 8; ++k) {
    const auto& w = slices[static_cast<std::size_t>(k)].window;
    EXPECT_EQ(w.index, k + 1);
    EXPECT_DOUBLE_EQ(w.start, 10.0 * k);
    EXPECT_DOUBLE_EQ(w.end, 10.0 * (k + 1));
    EXPECT_EQ(w.closed, k == 7);
  }
  EXPECT_EQ(slices[7].stream.size(), 3u);  // 70, 75 and the closing 80
  EXPECT_EQ(slices[0].stream.span(), (TimeSpan{0, 9}));
}

TEST(SplitWindows, BoundaryEventGoesToLaterWindow) {
  const LinkStream s({{10, "u", "i", std::nullopt}}, TimeSpan{0, 20});
  const auto slices = SplitWindows(s, 2);
  EXPECT_TRUE(slices[0].stream.empty());
  EXPECT_EQ(slices[1].stream.size(), 1u);
}

TEST(SplitWindows, GuidingExampleHalves) {
  const auto g = testing::GuidingExample();
  const LinkStream s(g.events(), TimeSpan{0, 7});
  const auto slices = SplitWindows(s, 2);
  EXPECT_EQ(slices[0].stream.size(), 5u);  // t1, t2, t3
  EXPECT_EQ(slices[1].stream.size(), 3u);  // t4, t5, t6
  std::vector<Event> joined = slices[0].stream.events();
  joined.insert(joined.end(), slices[1].stream.events().begin(), slices[1].stream.events().end());
  EXPECT_EQ(joined, s.events());
}

TEST(SplitWindows, Preconditions) {
  const auto g = testing::GuidingExample();
  EXPECT_THROW(SplitWindows(g, 1), std::invalid_argument);
  EXPECT_THROW(SplitWindows(LinkStream({{3, "u", "i", std::nullopt}}), 2), std::invalid_argument);
}

TEST(SplitWindows, PartitionProperty) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> windows(2, 12);
  std::uniform_int_distribution<Timestamp> length(1, 500);
  for (int round = 0; round < 100; ++round) {
    const auto s = testing::RandomStream(rng, 5, 5, 60, length(rng));
    const int n = windows(rng);
    const auto slices = SplitWindows(s, n);
    std::vector<Event> joined;
    for (const auto& slice : slices) {
      for (const auto& e : slice.stream.events()) {
        EXPECT_EQ(WindowOf(e.t, s.span(), n), slice.window.index - 1);
        EXPECT_GE(static_cast<double>(e.t), slice.window.start);
        if (slice.window.closed) {
          EXPECT_LE(static_cast<double>(e.t), slice.window.end);
        } else {
          EXPECT_LT(static_cast<double>(e.t), slice.window.end);
        }
      }
      joined.insert(joined.end(), slice.stream.events().begin(), slice.stream.events().end());
    }
    EXPECT_EQ(joined, s.events());
  }
}

}  // namespace
}  // namespace lsgrec
