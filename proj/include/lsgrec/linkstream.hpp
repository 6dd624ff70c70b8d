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

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsgrec {

// Seconds since the Unix epoch.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

// Closed observation interval [begin, end].
struct TimeSpan {
  Timestamp begin = 0;
  Timestamp end = 0;

  bool contains(Timestamp t) const { return begin <= t && t <= end; }
  Timestamp length() const { return end - begin; }
  friend bool operator==(const TimeSpan&, const TimeSpan&) = default;
};

// One interaction (t, user, item[, rating]).
struct Event {
  Timestamp t = 0;
  std::string user;
  std::string item;
  std::optional<double> rating;

  friend bool operator==(const Event&, const Event&) = default;
};

// Ordering of events inside a stream: time, then user, then item.
bool EventLess(const Event& a, const Event& b);

// Bipartite link stream: events sorted by (t, user, item) observed over a
// closed time span. Immutable after construction.
class LinkStream {
 public:
  LinkStream() = default;

  // Sorts the events and uses [min t, max t] as the span.
  explicit LinkStream(std::vector<Event> events);
  // Sorts the events; throws std::invalid_argument if any event lies
  // outside `span` or span.begin > span.end.
  LinkStream(std::vector<Event> events, TimeSpan span);

  const std::vector<Event>& events() const { return events_; }
  const TimeSpan& span() const { return span_; }
  const std::set<std::string>& users() const { return users_; }
  const std::set<std::string>& items() const { return items_; }

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  // Number of distinct (user, item) pairs.
  std::size_t distinct_pairs() const;

 private:
  void Index();

  std::vector<Event> events_;
  TimeSpan span_;
  std::set<std::string> users_;
  std::set<std::string> items_;
};

// Raised for malformed input. `line()` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class InputFormat { kTsv, kCsv };

// Zero-based column positions. Negative rating means "no rating column".
struct ColumnMap {
  int user = 0;
  int item = 1;
  int timestamp = 2;
  int rating = 3;
};

struct ParseOptions {
  InputFormat format = InputFormat::kTsv;
  // When unset, columns come from a header row if one is present, otherwise
  // the positional layout `user item timestamp [rating]`.
  std::optional<ColumnMap> columns;
  // Overrides the observation interval; events outside it are dropped.
  std::optional<TimeSpan> span;
};

// Parses integer epoch seconds or an ISO-8601 date / date-time
// (YYYY-MM-DD, YYYY-MM-DDTHH:MM:SS[Z]); dates map to midnight UTC.
std::optional<Timestamp> ParseTimestamp(const std::string& text);

// Renders a timestamp as YYYY-MM-DDTHH:MM:SSZ.
std::string FormatTimestamp(Timestamp t);

LinkStream ParseLinkStream(std::istream& in, const ParseOptions& options = {});
LinkStream ReadLinkStream(const std::string& path,
                          const ParseOptions& options = {});

// Keeps (t, u, i, r) iff r >= rating_floor and r >= mean rating of u, the
// mean taken over the unfiltered input.
LinkStream FilterPositive(const LinkStream& stream, double rating_floor = 2.5);

struct FilterConfig {
  int sigma_u = 1;
  int sigma_i = 1;
  double rating_floor = 2.5;
};

// Removes users with < sigma_u events and items with < sigma_i events,
// repeating until every survivor meets both thresholds.
LinkStream FilterMinActivity(const LinkStream& stream, const FilterConfig& cfg);

// Window k (1-based) covers [start, end); the last window is closed at the
// stream's span end.
struct Window {
  int index = 0;
  double start = 0.0;
  double end = 0.0;
  bool closed = false;
};

struct WindowSlice {
  Window window;
  LinkStream stream;
};

// Zero-based window of `t` among `n` equal windows over `span`.
int WindowOf(Timestamp t, const TimeSpan& span, int n);

// Splits the stream's span into n equal windows (n >= 2).
std::vector<WindowSlice> SplitWindows(const LinkStream& stream, int n);

}  // namespace lsgrec
