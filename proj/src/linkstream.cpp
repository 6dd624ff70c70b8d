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

#include "lsgrec/linkstream.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace lsgrec {

bool EventLess(const Event& a, const Event& b) {
  return std::tie(a.t, a.user, a.item) < std::tie(b.t, b.user, b.item);
}

LinkStream::LinkStream(std::vector<Event> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(), EventLess);
  if (!events_.empty()) {
    span_ = {events_.front().t, events_.back().t};
  }
  Index();
}

LinkStream::LinkStream(std::vector<Event> events, TimeSpan span)
    : events_(std::move(events)), span_(span) {
  if (span_.begin > span_.end) {
    throw std::invalid_argument("time span begin is after its end");
  }
  std::stable_sort(events_.begin(), events_.end(), EventLess);
  for (const auto& e : events_) {
    if (!span_.contains(e.t)) {
      throw std::invalid_argument("event at t=" + std::to_string(e.t) +
                                  " lies outside the observation span");
    }
  }
  Index();
}

void LinkStream::Index() {
  for (const auto& e : events_) {
    if (e.user.empty() || e.item.empty()) {
      throw std::invalid_argument("user and item identifiers must be non-empty");
    }
    users_.insert(e.user);
    items_.insert(e.item);
  }
}

std::size_t LinkStream::distinct_pairs() const {
  std::set<std::pair<std::string_view, std::string_view>> pairs;
  for (const auto& e : events_) pairs.emplace(e.user, e.item);
  return pairs.size();
}

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string Lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> SplitRecord(const std::string& line, InputFormat format) {
  std::vector<std::string> fields;
  if (format == InputFormat::kTsv) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find('\t', start);
      fields.push_back(Trim(std::string_view(line).substr(
          start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return fields;
  }
  // CSV with optional double-quoted fields ("" escapes a quote).
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur.push_back('"');
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(Trim(cur));
  return fields;
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::optional<double> ParseReal(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool IsOneOf(const std::string& name, std::initializer_list<const char*> names) {
  return std::any_of(names.begin(), names.end(),
                     [&](const char* n) { return name == n; });
}

// Maps header names onto columns; nullopt if user/item/timestamp are not all
// recognised.
std::optional<ColumnMap> ColumnsFromHeader(const std::vector<std::string>& header) {
  ColumnMap map{-1, -1, -1, -1};
  for (int k = 0; k < static_cast<int>(header.size()); ++k) {
    const auto name = Lower(header[static_cast<std::size_t>(k)]);
    if (IsOneOf(name, {"user", "user_id", "userid", "u"})) {
      map.user = k;
    } else if (IsOneOf(name, {"item", "item_id", "itemid", "i", "product", "product_id"})) {
      map.item = k;
    } else if (IsOneOf(name, {"timestamp", "time", "t", "date", "datetime"})) {
      map.timestamp = k;
    } else if (IsOneOf(name, {"rating", "r", "score"})) {
      map.rating = k;
    }
  }
  if (map.user < 0 || map.item < 0 || map.timestamp < 0) return std::nullopt;
  return map;
}

const std::string& Field(const std::vector<std::string>& fields, int column,
                         const char* name, std::size_t line) {
  if (column < 0 || static_cast<std::size_t>(column) >= fields.size() ||
      fields[static_cast<std::size_t>(column)].empty()) {
    throw ParseError("line " + std::to_string(line) + ": missing " + name + " field",
                     line);
  }
  return fields[static_cast<std::size_t>(column)];
}

}  // namespace

std::optional<Timestamp> ParseTimestamp(const std::string& text) {
  const std::string s = Trim(text);
  if (s.empty()) return std::nullopt;
  Timestamp epoch = 0;
  if (ParseNumber(s, epoch)) return epoch;

  // YYYY-MM-DD[(T| )HH:MM[:SS]][Z]
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned mo = 0;
  unsigned d = 0;
  if (!ParseNumber(std::string_view(s).substr(0, 4), y) ||
      !ParseNumber(std::string_view(s).substr(5, 2), mo) ||
      !ParseNumber(std::string_view(s).substr(8, 2), d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp seconds =
      static_cast<Timestamp>(std::chrono::sys_days{ymd}.time_since_epoch().count()) *
      kSecondsPerDay;

  std::string_view rest = std::string_view(s).substr(10);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (rest.empty()) return seconds;
  if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  int hh = 0;
  int mm = 0;
  int ss = 0;
  if (rest.size() != 5 && rest.size() != 8) return std::nullopt;
  if (rest[2] != ':' || !ParseNumber(rest.substr(0, 2), hh) ||
      !ParseNumber(rest.substr(3, 2), mm)) {
    return std::nullopt;
  }
  if (rest.size() == 8 && (rest[5] != ':' || !ParseNumber(rest.substr(6, 2), ss))) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  return seconds + hh * 3600 + mm * 60 + ss;
}

std::string FormatTimestamp(Timestamp t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const auto secs = (tp - day).count();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60));
  return buf;
}

LinkStream ParseLinkStream(std::istream& in, const ParseOptions& options) {
  std::vector<Event> events;
  std::optional<ColumnMap> columns = options.columns;
  bool positional = !columns.has_value();
  bool first_record = true;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = SplitRecord(line, options.format);

    if (first_record) {
      first_record = false;
      const ColumnMap probe = columns.value_or(ColumnMap{});
      const bool ts_ok = probe.timestamp >= 0 &&
                         static_cast<std::size_t>(probe.timestamp) < fields.size() &&
                         ParseTimestamp(fields[static_cast<std::size_t>(probe.timestamp)]);
      if (!ts_ok) {
        if (auto from_header = ColumnsFromHeader(fields)) {
          if (!columns) {
            columns = from_header;
            positional = false;
          }
          continue;
        }
      }
      if (!columns) columns = ColumnMap{};
    }

    const ColumnMap& map = *columns;
    Event e;
    e.user = Field(fields, map.user, "user", line_no);
    e.item = Field(fields, map.item, "item", line_no);
    const auto& ts = Field(fields, map.timestamp, "timestamp", line_no);
    const auto t = ParseTimestamp(ts);
    if (!t) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid timestamp '" + ts + "'",
                       line_no);
    }
    e.t = *t;
    if (map.rating >= 0 && static_cast<std::size_t>(map.rating) < fields.size() &&
        !fields[static_cast<std::size_t>(map.rating)].empty()) {
      const auto& rs = fields[static_cast<std::size_t>(map.rating)];
      const auto r = ParseReal(rs);
      if (!r || *r < 0.0 || *r > 5.0) {
        throw ParseError("line " + std::to_string(line_no) + ": invalid rating '" + rs + "'",
                         line_no);
      }
      e.rating = *r;
    } else if (!positional && map.rating >= 0) {
      throw ParseError("line " + std::to_string(line_no) + ": missing rating field", line_no);
    }
    if (options.span && !options.span->contains(e.t)) continue;
    events.push_back(std::move(e));
  }

  if (events.empty()) throw ParseError("empty stream", 0);
  if (options.span) return LinkStream(std::move(events), *options.span);
  return LinkStream(std::move(events));
}

LinkStream ReadLinkStream(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return ParseLinkStream(in, options);
}

LinkStream FilterPositive(const LinkStream& stream, double rating_floor) {
  std::unordered_map<std::string, std::pair<double, std::size_t>> totals;
  for (const auto& e : stream.events()) {
    if (!e.rating) throw std::invalid_argument("rating required for positive filtering");
    auto& [sum, count] = totals[e.user];
    sum += *e.rating;
    ++count;
  }
  std::vector<Event> kept;
  for (const auto& e : stream.events()) {
    const auto& [sum, count] = totals.at(e.user);
    const double mean = sum / static_cast<double>(count);
    // Absorb rounding in the mean so a rating equal to it is kept.
    const double slack = 1e-9 * std::max(1.0, std::abs(mean));
    if (*e.rating >= rating_floor && *e.rating >= mean - slack) kept.push_back(e);
  }
  return LinkStream(std::move(kept), stream.span());
}

LinkStream FilterMinActivity(const LinkStream& stream, const FilterConfig& cfg) {
  if (cfg.sigma_u < 0 || cfg.sigma_i < 0) {
    throw std::invalid_argument("activity thresholds must be non-negative");
  }
  const auto& events = stream.events();
  std::vector<bool> alive(events.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::unordered_map<std::string_view, int> per_user;
    std::unordered_map<std::string_view, int> per_item;
    for (std::size_t k = 0; k < events.size(); ++k) {
      if (!alive[k]) continue;
      ++per_user[events[k].user];
      ++per_item[events[k].item];
    }
    for (std::size_t k = 0; k < events.size(); ++k) {
      if (!alive[k]) continue;
      if (per_user[events[k].user] < cfg.sigma_u || per_item[events[k].item] < cfg.sigma_i) {
        alive[k] = false;
        changed = true;
      }
    }
  }
  std::vector<Event> kept;
  for (std::size_t k = 0; k < events.size(); ++k) {
    if (alive[k]) kept.push_back(events[k]);
  }
  return LinkStream(std::move(kept), stream.span());
}

int WindowOf(Timestamp t, const TimeSpan& span, int n) {
  const auto offset = static_cast<__int128>(t - span.begin) * n;
  const auto k = static_cast<int>(offset / span.length());
  return std::clamp(k, 0, n - 1);
}

std::vector<WindowSlice> SplitWindows(const LinkStream& stream, int n) {
  if (n < 2) throw std::invalid_argument("at least two windows are required");
  const TimeSpan span = stream.span();
  if (span.length() <= 0) {
    throw std::invalid_argument("observation span must have positive length");
  }
  const double length = static_cast<double>(span.length()) / n;
  std::vector<std::vector<Event>> buckets(static_cast<std::size_t>(n));
  for (const auto& e : stream.events()) {
    buckets[static_cast<std::size_t>(WindowOf(e.t, span, n))].push_back(e);
  }
  std::vector<WindowSlice> out;
  out.reserve(buckets.size());
  for (int k = 0; k < n; ++k) {
    Window w;
    w.index = k + 1;
    w.start = static_cast<double>(span.begin) + k * length;
    w.end = k + 1 == n ? static_cast<double>(span.end)
                       : static_cast<double>(span.begin) + (k + 1) * length;
    w.closed = k + 1 == n;
    // Integer timestamps inside the window, i.e. WindowOf(t) == k.
    const auto first_of = [&](int j) {
      const auto num = static_cast<__int128>(span.length()) * j;
      return span.begin + static_cast<Timestamp>((num + n - 1) / n);
    };
    const Timestamp first = first_of(k);
    Timestamp last = w.closed ? span.end : first_of(k + 1) - 1;
    if (last < first) last = first;
    out.push_back({w, LinkStream(std::move(buckets[static_cast<std::size_t>(k)]),
                                 TimeSpan{first, last})});
  }
  return out;
}

}  // namespace lsgrec
