// Copyright 2026 The eventcorr Authors.
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

#include "eventcorr/parser.h"

#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::optional<Timestamp> to_epoch(int y, unsigned mo, unsigned d, int h, int mi,
                                  int s) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) {
    return std::nullopt;
  }
  const auto days_since = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days_since) * 86400 + h * 3600 + mi * 60 + s;
}

std::optional<int> digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  return detail::parse_int<int>(s);
}

std::string escape_regex_char(char c) {
  static constexpr std::string_view kSpecial = R"(\^$.|?*+()[]{}/)";
  std::string out;
  if (kSpecial.find(c) != std::string_view::npos) out.push_back('\\');
  out.push_back(c);
  return out;
}

}  // namespace

std::optional<unsigned> syslog_month(std::string_view text) {
  text = detail::trim(text);
  if (text.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (text.substr(0, 3) == kMonths[i]) return static_cast<unsigned>(i + 1);
  }
  return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view text, int year_hint) {
  text = detail::trim(text);
  if (auto month = syslog_month(text)) {
    // "Oct 26 04:04:20" / "Oct  6 04:04:20"
    std::string_view rest = detail::trim(text.substr(3));
    const auto sp = rest.find_first_of(" \t");
    if (sp == std::string_view::npos) return std::nullopt;
    auto day = digits(rest.substr(0, sp));
    std::string_view clock = detail::trim(rest.substr(sp));
    if (!day || clock.size() != 8 || clock[2] != ':' || clock[5] != ':') {
      return std::nullopt;
    }
    auto h = digits(clock.substr(0, 2));
    auto mi = digits(clock.substr(3, 2));
    auto s = digits(clock.substr(6, 2));
    if (!h || !mi || !s) return std::nullopt;
    return to_epoch(year_hint, *month, static_cast<unsigned>(*day), *h, *mi, *s);
  }
  if (text.size() == 14) {
    // "20081024040420"
    auto y = digits(text.substr(0, 4));
    auto mo = digits(text.substr(4, 2));
    auto d = digits(text.substr(6, 2));
    auto h = digits(text.substr(8, 2));
    auto mi = digits(text.substr(10, 2));
    auto s = digits(text.substr(12, 2));
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    return to_epoch(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d), *h,
                    *mi, *s);
  }
  if (text.size() >= 19 && text[4] == '-' && text[7] == '-' &&
      (text[10] == 'T' || text[10] == ' ') && text[13] == ':' && text[16] == ':') {
    std::string_view tail = text.substr(19);
    if (!(tail.empty() || tail == "Z")) return std::nullopt;
    auto y = digits(text.substr(0, 4));
    auto mo = digits(text.substr(5, 2));
    auto d = digits(text.substr(8, 2));
    auto h = digits(text.substr(11, 2));
    auto mi = digits(text.substr(14, 2));
    auto s = digits(text.substr(17, 2));
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    return to_epoch(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d), *h,
                    *mi, *s);
  }
  return std::nullopt;
}

std::string format_iso8601(Timestamp ts) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{ts}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

int current_year() {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(system_clock::now())};
  return static_cast<int>(ymd.year());
}

Classification classify(std::string_view description, const Config& config) {
  for (const Keyword& k : config.keywords) {
    if (description.find(k.text) != std::string_view::npos) {
      return {k.severity, k.event_type, k.text};
    }
  }
  return {};
}

LineParser::LineParser(const Config& config) : config_(&config) {
  for (const Format& f : config.formats) {
    CompiledFormat cf;
    cf.name = f.name;
    std::string pattern;
    std::size_t group = 1;
    const std::string& t = f.templ;
    for (std::size_t i = 0; i < t.size();) {
      if (t[i] == '%') {
        std::size_t j = i + 1;
        while (j < t.size() &&
               (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_')) {
          ++j;
        }
        if (j > i + 1) {
          const std::string name = t.substr(i + 1, j - i - 1);
          const Definition* def = config.find_definition(name);
          if (def == nullptr) {
            throw ConfigError(ConfigError::Kind::kUnknownDefinition,
                              "format '" + f.name + "' references undefined token '%" +
                                  name + "'");
          }
          auto bind = [&](std::size_t& slot) {
            if (slot == 0) slot = group;
          };
          if (name == "timestamp") bind(cf.timestamp);
          else if (name == "nodename" || name == "node" || name == "hostname") bind(cf.nodename);
          else if (name == "application") bind(cf.application);
          else if (name == "processid" || name == "pid") bind(cf.process_id);
          else if (name == "user") bind(cf.user);
          else if (name == "description") bind(cf.description);
          pattern += "(" + def->pattern + ")";
          group += 1 + std::regex(def->pattern).mark_count();
          i = j;
          continue;
        }
      }
      if (std::isspace(static_cast<unsigned char>(t[i]))) {
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
        pattern += R"(\s+)";
        continue;
      }
      pattern += escape_regex_char(t[i]);
      ++i;
    }
    cf.regex = std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
    formats_.push_back(std::move(cf));
  }
}

std::optional<RawParse> LineParser::match(std::string_view line) const {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::match_results<std::string_view::const_iterator> m;
  for (const CompiledFormat& f : formats_) {
    if (!std::regex_match(line.begin(), line.end(), m, f.regex)) continue;
    auto field = [&](std::size_t g) -> std::string {
      return g == 0 || !m[g].matched ? std::string() : m[g].str();
    };
    RawParse raw;
    raw.line = std::string(line);
    raw.matched_format = f.name;
    raw.timestamp = field(f.timestamp);
    raw.node_name = field(f.nodename);
    raw.application = field(f.application);
    raw.process_id = field(f.process_id);
    raw.user = field(f.user);
    raw.description = field(f.description);
    raw.keyword = classify(raw.description, *config_).keyword;
    return raw;
  }
  return std::nullopt;
}

ParseResult LineParser::to_event(const RawParse& raw, IdRegistry& registry,
                                 int year) const {
  auto ts = parse_timestamp(raw.timestamp, year);
  if (!ts) {
    return Unparsed{raw.line, "unresolvable timestamp '" + raw.timestamp + "'"};
  }
  const Classification cls = classify(raw.description, *config_);
  Event e;
  e.timestamp = *ts;
  auto mapped = config_->node_name_map.find(raw.node_name);
  if (mapped != config_->node_name_map.end()) {
    registry.bind_node(raw.node_name, mapped->second);
    e.node_id = mapped->second;
  } else {
    e.node_id = registry.assign_node_id(raw.node_name);
  }
  e.severity = cls.severity;
  e.event_type = cls.event_type;
  e.event_id = registry.assign_event_id(cls.severity, cls.event_type);
  e.application = raw.application;
  e.process_id = raw.process_id;
  e.user = raw.user;
  e.log_id = registry.assign_log_id(e.node_id, e.event_id, e.application, e.process_id);
  return e;
}

ParseResult LineParser::parse_line(std::string_view line, IdRegistry& registry,
                                   int year_hint) const {
  auto raw = match(line);
  if (!raw) return Unparsed{std::string(line), "no format matches"};
  return to_event(*raw, registry, year_hint);
}

ParseResult parse_line(std::string_view line, const Config& config,
                       IdRegistry& registry, int year_hint) {
  return LineParser(config).parse_line(line, registry, year_hint);
}

ParseStreamResult parse_stream(std::istream& lines, const Config& config,
                               IdRegistry& registry, int year_hint) {
  const LineParser parser(config);
  for (const auto& [name, id] : config.node_name_map) registry.bind_node(name, id);

  ParseStreamResult result;
  int year = year_hint;
  std::optional<unsigned> last_month;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto raw = parser.match(line);
    if (!raw) {
      result.unparsed.push_back({line, "no format matches"});
      continue;
    }
    if (auto month = syslog_month(raw->timestamp)) {
      if (last_month && *last_month >= *month + 6) ++year;
      last_month = month;
    }
    ParseResult parsed = parser.to_event(*raw, registry, year);
    if (auto* e = std::get_if<Event>(&parsed)) {
      if (!result.events.empty() && e->timestamp < result.events.back().timestamp) {
        result.time_ordered = false;
      }
      result.events.push_back(std::move(*e));
    } else {
      result.unparsed.push_back(std::move(std::get<Unparsed>(parsed)));
    }
  }
  if (lines.bad()) throw Error("I/O error while reading log input");
  return result;
}

void write_events(std::ostream& out, std::span<const Event> events) {
  for (const Event& e : events) {
    out << format_iso8601(e.timestamp) << '\t' << e.timestamp << '\t' << e.log_id
        << '\t' << e.node_id << '\t' << e.event_id << '\t' << to_string(e.severity)
        << '\t' << to_string(e.event_type) << '\t'
        << detail::sanitize_field(e.application) << '\t'
        << detail::sanitize_field(e.process_id) << '\t'
        << detail::sanitize_field(e.user) << '\n';
  }
}

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = detail::split(line, '\t');
    auto bad = [&](const char* why) {
      return DataError("events line " + std::to_string(lineno) + ": " + why);
    };
    if (cols.size() != 10) throw bad("expected 10 fields");
    Event e;
    auto ts = detail::parse_int<Timestamp>(cols[1]);
    auto log = detail::parse_int<LogId>(cols[2]);
    auto node = detail::parse_int<NodeId>(cols[3]);
    auto ev = detail::parse_int<EventId>(cols[4]);
    auto sev = parse_severity(cols[5]);
    auto type = parse_event_type(cols[6]);
    if (!ts || !log || !node || !ev || !sev || !type) throw bad("malformed field");
    e.timestamp = *ts;
    e.log_id = *log;
    e.node_id = *node;
    e.event_id = *ev;
    e.severity = *sev;
    e.event_type = *type;
    e.application = std::string(cols[7]);
    e.process_id = std::string(cols[8]);
    e.user = std::string(cols[9]);
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace eventcorr
