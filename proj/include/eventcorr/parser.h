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

#ifndef EVENTCORR_PARSER_H_
#define EVENTCORR_PARSER_H_

#include <iosfwd>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eventcorr/config.h"
#include "eventcorr/event.h"
#include "eventcorr/id_registry.h"

namespace eventcorr {

struct Classification {
  Severity severity = Severity::kInfo;
  EventType event_type = EventType::kSystem;
  std::optional<std::string> keyword;  // nullopt: unclassified

  bool classified() const { return keyword.has_value(); }
};

// First keyword, in config order, that occurs in `description` wins.
// Case-sensitive substring match; no match yields (INFO, SYSTEM).
Classification classify(std::string_view description, const Config& config);

// Field extraction result for one line, before ids are assigned.
struct RawParse {
  std::string line;
  std::optional<std::string> matched_format;
  std::string timestamp;
  std::string node_name;
  std::string application;
  std::string process_id;
  std::string user;
  std::string description;
  std::optional<std::string> keyword;
};

struct Unparsed {
  std::string line;
  std::string reason;
};

using ParseResult = std::variant<Event, Unparsed>;

// Epoch seconds for "Oct 26 04:04:20" (year taken from `year_hint`),
// "20081024040420" or "2008-10-24T04:04:20". All times are UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text, int year_hint);
// Month (1-12) of a syslog-style timestamp, nullopt for other layouts.
std::optional<unsigned> syslog_month(std::string_view text);
std::string format_iso8601(Timestamp ts);
int current_year();

// Compiles the config's formats once; reuse it across lines.
class LineParser {
 public:
  explicit LineParser(const Config& config);

  // Tries formats in order, first full match wins.
  std::optional<RawParse> match(std::string_view line) const;

  ParseResult parse_line(std::string_view line, IdRegistry& registry,
                         int year_hint) const;
  ParseResult to_event(const RawParse& raw, IdRegistry& registry,
                       int year) const;

  const Config& config() const { return *config_; }

 private:
  struct CompiledFormat {
    std::string name;
    std::regex regex;
    // Capture group per extracted field; 0 when the format lacks it.
    std::size_t timestamp = 0, nodename = 0, application = 0, process_id = 0,
                user = 0, description = 0;
  };

  const Config* config_;
  std::vector<CompiledFormat> formats_;
};

ParseResult parse_line(std::string_view line, const Config& config,
                       IdRegistry& registry, int year_hint);

struct ParseStreamResult {
  std::vector<Event> events;  // input order
  std::vector<Unparsed> unparsed;
  bool time_ordered = true;
};

// Syslog dates carry no year: the stream starts at `year_hint` and moves to
// the next year when the month jumps back by six or more (Dec -> Jan).
ParseStreamResult parse_stream(std::istream& lines, const Config& config,
                               IdRegistry& registry, int year_hint);

// Formatted-events file: one tab-separated record per event,
//   iso8601  epoch  log_id  node_id  event_id  severity  type  application  process_id  user
// Lines starting with '#' are comments.
void write_events(std::ostream& out, std::span<const Event> events);
std::vector<Event> read_events(std::istream& in);

}  // namespace eventcorr

#endif  // EVENTCORR_PARSER_H_
