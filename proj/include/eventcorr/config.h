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

#ifndef EVENTCORR_CONFIG_H_
#define EVENTCORR_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eventcorr/event.h"

namespace eventcorr {

// A named token extractor. `pattern` is an ECMAScript regular expression.
struct Definition {
  std::string name;
  std::string pattern;
};

// A line layout: literal text interleaved with %name references.
struct Format {
  std::string name;
  std::string templ;
};

struct Keyword {
  std::string text;
  Severity severity = Severity::kInfo;
  EventType event_type = EventType::kSystem;
};

struct Config {
  std::vector<Definition> definitions;
  std::vector<Format> formats;
  std::vector<Keyword> keywords;
  std::map<std::string, NodeId> node_name_map;
  // Sections that were read but play no role here (e.g. "database").
  std::vector<std::string> ignored_sections;

  bool classifying() const { return !keywords.empty(); }
  const Definition* find_definition(std::string_view name) const;
};

// Built-in patterns used when a definition is declared without one.
const std::map<std::string, std::string, std::less<>>& default_definition_patterns();

// Accepts either the XML layout (<configuration> with <definitions>,
// <formats>, <keywords>, optional <nodes>; <database> is ignored) or the
// flat key-value layout documented in README.md. Throws ConfigError.
Config load_config(std::string_view document);
Config load_config_file(const std::filesystem::path& path);

// The %name references of a format template, in order.
std::vector<std::string> template_references(std::string_view templ);

// Renders a Config in the flat key-value layout.
std::string to_flat_text(const Config& config);

}  // namespace eventcorr

#endif  // EVENTCORR_CONFIG_H_
