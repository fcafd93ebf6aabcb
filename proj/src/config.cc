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

#include "eventcorr/config.h"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "eventcorr/errors.h"
#include "text_util.h"

namespace eventcorr {

namespace pt = boost::property_tree;

const std::map<std::string, std::string, std::less<>>& default_definition_patterns() {
  static const std::map<std::string, std::string, std::less<>> kDefaults = {
      {"timestamp",
       R"([A-Z][a-z]{2}\s+\d{1,2}\s+\d{2}:\d{2}:\d{2}|\d{14}|\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}Z?)"},
      {"nodename", R"(\S+)"},
      {"application", R"([^\s\[\]:]+)"},
      {"process", R"([^\s\[\]:]+)"},
      {"processid", R"(\d+)"},
      {"user", R"(\S+)"},
      {"description", R"(.*)"},
  };
  return kDefaults;
}

const Definition* Config::find_definition(std::string_view name) const {
  for (const Definition& d : definitions) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::vector<std::string> template_references(std::string_view templ) {
  std::vector<std::string> refs;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] != '%') continue;
    std::size_t j = i + 1;
    while (j < templ.size() &&
           (std::isalnum(static_cast<unsigned char>(templ[j])) || templ[j] == '_')) {
      ++j;
    }
    if (j > i + 1) refs.emplace_back(templ.substr(i + 1, j - i - 1));
    i = j - 1;
  }
  return refs;
}

namespace {

[[noreturn]] void fail(ConfigError::Kind kind, const std::string& what) {
  throw ConfigError(kind, what);
}

void add_definition(Config& config, std::string name, std::string pattern) {
  if (name.empty()) fail(ConfigError::Kind::kMalformed, "definition without a name");
  if (config.find_definition(name) != nullptr) {
    fail(ConfigError::Kind::kDuplicateDefinition, "duplicate definition '" + name + "'");
  }
  if (pattern.empty()) {
    const auto& defaults = default_definition_patterns();
    auto it = defaults.find(name);
    if (it == defaults.end()) {
      fail(ConfigError::Kind::kBadValue,
           "definition '" + name + "' has no pattern and no built-in default");
    }
    pattern = it->second;
  }
  try {
    std::regex check(pattern);
  } catch (const std::regex_error& e) {
    fail(ConfigError::Kind::kBadValue,
         "definition '" + name + "' has an invalid pattern: " + e.what());
  }
  config.definitions.push_back({std::move(name), std::move(pattern)});
}

void add_keyword(Config& config, std::string text, std::string_view severity,
                 std::string_view type) {
  auto sev = parse_severity(detail::trim(severity));
  auto et = parse_event_type(detail::trim(type));
  if (!sev) fail(ConfigError::Kind::kBadValue, "keyword '" + text + "': unknown severity '" + std::string(severity) + "'");
  if (!et) fail(ConfigError::Kind::kBadValue, "keyword '" + text + "': unknown event type '" + std::string(type) + "'");
  if (text.empty()) fail(ConfigError::Kind::kMalformed, "empty keyword");
  config.keywords.push_back({std::move(text), *sev, *et});
}

void validate(const Config& config) {
  std::set<std::string> seen_formats;
  for (const Format& f : config.formats) {
    if (!seen_formats.insert(f.name).second) {
      fail(ConfigError::Kind::kMalformed, "duplicate format '" + f.name + "'");
    }
    for (const std::string& ref : template_references(f.templ)) {
      if (config.find_definition(ref) == nullptr) {
        fail(ConfigError::Kind::kUnknownDefinition,
             "format '" + f.name + "' references undefined token '%" + ref + "'");
      }
    }
  }
}

std::string strip_percent(std::string s) {
  if (!s.empty() && s.front() == '%') s.erase(0, 1);
  return s;
}

Config load_xml(std::string_view document) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    fail(ConfigError::Kind::kMalformed, std::string("malformed XML config: ") + e.what());
  }
  auto root = tree.get_child_optional("configuration");
  if (!root) fail(ConfigError::Kind::kMalformed, "missing <configuration> root");

  Config config;
  for (const auto& [section, body] : *root) {
    if (section == "<xmlattr>" || section == "<xmlcomment>") continue;
    if (section == "definitions") {
      for (const auto& [tag, node] : body) {
        if (tag != "definition") continue;
        std::string value = strip_percent(node.get("<xmlattr>.value", ""));
        std::string name = node.get("<xmlattr>.name", "");
        add_definition(config, value.empty() ? name : value,
                       std::string(detail::trim(node.get("<xmlattr>.desc", ""))));
      }
    } else if (section == "formats") {
      for (const auto& [tag, node] : body) {
        if (tag != "format") continue;
        Format f{node.get("<xmlattr>.name", ""), node.get("<xmlattr>.value", "")};
        if (f.name.empty() || f.templ.empty()) {
          fail(ConfigError::Kind::kMalformed, "format needs name and value attributes");
        }
        config.formats.push_back(std::move(f));
      }
    } else if (section == "keywords") {
      for (const auto& [tag, node] : body) {
        if (tag != "keyword") continue;
        add_keyword(config, node.get("<xmlattr>.value", ""),
                    node.get("<xmlattr>.severity", ""), node.get("<xmlattr>.type", ""));
      }
    } else if (section == "nodes") {
      for (const auto& [tag, node] : body) {
        if (tag != "node") continue;
        auto id = node.get_optional<NodeId>("<xmlattr>.id");
        std::string name = node.get("<xmlattr>.name", "");
        if (!id || *id == 0 || name.empty()) {
          fail(ConfigError::Kind::kBadValue, "node entries need a name and an id >= 1");
        }
        config.node_name_map[name] = *id;
      }
    } else {
      config.ignored_sections.push_back(section);
    }
  }
  return config;
}

// One "key = value" per line; '#' starts a comment line.
Config load_flat(std::string_view document) {
  Config config;
  std::set<std::string> ignored;
  std::size_t lineno = 0;
  for (std::string_view raw : detail::split(document, '\n')) {
    ++lineno;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ConfigError::Kind::kMalformed,
           "config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    const std::string name = dot == std::string::npos ? "" : key.substr(dot + 1);
    if (section == "definition") {
      add_definition(config, name, value);
    } else if (section == "format") {
      if (name.empty() || value.empty()) {
        fail(ConfigError::Kind::kMalformed,
             "config line " + std::to_string(lineno) + ": format needs a name and a template");
      }
      config.formats.push_back({name, value});
    } else if (section == "keyword") {
      // keyword = SEVERITY | TYPE | text
      auto parts = detail::split(value, '|');
      if (parts.size() < 3) {
        fail(ConfigError::Kind::kMalformed,
             "config line " + std::to_string(lineno) + ": keyword = SEVERITY | TYPE | text");
      }
      std::string text(detail::trim(value.substr(parts[0].size() + parts[1].size() + 2)));
      add_keyword(config, std::move(text), parts[0], parts[1]);
    } else if (section == "node") {
      auto id = detail::parse_int<NodeId>(value);
      if (name.empty() || !id || *id == 0) {
        fail(ConfigError::Kind::kBadValue,
             "config line " + std::to_string(lineno) + ": node.<name> = <id >= 1>");
      }
      config.node_name_map[name] = *id;
    } else if (section == "database") {
      if (ignored.insert(section).second) config.ignored_sections.push_back(section);
    } else {
      fail(ConfigError::Kind::kMalformed,
           "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

}  // namespace

Config load_config(std::string_view document) {
  const std::string_view body = detail::trim(document);
  Config config = (!body.empty() && body.front() == '<') ? load_xml(body) : load_flat(body);
  validate(config);
  return config;
}

Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string to_flat_text(const Config& config) {
  std::ostringstream out;
  for (const Definition& d : config.definitions) {
    out << "definition." << d.name << " = " << d.pattern << '\n';
  }
  for (const Format& f : config.formats) {
    out << "format." << f.name << " = " << f.templ << '\n';
  }
  for (const Keyword& k : config.keywords) {
    out << "keyword = " << to_string(k.severity) << " | " << to_string(k.event_type)
        << " | " << k.text << '\n';
  }
  for (const auto& [name, id] : config.node_name_map) {
    out << "node." << name << " = " << id << '\n';
  }
  return out.str();
}

}  // namespace eventcorr
