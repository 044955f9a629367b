// Copyright 2026 The optkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "optkit/error.hpp"

namespace optkit {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool valid_key(std::string_view key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') {
        return false;
    }
    return std::all_of(key.begin(), key.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '.';
    });
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError("config key '" + key + "': expected a real number, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" +
                          text + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
    Config cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (!valid_key(key)) {
            throw ConfigError(where + ": invalid key '" + key + "'");
        }
        cfg.entries_[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) {
        throw ConfigError("invalid key '" + key + "'");
    }
    entries_[key] = value;
}

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::erase(const std::string& key) { entries_.erase(key); }

bool Config::has(const std::string& key) const { return entries_.contains(key); }

std::optional<std::string> Config::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto v = raw(key);
    return v ? parse_double(key, *v) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    const auto v = raw(key);
    return v ? parse_uint(key, *v) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto v = raw(key);
    if (!v) {
        return fallback;
    }
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") {
        return true;
    }
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") {
        return false;
    }
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::optional<double> Config::get_optional_double(const std::string& key) const {
    const auto v = raw(key);
    if (!v) {
        return std::nullopt;
    }
    return parse_double(key, *v);
}

std::optional<std::vector<double>> Config::get_double_list(const std::string& key) const {
    const auto v = raw(key);
    if (!v) {
        return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& item : split_list(*v)) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw ConfigError("config key '" + key + "': empty list");
    }
    return out;
}

std::optional<std::vector<std::uint64_t>> Config::get_uint_list(const std::string& key) const {
    const auto v = raw(key);
    if (!v) {
        return std::nullopt;
    }
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(*v)) {
        out.push_back(parse_uint(key, item));
    }
    if (out.empty()) {
        throw ConfigError("config key '" + key + "': empty list");
    }
    return out;
}

void Config::require_known(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : entries_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

}  // namespace optkit
