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

#ifndef OPTKIT_CONFIG_HPP
#define OPTKIT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optkit {

/**
 * Flat key/value experiment configuration.
 *
 * One `key = value` pair per line, dotted keys (`optimizer.gamma`), `#`
 * starts a comment. Later assignments replace earlier ones, so command-line
 * overrides applied after loading win. Typed getters throw ConfigError
 * naming the key.
 */
class Config {
public:
    Config() = default;

    static Config parse(std::string_view text, const std::string& source = "<string>");
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    /// Parses "key=value" and sets it.
    void apply_override(std::string_view assignment);
    void erase(const std::string& key);

    bool has(const std::string& key) const;
    std::optional<std::string> raw(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::optional<double> get_optional_double(const std::string& key) const;
    /// Comma-separated list of reals.
    std::optional<std::vector<double>> get_double_list(const std::string& key) const;
    std::optional<std::vector<std::uint64_t>> get_uint_list(const std::string& key) const;

    /// Throws ConfigError for the first key not in `known`.
    void require_known(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace optkit

#endif  // OPTKIT_CONFIG_HPP
