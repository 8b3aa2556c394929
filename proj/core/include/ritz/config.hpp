// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#ifndef RITZ_CONFIG_HPP
#define RITZ_CONFIG_HPP

#include "ritz/geometry.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ritz {

/// Values of the run-configuration grammar:
///
///   # comment
///   seed = 7
///   [solve]
///   case = poisson_1d_sine
///   widths = 8,16,32
///   domain = {kind:"hypercube", a:0, b:1, dim:2}
///
/// Scalars are bool/number/string (bare words read as strings), lists are
/// comma-separated or bracketed, inline tables nest one level.
class ConfigValue {
public:
    using List = std::vector<ConfigValue>;
    using Table = std::map<std::string, ConfigValue>;

    ConfigValue() : v_(0.0) {}
    ConfigValue(bool b) : v_(b) {}
    ConfigValue(double d) : v_(d) {}
    ConfigValue(std::string s) : v_(std::move(s)) {}
    ConfigValue(List l) : v_(std::move(l)) {}
    ConfigValue(Table t) : v_(std::move(t)) {}

    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_list() const { return std::holds_alternative<List>(v_); }
    bool is_table() const { return std::holds_alternative<Table>(v_); }

    bool as_bool() const;
    double as_double() const;
    long long as_int() const;
    const std::string& as_string() const;
    const List& as_list() const;
    const Table& as_table() const;

    /// Scalars promote to one-element lists; lists pass through.
    List as_list_or_scalar() const;

    std::string serialize() const;

private:
    std::variant<bool, double, std::string, List, Table> v_;
};

class Config {
public:
    Config() = default;

    static Config parse(std::string_view text);
    static Config parse_file(const std::filesystem::path& path);

    bool has(std::string_view dotted_key) const;
    const ConfigValue& get(std::string_view dotted_key) const;

    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;
    std::string get_string(std::string_view key, std::string fallback) const;
    std::vector<double> get_doubles(std::string_view key) const;

    /// Sets (or overwrites) a dotted key; creates the section on demand.
    void set(std::string_view dotted_key, ConfigValue value);

    /// Canonical text: sorted top-level scalars, then sorted [sections].
    /// A run's fully-resolved echo of this form reproduces the run.
    std::string serialize() const;

    /// Rejects keys outside the allowed sets (dotted form); throws
    /// ConfigError naming the first offender.
    void require_known_keys(const std::set<std::string>& allowed) const;

    const ConfigValue::Table& root() const { return root_; }

private:
    ConfigValue::Table root_;
};

/// domain = {kind:"interval"|"hypercube"|"ball", ...} → Domain.
Domain parse_domain(const ConfigValue& value);
ConfigValue domain_to_config(const Domain& domain);

} // namespace ritz

#endif // RITZ_CONFIG_HPP
