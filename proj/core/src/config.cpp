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

#include "ritz/config.hpp"

#include "ritz/errors.hpp"
#include "ritz/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace ritz {

bool ConfigValue::as_bool() const
{
    if (!is_bool()) {
        throw ConfigError("expected a boolean value");
    }
    return std::get<bool>(v_);
}

double ConfigValue::as_double() const
{
    if (!is_number()) {
        throw ConfigError("expected a numeric value");
    }
    return std::get<double>(v_);
}

long long ConfigValue::as_int() const
{
    const double d = as_double();
    const double r = std::round(d);
    if (std::abs(d - r) > 1e-9 || std::abs(r) > 9.0e15) {
        throw ConfigError("expected an integer value");
    }
    return static_cast<long long>(r);
}

const std::string& ConfigValue::as_string() const
{
    if (!is_string()) {
        throw ConfigError("expected a string value");
    }
    return std::get<std::string>(v_);
}

const ConfigValue::List& ConfigValue::as_list() const
{
    if (!is_list()) {
        throw ConfigError("expected a list value");
    }
    return std::get<List>(v_);
}

const ConfigValue::Table& ConfigValue::as_table() const
{
    if (!is_table()) {
        throw ConfigError("expected a table value");
    }
    return std::get<Table>(v_);
}

ConfigValue::List ConfigValue::as_list_or_scalar() const
{
    if (is_list()) {
        return as_list();
    }
    return List{*this};
}

namespace {

    bool needs_quotes(const std::string& s)
    {
        if (s.empty()) {
            return true;
        }
        for (char c : s) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'
                  || c == '/' || c == ':')) {
                return true;
            }
        }
        // bare words that would parse as something else
        if (s == "true" || s == "false") {
            return true;
        }
        double probe = 0.0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), probe);
        return ec == std::errc() && p == s.data() + s.size();
    }

} // namespace

std::string ConfigValue::serialize() const
{
    if (is_bool()) {
        return as_bool() ? "true" : "false";
    }
    if (is_number()) {
        return format_double(as_double());
    }
    if (is_string()) {
        const std::string& s = as_string();
        return needs_quotes(s) ? "\"" + s + "\"" : s;
    }
    if (is_list()) {
        std::string out = "[";
        const List& list = as_list();
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            out += list[i].serialize();
        }
        return out + "]";
    }
    std::string out = "{";
    bool first = true;
    for (const auto& [key, value] : as_table()) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += key + ":" + value.serialize();
    }
    return out + "}";
}

namespace {

    struct Cursor {
        std::string_view text;
        std::size_t pos = 0;
        int line = 1;

        bool done() const { return pos >= text.size(); }
        char peek() const { return text[pos]; }
        char take() { return text[pos++]; }
        void skip_blank()
        {
            while (!done() && (peek() == ' ' || peek() == '\t')) {
                ++pos;
            }
        }
        [[noreturn]] void fail(const std::string& what) const
        {
            throw ConfigError("config line " + std::to_string(line) + ": " + what);
        }
    };

    std::string parse_bare_token(Cursor& c, std::string_view stoppers)
    {
        std::string token;
        while (!c.done() && c.peek() != '\n' && stoppers.find(c.peek()) == std::string_view::npos) {
            token += c.take();
        }
        while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) {
            token.pop_back();
        }
        return token;
    }

    ConfigValue scalar_from_token(Cursor& c, const std::string& token)
    {
        if (token.empty()) {
            c.fail("empty value");
        }
        if (token == "true") {
            return ConfigValue(true);
        }
        if (token == "false") {
            return ConfigValue(false);
        }
        double number = 0.0;
        const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
        if (ec == std::errc() && p == token.data() + token.size()) {
            return ConfigValue(number);
        }
        return ConfigValue(token); // bare word
    }

    std::string parse_quoted(Cursor& c)
    {
        c.take(); // opening quote
        std::string s;
        while (!c.done() && c.peek() != '"' && c.peek() != '\n') {
            s += c.take();
        }
        if (c.done() || c.peek() != '"') {
            c.fail("unterminated string");
        }
        c.take();
        return s;
    }

    ConfigValue parse_value(Cursor& c, std::string_view stoppers);

    ConfigValue parse_inline_table(Cursor& c)
    {
        c.take(); // '{'
        ConfigValue::Table table;
        c.skip_blank();
        if (!c.done() && c.peek() == '}') {
            c.take();
            return ConfigValue(std::move(table));
        }
        while (true) {
            c.skip_blank();
            std::string key;
            while (!c.done()
                   && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_')) {
                key += c.take();
            }
            if (key.empty()) {
                c.fail("expected a key inside {...}");
            }
            c.skip_blank();
            if (c.done() || (c.peek() != ':' && c.peek() != '=')) {
                c.fail("expected ':' after key '" + key + "'");
            }
            c.take();
            c.skip_blank();
            table[key] = parse_value(c, ",}");
            c.skip_blank();
            if (c.done()) {
                c.fail("unterminated inline table");
            }
            const char sep = c.take();
            if (sep == '}') {
                break;
            }
            if (sep != ',') {
                c.fail("expected ',' or '}' in inline table");
            }
        }
        return ConfigValue(std::move(table));
    }

    ConfigValue parse_bracket_list(Cursor& c)
    {
        c.take(); // '['
        ConfigValue::List list;
        c.skip_blank();
        if (!c.done() && c.peek() == ']') {
            c.take();
            return ConfigValue(std::move(list));
        }
        while (true) {
            c.skip_blank();
            list.push_back(parse_value(c, ",]"));
            c.skip_blank();
            if (c.done()) {
                c.fail("unterminated list");
            }
            const char sep = c.take();
            if (sep == ']') {
                break;
            }
            if (sep != ',') {
                c.fail("expected ',' or ']' in list");
            }
        }
        return ConfigValue(std::move(list));
    }

    ConfigValue parse_value(Cursor& c, std::string_view stoppers)
    {
        c.skip_blank();
        if (c.done() || c.peek() == '\n') {
            c.fail("missing value");
        }
        if (c.peek() == '"') {
            return ConfigValue(parse_quoted(c));
        }
        if (c.peek() == '{') {
            return parse_inline_table(c);
        }
        if (c.peek() == '[') {
            return parse_bracket_list(c);
        }
        return scalar_from_token(c, parse_bare_token(c, stoppers));
    }

    /// Top-level values may be bare comma lists: widths = 8,16,32
    ConfigValue parse_line_value(Cursor& c)
    {
        ConfigValue first = parse_value(c, ",#");
        c.skip_blank();
        if (c.done() || c.peek() != ',') {
            return first;
        }
        ConfigValue::List list{std::move(first)};
        while (!c.done() && c.peek() == ',') {
            c.take();
            list.push_back(parse_value(c, ",#"));
            c.skip_blank();
        }
        return ConfigValue(std::move(list));
    }

} // namespace

Config Config::parse(std::string_view text)
{
    Config config;
    Cursor c{text};
    std::string section;
    while (!c.done()) {
        c.skip_blank();
        if (c.done()) {
            break;
        }
        if (c.peek() == '\n') {
            c.take();
            ++c.line;
            continue;
        }
        if (c.peek() == '#') {
            while (!c.done() && c.peek() != '\n') {
                c.take();
            }
            continue;
        }
        if (c.peek() == '[') {
            c.take();
            section.clear();
            while (!c.done() && c.peek() != ']' && c.peek() != '\n') {
                section += c.take();
            }
            if (c.done() || c.peek() != ']') {
                c.fail("unterminated [section]");
            }
            c.take();
            if (section.empty()) {
                c.fail("empty section name");
            }
            continue;
        }
        std::string key;
        while (!c.done()
               && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_')) {
            key += c.take();
        }
        if (key.empty()) {
            c.fail(std::string("unexpected character '") + c.peek() + "'");
        }
        c.skip_blank();
        if (c.done() || c.peek() != '=') {
            c.fail("expected '=' after key '" + key + "'");
        }
        c.take();
        ConfigValue value = parse_line_value(c);
        c.skip_blank();
        if (!c.done() && c.peek() == '#') {
            while (!c.done() && c.peek() != '\n') {
                c.take();
            }
        }
        if (!c.done() && c.peek() != '\n') {
            c.fail("trailing characters after value for key '" + key + "'");
        }
        config.set(section.empty() ? key : section + "." + key, std::move(value));
    }
    return config;
}

Config Config::parse_file(const std::filesystem::path& path)
{
    return parse(read_text_file(path));
}

bool Config::has(std::string_view dotted_key) const
{
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos) {
        return root_.count(std::string(dotted_key)) > 0;
    }
    const auto it = root_.find(std::string(dotted_key.substr(0, dot)));
    if (it == root_.end() || !it->second.is_table()) {
        return false;
    }
    return it->second.as_table().count(std::string(dotted_key.substr(dot + 1))) > 0;
}

const ConfigValue& Config::get(std::string_view dotted_key) const
{
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos) {
        const auto it = root_.find(std::string(dotted_key));
        if (it == root_.end()) {
            throw ConfigError("missing config key '" + std::string(dotted_key) + "'");
        }
        return it->second;
    }
    const auto it = root_.find(std::string(dotted_key.substr(0, dot)));
    if (it == root_.end() || !it->second.is_table()) {
        throw ConfigError("missing config section '" + std::string(dotted_key.substr(0, dot))
                          + "'");
    }
    const auto& table = it->second.as_table();
    const auto inner = table.find(std::string(dotted_key.substr(dot + 1)));
    if (inner == table.end()) {
        throw ConfigError("missing config key '" + std::string(dotted_key) + "'");
    }
    return inner->second;
}

double Config::get_double(std::string_view key, double fallback) const
{
    return has(key) ? get(key).as_double() : fallback;
}

long long Config::get_int(std::string_view key, long long fallback) const
{
    return has(key) ? get(key).as_int() : fallback;
}

bool Config::get_bool(std::string_view key, bool fallback) const
{
    return has(key) ? get(key).as_bool() : fallback;
}

std::string Config::get_string(std::string_view key, std::string fallback) const
{
    return has(key) ? get(key).as_string() : fallback;
}

std::vector<double> Config::get_doubles(std::string_view key) const
{
    std::vector<double> out;
    for (const ConfigValue& v : get(key).as_list_or_scalar()) {
        out.push_back(v.as_double());
    }
    return out;
}

void Config::set(std::string_view dotted_key, ConfigValue value)
{
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos) {
        root_[std::string(dotted_key)] = std::move(value);
        return;
    }
    const std::string section(dotted_key.substr(0, dot));
    auto it = root_.find(section);
    if (it == root_.end()) {
        it = root_.emplace(section, ConfigValue(ConfigValue::Table{})).first;
    }
    if (!it->second.is_table()) {
        throw ConfigError("config key '" + section + "' is not a section");
    }
    ConfigValue::Table table = it->second.as_table();
    table[std::string(dotted_key.substr(dot + 1))] = std::move(value);
    it->second = ConfigValue(std::move(table));
}

std::string Config::serialize() const
{
    std::string out;
    // top-level scalars first (std::map keeps keys sorted)
    for (const auto& [key, value] : root_) {
        if (!value.is_table()) {
            out += key + " = " + value.serialize() + "\n";
        }
    }
    for (const auto& [key, value] : root_) {
        if (value.is_table()) {
            out += "[" + key + "]\n";
            for (const auto& [inner_key, inner] : value.as_table()) {
                out += inner_key + " = " + inner.serialize() + "\n";
            }
        }
    }
    return out;
}

void Config::require_known_keys(const std::set<std::string>& allowed) const
{
    for (const auto& [key, value] : root_) {
        if (!value.is_table()) {
            if (allowed.count(key) == 0) {
                throw ConfigError("unknown config key '" + key + "'");
            }
            continue;
        }
        for (const auto& [inner_key, inner] : value.as_table()) {
            const std::string dotted = key + "." + inner_key;
            if (allowed.count(dotted) == 0) {
                throw ConfigError("unknown config key '" + dotted + "'");
            }
        }
    }
}

Domain parse_domain(const ConfigValue& value)
{
    const auto& table = value.as_table();
    const auto field = [&](const char* name) -> const ConfigValue& {
        const auto it = table.find(name);
        if (it == table.end()) {
            throw ConfigError(std::string("domain table is missing '") + name + "'");
        }
        return it->second;
    };
    const std::string kind = field("kind").as_string();
    if (kind == "interval") {
        return Domain::interval(field("a").as_double(), field("b").as_double());
    }
    if (kind == "hypercube") {
        return Domain::hypercube(field("a").as_double(), field("b").as_double(),
                                 static_cast<int>(field("dim").as_int()));
    }
    if (kind == "ball") {
        const int dim = static_cast<int>(field("dim").as_int());
        std::vector<double> center(dim, 0.0);
        if (table.count("center") > 0) {
            const auto& list = table.at("center").as_list();
            if (static_cast<int>(list.size()) != dim) {
                throw ConfigError("ball center length does not match dim");
            }
            for (int k = 0; k < dim; ++k) {
                center[k] = list[k].as_double();
            }
        }
        return Domain::ball(std::move(center), field("radius").as_double());
    }
    throw ConfigError("unknown domain kind '" + kind + "'");
}

ConfigValue domain_to_config(const Domain& domain)
{
    ConfigValue::Table table;
    switch (domain.kind()) {
    case DomainKind::Interval:
        table["kind"] = ConfigValue(std::string("interval"));
        table["a"] = ConfigValue(domain.lo());
        table["b"] = ConfigValue(domain.hi());
        break;
    case DomainKind::Hypercube:
        table["kind"] = ConfigValue(std::string("hypercube"));
        table["a"] = ConfigValue(domain.lo());
        table["b"] = ConfigValue(domain.hi());
        table["dim"] = ConfigValue(static_cast<double>(domain.dim()));
        break;
    case DomainKind::Ball: {
        table["kind"] = ConfigValue(std::string("ball"));
        table["dim"] = ConfigValue(static_cast<double>(domain.dim()));
        table["radius"] = ConfigValue(domain.radius());
        ConfigValue::List center;
        for (double c : domain.center()) {
            center.push_back(ConfigValue(c));
        }
        table["center"] = ConfigValue(std::move(center));
        break;
    }
    }
    return ConfigValue(std::move(table));
}

} // namespace ritz
