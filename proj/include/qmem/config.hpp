#pragma once

// Flat key = value configuration with '#' comments. Files parse with line
// numbers so errors point at the offending line; command-line overrides win
// over file values. Every subcommand declares its keys in a schema (name,
// type, default, help text with units) and unknown keys or type mismatches
// are ConfigError (CLI exit code 2).

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmem {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KeySpec {
    enum class Type { Double, Int, Uint64, Bool, String };
    std::string key;
    Type type = Type::Double;
    std::string default_value;
    std::string help;  // include units
};

using Schema = std::vector<KeySpec>;

class Config {
  public:
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + trimmed + "'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
            entries_[key] = {value, path + ":" + std::to_string(lineno)};
        }
        source_ = path;
    }

    // "key=value" from the command line; overrides file values
    void set_override(const std::string& kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + kv + "' is not of the form key=value");
        entries_[trim(kv.substr(0, eq))] = {trim(kv.substr(eq + 1)), "command line"};
    }

    void validate(const Schema& schema) const {
        for (const auto& [key, entry] : entries_) {
            bool known = false;
            for (const auto& spec : schema)
                if (spec.key == key) {
                    known = true;
                    break;
                }
            if (!known)
                throw ConfigError("unknown config key '" + key + "' (" + entry.where + ")");
        }
        for (const auto& spec : schema) parse_checked(spec);  // type check everything
    }

    double get_double(const Schema& schema, const std::string& key) const {
        return std::get<0>(parse_checked(find(schema, key)));
    }
    long long get_int(const Schema& schema, const std::string& key) const {
        return std::get<1>(parse_checked(find(schema, key)));
    }
    std::uint64_t get_uint64(const Schema& schema, const std::string& key) const {
        return std::get<2>(parse_checked(find(schema, key)));
    }
    bool get_bool(const Schema& schema, const std::string& key) const {
        return std::get<3>(parse_checked(find(schema, key)));
    }
    std::string get_string(const Schema& schema, const std::string& key) const {
        return std::get<4>(parse_checked(find(schema, key)));
    }

    // comma-separated list of numbers
    std::vector<double> get_list(const Schema& schema, const std::string& key) const {
        const std::string raw = get_string(schema, key);
        std::vector<double> out;
        std::stringstream ss(raw);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                std::size_t used = 0;
                out.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ConfigError("key '" + key + "': '" + tok + "' is not a number (" +
                                  where(key) + ")");
            }
        }
        if (out.empty()) throw ConfigError("key '" + key + "': empty list");
        return out;
    }

    // resolved (key, value) pairs for the run manifest
    std::map<std::string, std::string> resolved(const Schema& schema) const {
        std::map<std::string, std::string> out;
        for (const auto& spec : schema) {
            auto it = entries_.find(spec.key);
            out[spec.key] = (it != entries_.end()) ? it->second.value : spec.default_value;
        }
        return out;
    }

    static std::string help_text(const Schema& schema) {
        std::ostringstream os;
        os << "Config keys (file 'key = value' lines or --set key=value):\n";
        for (const auto& spec : schema) {
            os << "  " << spec.key;
            if (!spec.default_value.empty()) os << " [default " << spec.default_value << "]";
            os << "\n      " << spec.help << "\n";
        }
        return os.str();
    }

  private:
    struct Entry {
        std::string value;
        std::string where;
    };
    std::map<std::string, Entry> entries_;
    std::string source_;

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    const KeySpec& find(const Schema& schema, const std::string& key) const {
        for (const auto& spec : schema)
            if (spec.key == key) return spec;
        throw std::logic_error("schema has no key '" + key + "'");
    }

    std::string where(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? "default" : it->second.where;
    }

    std::tuple<double, long long, std::uint64_t, bool, std::string> parse_checked(
        const KeySpec& spec) const {
        auto it = entries_.find(spec.key);
        const std::string raw = (it != entries_.end()) ? it->second.value : spec.default_value;
        const std::string loc = where(spec.key);
        std::tuple<double, long long, std::uint64_t, bool, std::string> out{};
        try {
            std::size_t used = 0;
            switch (spec.type) {
                case KeySpec::Type::Double:
                    std::get<0>(out) = std::stod(raw, &used);
                    if (used != raw.size()) throw std::invalid_argument(raw);
                    break;
                case KeySpec::Type::Int:
                    std::get<1>(out) = std::stoll(raw, &used);
                    if (used != raw.size()) throw std::invalid_argument(raw);
                    break;
                case KeySpec::Type::Uint64:
                    std::get<2>(out) = std::stoull(raw, &used);
                    if (used != raw.size()) throw std::invalid_argument(raw);
                    break;
                case KeySpec::Type::Bool:
                    if (raw == "true" || raw == "1")
                        std::get<3>(out) = true;
                    else if (raw == "false" || raw == "0")
                        std::get<3>(out) = false;
                    else
                        throw std::invalid_argument(raw);
                    break;
                case KeySpec::Type::String:
                    std::get<4>(out) = raw;
                    break;
            }
        } catch (const std::exception&) {
            static const char* names[] = {"number", "integer", "unsigned integer",
                                          "bool (true/false)", "string"};
            throw ConfigError("key '" + spec.key + "': value '" + raw + "' is not a " +
                              names[static_cast<int>(spec.type)] + " (" + loc + ")");
        }
        return out;
    }
};

}  // namespace qmem
