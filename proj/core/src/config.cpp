#include "patchscout/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "patchscout/errors.hpp"

namespace patchscout {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Accepts the flat subset of TOML the config actually needs: one
// `key = value` per line, '#' comments, bare/quoted strings, ints, floats,
// booleans. Produces the same json object shape the JSON path yields.
json parse_flat_toml(const std::string& text, const std::string& origin) {
    json obj = json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": expected 'key = value'");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        size_t hash = value.find('#');
        if (hash != std::string::npos && (value.empty() || value[0] != '"')) {
            value = trim(value.substr(0, hash));
        }
        if (key.empty() || value.empty()) {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": empty key or value");
        }
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            obj[key] = value.substr(1, value.size() - 2);
        } else if (value == "true" || value == "false") {
            obj[key] = (value == "true");
        } else {
            try {
                if (value.find_first_of(".eE") != std::string::npos) {
                    obj[key] = std::stod(value);
                } else {
                    obj[key] = static_cast<int64_t>(std::stoll(value));
                }
            } catch (const std::exception&) {
                // Unquoted non-numeric value; treat as a bare string.
                obj[key] = value;
            }
        }
    }
    return obj;
}

int require_int(const json& v, const std::string& key, const std::string& origin) {
    if (v.is_number_integer()) return static_cast<int>(v.get<int64_t>());
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == static_cast<int64_t>(d)) return static_cast<int>(d);
    }
    throw ParseError(origin + ": key '" + key + "' must be an integer");
}

double require_number(const json& v, const std::string& key, const std::string& origin) {
    if (v.is_number()) return v.get<double>();
    throw ParseError(origin + ": key '" + key + "' must be a number");
}

} // namespace

BoundaryPolicy boundary_policy_from_string(const std::string& name) {
    if (name == "argmax") return BoundaryPolicy::Argmax;
    if (name == "argmin") return BoundaryPolicy::Argmin;
    throw ParseError("unknown boundary policy '" + name + "' (expected argmax or argmin)");
}

std::string to_string(BoundaryPolicy policy) {
    return policy == BoundaryPolicy::Argmax ? "argmax" : "argmin";
}

Config parse_config_text(const std::string& text, const Config& base,
                         const std::string& origin) {
    json obj;
    std::string stripped = trim(text);
    if (!stripped.empty() && stripped[0] == '{') {
        try {
            obj = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(origin + ": " + e.what());
        }
        if (!obj.is_object()) throw ParseError(origin + ": top level must be an object");
    } else {
        obj = parse_flat_toml(text, origin);
    }

    Config cfg = base;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "window") cfg.window = require_int(v, key, origin);
        else if (key == "max_width") cfg.max_width = require_int(v, key, origin);
        else if (key == "max_message_size") cfg.max_message_size = require_int(v, key, origin);
        else if (key == "positive_weight") cfg.positive_weight = require_number(v, key, origin);
        else if (key == "learning_rate") cfg.learning_rate = require_number(v, key, origin);
        else if (key == "epochs") cfg.epochs = require_int(v, key, origin);
        else if (key == "batch_size") cfg.batch_size = require_int(v, key, origin);
        else if (key == "encoder_dim") cfg.encoder_dim = require_int(v, key, origin);
        else if (key == "seed") cfg.seed = static_cast<uint64_t>(require_int(v, key, origin));
        else if (key == "threads") cfg.threads = require_int(v, key, origin);
        else if (key == "boundary_policy") {
            if (!v.is_string()) throw ParseError(origin + ": boundary_policy must be a string");
            cfg.boundary_policy = boundary_policy_from_string(v.get<std::string>());
        } else {
            throw ParseError(origin + ": unknown config key '" + key + "'");
        }
    }

    if (cfg.window <= 0) throw ValidationError(origin + ": window must be positive");
    if (cfg.max_width < 0) throw ValidationError(origin + ": max_width must be >= 0");
    if (cfg.max_message_size < 0 || cfg.max_message_size >= cfg.window) {
        throw ValidationError(origin + ": max_message_size must be in [0, window)");
    }
    if (cfg.epochs < 0) throw ValidationError(origin + ": epochs must be >= 0");
    if (cfg.batch_size <= 0) throw ValidationError(origin + ": batch_size must be positive");
    if (cfg.encoder_dim <= 0) throw ValidationError(origin + ": encoder_dim must be positive");
    if (cfg.threads <= 0) throw ValidationError(origin + ": threads must be positive");
    return cfg;
}

Config load_config(const std::string& path, const Config& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LookupError("config file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base, path);
}

} // namespace patchscout
