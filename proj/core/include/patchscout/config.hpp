#pragma once

#include <cstdint>
#include <string>

namespace patchscout {

enum class BoundaryPolicy {
    // Prefer boundary lines where no syntax node starts (blank lines,
    // closing braces), then deeper nodes. The default.
    Argmax,
    // Prefer boundary lines where the shallowest node starts; lines where
    // nothing starts rank worst.
    Argmin,
};

BoundaryPolicy boundary_policy_from_string(const std::string& name);
std::string to_string(BoundaryPolicy policy);

// Knobs shared by the context pipeline, the trainer and the CLI. Defaults
// are the shipped operating point; every field can be overridden from a
// config file (JSON or flat TOML) or a command-line flag.
struct Config {
    int window = 2048;            // total token budget per document
    int max_width = 5;            // max context width per hunk boundary
    int max_message_size = 256;   // token budget for the commit message
    double positive_weight = 10.0;
    double learning_rate = 1e-4;
    int epochs = 10;
    BoundaryPolicy boundary_policy = BoundaryPolicy::Argmax;

    int batch_size = 32;
    int encoder_dim = 4096;
    uint64_t seed = 1;
    int threads = 1;

    // Budget left for code once the message took its share.
    int max_code_size() const { return window - max_message_size; }
};

// Reads `path` and overlays the values found there onto `base`. Files
// starting with '{' are parsed as JSON; anything else as flat `key = value`
// TOML (strings, numbers, booleans, comments with '#'). Unknown keys are
// rejected so typos fail loudly.
Config load_config(const std::string& path, const Config& base = Config{});

Config parse_config_text(const std::string& text, const Config& base = Config{},
                         const std::string& origin = "<config>");

} // namespace patchscout
