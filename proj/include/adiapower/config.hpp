#pragma once

#include "adiapower/propagator.hpp"

#include <stdexcept>
#include <string>

namespace adiapower {

/// Raised for unreadable, malformed, or physically invalid configuration.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Output plumbing attached to a scenario.
struct OutputOptions {
    std::string directory = ".";
    bool svg = false;
    bool emit_diagnostics = true;
};

/// A scenario plus output options, as read from a JSON config file.
struct ConfigDocument {
    Scenario scenario;
    OutputOptions output;
};

/// Parse a config from JSON text. Parsing is strict: an unknown key anywhere
/// is a config_error naming that key, and all physical fields are validated.
ConfigDocument parse_config(const std::string& json_text);

/// Read and parse a config file; config_error on unreadable paths.
ConfigDocument load_config(const std::string& path);

/// Serialize with every field explicit; parse_config(write_config(d))
/// reproduces d.
std::string write_config(const ConfigDocument& doc);

} // namespace adiapower
