#pragma once

#include "biocnlf/scheme.hpp"
#include "biocnlf/verification.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace biocnlf::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { Convergence, Stability, Single };
enum class OutputFormat { Text, Csv };

struct CliConfig {
    Mode mode = Mode::Single;
    ModelParams params;
    /// Mesh sizes for the studies (or a single entry for `single`).
    std::vector<double> h;
    /// Explicit resolution for `single`; 0 means "take it from h".
    int nx = 0;
    int ny = 0;
    /// Time step; 0 means "tau = h".
    double tau = 0.0;
    bool tau_equals_h = false;
    double T = 1.0;
    RunMode problem = RunMode::Manufactured;
    Startup startup = Startup::BackwardEuler;
    PressureReference pressure_time = PressureReference::Final;
    int every = 1;
    /// Output path prefix; empty writes tables to stdout only.
    std::string out;
    OutputFormat format = OutputFormat::Text;
    /// Reserved; no stochastic features use it yet.
    unsigned long long seed = 0;

    friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Keys accepted in config files; flags use the same names with `--`.
[[nodiscard]] const std::vector<std::string>& config_keys();

/// Parses `1/128`, `0.25` or `2` exactly as written.
[[nodiscard]] double parse_number(const std::string& key, const std::string& text);

/// Assigns one key. Throws ConfigError naming the key for unknown keys or
/// malformed values.
void set_key(CliConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` text; `#` starts a comment.
void apply_config_text(CliConfig& cfg, const std::string& text);

/// Checks cross-field consistency (mode against arguments, finite parameters).
void validate(const CliConfig& cfg);

/// Parses argv. `--config FILE` is read first and explicit flags override it.
/// Returns false when help was printed.
[[nodiscard]] bool parse_config(int argc, const char* const* argv, CliConfig& cfg, std::string& help);

/// Serializes every key so that apply_config_text reproduces `cfg`.
[[nodiscard]] std::string emit_config(const CliConfig& cfg);

/// The run configuration for one mesh size.
[[nodiscard]] RunConfig run_config(const CliConfig& cfg, double h);

[[nodiscard]] std::string to_string(Mode m);

} // namespace biocnlf::cli
