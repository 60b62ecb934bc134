#include "biocnlf/cli/config.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace biocnlf::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    return out;
}

double plain_number(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
        throw ConfigError("invalid value for '" + key + "': '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& text)
{
    long long v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
        throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

std::string fmt_number(double v)
{
    // Power-of-two reciprocals print as fractions so they round-trip exactly.
    if (v > 0.0 && v < 1.0) {
        const double inv = 1.0 / v;
        const double r = std::round(inv);
        const auto n = static_cast<long long>(r);
        if (r == inv && r < 1e9 && (n & (n - 1)) == 0 && 1.0 / r == v) {
            return "1/" + std::to_string(n);
        }
    }
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "mode",  "nu",    "h",     "nx",    "ny",    "tau",     "tau-equals-h", "T",     "theta",
        "gamma", "g",     "U",     "alpha", "kappa", "problem", "startup",      "pressure-time",
        "every", "out",   "format", "seed"};
    return keys;
}

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::Convergence:
        return "convergence";
    case Mode::Stability:
        return "stability";
    case Mode::Single:
        return "single";
    }
    return "single";
}

double parse_number(const std::string& key, const std::string& raw)
{
    const std::string text = trim(raw);
    if (text.empty()) {
        throw ConfigError("empty value for '" + key + "'");
    }
    const auto slash = text.find('/');
    double v = 0.0;
    if (slash == std::string::npos) {
        v = plain_number(key, text);
    } else {
        const double num = plain_number(key, trim(text.substr(0, slash)));
        const double den = plain_number(key, trim(text.substr(slash + 1)));
        if (den == 0.0) {
            throw ConfigError("zero denominator for '" + key + "'");
        }
        v = num / den;
    }
    if (!std::isfinite(v)) {
        throw ConfigError("non-finite value for '" + key + "'");
    }
    return v;
}

void set_key(CliConfig& cfg, const std::string& key, const std::string& raw)
{
    const std::string value = trim(raw);
    if (key == "mode") {
        if (value == "convergence") {
            cfg.mode = Mode::Convergence;
        } else if (value == "stability") {
            cfg.mode = Mode::Stability;
        } else if (value == "single") {
            cfg.mode = Mode::Single;
        } else {
            throw ConfigError("invalid value for 'mode': '" + value + "' (convergence, stability or single)");
        }
    } else if (key == "nu") {
        try {
            cfg.params.nu = parse_viscosity_law(value);
        } catch (const std::exception& e) {
            throw ConfigError("invalid value for 'nu': " + std::string(e.what()));
        }
    } else if (key == "h") {
        std::vector<double> hs;
        for (const auto& part : split(value, ',')) {
            const double h = parse_number("h", part);
            if (!(h > 0.0)) {
                throw ConfigError("invalid value for 'h': mesh sizes must be positive");
            }
            hs.push_back(h);
        }
        if (hs.empty()) {
            throw ConfigError("empty value for 'h'");
        }
        cfg.h = std::move(hs);
    } else if (key == "nx" || key == "ny") {
        const long long n = parse_int(key, value);
        if (n < 0 || n > 1 << 20) {
            throw ConfigError("invalid value for '" + key + "'");
        }
        (key == "nx" ? cfg.nx : cfg.ny) = static_cast<int>(n);
    } else if (key == "tau") {
        cfg.tau = parse_number(key, value);
        if (cfg.tau < 0.0) {
            throw ConfigError("invalid value for 'tau': must be positive");
        }
    } else if (key == "tau-equals-h") {
        cfg.tau_equals_h = parse_bool(key, value);
    } else if (key == "T") {
        cfg.T = parse_number(key, value);
    } else if (key == "theta") {
        cfg.params.theta = parse_number(key, value);
    } else if (key == "gamma") {
        cfg.params.gamma = parse_number(key, value);
    } else if (key == "g") {
        cfg.params.g = parse_number(key, value);
    } else if (key == "U") {
        cfg.params.U = parse_number(key, value);
    } else if (key == "alpha") {
        cfg.params.alpha = parse_number(key, value);
    } else if (key == "kappa") {
        cfg.params.kappa = parse_number(key, value);
    } else if (key == "problem") {
        if (value == "manufactured") {
            cfg.problem = RunMode::Manufactured;
        } else if (value == "physical") {
            cfg.problem = RunMode::Physical;
        } else {
            throw ConfigError("invalid value for 'problem': '" + value + "' (manufactured or physical)");
        }
    } else if (key == "startup") {
        if (value == "backward_euler") {
            cfg.startup = Startup::BackwardEuler;
        } else if (value == "exact_first_step") {
            cfg.startup = Startup::ExactFirstStep;
        } else {
            throw ConfigError("invalid value for 'startup': '" + value + "' (backward_euler or exact_first_step)");
        }
    } else if (key == "pressure-time") {
        if (value == "final") {
            cfg.pressure_time = PressureReference::Final;
        } else if (value == "previous") {
            cfg.pressure_time = PressureReference::Previous;
        } else {
            throw ConfigError("invalid value for 'pressure-time': '" + value + "' (final or previous)");
        }
    } else if (key == "every") {
        const long long n = parse_int(key, value);
        if (n < 1) {
            throw ConfigError("invalid value for 'every': must be >= 1");
        }
        cfg.every = static_cast<int>(n);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "format") {
        if (value == "text") {
            cfg.format = OutputFormat::Text;
        } else if (value == "csv") {
            cfg.format = OutputFormat::Csv;
        } else {
            throw ConfigError("invalid value for 'format': '" + value + "' (text or csv)");
        }
    } else if (key == "seed") {
        const long long s = parse_int(key, value);
        if (s < 0) {
            throw ConfigError("invalid value for 'seed'");
        }
        cfg.seed = static_cast<unsigned long long>(s);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void apply_config_text(CliConfig& cfg, const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        set_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void validate(const CliConfig& cfg)
{
    try {
        cfg.params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.T > 0.0)) {
        throw ConfigError("invalid value for 'T': must be positive");
    }
    switch (cfg.mode) {
    case Mode::Convergence:
        if (cfg.h.size() < 2) {
            throw ConfigError("convergence mode needs at least two mesh sizes in 'h'");
        }
        if (cfg.tau > 0.0) {
            throw ConfigError("convergence mode uses tau = h; 'tau' cannot be set");
        }
        if (cfg.nx || cfg.ny) {
            throw ConfigError("convergence mode takes mesh sizes from 'h', not 'nx'/'ny'");
        }
        if (cfg.problem != RunMode::Manufactured) {
            throw ConfigError("convergence mode requires problem = manufactured");
        }
        break;
    case Mode::Stability:
        if (cfg.h.empty()) {
            throw ConfigError("stability mode needs at least one mesh size in 'h'");
        }
        if (cfg.tau > 0.0) {
            throw ConfigError("stability mode uses tau = h; 'tau' cannot be set");
        }
        if (cfg.nx || cfg.ny) {
            throw ConfigError("stability mode takes mesh sizes from 'h', not 'nx'/'ny'");
        }
        if (cfg.problem != RunMode::Manufactured) {
            throw ConfigError("stability mode requires problem = manufactured");
        }
        break;
    case Mode::Single:
        if (cfg.h.size() > 1) {
            throw ConfigError("single mode takes one mesh size");
        }
        if (cfg.h.empty() && (cfg.nx == 0 || cfg.ny == 0)) {
            throw ConfigError("single mode needs 'h' or both 'nx' and 'ny'");
        }
        if (!cfg.h.empty() && (cfg.nx || cfg.ny)) {
            throw ConfigError("'h' and 'nx'/'ny' are mutually exclusive");
        }
        if (cfg.tau_equals_h && cfg.tau > 0.0) {
            throw ConfigError("'tau' and 'tau-equals-h' are mutually exclusive");
        }
        if (cfg.tau == 0.0 && !cfg.tau_equals_h && cfg.h.empty()) {
            throw ConfigError("single mode with 'nx'/'ny' needs 'tau'");
        }
        break;
    }
    for (double h : cfg.h) {
        if (cfg.mode != Mode::Single || cfg.nx == 0) {
            try {
                (void)cells_for(h);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("invalid value for 'h': ") + e.what());
            }
        }
    }
    if (cfg.mode == Mode::Convergence) {
        try {
            require_halving(cfg.h);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid value for 'h': ") + e.what());
        }
    }
}

bool parse_config(int argc, const char* const* argv, CliConfig& cfg, std::string& help)
{
    CLI::App app{"Decoupled Crank-Nicolson Leap-Frog solver for bioconvection flows"};
    app.set_help_flag("--help", "Print this help message and exit");

    std::string config_file;
    app.add_option("--config", config_file, "Read `key = value` settings from FILE")->check(CLI::ExistingFile);

    struct Flag {
        std::string key;
        std::string value;
        CLI::Option* opt = nullptr;
    };
    const std::map<std::string, std::string> descriptions = {
        {"mode", "convergence | stability | single"},
        {"nu", "viscosity law: const:NU0 | affine:A:B | exp"},
        {"h", "comma-separated mesh sizes, fractions allowed (1/4,1/8)"},
        {"nx", "cells in x (single mode)"},
        {"ny", "cells in y (single mode)"},
        {"tau", "time step (single mode), fractions allowed"},
        {"T", "final time"},
        {"theta", "diffusivity"},
        {"gamma", "density ratio parameter"},
        {"g", "gravity"},
        {"U", "mean swimming speed"},
        {"alpha", "mean concentration"},
        {"kappa", "viscosity bound: nu must stay in [kappa, 1/kappa]"},
        {"problem", "manufactured | physical (single mode)"},
        {"startup", "backward_euler | exact_first_step"},
        {"pressure-time", "exact pressure used for errors: final | previous"},
        {"every", "diagnostics cadence in steps (single mode)"},
        {"out", "output path prefix"},
        {"format", "text | csv"},
        {"seed", "reserved"},
    };
    std::vector<Flag> flags;
    flags.reserve(config_keys().size());
    for (const auto& key : config_keys()) {
        if (key == "tau-equals-h") {
            continue;
        }
        flags.push_back({key, {}, nullptr});
        flags.back().opt = app.add_option("--" + key, flags.back().value, descriptions.at(key));
    }
    bool tau_eq_h = false;
    auto* tau_eq_opt = app.add_flag("--tau-equals-h", tau_eq_h, "use tau = h");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        help = app.help();
        return false;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) {
            throw ConfigError("cannot read config file '" + config_file + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        apply_config_text(cfg, buf.str());
    }
    for (const auto& f : flags) {
        if (f.opt->count() > 0) {
            set_key(cfg, f.key, f.value);
        }
    }
    if (tau_eq_opt->count() > 0) {
        cfg.tau_equals_h = tau_eq_h;
    }
    validate(cfg);
    return true;
}

std::string emit_config(const CliConfig& cfg)
{
    std::ostringstream os;
    const auto put = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
    put("mode", to_string(cfg.mode));
    put("nu", cfg.params.nu.to_string());
    if (!cfg.h.empty()) {
        std::string hs;
        for (std::size_t i = 0; i < cfg.h.size(); ++i) {
            hs += (i ? "," : "") + fmt_number(cfg.h[i]);
        }
        put("h", hs);
    }
    put("nx", std::to_string(cfg.nx));
    put("ny", std::to_string(cfg.ny));
    put("tau", fmt_number(cfg.tau));
    put("tau-equals-h", cfg.tau_equals_h ? "true" : "false");
    put("T", fmt_number(cfg.T));
    put("theta", fmt_number(cfg.params.theta));
    put("gamma", fmt_number(cfg.params.gamma));
    put("g", fmt_number(cfg.params.g));
    put("U", fmt_number(cfg.params.U));
    put("alpha", fmt_number(cfg.params.alpha));
    put("kappa", fmt_number(cfg.params.kappa));
    put("problem", cfg.problem == RunMode::Physical ? "physical" : "manufactured");
    put("startup", cfg.startup == Startup::ExactFirstStep ? "exact_first_step" : "backward_euler");
    put("pressure-time", cfg.pressure_time == PressureReference::Previous ? "previous" : "final");
    put("every", std::to_string(cfg.every));
    if (!cfg.out.empty()) {
        put("out", cfg.out);
    }
    put("format", cfg.format == OutputFormat::Csv ? "csv" : "text");
    put("seed", std::to_string(cfg.seed));
    return os.str();
}

RunConfig run_config(const CliConfig& cfg, double h)
{
    RunConfig rc;
    rc.params = cfg.params;
    rc.T_final = cfg.T;
    rc.mode = cfg.problem;
    rc.startup = cfg.startup;
    rc.diagnostics_every = cfg.every;
    if (cfg.nx > 0) {
        rc.nx = cfg.nx;
        rc.ny = cfg.ny;
    } else {
        rc.nx = rc.ny = cells_for(h);
    }
    if (cfg.tau > 0.0) {
        rc.tau = cfg.tau;
    } else {
        rc.tau = h > 0.0 ? h : 1.0 / std::max(rc.nx, rc.ny);
    }
    return rc;
}

} // namespace biocnlf::cli
