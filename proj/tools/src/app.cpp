#include "biocnlf/cli/app.hpp"

#include "biocnlf/cli/config.hpp"
#include "biocnlf/cli/tables.hpp"

#include <exception>
#include <ostream>
#include <sstream>

namespace biocnlf::cli {

namespace {

// Prints the table and, with an output prefix, also writes it as CSV.
template <class Rows>
void publish(const Rows& rows, const CliConfig& cfg, const std::string& suffix, std::ostream& out)
{
    emit_tables(rows, cfg.format, out);
    if (!cfg.out.empty()) {
        std::ostringstream csv;
        emit_tables(rows, OutputFormat::Csv, csv);
        write_file(cfg.out + suffix, csv.str());
    }
}

int run_convergence(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    StudyOptions opts;
    opts.pressure_reference = cfg.pressure_time;
    const StudyResult res = convergence_study(cfg.h, run_config(cfg, cfg.h.front()), opts);
    if (!res.rows.empty()) {
        publish(res.rows, cfg, "_convergence.csv", out);
    }
    if (!res.complete) {
        err << "error: study incomplete (" << res.rows.size() << " of " << cfg.h.size()
            << " rows): " << res.error << '\n';
        return 1;
    }
    return 0;
}

int run_stability(const CliConfig& cfg, std::ostream& out)
{
    const auto rows = stability_sweep(cfg.h, run_config(cfg, cfg.h.front()));
    publish(rows, cfg, "_stability.csv", out);
    return 0;
}

int run_single(const CliConfig& cfg, std::ostream& out)
{
    const double h = cfg.h.empty() ? 0.0 : cfg.h.front();
    const auto [state, log] = run(run_config(cfg, h));
    publish(log, cfg, "_diagnostics.csv", out);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    try {
        CliConfig cfg;
        std::string help;
        if (!parse_config(argc, argv, cfg, help)) {
            out << help;
            return 0;
        }
        if (!cfg.out.empty()) {
            write_file(cfg.out + "_config.txt", emit_config(cfg));
        }
        switch (cfg.mode) {
        case Mode::Convergence:
            return run_convergence(cfg, out, err);
        case Mode::Stability:
            return run_stability(cfg, out);
        case Mode::Single:
            return run_single(cfg, out);
        }
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace biocnlf::cli
