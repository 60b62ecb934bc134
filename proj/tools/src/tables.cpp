#include "biocnlf/cli/tables.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace biocnlf::cli {

namespace {

using Cell = std::optional<double>;
using Table = std::vector<std::vector<Cell>>;

void write_table(const std::vector<std::string>& header, const Table& rows, OutputFormat format, std::ostream& os)
{
    if (rows.empty()) {
        throw ConfigError("nothing to emit: empty table");
    }
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::vector<std::string> line;
        for (const auto& c : r) {
            line.push_back(c ? format_value(*c) : std::string{});
        }
        cells.push_back(std::move(line));
    }

    std::ostringstream buf;
    if (format == OutputFormat::Csv) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            buf << (j ? "," : "") << header[j];
        }
        buf << '\n';
        for (const auto& line : cells) {
            for (std::size_t j = 0; j < line.size(); ++j) {
                buf << (j ? "," : "") << line[j];
            }
            buf << '\n';
        }
    } else {
        std::vector<std::size_t> width(header.size());
        for (std::size_t j = 0; j < header.size(); ++j) {
            width[j] = header[j].size();
            for (const auto& line : cells) {
                width[j] = std::max(width[j], line[j].size());
            }
        }
        for (std::size_t j = 0; j < header.size(); ++j) {
            buf << (j ? "  " : "") << std::setw(static_cast<int>(width[j])) << header[j];
        }
        buf << '\n';
        for (const auto& line : cells) {
            for (std::size_t j = 0; j < line.size(); ++j) {
                buf << (j ? "  " : "") << std::setw(static_cast<int>(width[j])) << line[j];
            }
            buf << '\n';
        }
    }
    os << buf.str();
}

} // namespace

std::string format_value(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void emit_tables(const std::vector<ConvergenceRow>& rows, OutputFormat format, std::ostream& os)
{
    const std::vector<std::string> header = {"h",    "tau",       "u_L2", "u_L2_rate", "c_L2", "c_L2_rate",
                                             "p_L2", "p_L2_rate", "u_H1", "u_H1_rate", "c_H1", "c_H1_rate"};
    Table t;
    for (const auto& r : rows) {
        const auto rate = [&r](double ErrorSet::*m) -> Cell {
            if (!r.rates) {
                return std::nullopt;
            }
            return (*r.rates).*m;
        };
        t.push_back({r.h, r.tau, r.errors.u_L2, rate(&ErrorSet::u_L2), r.errors.c_L2, rate(&ErrorSet::c_L2),
                     r.errors.p_L2, rate(&ErrorSet::p_L2), r.errors.u_H1, rate(&ErrorSet::u_H1), r.errors.c_H1,
                     rate(&ErrorSet::c_H1)});
    }
    write_table(header, t, format, os);
}

void emit_tables(const std::vector<StabilityRow>& rows, OutputFormat format, std::ostream& os)
{
    const std::vector<std::string> header = {"h", "u_L2", "u_H1", "c_L2", "c_H1", "p_L2"};
    Table t;
    for (const auto& r : rows) {
        t.push_back({r.h, r.u_L2, r.u_H1, r.c_L2, r.c_H1, r.p_L2});
    }
    write_table(header, t, format, os);
}

void emit_tables(const DiagnosticsLog& log, OutputFormat format, std::ostream& os)
{
    if (log.empty()) {
        throw ConfigError("nothing to emit: empty diagnostics log");
    }
    if (format == OutputFormat::Csv) {
        log.write_csv(os);
        return;
    }
    const std::vector<std::string> header = {"n",    "t",    "u_L2",         "u_H1",         "c_L2",
                                             "c_H1", "p_L2", "div_residual", "mean_residual"};
    Table t;
    for (const auto& r : log.records()) {
        t.push_back({static_cast<double>(r.n), r.t, r.u_L2, r.u_H1, r.c_L2, r.c_H1, r.p_L2, r.div_residual,
                     r.mean_residual});
    }
    write_table(header, t, format, os);
}

void write_file(const std::string& path, const std::string& content)
{
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) {
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw ConfigError("failed writing '" + path + "'");
    }
}

} // namespace biocnlf::cli
