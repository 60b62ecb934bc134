#pragma once

#include "biocnlf/cli/config.hpp"
#include "biocnlf/scheme.hpp"
#include "biocnlf/verification.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace biocnlf::cli {

/// Six significant digits.
[[nodiscard]] std::string format_value(double v);

/// Columns `h,tau,u_L2,u_L2_rate,c_L2,c_L2_rate,p_L2,p_L2_rate,u_H1,u_H1_rate,c_H1,c_H1_rate`;
/// rates are blank in the first row. Throws on empty input.
void emit_tables(const std::vector<ConvergenceRow>& rows, OutputFormat format, std::ostream& os);

/// Columns `h,u_L2,u_H1,c_L2,c_H1,p_L2`.
void emit_tables(const std::vector<StabilityRow>& rows, OutputFormat format, std::ostream& os);

/// CSV is the log's own format; text is an aligned version of the same columns.
void emit_tables(const DiagnosticsLog& log, OutputFormat format, std::ostream& os);

/// Writes `content` to `path`, throwing ConfigError when it cannot.
void write_file(const std::string& path, const std::string& content);

} // namespace biocnlf::cli
