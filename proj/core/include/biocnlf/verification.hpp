#pragma once

#include "biocnlf/scheme.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace biocnlf {

/// sqrt(tau * sum e_n^2). Throws on an empty list.
[[nodiscard]] double l2_in_time(std::span<const double> errors_per_step, double tau);

/// Which exact pressure the final discrete pressure is compared against.
/// Final: p(t_N). Previous: p(t_{N-1}), i.e. the solve that produced u^N is
/// labelled with the level it was started from.
enum class PressureReference { Final, Previous };

struct ErrorSet {
    double u_L2 = 0.0;
    double c_L2 = 0.0;
    double p_L2 = 0.0;
    double u_H1 = 0.0;
    double c_H1 = 0.0;
};

struct ConvergenceRow {
    double h = 0.0;
    double tau = 0.0;
    ErrorSet errors;
    /// errors divided by the exact-field norms at the comparison time.
    ErrorSet relative;
    /// log2(e(2h) / e(h)); empty in the first row.
    std::optional<ErrorSet> rates;

    /// Largest constraint residuals seen over all steps of the run.
    double max_div_residual = 0.0;
    double max_mean_residual = 0.0;
};

struct StudyOptions {
    PressureReference pressure_reference = PressureReference::Final;
    /// Cap on concurrently executing rows; 0 reads BIOCNLF_THREADS and
    /// otherwise uses the hardware concurrency.
    int threads = 0;
};

struct StudyResult {
    std::vector<ConvergenceRow> rows;
    /// False when some run failed; rows then holds the completed prefix.
    bool complete = true;
    std::string error;
};

/// Number of cells per side for h on the unit square; throws unless 1/h is an integer.
[[nodiscard]] int cells_for(double h);

/// Throws unless h_list has at least `min_size` entries and each entry is half the previous.
void require_halving(std::span<const double> h_list, std::size_t min_size = 2);

/// Manufactured-mode runs with tau = h on the unit square to cfg.T_final,
/// errors at t_N and rates between consecutive rows.
[[nodiscard]] StudyResult convergence_study(std::span<const double> h_list, const RunConfig& cfg,
                                            const StudyOptions& opts = {});

struct StabilityRow {
    double h = 0.0;
    double tau = 0.0;
    double u_L2 = 0.0;
    double u_H1 = 0.0;
    double c_L2 = 0.0;
    double c_H1 = 0.0;
    double p_L2 = 0.0;
    double max_div_residual = 0.0;
    double max_mean_residual = 0.0;
};

/// Discrete norms at t_N of manufactured-mode runs with tau = h.
[[nodiscard]] std::vector<StabilityRow> stability_sweep(std::span<const double> h_list, const RunConfig& cfg,
                                                        const StudyOptions& opts = {});

/// Number of worker threads a study would use for `jobs` independent rows.
[[nodiscard]] int study_threads(const StudyOptions& opts, std::size_t jobs);

} // namespace biocnlf
