#include "biocnlf/verification.hpp"

#include "biocnlf/manufactured.hpp"
#include "biocnlf/norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace biocnlf {

double l2_in_time(std::span<const double> errors, double tau)
{
    if (errors.empty()) {
        throw Error("l2_in_time: empty error list");
    }
    double s = 0.0;
    for (double e : errors) {
        s += e * e;
    }
    return std::sqrt(tau * s);
}

int cells_for(double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error("mesh size must be positive");
    }
    const double n = std::round(1.0 / h);
    if (n < 1.0 || std::abs(n * h - 1.0) > 1e-9) {
        throw Error("1/h must be an integer (h = " + std::to_string(h) + ")");
    }
    return static_cast<int>(n);
}

void require_halving(std::span<const double> h_list, std::size_t min_size)
{
    if (h_list.size() < min_size) {
        throw Error("study needs at least " + std::to_string(min_size) + " mesh sizes");
    }
    for (std::size_t i = 1; i < h_list.size(); ++i) {
        if (std::abs(h_list[i - 1] / h_list[i] - 2.0) > 1e-9) {
            throw Error("mesh sizes must halve between consecutive entries");
        }
    }
}

int study_threads(const StudyOptions& opts, std::size_t jobs)
{
    int n = opts.threads;
    if (n <= 0) {
        if (const char* env = std::getenv("BIOCNLF_THREADS")) {
            n = std::atoi(env);
        }
    }
    if (n <= 0) {
        n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return std::max(1, std::min(n, static_cast<int>(std::max<std::size_t>(jobs, 1))));
}

namespace {

RunConfig row_config(const RunConfig& tmpl, double h)
{
    RunConfig cfg = tmpl;
    cfg.nx = cfg.ny = cells_for(h);
    cfg.domain = Rect::unit_square();
    cfg.tau = h;
    cfg.mode = RunMode::Manufactured;
    return cfg;
}

struct RowOutput {
    TimeState state;
    DiagnosticsLog log;
    double max_div = 0.0;
    double max_mean = 0.0;
};

RowOutput run_row(const RunConfig& cfg)
{
    auto [state, log] = run(cfg);
    const double div = log.max_div_residual();
    const double mean = log.max_mean_residual();
    return RowOutput{std::move(state), std::move(log), div, mean};
}

// Runs job(i) for i in [0, n) on up to `threads` workers; records the first
// failing index and its message.
template <class Job>
void parallel_rows(std::size_t n, int threads, Job&& job, std::vector<std::string>& errors)
{
    errors.assign(n, {});
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                if (errors[i].empty()) {
                    errors[i] = "unknown failure";
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
}

double rate(double coarse, double fine)
{
    if (!(coarse > 0.0) || !(fine > 0.0)) {
        return 0.0;
    }
    return std::log2(coarse / fine);
}

} // namespace

StudyResult convergence_study(std::span<const double> h_list, const RunConfig& tmpl, const StudyOptions& opts)
{
    require_halving(h_list, 1);
    const std::size_t n = h_list.size();
    std::vector<ConvergenceRow> rows(n);
    std::vector<std::string> errors;

    parallel_rows(n, study_threads(opts, n), [&](std::size_t i) {
        const RunConfig cfg = row_config(tmpl, h_list[i]);
        const RowOutput out = run_row(cfg);
        const TimeState& s = out.state;
        const double tN = s.t;
        const double tp = opts.pressure_reference == PressureReference::Final ? tN : tN - cfg.tau;

        const ExactVector ue{[tN](double x, double y) { return ExactSolution::u(x, y, tN); },
                             [tN](double x, double y) { return ExactSolution::grad_u(x, y, tN); }};
        const ExactScalar ce{[tN](double x, double y) { return ExactSolution::c(x, y, tN); },
                             [tN](double x, double y) { return ExactSolution::grad_c(x, y, tN); }};
        const ExactScalar pe{[tp](double x, double y) { return ExactSolution::p(x, y, tp); }, {}};
        const ErrorNorms eu = error_norms(s.u_curr, ue);
        const ErrorNorms ec = error_norms(s.c_curr, ce);
        const ErrorNorms ep = error_norms(s.p_curr, pe);

        // Full H1 norms of the exact fields for the relative H1 errors.
        const auto h1_exact = [&](const ErrorNorms& e, double semi_sq) { return std::sqrt(e.exact_l2 * e.exact_l2 + semi_sq); };
        const TriMesh& mesh = s.u_curr.space->mesh();
        const double gu_sq = std::pow(l2_norm(mesh, std::function<Point2(double, double)>([tN](double x, double y) {
                                          const auto g = ExactSolution::grad_u(x, y, tN);
                                          return Point2{std::hypot(g[0].x, g[0].y), std::hypot(g[1].x, g[1].y)};
                                      })),
                                      2);
        const double gc_sq = std::pow(l2_norm(mesh, std::function<Point2(double, double)>([tN](double x, double y) {
                                          return ExactSolution::grad_c(x, y, tN);
                                      })),
                                      2);

        ConvergenceRow& row = rows[i];
        row.h = h_list[i];
        row.tau = cfg.tau;
        row.errors = {eu.l2, ec.l2, ep.l2, eu.h1, ec.h1};
        row.relative = {eu.l2 / eu.exact_l2, ec.l2 / ec.exact_l2, ep.l2 / ep.exact_l2, eu.h1 / h1_exact(eu, gu_sq),
                        ec.h1 / h1_exact(ec, gc_sq)};
        row.max_div_residual = out.max_div;
        row.max_mean_residual = out.max_mean;
    }, errors);

    StudyResult result;
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty()) {
            result.complete = false;
            result.error = "h = " + std::to_string(h_list[i]) + ": " + errors[i];
            break;
        }
        result.rows.push_back(rows[i]);
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const ErrorSet& a = result.rows[i - 1].errors;
        const ErrorSet& b = result.rows[i].errors;
        result.rows[i].rates =
            ErrorSet{rate(a.u_L2, b.u_L2), rate(a.c_L2, b.c_L2), rate(a.p_L2, b.p_L2), rate(a.u_H1, b.u_H1),
                     rate(a.c_H1, b.c_H1)};
    }
    return result;
}

std::vector<StabilityRow> stability_sweep(std::span<const double> h_list, const RunConfig& tmpl,
                                          const StudyOptions& opts)
{
    if (h_list.empty()) {
        throw Error("stability sweep needs at least one mesh size");
    }
    const std::size_t n = h_list.size();
    std::vector<StabilityRow> rows(n);
    std::vector<std::string> errors;
    parallel_rows(n, study_threads(opts, n), [&](std::size_t i) {
        const RunConfig cfg = row_config(tmpl, h_list[i]);
        const RowOutput out = run_row(cfg);
        const auto& last = out.log.back();
        rows[i] = {h_list[i], cfg.tau, last.u_L2, last.u_H1, last.c_L2, last.c_H1, last.p_L2, out.max_div, out.max_mean};
    }, errors);
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty()) {
            throw Error("stability sweep failed at h = " + std::to_string(h_list[i]) + ": " + errors[i]);
        }
    }
    return rows;
}

} // namespace biocnlf
