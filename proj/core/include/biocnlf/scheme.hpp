#pragma once

#include "biocnlf/assembly.hpp"
#include "biocnlf/linalg.hpp"
#include "biocnlf/mesh.hpp"

#include <algorithm>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace biocnlf {

/// Physical: homogeneous velocity Dirichlet data, no-flux concentration and
/// zero-mean constraints on p and c. Manufactured: Dirichlet data and sources
/// taken from ExactSolution; only the pressure keeps its zero-mean constraint.
enum class RunMode { Physical, Manufactured };

enum class Startup { BackwardEuler, ExactFirstStep };

using TimeVectorFn = std::function<Point2(double x, double y, double t)>;

struct RunConfig {
    int nx = 8;
    int ny = 8;
    Rect domain = Rect::unit_square();
    double tau = 1.0 / 8.0;
    double T_final = 1.0;
    ModelParams params;
    RunMode mode = RunMode::Manufactured;
    Startup startup = Startup::BackwardEuler;
    /// Record diagnostics every this many steps (first, startup and final steps always).
    int diagnostics_every = 1;

    /// Physical-mode data. Empty callables select the built-in defaults
    /// (see default_initial_velocity / default_initial_concentration) and f = 0.
    VectorFn initial_velocity;
    ScalarFn initial_concentration;
    TimeVectorFn forcing;

    /// Number of time steps N = T/tau. Throws if T/tau is not within 0.5 of an integer.
    [[nodiscard]] int num_steps() const;
    void validate() const;
};

/// Divergence-free field vanishing on the boundary of the unit square.
[[nodiscard]] Point2 default_initial_velocity(double x, double y);
/// Zero-mean perturbation cos(pi x) cos(pi y) / 2 on the unit square.
[[nodiscard]] double default_initial_concentration(double x, double y);

/// Three-level state: velocity and concentration at levels n-1 and n, and the
/// pressure computed by the solve that produced level n.
struct TimeState {
    FieldCoeffs u_prev;
    FieldCoeffs u_curr;
    FieldCoeffs c_prev;
    FieldCoeffs c_curr;
    FieldCoeffs p_curr;
    int n = 0;
    double t = 0.0;
    double tau = 0.0;
};

struct DiagnosticsRecord {
    int n = 0;
    double t = 0.0;
    double u_L2 = 0.0;
    double u_H1 = 0.0;
    double c_L2 = 0.0;
    double c_H1 = 0.0;
    double p_L2 = 0.0;
    /// max |(div(u^{n+1} + u^{n-1}), q_i)| relative to its roundoff scale.
    double div_residual = 0.0;
    /// |integral p| / (|Omega| ||p||), and the same for c in physical mode; the larger one.
    double mean_residual = 0.0;

    /// Stability bookkeeping: ||u^{n}||^2 + ||c^{n}||^2 + kappa tau sum ||grad(u^{k+1}+u^{k-1})||^2
    ///   + theta tau sum ||grad(c^{k+1}+c^{k-1})||^2
    double energy_lhs = 0.0;
    /// ||u^0||^2 + ||u^1||^2 + ||c^0||^2 + ||c^1||^2
    double energy_initial = 0.0;
    /// tau sum (||f^k||^2 + |Omega|)
    double energy_forcing = 0.0;
};

class DiagnosticsLog {
public:
    void push(const DiagnosticsRecord& r) { records_.push_back(r); }
    /// Residual maxima over every step, whatever the recording cadence.
    void observe_residuals(double div, double mean)
    {
        max_div_residual_ = std::max(max_div_residual_, div);
        max_mean_residual_ = std::max(max_mean_residual_, mean);
    }
    [[nodiscard]] double max_div_residual() const noexcept { return max_div_residual_; }
    [[nodiscard]] double max_mean_residual() const noexcept { return max_mean_residual_; }
    [[nodiscard]] const std::vector<DiagnosticsRecord>& records() const noexcept { return records_; }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
    [[nodiscard]] const DiagnosticsRecord& back() const { return records_.back(); }

    /// Header `n,t,u_L2,u_H1,c_L2,c_H1,p_L2,div_residual,mean_residual`.
    void write_csv(std::ostream& os) const;

private:
    std::vector<DiagnosticsRecord> records_;
    double max_div_residual_ = 0.0;
    double max_mean_residual_ = 0.0;
};

/// Test hooks for a single step.
struct StepHooks {
    /// Called with u^{n+1} after the velocity solve, before the concentration solve.
    std::function<void(FieldCoeffs&)> after_velocity_solve;
};

struct ConstraintResiduals {
    double divergence = 0.0;
    double pressure_mean = 0.0;
    double concentration_mean = 0.0;
};

/// Owns the discretization of one run: mesh, spaces, time-independent
/// matrices and the two reusable factorizations.
class Solver {
public:
    explicit Solver(RunConfig cfg);

    [[nodiscard]] const RunConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const TriMesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const FeSpace>& velocity_space() const noexcept { return vel_; }
    [[nodiscard]] const std::shared_ptr<const FeSpace>& pressure_space() const noexcept { return pre_; }
    [[nodiscard]] const std::shared_ptr<const FeSpace>& concentration_space() const noexcept { return con_; }
    [[nodiscard]] const CsrMatrix& divergence() const noexcept { return div_; }

    /// Level-0 state (u_prev = u_curr = u^0, c likewise, n = 0).
    [[nodiscard]] TimeState initial_state() const;

    /// Step I: backward Euler (or the exact solution at t_1 when configured and
    /// in manufactured mode). Returns the state at n = 1.
    [[nodiscard]] TimeState startup(const TimeState& s0);

    /// Step II: one decoupled Crank-Nicolson Leap-Frog step, n -> n+1.
    [[nodiscard]] TimeState step(const TimeState& s, const StepHooks* hooks = nullptr);

    /// Startup followed by N-1 CNLF steps.
    [[nodiscard]] std::pair<TimeState, DiagnosticsLog> run();

    /// Constraint residuals of a state. The divergence identity is checked on
    /// u_curr + u_older, where u_older is the velocity two levels back
    /// (u^{n-1} for a state at level n+1); without it, on u_curr alone, which
    /// is the startup constraint at n = 1.
    [[nodiscard]] ConstraintResiduals residuals(const TimeState& s, const FieldCoeffs* u_older = nullptr) const;

    /// Loads of the momentum and concentration sources at time t.
    [[nodiscard]] DenseVector momentum_source(double t) const;
    [[nodiscard]] DenseVector concentration_source(double t) const;
    [[nodiscard]] double forcing_l2_sq(double t) const;

private:
    struct VelocityOperators {
        CsrMatrix K;  ///< left-hand velocity block
        DenseVector rhs;
        DenseVector constraint_rhs;
        double t_new;
    };

    std::pair<FieldCoeffs, FieldCoeffs> solve_velocity(const VelocityOperators& ops);
    FieldCoeffs solve_concentration(CsrMatrix K, DenseVector rhs, double t_new);
    void check_finite(const FieldCoeffs& f, const char* what, int n) const;
    [[nodiscard]] DenseVector velocity_boundary_values(double t) const;

    RunConfig cfg_;
    std::shared_ptr<const TriMesh> mesh_;
    std::shared_ptr<const FeSpace> vel_;
    std::shared_ptr<const FeSpace> pre_;
    std::shared_ptr<const FeSpace> con_;

    CsrMatrix mass_v_;
    CsrMatrix mass_c_;
    CsrMatrix stiff_c_;
    CsrMatrix div_;
    CsrMatrix div_t_;
    DenseVector unit_p_;
    DenseVector unit_c_;
    SwimTerms swim_;
    DenseVector buoyancy_shift_; // -g gamma alpha e2 load (physical mode forcing shift)

    SparseLu vel_lu_;
    SparseLu con_lu_;
};

/// Convenience wrappers that build a Solver for `cfg`.
[[nodiscard]] TimeState startup_backward_euler(const TimeState& state0, const RunConfig& cfg);
[[nodiscard]] TimeState cnlf_step(const TimeState& state, const RunConfig& cfg);
[[nodiscard]] std::pair<TimeState, DiagnosticsLog> run(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Truncation orders of the three-level time differences.

/// A smooth scalar field of space and time, with its spatial gradient and
/// time derivative.
struct SmoothField {
    std::function<double(double, double, double)> value;
    std::function<Point2(double, double, double)> grad;
    std::function<double(double, double, double)> dt;
};

struct TruncationResult {
    std::vector<double> taus;
    /// || f_t(t) - (f(t+tau) - f(t-tau)) / (2 tau) ||_{L2}
    std::vector<double> centered_dt_error;
    /// || grad(f(t) - (f(t+tau) + f(t-tau)) / 2) ||_{L2}
    std::vector<double> average_error;
    double centered_dt_slope = 0.0;
    double average_slope = 0.0;
};

/// Evaluates both truncation errors at time `t` for each tau (on the unit
/// square, by quadrature) and fits log-log slopes by least squares.
[[nodiscard]] TruncationResult truncation_check(const SmoothField& field, double t, const std::vector<double>& taus);

/// Least-squares slope of log(err) against log(tau); zero errors are skipped.
[[nodiscard]] double loglog_slope(const std::vector<double>& taus, const std::vector<double>& errors);

} // namespace biocnlf
