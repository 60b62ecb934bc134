#include "biocnlf/scheme.hpp"

#include "biocnlf/manufactured.hpp"
#include "biocnlf/norms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace biocnlf {

// ---------------------------------------------------------------------------
// RunConfig

int RunConfig::num_steps() const
{
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error("RunConfig: tau must be positive");
    }
    if (!(T_final > 0.0) || !std::isfinite(T_final)) {
        throw Error("RunConfig: T must be positive");
    }
    const double ratio = T_final / tau;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) >= 0.5) {
        throw Error("RunConfig: T/tau does not define a uniform partition");
    }
    return static_cast<int>(n);
}

void RunConfig::validate() const
{
    if (nx < 1 || ny < 1) {
        throw Error("RunConfig: nx and ny must be >= 1");
    }
    if (diagnostics_every < 1) {
        throw Error("RunConfig: diagnostics cadence must be >= 1");
    }
    params.validate();
    (void)num_steps();
}

Point2 default_initial_velocity(double x, double y)
{
    // u = curl psi with psi = 16 x^2 (1-x)^2 y^2 (1-y)^2
    const auto s = [](double v) { return v * v * (1.0 - v) * (1.0 - v); };
    const auto ds = [](double v) { return 2.0 * v * (1.0 - v) * (1.0 - 2.0 * v); };
    return {16.0 * s(x) * ds(y), -16.0 * ds(x) * s(y)};
}

double default_initial_concentration(double x, double y)
{
    return 0.5 * std::cos(std::numbers::pi * x) * std::cos(std::numbers::pi * y);
}

// ---------------------------------------------------------------------------
// DiagnosticsLog

void DiagnosticsLog::write_csv(std::ostream& os) const
{
    std::ostringstream buf;
    buf << "n,t,u_L2,u_H1,c_L2,c_H1,p_L2,div_residual,mean_residual\n";
    buf << std::setprecision(6);
    for (const auto& r : records_) {
        buf << r.n << ',' << r.t << ',' << r.u_L2 << ',' << r.u_H1 << ',' << r.c_L2 << ',' << r.c_H1 << ',' << r.p_L2
            << ',' << r.div_residual << ',' << r.mean_residual << '\n';
    }
    os << buf.str();
}

// ---------------------------------------------------------------------------
// Solver

namespace {

DenseVector axpy(DenseVector y, double a, const DenseVector& x)
{
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += a * x[i];
    }
    return y;
}

DenseVector scaled(const DenseVector& x, double a)
{
    DenseVector y(x);
    for (double& v : y) {
        v *= a;
    }
    return y;
}

double sq(double v) { return v * v; }

// Tags linear-solver failures with the time step they occurred in.
template <class Fn>
auto at_step(int n, Fn&& fn)
{
    try {
        return fn();
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " at step " + std::to_string(n));
    }
}

void require_finite_input(const FieldCoeffs& f, const char* what, int n)
{
    if (!all_finite(f.coeffs)) {
        throw Error(std::string("non-finite ") + what + " entering step " + std::to_string(n));
    }
}

} // namespace

Solver::Solver(RunConfig cfg) : cfg_(std::move(cfg))
{
    cfg_.validate();
    const bool manufactured = cfg_.mode == RunMode::Manufactured;
    mesh_ = std::make_shared<const TriMesh>(generate_uniform(cfg_.nx, cfg_.ny, cfg_.domain));
    vel_ = std::make_shared<const FeSpace>(FeSpace::mini_velocity(mesh_, true));
    pre_ = std::make_shared<const FeSpace>(FeSpace::p1(mesh_, SpaceKind::P1Pressure, false));
    con_ = std::make_shared<const FeSpace>(FeSpace::p1(mesh_, SpaceKind::P1Concentration, manufactured));

    mass_v_ = assemble_mass(*vel_);
    mass_c_ = assemble_mass(*con_);
    stiff_c_ = assemble_stiffness(*con_);
    div_ = assemble_divergence(*vel_, *pre_);
    div_t_ = div_.transpose();
    unit_p_ = assemble_unit_load(*pre_);
    unit_c_ = assemble_unit_load(*con_);
    swim_ = assemble_swim(*con_, cfg_.params);
    if (!manufactured) {
        const double shift = -cfg_.params.g * cfg_.params.gamma * cfg_.params.alpha;
        buoyancy_shift_ = assemble_load(*vel_, VectorFn([shift](double, double) { return Point2{0.0, shift}; }));
    } else {
        buoyancy_shift_.assign(static_cast<std::size_t>(vel_->ndofs()), 0.0);
    }
}

TimeState Solver::initial_state() const
{
    TimeState s;
    s.tau = cfg_.tau;
    if (cfg_.mode == RunMode::Manufactured) {
        s.u_curr = interpolate(vel_, VectorFn([](double x, double y) { return ExactSolution::u(x, y, 0.0); }));
        s.c_curr = interpolate(con_, ScalarFn([](double x, double y) { return ExactSolution::c(x, y, 0.0); }),
                               FieldRole::Concentration);
        s.p_curr = interpolate(pre_, ScalarFn([](double x, double y) { return ExactSolution::p(x, y, 0.0); }),
                               FieldRole::Pressure);
    } else {
        const VectorFn u0 = cfg_.initial_velocity ? cfg_.initial_velocity : VectorFn(default_initial_velocity);
        const ScalarFn c0 =
            cfg_.initial_concentration ? cfg_.initial_concentration : ScalarFn(default_initial_concentration);
        s.u_curr = interpolate(vel_, u0);
        for (int d : vel_->dirichlet_dofs()) {
            s.u_curr.coeffs[static_cast<std::size_t>(d)] = 0.0;
        }
        s.c_curr = interpolate(con_, c0, FieldRole::Concentration);
        const double mean = integral(s.c_curr) / mesh_->domain().area();
        for (double& v : s.c_curr.coeffs) {
            v -= mean;
        }
        s.p_curr = FieldCoeffs(pre_, FieldRole::Pressure);
    }
    s.u_prev = s.u_curr;
    s.c_prev = s.c_curr;
    return s;
}

DenseVector Solver::velocity_boundary_values(double t) const
{
    const auto& dofs = vel_->dirichlet_dofs();
    DenseVector vals(dofs.size(), 0.0);
    if (cfg_.mode == RunMode::Manufactured) {
        const int bs = vel_->block_size();
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            const int comp = dofs[i] / bs;
            const auto& p = mesh_->node(dofs[i] % bs);
            const auto u = ExactSolution::u(p.x, p.y, t);
            vals[i] = comp == 0 ? u.x : u.y;
        }
    }
    return vals;
}

DenseVector Solver::momentum_source(double t) const
{
    if (cfg_.mode == RunMode::Manufactured) {
        const ModelParams prm = cfg_.params;
        return assemble_load(*vel_, VectorFn([t, prm](double x, double y) { return manufactured_forcing(x, y, t, prm).f; }));
    }
    if (cfg_.forcing) {
        const auto& f = cfg_.forcing;
        return axpy(assemble_load(*vel_, VectorFn([&f, t](double x, double y) { return f(x, y, t); })), 1.0,
                    buoyancy_shift_);
    }
    return buoyancy_shift_;
}

DenseVector Solver::concentration_source(double t) const
{
    if (cfg_.mode == RunMode::Manufactured) {
        const ModelParams prm = cfg_.params;
        return assemble_load(*con_, ScalarFn([t, prm](double x, double y) { return manufactured_forcing(x, y, t, prm).s_c; }));
    }
    return DenseVector(static_cast<std::size_t>(con_->ndofs()), 0.0);
}

double Solver::forcing_l2_sq(double t) const
{
    if (cfg_.mode == RunMode::Manufactured) {
        const ModelParams prm = cfg_.params;
        return sq(l2_norm(*mesh_, std::function<Point2(double, double)>(
                                      [t, prm](double x, double y) { return manufactured_forcing(x, y, t, prm).f; })));
    }
    if (cfg_.forcing) {
        const auto& f = cfg_.forcing;
        return sq(l2_norm(*mesh_, std::function<Point2(double, double)>([&f, t](double x, double y) { return f(x, y, t); })));
    }
    return 0.0;
}

void Solver::check_finite(const FieldCoeffs& f, const char* what, int n) const
{
    if (!all_finite(f.coeffs)) {
        throw Error(std::string("non-finite ") + what + " produced at step " + std::to_string(n));
    }
}

std::pair<FieldCoeffs, FieldCoeffs> Solver::solve_velocity(const VelocityOperators& ops)
{
    const int nv = vel_->ndofs();
    const int np = pre_->ndofs();
    const int n = nv + np;

    // The bordered system [K -G^T 0; G 0 m; 0 m^T 0] is solved as the
    // equivalent pinned system (p_0 = 0) followed by removal of the mean.
    // The dense border row wrecks the fill-reducing ordering otherwise.
    CooBuilder coo(n, n);
    coo.reserve(ops.K.nnz() + 2 * div_.nnz() + 1);
    coo.add_block(ops.K, 0, 0);
    coo.add_block(div_t_, 0, nv, -1.0);
    coo.add_block(div_, nv, 0);
    CsrMatrix sys = coo.finalize();

    DenseVector rhs(static_cast<std::size_t>(n), 0.0);
    std::copy(ops.rhs.begin(), ops.rhs.end(), rhs.begin());
    std::copy(ops.constraint_rhs.begin(), ops.constraint_rhs.end(), rhs.begin() + nv);

    const DenseVector bc = velocity_boundary_values(ops.t_new);
    apply_dirichlet(sys, rhs, vel_->dirichlet_dofs(), bc);
    const int pin[1] = {nv};
    const double zero[1] = {0.0};
    apply_dirichlet(sys, rhs, pin, zero);

    vel_lu_.factorize(sys);
    const DenseVector x = vel_lu_.solve(rhs);

    FieldCoeffs u(vel_, DenseVector(x.begin(), x.begin() + nv), FieldRole::Velocity);
    FieldCoeffs p(pre_, DenseVector(x.begin() + nv, x.end()), FieldRole::Pressure);
    const double shift = dot(unit_p_, p.coeffs) / mesh_->domain().area();
    for (double& v : p.coeffs) {
        v -= shift;
    }
    return {std::move(u), std::move(p)};
}

FieldCoeffs Solver::solve_concentration(CsrMatrix K, DenseVector rhs, double t_new)
{
    DenseVector x;
    if (cfg_.mode == RunMode::Physical) {
        CsrMatrix sys = border(K, unit_c_, 0);
        rhs.push_back(0.0);
        con_lu_.factorize(sys);
        x = con_lu_.solve(rhs);
        x.pop_back();
    } else {
        const auto& dofs = con_->dirichlet_dofs();
        DenseVector vals(dofs.size());
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            const auto& p = mesh_->node(dofs[i]);
            vals[i] = ExactSolution::c(p.x, p.y, t_new);
        }
        apply_dirichlet(K, rhs, dofs, vals);
        con_lu_.factorize(K);
        x = con_lu_.solve(rhs);
    }
    return FieldCoeffs(con_, std::move(x), FieldRole::Concentration);
}

TimeState Solver::startup(const TimeState& s0)
{
    const double tau = cfg_.tau;
    const double t1 = tau;
    TimeState s;
    s.tau = tau;
    s.n = 1;
    s.t = t1;
    s.u_prev = s0.u_curr;
    s.c_prev = s0.c_curr;

    if (cfg_.startup == Startup::ExactFirstStep && cfg_.mode == RunMode::Manufactured) {
        s.u_curr = interpolate(vel_, VectorFn([t1](double x, double y) { return ExactSolution::u(x, y, t1); }));
        s.c_curr = interpolate(con_, ScalarFn([t1](double x, double y) { return ExactSolution::c(x, y, t1); }),
                               FieldRole::Concentration);
        s.p_curr = interpolate(pre_, ScalarFn([t1](double x, double y) { return ExactSolution::p(x, y, t1); }),
                               FieldRole::Pressure);
        return s;
    }

    const FieldCoeffs& u0 = s0.u_curr;
    const FieldCoeffs& c0 = s0.c_curr;
    require_finite_input(u0, "velocity", 1);
    require_finite_input(c0, "concentration", 1);

    {
        const CsrMatrix A = assemble_stiffness_nu(*vel_, c0, cfg_.params);
        const CsrMatrix N = assemble_convection_B(*vel_, u0);
        VelocityOperators ops;
        ops.K = add(add(mass_v_, 1.0 / tau, A, 1.0), 1.0, N, 1.0);
        ops.rhs = spmv(mass_v_, u0.coeffs);
        for (double& v : ops.rhs) {
            v /= tau;
        }
        ops.rhs = axpy(std::move(ops.rhs), 1.0, assemble_buoyancy(*vel_, c0, cfg_.params));
        ops.rhs = axpy(std::move(ops.rhs), 1.0, momentum_source(t1));
        ops.constraint_rhs.assign(static_cast<std::size_t>(pre_->ndofs()), 0.0);
        ops.t_new = t1;
        auto [u1, p1] = at_step(1, [&] { return solve_velocity(ops); });
        s.u_curr = std::move(u1);
        s.p_curr = std::move(p1);
    }
    check_finite(s.u_curr, "velocity", 1);
    check_finite(s.p_curr, "pressure", 1);

    {
        const CsrMatrix Nb = assemble_convection_b_scalar(*con_, u0);
        CsrMatrix K = add(add(mass_c_, 1.0 / tau, stiff_c_, cfg_.params.theta), 1.0, Nb, 1.0);
        DenseVector rhs = scaled(spmv(mass_c_, c0.coeffs), 1.0 / tau);
        spmv_add(swim_.matrix, c0.coeffs, 1.0, rhs);
        rhs = axpy(std::move(rhs), 1.0, swim_.constant);
        rhs = axpy(std::move(rhs), 1.0, concentration_source(t1));
        s.c_curr = at_step(1, [&] { return solve_concentration(std::move(K), std::move(rhs), t1); });
    }
    check_finite(s.c_curr, "concentration", 1);
    return s;
}

TimeState Solver::step(const TimeState& s, const StepHooks* hooks)
{
    if (s.n < 1) {
        throw Error("cnlf step requires n >= 1 (run the startup step first)");
    }
    const double tau = cfg_.tau;
    const double tn = s.t;
    const double t_new = (s.n + 1) * tau;
    const FieldCoeffs& un = s.u_curr;
    const FieldCoeffs& um = s.u_prev;
    const FieldCoeffs& cn = s.c_curr;
    const FieldCoeffs& cm = s.c_prev;

    TimeState out;
    out.tau = tau;
    out.n = s.n + 1;
    out.t = t_new;
    out.u_prev = un;
    out.c_prev = cn;
    require_finite_input(um, "velocity", out.n);
    require_finite_input(un, "velocity", out.n);
    require_finite_input(cm, "concentration", out.n);
    require_finite_input(cn, "concentration", out.n);

    // (u^{n+1}-u^{n-1})/2tau + A(c^n; avg) + B(u^n; avg) - (p, div v) = buoyancy(c^n) + f^n
    {
        const CsrMatrix A = assemble_stiffness_nu(*vel_, cn, cfg_.params);
        const CsrMatrix N = assemble_convection_B(*vel_, un);
        VelocityOperators ops;
        ops.K = add(add(mass_v_, 0.5 / tau, A, 0.5), 1.0, N, 0.5);
        ops.rhs = scaled(spmv(mass_v_, um.coeffs), 0.5 / tau);
        spmv_add(A, um.coeffs, -0.5, ops.rhs);
        spmv_add(N, um.coeffs, -0.5, ops.rhs);
        ops.rhs = axpy(std::move(ops.rhs), 1.0, assemble_buoyancy(*vel_, cn, cfg_.params));
        ops.rhs = axpy(std::move(ops.rhs), 1.0, momentum_source(tn));
        ops.constraint_rhs = scaled(spmv(div_, um.coeffs), -1.0);
        ops.t_new = t_new;
        auto [u_new, p_new] = at_step(out.n, [&] { return solve_velocity(ops); });
        out.u_curr = std::move(u_new);
        out.p_curr = std::move(p_new);
    }
    check_finite(out.u_curr, "velocity", out.n);
    check_finite(out.p_curr, "pressure", out.n);

    if (hooks && hooks->after_velocity_solve) {
        hooks->after_velocity_solve(out.u_curr);
    }

    // Concentration reads u^n, c^n and c^{n-1} only.
    {
        const CsrMatrix Nb = assemble_convection_b_scalar(*con_, un);
        CsrMatrix K = add(add(mass_c_, 0.5 / tau, stiff_c_, 0.5 * cfg_.params.theta), 1.0, Nb, 0.5);
        DenseVector rhs = scaled(spmv(mass_c_, cm.coeffs), 0.5 / tau);
        spmv_add(stiff_c_, cm.coeffs, -0.5 * cfg_.params.theta, rhs);
        spmv_add(Nb, cm.coeffs, -0.5, rhs);
        spmv_add(swim_.matrix, cn.coeffs, 1.0, rhs);
        rhs = axpy(std::move(rhs), 1.0, swim_.constant);
        rhs = axpy(std::move(rhs), 1.0, concentration_source(tn));
        out.c_curr = at_step(out.n, [&] { return solve_concentration(std::move(K), std::move(rhs), t_new); });
    }
    check_finite(out.c_curr, "concentration", out.n);
    return out;
}

ConstraintResiduals Solver::residuals(const TimeState& s, const FieldCoeffs* u_older) const
{
    ConstraintResiduals r;
    if (s.n >= 1) {
        DenseVector w = s.u_curr.coeffs;
        if (u_older) {
            w = axpy(std::move(w), 1.0, u_older->coeffs);
        }
        const DenseVector gw = spmv(div_, w);
        double num = 0.0;
        double scale = 0.0;
        for (int i = 0; i < div_.rows(); ++i) {
            double row_scale = 0.0;
            for (int p = div_.row_ptr()[static_cast<std::size_t>(i)]; p < div_.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p) {
                row_scale += std::abs(div_.values()[static_cast<std::size_t>(p)] *
                                      w[static_cast<std::size_t>(div_.col_idx()[static_cast<std::size_t>(p)])]);
            }
            num = std::max(num, std::abs(gw[static_cast<std::size_t>(i)]));
            scale = std::max(scale, row_scale);
        }
        r.divergence = scale > 0.0 ? num / scale : 0.0;
    }
    const double area = mesh_->domain().area();
    const auto mean_res = [area](const FieldCoeffs& f) {
        const double nrm = field_norms(f).l2;
        return nrm > 0.0 ? std::abs(integral(f)) / (area * nrm) : 0.0;
    };
    if (s.n >= 1) {
        r.pressure_mean = mean_res(s.p_curr);
        if (cfg_.mode == RunMode::Physical) {
            r.concentration_mean = mean_res(s.c_curr);
        }
    }
    return r;
}

std::pair<TimeState, DiagnosticsLog> Solver::run()
{
    const int N = cfg_.num_steps();
    const double tau = cfg_.tau;
    const double area = mesh_->domain().area();
    DiagnosticsLog log;

    const auto record = [&](const TimeState& s, const ConstraintResiduals& res, double lhs, double init,
                            double forcing) {
        const auto un = field_norms(s.u_curr);
        const auto cn = field_norms(s.c_curr);
        const auto pn = field_norms(s.p_curr);
        DiagnosticsRecord r;
        r.n = s.n;
        r.t = s.t;
        r.u_L2 = un.l2;
        r.u_H1 = un.h1;
        r.c_L2 = cn.l2;
        r.c_H1 = cn.h1;
        r.p_L2 = pn.l2;
        r.div_residual = res.divergence;
        r.mean_residual = std::max(res.pressure_mean, res.concentration_mean);
        r.energy_lhs = lhs;
        r.energy_initial = init;
        r.energy_forcing = forcing;
        log.push(r);
    };

    TimeState s = initial_state();
    const double u0 = sq(field_norms(s.u_curr).l2);
    const double c0 = sq(field_norms(s.c_curr).l2);
    record(s, ConstraintResiduals{}, u0 + c0, 0.0, 0.0);

    s = startup(s);
    const double u1 = sq(field_norms(s.u_curr).l2);
    const double c1 = sq(field_norms(s.c_curr).l2);
    const double init = u0 + u1 + c0 + c1;
    {
        const auto res = residuals(s);
        log.observe_residuals(res.divergence, std::max(res.pressure_mean, res.concentration_mean));
        record(s, res, u1 + c1, init, 0.0);
    }

    double grad_u_sum = 0.0;
    double grad_c_sum = 0.0;
    double forcing_sum = 0.0;
    for (int n = 1; n < N; ++n) {
        const FieldCoeffs u_old = s.u_prev;
        const FieldCoeffs c_old = s.c_prev;
        const double tn = s.t;
        s = step(s);

        FieldCoeffs su(vel_, axpy(s.u_curr.coeffs, 1.0, u_old.coeffs), FieldRole::Velocity);
        FieldCoeffs sc(con_, axpy(s.c_curr.coeffs, 1.0, c_old.coeffs), FieldRole::Concentration);
        grad_u_sum += tau * sq(field_norms(su).h1_semi);
        grad_c_sum += tau * sq(field_norms(sc).h1_semi);
        forcing_sum += tau * (forcing_l2_sq(tn) + area);
        const auto res = residuals(s, &u_old);
        log.observe_residuals(res.divergence, std::max(res.pressure_mean, res.concentration_mean));

        const bool last = (n == N - 1);
        if (last || (s.n % cfg_.diagnostics_every) == 0) {
            const double lhs = sq(field_norms(s.u_curr).l2) + sq(field_norms(s.c_curr).l2) +
                               cfg_.params.kappa * grad_u_sum + cfg_.params.theta * grad_c_sum;
            record(s, res, lhs, init, forcing_sum);
        }
    }
    return {std::move(s), std::move(log)};
}

TimeState startup_backward_euler(const TimeState& state0, const RunConfig& cfg)
{
    RunConfig c = cfg;
    c.startup = Startup::BackwardEuler;
    Solver solver(std::move(c));
    TimeState s0 = state0;
    // Rebind the coefficients to this solver's spaces.
    s0.u_curr = FieldCoeffs(solver.velocity_space(), state0.u_curr.coeffs, FieldRole::Velocity);
    s0.c_curr = FieldCoeffs(solver.concentration_space(), state0.c_curr.coeffs, FieldRole::Concentration);
    return solver.startup(s0);
}

TimeState cnlf_step(const TimeState& state, const RunConfig& cfg)
{
    Solver solver(cfg);
    TimeState s = state;
    s.u_prev = FieldCoeffs(solver.velocity_space(), state.u_prev.coeffs, FieldRole::Velocity);
    s.u_curr = FieldCoeffs(solver.velocity_space(), state.u_curr.coeffs, FieldRole::Velocity);
    s.c_prev = FieldCoeffs(solver.concentration_space(), state.c_prev.coeffs, FieldRole::Concentration);
    s.c_curr = FieldCoeffs(solver.concentration_space(), state.c_curr.coeffs, FieldRole::Concentration);
    return solver.step(s);
}

std::pair<TimeState, DiagnosticsLog> run(const RunConfig& cfg)
{
    Solver solver(cfg);
    return solver.run();
}

// ---------------------------------------------------------------------------
// Truncation check

double loglog_slope(const std::vector<double>& taus, const std::vector<double>& errors)
{
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < taus.size() && i < errors.size(); ++i) {
        if (!(errors[i] > 0.0)) {
            continue;
        }
        const double x = std::log(taus[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) {
        return 0.0;
    }
    const double den = m * sxx - sx * sx;
    return den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
}

TruncationResult truncation_check(const SmoothField& f, double t, const std::vector<double>& taus)
{
    static const TriMesh mesh = generate_uniform(32, 32);
    TruncationResult r;
    r.taus = taus;
    for (double tau : taus) {
        const double dt_err = l2_norm(mesh, std::function<double(double, double)>([&](double x, double y) {
            return f.dt(x, y, t) - (f.value(x, y, t + tau) - f.value(x, y, t - tau)) / (2.0 * tau);
        }));
        const double avg_err = l2_norm(mesh, std::function<Point2(double, double)>([&](double x, double y) {
            const auto g0 = f.grad(x, y, t);
            const auto gp = f.grad(x, y, t + tau);
            const auto gm = f.grad(x, y, t - tau);
            return Point2{g0.x - 0.5 * (gp.x + gm.x), g0.y - 0.5 * (gp.y + gm.y)};
        }));
        r.centered_dt_error.push_back(dt_err);
        r.average_error.push_back(avg_err);
    }
    r.centered_dt_slope = loglog_slope(taus, r.centered_dt_error);
    r.average_slope = loglog_slope(taus, r.average_error);
    return r;
}

} // namespace biocnlf
