#include "biocnlf/manufactured.hpp"
#include "biocnlf/norms.hpp"
#include "biocnlf/scheme.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace biocnlf;

namespace {

RunConfig physical(int n, double tau, double T)
{
    RunConfig cfg;
    cfg.nx = cfg.ny = n;
    cfg.tau = tau;
    cfg.T_final = T;
    cfg.mode = RunMode::Physical;
    return cfg;
}

RunConfig manufactured(int n, double tau, double T)
{
    RunConfig cfg = physical(n, tau, T);
    cfg.mode = RunMode::Manufactured;
    return cfg;
}

double max_abs(const DenseVector& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double max_diff(const DenseVector& a, const DenseVector& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration

TEST(RunConfig, StepCount)
{
    RunConfig cfg;
    cfg.tau = 1.0 / 8.0;
    EXPECT_EQ(cfg.num_steps(), 8);
    cfg.tau = 0.3;
    EXPECT_EQ(cfg.num_steps(), 3);
    cfg.tau = 1.0 / 3.0;
    EXPECT_EQ(cfg.num_steps(), 3);
    cfg.tau = 2.0;
    EXPECT_THROW((void)cfg.num_steps(), Error);
    cfg.tau = 0.0;
    EXPECT_THROW((void)cfg.num_steps(), Error);
    cfg.tau = 0.1;
    cfg.T_final = -1.0;
    EXPECT_THROW((void)cfg.num_steps(), Error);
}

TEST(RunConfig, Validation)
{
    RunConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.nx = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = RunConfig{};
    cfg.diagnostics_every = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = RunConfig{};
    cfg.params.theta = -1.0;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(DefaultData, DivergenceFreeAndZeroMean)
{
    const double h = 1e-6;
    for (double x : {0.1, 0.4, 0.77}) {
        for (double y : {0.2, 0.5, 0.9}) {
            const double div = (default_initial_velocity(x + h, y).x - default_initial_velocity(x - h, y).x) / (2 * h) +
                               (default_initial_velocity(x, y + h).y - default_initial_velocity(x, y - h).y) / (2 * h);
            EXPECT_NEAR(div, 0.0, 1e-8);
        }
    }
    for (double s : {0.0, 0.3, 1.0}) {
        EXPECT_EQ(default_initial_velocity(s, 0.0).x, 0.0);
        EXPECT_EQ(default_initial_velocity(0.0, s).y, 0.0);
        EXPECT_EQ(default_initial_velocity(1.0, s).x, 0.0);
    }
    EXPECT_NEAR(default_initial_concentration(0.0, 0.0), 0.5, 1e-15);
}

// ---------------------------------------------------------------------------
// Startup

TEST(Startup, ZeroDataStaysZero)
{
    RunConfig cfg = physical(4, 0.25, 1.0);
    cfg.params.g = 0.0;
    cfg.initial_velocity = [](double, double) { return Point2{}; };
    cfg.initial_concentration = [](double, double) { return 0.0; };
    Solver solver(cfg);
    const TimeState s1 = solver.startup(solver.initial_state());
    EXPECT_EQ(s1.n, 1);
    EXPECT_DOUBLE_EQ(s1.t, 0.25);
    EXPECT_EQ(max_abs(s1.u_curr.coeffs), 0.0);
    EXPECT_EQ(max_abs(s1.c_curr.coeffs), 0.0);
    EXPECT_EQ(max_abs(s1.p_curr.coeffs), 0.0);

    const TimeState s2 = solver.step(s1);
    EXPECT_EQ(max_abs(s2.u_curr.coeffs), 0.0);
    EXPECT_EQ(max_abs(s2.c_curr.coeffs), 0.0);
    EXPECT_EQ(max_abs(s2.p_curr.coeffs), 0.0);
}

TEST(Startup, HydrostaticBalance)
{
    // u = 0 and constant c: buoyancy is a gradient, absorbed by the pressure.
    RunConfig cfg = physical(4, 0.25, 1.0);
    cfg.params.U = 0.0;
    cfg.initial_velocity = [](double, double) { return Point2{}; };
    cfg.initial_concentration = [](double, double) { return 0.0; };
    Solver solver(cfg);
    const TimeState s1 = solver.startup(solver.initial_state());
    EXPECT_LE(max_abs(s1.u_curr.coeffs), 1e-12);
    EXPECT_LE(max_abs(s1.c_curr.coeffs), 1e-12);
    // p = -g (y - 1/2) exactly representable in P1.
    const auto& mesh = solver.mesh();
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        EXPECT_NEAR(s1.p_curr.coeffs[static_cast<std::size_t>(i)], -(mesh.node(i).y - 0.5), 1e-12);
    }
}

TEST(Startup, LevelsShift)
{
    Solver solver(manufactured(4, 0.25, 1.0));
    const TimeState s0 = solver.initial_state();
    EXPECT_EQ(s0.n, 0);
    const TimeState s1 = solver.startup(s0);
    EXPECT_EQ(s1.u_prev.coeffs, s0.u_curr.coeffs);
    EXPECT_EQ(s1.c_prev.coeffs, s0.c_curr.coeffs);
}

TEST(Startup, ErrorShrinksWithRefinement)
{
    std::vector<double> err;
    for (int n : {4, 8, 16}) {
        Solver solver(manufactured(n, 1.0 / n, 1.0));
        const TimeState s1 = solver.startup(solver.initial_state());
        const double t1 = s1.t;
        const ErrorNorms e = error_norms(
            s1.u_curr, ExactVector{[t1](double x, double y) { return ExactSolution::u(x, y, t1); }, {}});
        err.push_back(e.l2);
    }
    EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
    EXPECT_GE(std::log2(err[1] / err[2]), 1.8);
}

TEST(Startup, ExactFirstStepInterpolates)
{
    RunConfig cfg = manufactured(4, 0.25, 1.0);
    cfg.startup = Startup::ExactFirstStep;
    Solver solver(cfg);
    const TimeState s1 = solver.startup(solver.initial_state());
    const FieldCoeffs ref =
        interpolate(solver.velocity_space(), VectorFn([](double x, double y) { return ExactSolution::u(x, y, 0.25); }));
    EXPECT_EQ(s1.u_curr.coeffs, ref.coeffs);

    // In physical mode the switch has no exact solution to use.
    RunConfig p = physical(4, 0.25, 1.0);
    p.startup = Startup::ExactFirstStep;
    Solver ps(p);
    RunConfig q = p;
    q.startup = Startup::BackwardEuler;
    Solver qs(q);
    EXPECT_EQ(ps.startup(ps.initial_state()).u_curr.coeffs, qs.startup(qs.initial_state()).u_curr.coeffs);
}

TEST(Startup, PinnedSolveMatchesBorderedSystem)
{
    RunConfig cfg = physical(6, 0.1, 1.0);
    cfg.params.alpha = 0.3;
    cfg.params.nu = ViscosityLaw::exponential();
    Solver solver(cfg);
    const TimeState s0 = solver.initial_state();
    const TimeState s1 = solver.startup(s0);

    // Independent assembly of the literal bordered saddle system.
    const FeSpace& V = *solver.velocity_space();
    const FeSpace& P = *solver.pressure_space();
    const int nv = V.ndofs();
    const int np = P.ndofs();
    const double tau = cfg.tau;
    const CsrMatrix M = assemble_mass(V);
    const CsrMatrix K = add(add(M, 1.0 / tau, assemble_stiffness_nu(V, s0.c_curr, cfg.params), 1.0), 1.0,
                            assemble_convection_B(V, s0.u_curr), 1.0);
    const CsrMatrix G = assemble_divergence(V, P);
    CooBuilder coo(nv + np, nv + np);
    coo.add_block(K, 0, 0);
    coo.add_block(G.transpose(), 0, nv, -1.0);
    coo.add_block(G, nv, 0);
    CsrMatrix sys = border(coo.finalize(), assemble_unit_load(P), nv);
    DenseVector rhs(static_cast<std::size_t>(nv + np + 1), 0.0);
    DenseVector mu = spmv(M, s0.u_curr.coeffs);
    const DenseVector b = assemble_buoyancy(V, s0.c_curr, cfg.params);
    const DenseVector f = solver.momentum_source(tau);
    for (int i = 0; i < nv; ++i) {
        const auto k = static_cast<std::size_t>(i);
        rhs[k] = mu[k] / tau + b[k] + f[k];
    }
    const DenseVector zeros(V.dirichlet_dofs().size(), 0.0);
    apply_dirichlet(sys, rhs, V.dirichlet_dofs(), zeros);
    const DenseVector x = solve_direct(sys, rhs);

    const DenseVector u(x.begin(), x.begin() + nv);
    const DenseVector p(x.begin() + nv, x.begin() + nv + np);
    EXPECT_LE(max_diff(u, s1.u_curr.coeffs), 1e-10 * std::max(1.0, max_abs(u)));
    EXPECT_LE(max_diff(p, s1.p_curr.coeffs), 1e-10 * std::max(1.0, max_abs(p)));
    EXPECT_NEAR(x.back(), 0.0, 1e-10);
    EXPECT_GT(max_abs(p), 1e-3);
}

// ---------------------------------------------------------------------------
// CNLF step

TEST(Step, RequiresStartup)
{
    Solver solver(manufactured(4, 0.25, 1.0));
    EXPECT_THROW((void)solver.step(solver.initial_state()), Error);
}

TEST(Step, ConstraintsHold)
{
    RunConfig cfg = physical(8, 1.0 / 8, 1.0);
    cfg.params.nu = ViscosityLaw::affine(1.0, 0.1);
    Solver solver(cfg);
    TimeState s = solver.startup(solver.initial_state());
    const ConstraintResiduals r1 = solver.residuals(s);
    EXPECT_LE(r1.divergence, 1e-9);
    EXPECT_LE(r1.pressure_mean, 1e-10);
    EXPECT_LE(r1.concentration_mean, 1e-10);
    for (int k = 0; k < 5; ++k) {
        const FieldCoeffs older = s.u_prev;
        s = solver.step(s);
        const ConstraintResiduals r = solver.residuals(s, &older);
        EXPECT_LE(r.divergence, 1e-9) << "step " << s.n;
        EXPECT_LE(r.pressure_mean, 1e-10);
        EXPECT_LE(r.concentration_mean, 1e-10);
        // Paired with the wrong level the identity does not hold.
        EXPECT_GT(solver.residuals(s, &s.u_prev).divergence, 1e-6);
    }
    EXPECT_NEAR(s.t, s.n * cfg.tau, 1e-12);
}

TEST(Step, ConcentrationDecoupledFromNewVelocity)
{
    Solver solver(physical(6, 0.1, 1.0));
    const TimeState s1 = solver.startup(solver.initial_state());
    const TimeState plain = solver.step(s1);
    StepHooks hooks;
    hooks.after_velocity_solve = [](FieldCoeffs& u) {
        for (double& v : u.coeffs) {
            v = 1e3 * v + 7.0;
        }
    };
    const TimeState perturbed = solver.step(s1, &hooks);
    EXPECT_EQ(plain.c_curr.coeffs, perturbed.c_curr.coeffs);
    EXPECT_NE(plain.u_curr.coeffs, perturbed.u_curr.coeffs);
}

TEST(Step, NonFiniteDetected)
{
    RunConfig cfg = physical(4, 0.25, 1.0);
    Solver solver(cfg);
    TimeState s1 = solver.startup(solver.initial_state());
    s1.c_curr.coeffs[3] = std::nan("");
    try {
        (void)solver.step(s1);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos) << e.what();
    }

    // A source that turns non-finite mid-run poisons the solve of that step.
    cfg.forcing = [](double, double, double t) { return Point2{t > 0.3 ? std::nan("") : 0.0, 0.0}; };
    try {
        (void)run(cfg);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("step 3"), std::string::npos) << e.what();
    }
}

TEST(Step, AffineInForcing)
{
    const auto f1 = [](double x, double y, double) { return Point2{std::sin(3 * y), x * y}; };
    const auto f2 = [](double x, double, double t) { return Point2{1.0 + t, std::cos(2 * x)}; };
    const auto run_with = [](TimeVectorFn f) {
        RunConfig cfg = physical(5, 0.2, 1.0);
        cfg.forcing = std::move(f);
        Solver solver(cfg);
        // Same levels 0 and 1 for every variant.
        RunConfig base = physical(5, 0.2, 1.0);
        Solver b(base);
        TimeState s1 = b.startup(b.initial_state());
        s1.u_prev = FieldCoeffs(solver.velocity_space(), s1.u_prev.coeffs, FieldRole::Velocity);
        s1.u_curr = FieldCoeffs(solver.velocity_space(), s1.u_curr.coeffs, FieldRole::Velocity);
        s1.c_prev = FieldCoeffs(solver.concentration_space(), s1.c_prev.coeffs, FieldRole::Concentration);
        s1.c_curr = FieldCoeffs(solver.concentration_space(), s1.c_curr.coeffs, FieldRole::Concentration);
        return solver.step(s1);
    };
    const TimeState s0 = run_with({});
    const TimeState sa = run_with(f1);
    const TimeState sb = run_with(f2);
    const TimeState sab = run_with([&](double x, double y, double t) {
        const Point2 a = f1(x, y, t);
        const Point2 b = f2(x, y, t);
        return Point2{a.x + b.x, a.y + b.y};
    });
    for (std::size_t i = 0; i < s0.u_curr.coeffs.size(); ++i) {
        const double lin = sa.u_curr.coeffs[i] + sb.u_curr.coeffs[i] - s0.u_curr.coeffs[i];
        EXPECT_NEAR(sab.u_curr.coeffs[i], lin, 1e-11);
    }
    for (std::size_t i = 0; i < s0.p_curr.coeffs.size(); ++i) {
        const double lin = sa.p_curr.coeffs[i] + sb.p_curr.coeffs[i] - s0.p_curr.coeffs[i];
        EXPECT_NEAR(sab.p_curr.coeffs[i], lin, 1e-10);
    }
    EXPECT_GT(max_diff(sa.u_curr.coeffs, s0.u_curr.coeffs), 1e-4);
}

TEST(Step, WrappersMatchSolver)
{
    const RunConfig cfg = manufactured(4, 0.25, 1.0);
    Solver solver(cfg);
    const TimeState s0 = solver.initial_state();
    const TimeState s1 = solver.startup(s0);
    const TimeState w1 = startup_backward_euler(s0, cfg);
    EXPECT_EQ(s1.u_curr.coeffs, w1.u_curr.coeffs);
    EXPECT_EQ(s1.c_curr.coeffs, w1.c_curr.coeffs);
    const TimeState s2 = solver.step(s1);
    const TimeState w2 = cnlf_step(s1, cfg);
    EXPECT_EQ(s2.u_curr.coeffs, w2.u_curr.coeffs);
    EXPECT_EQ(s2.p_curr.coeffs, w2.p_curr.coeffs);
    EXPECT_EQ(w2.n, 2);
}

TEST(Step, ManufacturedErrorSmall)
{
    auto [s, log] = run(manufactured(16, 1.0 / 16, 1.0));
    const double t = s.t;
    EXPECT_NEAR(t, 1.0, 1e-12);
    const ErrorNorms ec = error_norms(s.c_curr, ExactScalar{[t](double x, double y) { return ExactSolution::c(x, y, t); }, {}});
    // Same magnitude as published results for this configuration.
    EXPECT_GT(ec.l2, 1e-3);
    EXPECT_LT(ec.l2, 5e-3);
}

// ---------------------------------------------------------------------------
// Runs and diagnostics

TEST(Run, SingleStepLog)
{
    auto [s, log] = run(manufactured(4, 0.5, 0.5));
    EXPECT_EQ(log.size(), 2u);
    EXPECT_EQ(log.records()[0].n, 0);
    EXPECT_EQ(log.records()[1].n, 1);
    EXPECT_EQ(s.n, 1);
}

TEST(Run, CadenceAlwaysKeepsLastStep)
{
    RunConfig cfg = manufactured(4, 0.1, 1.0);
    cfg.diagnostics_every = 4;
    auto [s, log] = run(cfg);
    std::vector<int> ns;
    for (const auto& r : log.records()) {
        ns.push_back(r.n);
    }
    EXPECT_EQ(ns, (std::vector<int>{0, 1, 4, 8, 10}));
    EXPECT_LE(log.max_div_residual(), 1e-9);
}

TEST(Run, Deterministic)
{
    RunConfig cfg = physical(6, 0.1, 0.5);
    cfg.params.nu = ViscosityLaw::exponential();
    auto a = run(cfg);
    auto b = run(cfg);
    EXPECT_EQ(a.first.u_curr.coeffs, b.first.u_curr.coeffs);
    EXPECT_EQ(a.first.c_curr.coeffs, b.first.c_curr.coeffs);
    EXPECT_EQ(a.first.p_curr.coeffs, b.first.p_curr.coeffs);
}

TEST(Run, EnergyBoundedByData)
{
    for (int n : {4, 8}) {
        auto [s, log] = run(physical(n, 1.0 / n, 1.0));
        for (const auto& r : log.records()) {
            if (r.n < 2) {
                continue;
            }
            EXPECT_LE(r.energy_lhs, r.energy_initial + r.energy_forcing) << "h = 1/" << n << ", n = " << r.n;
        }
    }
}

TEST(Run, ViscosityBoundPropagates)
{
    RunConfig cfg = manufactured(4, 0.25, 1.0);
    cfg.params.nu = ViscosityLaw::constant(5000.0);
    EXPECT_THROW((void)run(cfg), ViscosityBoundError);
}

TEST(Diagnostics, CsvFormat)
{
    auto [s, log] = run(manufactured(4, 0.5, 1.0));
    std::ostringstream os;
    log.write_csv(os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "n,t,u_L2,u_H1,c_L2,c_H1,p_L2,div_residual,mean_residual");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
    }
    EXPECT_EQ(rows, 3);
}

TEST(Diagnostics, ResidualMaxima)
{
    DiagnosticsLog log;
    log.observe_residuals(1e-14, 2e-13);
    log.observe_residuals(3e-14, 1e-15);
    EXPECT_EQ(log.max_div_residual(), 3e-14);
    EXPECT_EQ(log.max_mean_residual(), 2e-13);
}

// ---------------------------------------------------------------------------
// Truncation orders

TEST(Truncation, LogLogSlope)
{
    const std::vector<double> taus{0.1, 0.05, 0.025};
    EXPECT_NEAR(loglog_slope(taus, {3e-2, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
    EXPECT_NEAR(loglog_slope(taus, {0.0, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
    EXPECT_EQ(loglog_slope(taus, {0.0, 0.0, 1.0}), 0.0);
}

TEST(Truncation, LinearAndConstantInTime)
{
    const SmoothField lin{[](double x, double y, double t) { return x * y + 3.0 * t; },
                          [](double x, double y, double) { return Point2{y, x}; },
                          [](double, double, double) { return 3.0; }};
    const TruncationResult r = truncation_check(lin, 0.5, {0.1, 0.05});
    for (double e : r.centered_dt_error) {
        EXPECT_LE(e, 1e-12);
    }
    for (double e : r.average_error) {
        EXPECT_EQ(e, 0.0);
    }
}

TEST(Truncation, ManufacturedFieldsSecondOrder)
{
    const std::vector<double> taus{0.1, 0.05, 0.025, 0.0125, 0.00625};
    const SmoothField c{[](double x, double y, double t) { return ExactSolution::c(x, y, t); },
                        [](double x, double y, double t) { return ExactSolution::grad_c(x, y, t); },
                        [](double x, double y, double t) { return ExactSolution::c_t(x, y, t); }};
    const TruncationResult r = truncation_check(c, 0.5, taus);
    EXPECT_NEAR(r.centered_dt_slope, 2.0, 0.1);
    EXPECT_NEAR(r.average_slope, 2.0, 0.1);
    // Leading terms: f'''/6 tau^2 and f''/2 tau^2, with f = e^{-t} g(x).
    const double g_l2 = 0.5 * std::exp(-0.5);
    EXPECT_NEAR(r.centered_dt_error.back() / (taus.back() * taus.back()), g_l2 / 6.0, 1e-3);
}
