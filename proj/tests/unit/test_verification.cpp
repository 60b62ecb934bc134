#include "biocnlf/manufactured.hpp"
#include "biocnlf/norms.hpp"
#include "biocnlf/verification.hpp"

#include "../oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

using namespace biocnlf;

TEST(L2InTime, Examples)
{
    EXPECT_EQ(l2_in_time(std::vector<double>{0.0, 0.0}, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(l2_in_time(std::vector<double>{1, 1, 1, 1}, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(l2_in_time(std::vector<double>{3, 4}, 1.0), 5.0);
    EXPECT_THROW((void)l2_in_time(std::vector<double>{}, 1.0), Error);
}

TEST(MeshSizes, CellsAndHalving)
{
    EXPECT_EQ(cells_for(0.25), 4);
    EXPECT_EQ(cells_for(1.0 / 128), 128);
    EXPECT_THROW((void)cells_for(0.3), Error);
    EXPECT_THROW((void)cells_for(0.0), Error);
    EXPECT_THROW((void)cells_for(-0.5), Error);

    const std::vector<double> good{0.25, 0.125, 0.0625};
    EXPECT_NO_THROW(require_halving(good));
    EXPECT_THROW(require_halving(std::vector<double>{1.0 / 3, 1.0 / 7}), Error);
    EXPECT_THROW(require_halving(std::vector<double>{0.25}), Error);
    EXPECT_NO_THROW(require_halving(std::vector<double>{0.25}, 1));
    EXPECT_THROW(require_halving(std::vector<double>{0.125, 0.25}), Error);
}

TEST(ExactStructure, RandomPoints)
{
    std::mt19937 rng(1000);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        const double t = u(rng);
        const auto g = ExactSolution::grad_u(x, y, t);
        EXPECT_LE(std::abs(g[0].x + g[1].y), 1e-12);
        const double s = u(rng);
        EXPECT_LE(std::abs(ExactSolution::c(s, 0.0, t)), 1e-12);
        EXPECT_LE(std::abs(ExactSolution::c(s, 1.0, t)), 1e-12);
        EXPECT_LE(std::abs(ExactSolution::c(0.0, s, t)), 1e-12);
        EXPECT_LE(std::abs(ExactSolution::c(1.0, s, t)), 1e-12);
    }
    const auto mesh = generate_uniform(1, 1);
    for (int i = 0; i < 10; ++i) {
        const double t = u(rng);
        EXPECT_LE(std::abs(oracle::integrate_mesh(mesh, [t](int, double x, double y) { return ExactSolution::p(x, y, t); })),
                  1e-12);
    }
}

TEST(StudyNorms, ZeroAgainstExactConcentration)
{
    const auto m = std::make_shared<const TriMesh>(generate_uniform(16, 16));
    const auto s = std::make_shared<const FeSpace>(FeSpace::p1(m, SpaceKind::P1Concentration));
    const FieldCoeffs zero(s, FieldRole::Concentration);
    const ErrorNorms e =
        error_norms(zero, ExactScalar{[](double x, double y) { return ExactSolution::c(x, y, 0.0); }, {}});
    EXPECT_NEAR(e.l2, 0.5, 1e-4);
}

TEST(StudyNorms, InterpolationRatio)
{
    std::vector<double> err;
    for (int n : {16, 32}) {
        const auto m = std::make_shared<const TriMesh>(generate_uniform(n, n));
        const auto s = std::make_shared<const FeSpace>(FeSpace::p1(m, SpaceKind::P1Concentration));
        const auto c = [](double x, double y) { return ExactSolution::c(x, y, 0.0); };
        err.push_back(error_norms(interpolate(s, ScalarFn(c), FieldRole::Concentration), ExactScalar{c, {}}).l2);
    }
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.1);
}

TEST(Study, RowsAndRates)
{
    RunConfig cfg;
    cfg.T_final = 0.5;
    const std::vector<double> h{0.25, 0.125, 0.0625};
    const StudyResult r = convergence_study(h, cfg);
    ASSERT_TRUE(r.complete) << r.error;
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_FALSE(r.rows[0].rates.has_value());
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& row = r.rows[i];
        EXPECT_EQ(row.h, h[i]);
        EXPECT_EQ(row.tau, h[i]);
        EXPECT_GE(row.errors.u_L2, 0.0);
        EXPECT_LE(row.max_div_residual, 1e-9);
        EXPECT_LE(row.max_mean_residual, 1e-9);
        if (i > 0) {
            ASSERT_TRUE(row.rates.has_value());
            EXPECT_DOUBLE_EQ(row.rates->c_L2, std::log2(r.rows[i - 1].errors.c_L2 / row.errors.c_L2));
        }
    }
    EXPECT_GT(r.rows[2].rates->c_L2, 1.5);

    // Relative errors divide by the exact norm at t_N: ||c(t)||_L2 = e^{-t}/2.
    const double c_norm = 0.5 * std::exp(-0.5);
    EXPECT_NEAR(r.rows[2].relative.c_L2 * c_norm, r.rows[2].errors.c_L2, 1e-4 * r.rows[2].errors.c_L2);
}

TEST(Study, SingleRowHasNoRates)
{
    RunConfig cfg;
    cfg.T_final = 0.5;
    const StudyResult r = convergence_study(std::vector<double>{0.25}, cfg);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_FALSE(r.rows[0].rates.has_value());
}

TEST(Study, ThreadCountDoesNotChangeResults)
{
    RunConfig cfg;
    cfg.T_final = 0.5;
    const std::vector<double> h{0.25, 0.125};
    StudyOptions one;
    one.threads = 1;
    StudyOptions two;
    two.threads = 2;
    const StudyResult a = convergence_study(h, cfg, one);
    const StudyResult b = convergence_study(h, cfg, two);
    for (std::size_t i = 0; i < h.size(); ++i) {
        EXPECT_EQ(a.rows[i].errors.u_L2, b.rows[i].errors.u_L2);
        EXPECT_EQ(a.rows[i].errors.p_L2, b.rows[i].errors.p_L2);
    }
}

TEST(Study, PressureReferenceChangesOnlyPressure)
{
    RunConfig cfg;
    cfg.T_final = 0.5;
    const std::vector<double> h{0.25, 0.125};
    StudyOptions prev;
    prev.pressure_reference = PressureReference::Previous;
    const StudyResult a = convergence_study(h, cfg);
    const StudyResult b = convergence_study(h, cfg, prev);
    EXPECT_EQ(a.rows[1].errors.u_L2, b.rows[1].errors.u_L2);
    EXPECT_EQ(a.rows[1].errors.c_H1, b.rows[1].errors.c_H1);
    EXPECT_NE(a.rows[1].errors.p_L2, b.rows[1].errors.p_L2);
}

TEST(Study, FailureKeepsPrefix)
{
    RunConfig cfg;
    cfg.T_final = 0.5;
    cfg.params.nu = ViscosityLaw::constant(5000.0);
    const StudyResult r = convergence_study(std::vector<double>{0.25, 0.125}, cfg);
    EXPECT_FALSE(r.complete);
    EXPECT_TRUE(r.rows.empty());
    EXPECT_NE(r.error.find("h = 0.25"), std::string::npos) << r.error;
}

TEST(Study, RejectsNonHalving)
{
    RunConfig cfg;
    EXPECT_THROW((void)convergence_study(std::vector<double>{0.25, 0.1}, cfg), Error);
}

TEST(Stability, SweepRows)
{
    RunConfig cfg;
    cfg.T_final = 0.5;
    const auto rows = stability_sweep(std::vector<double>{0.25, 0.125}, cfg);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_GT(r.u_L2, 0.0);
        EXPECT_GE(r.u_H1, r.u_L2);
        EXPECT_GE(r.c_H1, r.c_L2);
        EXPECT_LE(r.max_div_residual, 1e-9);
    }
    // Close to the exact-field norm ||c(0.5)|| = e^{-0.5}/2 on the finer mesh.
    EXPECT_NEAR(rows[1].c_L2, 0.5 * std::exp(-0.5), 2e-2);
    EXPECT_THROW((void)stability_sweep(std::vector<double>{}, cfg), Error);
}

TEST(Threads, Selection)
{
    StudyOptions o;
    o.threads = 3;
    EXPECT_EQ(study_threads(o, 10), 3);
    EXPECT_EQ(study_threads(o, 2), 2);
    EXPECT_EQ(study_threads(o, 0), 1);
    o.threads = 0;
    ::setenv("BIOCNLF_THREADS", "2", 1);
    EXPECT_EQ(study_threads(o, 10), 2);
    ::unsetenv("BIOCNLF_THREADS");
    EXPECT_GE(study_threads(o, 10), 1);
}
