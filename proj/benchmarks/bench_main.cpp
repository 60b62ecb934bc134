#include "biocnlf/assembly.hpp"
#include "biocnlf/linalg.hpp"
#include "biocnlf/scheme.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

using namespace biocnlf;

namespace {

std::shared_ptr<const TriMesh> mesh(int n) { return std::make_shared<const TriMesh>(generate_uniform(n, n)); }

FieldCoeffs smooth_concentration(const std::shared_ptr<const FeSpace>& s)
{
    return interpolate(s, ScalarFn([](double x, double y) { return 0.5 * std::cos(3.0 * x) * std::sin(2.0 * y); }),
                       FieldRole::Concentration);
}

FieldCoeffs smooth_velocity(const std::shared_ptr<const FeSpace>& s)
{
    return interpolate(s, VectorFn([](double x, double y) { return Point2{std::sin(x + y), std::cos(x - y)}; }));
}

void BM_AssembleStiffnessNu(benchmark::State& state)
{
    const auto m = mesh(static_cast<int>(state.range(0)));
    const auto v = std::make_shared<const FeSpace>(FeSpace::mini_velocity(m, true));
    const auto c = std::make_shared<const FeSpace>(FeSpace::p1(m, SpaceKind::P1Concentration, false));
    const FieldCoeffs cf = smooth_concentration(c);
    ModelParams p;
    p.nu = ViscosityLaw::exponential();
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_stiffness_nu(*v, cf, p));
    }
}
BENCHMARK(BM_AssembleStiffnessNu)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleConvection(benchmark::State& state)
{
    const auto m = mesh(static_cast<int>(state.range(0)));
    const auto v = std::make_shared<const FeSpace>(FeSpace::mini_velocity(m, true));
    const FieldCoeffs w = smooth_velocity(v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_convection_B(*v, w));
    }
}
BENCHMARK(BM_AssembleConvection)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FactorizeAndSolveMass(benchmark::State& state)
{
    const auto m = mesh(static_cast<int>(state.range(0)));
    const auto c = std::make_shared<const FeSpace>(FeSpace::p1(m, SpaceKind::P1Concentration, false));
    const CsrMatrix A = add(assemble_mass(*c), 1.0, assemble_stiffness(*c), 0.5);
    const DenseVector b(static_cast<std::size_t>(A.rows()), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_direct(A, b));
    }
}
BENCHMARK(BM_FactorizeAndSolveMass)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CnlfStep(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    RunConfig cfg;
    cfg.nx = cfg.ny = n;
    cfg.tau = 1.0 / n;
    Solver solver(cfg);
    const TimeState s1 = solver.startup(solver.initial_state());
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.step(s1));
    }
}
BENCHMARK(BM_CnlfStep)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
