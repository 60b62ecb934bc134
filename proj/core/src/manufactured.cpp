#include "biocnlf/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace biocnlf {

namespace {

constexpr double kPi = std::numbers::pi;

// a(s) = s(2s-1)(s-1) = 2s^3 - 3s^2 + s
double a0(double s) { return s * (2.0 * s - 1.0) * (s - 1.0); }
double a1(double s) { return 6.0 * s * s - 6.0 * s + 1.0; }
double a2(double s) { return 12.0 * s - 6.0; }

} // namespace

Point2 ExactSolution::u(double x, double y, double t)
{
    const double e = std::exp(-t);
    return {e * a0(y), -e * a0(x)};
}

std::array<Point2, 2> ExactSolution::grad_u(double x, double y, double t)
{
    const double e = std::exp(-t);
    return {Point2{0.0, e * a1(y)}, Point2{-e * a1(x), 0.0}};
}

Point2 ExactSolution::u_t(double x, double y, double t)
{
    const auto v = u(x, y, t);
    return {-v.x, -v.y};
}

Point2 ExactSolution::laplacian_u(double x, double y, double t)
{
    const double e = std::exp(-t);
    return {e * a2(y), -e * a2(x)};
}

double ExactSolution::p(double x, double y, double t)
{
    return std::exp(-t) * (2.0 * x - 1.0) * (2.0 * y - 1.0);
}

Point2 ExactSolution::grad_p(double x, double y, double t)
{
    const double e = std::exp(-t);
    return {2.0 * e * (2.0 * y - 1.0), 2.0 * e * (2.0 * x - 1.0)};
}

double ExactSolution::c(double x, double y, double t)
{
    return std::exp(-t) * std::sin(kPi * x) * std::sin(kPi * y);
}

Point2 ExactSolution::grad_c(double x, double y, double t)
{
    const double e = std::exp(-t) * kPi;
    return {e * std::cos(kPi * x) * std::sin(kPi * y), e * std::sin(kPi * x) * std::cos(kPi * y)};
}

double ExactSolution::c_t(double x, double y, double t)
{
    return -c(x, y, t);
}

double ExactSolution::laplacian_c(double x, double y, double t)
{
    return -2.0 * kPi * kPi * c(x, y, t);
}

ManufacturedForcing manufactured_forcing(double x, double y, double t, const ModelParams& params)
{
    const auto uv = ExactSolution::u(x, y, t);
    const auto gu = ExactSolution::grad_u(x, y, t);
    const auto ut = ExactSolution::u_t(x, y, t);
    const auto lu = ExactSolution::laplacian_u(x, y, t);
    const auto gp = ExactSolution::grad_p(x, y, t);
    const double cv = ExactSolution::c(x, y, t);
    const auto gc = ExactSolution::grad_c(x, y, t);

    const double nu = params.nu(cv + params.alpha);
    const double dnu = params.nu.derivative(cv + params.alpha);

    // div(nu grad u_i) = nu lap u_i + nu'(c) grad c . grad u_i
    const double visc_x = nu * lu.x + dnu * (gc.x * gu[0].x + gc.y * gu[0].y);
    const double visc_y = nu * lu.y + dnu * (gc.x * gu[1].x + gc.y * gu[1].y);
    const double conv_x = uv.x * gu[0].x + uv.y * gu[0].y;
    const double conv_y = uv.x * gu[1].x + uv.y * gu[1].y;
    const double buoy = params.g * (1.0 + params.gamma * cv);

    ManufacturedForcing r;
    r.f = {ut.x - visc_x + conv_x + gp.x, ut.y - visc_y + conv_y + gp.y + buoy};
    r.s_c = ExactSolution::c_t(x, y, t) - params.theta * ExactSolution::laplacian_c(x, y, t) + uv.x * gc.x +
            uv.y * gc.y + params.U * gc.y;
    return r;
}

} // namespace biocnlf
