#pragma once

#include "biocnlf/assembly.hpp"
#include "biocnlf/mesh.hpp"

#include <array>
#include <functional>

namespace biocnlf {

/// Closed-form test fields on the unit square:
///   u = e^{-t} ( y(2y-1)(y-1), -x(2x-1)(x-1) )
///   p = e^{-t} (2x-1)(2y-1)
///   c = e^{-t} sin(pi x) sin(pi y)
/// u is divergence free, p has zero mean and c vanishes on the boundary.
struct ExactSolution {
    [[nodiscard]] static Point2 u(double x, double y, double t);
    /// Rows are components: grad_u[0] = grad u1, grad_u[1] = grad u2.
    [[nodiscard]] static std::array<Point2, 2> grad_u(double x, double y, double t);
    [[nodiscard]] static Point2 u_t(double x, double y, double t);
    [[nodiscard]] static Point2 laplacian_u(double x, double y, double t);

    [[nodiscard]] static double p(double x, double y, double t);
    [[nodiscard]] static Point2 grad_p(double x, double y, double t);

    [[nodiscard]] static double c(double x, double y, double t);
    [[nodiscard]] static Point2 grad_c(double x, double y, double t);
    [[nodiscard]] static double c_t(double x, double y, double t);
    [[nodiscard]] static double laplacian_c(double x, double y, double t);
};

struct ManufacturedForcing {
    Point2 f;         ///< momentum source
    double s_c = 0.0; ///< concentration source
};

/// Sources that make ExactSolution solve
///   u_t - div(nu(c+alpha) grad u) + (u.grad)u + grad p + g(1 + gamma c) e2 = f
///   c_t - theta lap c + u.grad c + U d(c+alpha)/dx2 = s_c
[[nodiscard]] ManufacturedForcing manufactured_forcing(double x, double y, double t, const ModelParams& params);

} // namespace biocnlf
