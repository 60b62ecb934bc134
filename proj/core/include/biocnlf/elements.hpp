#pragma once

#include "biocnlf/mesh.hpp"

#include <array>
#include <vector>

namespace biocnlf {

using Bary = std::array<double, 3>;

/// Quadrature on the reference triangle, points in barycentric coordinates.
/// Weights sum to 1/2 (the reference-triangle area); scale by 2*|K| for an
/// element K.
struct QuadratureRule {
    std::vector<Bary> points;
    std::vector<double> weights;
    int exact_degree = 0;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Symmetric rules exact for polynomials up to `exact_degree` (1..6).
/// The returned rule may be exact for a higher degree than requested.
[[nodiscard]] QuadratureRule make_quadrature(int exact_degree);

/// Quadrature degree used for all system assembly and error norms.
inline constexpr int kAssemblyDegree = 5;

enum class BasisKind { P1, Bubble };

/// Values of the basis functions at one point and their derivatives with
/// respect to the three barycentric coordinates. Physical gradients follow by
/// contracting with ElementGeometry::grad_lambda.
struct BasisEval {
    std::vector<double> values;
    std::vector<std::array<double, 3>> dbary;
};

/// P1 yields three functions (lambda_1..3); Bubble yields 27*l1*l2*l3.
[[nodiscard]] BasisEval eval_basis(BasisKind kind, const Bary& bary);

/// Physical gradient from barycentric derivatives.
[[nodiscard]] inline Point2 physical_gradient(const std::array<double, 3>& dbary, const ElementGeometry& g) noexcept
{
    Point2 r;
    for (std::size_t j = 0; j < 3; ++j) {
        r.x += dbary[j] * g.grad_lambda[j].x;
        r.y += dbary[j] * g.grad_lambda[j].y;
    }
    return r;
}

/// Local scalar shape set on one element: three P1 functions, optionally
/// followed by the element bubble. Tabulated once per quadrature point.
class ShapeTable {
public:
    ShapeTable(const QuadratureRule& rule, bool with_bubble);

    [[nodiscard]] int num_functions() const noexcept { return nfun_; }
    [[nodiscard]] std::size_t num_points() const noexcept { return rule_.size(); }
    [[nodiscard]] const QuadratureRule& rule() const noexcept { return rule_; }

    [[nodiscard]] double value(std::size_t q, int i) const { return values_[q * static_cast<std::size_t>(nfun_) + static_cast<std::size_t>(i)]; }
    [[nodiscard]] const std::array<double, 3>& dbary(std::size_t q, int i) const
    {
        return dbary_[q * static_cast<std::size_t>(nfun_) + static_cast<std::size_t>(i)];
    }

private:
    QuadratureRule rule_;
    int nfun_ = 0;
    std::vector<double> values_;
    std::vector<std::array<double, 3>> dbary_;
};

} // namespace biocnlf
