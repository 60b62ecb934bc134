#pragma once

#include "biocnlf/assembly.hpp"

#include <array>
#include <functional>

namespace biocnlf {

/// L2 norm and full H1 norm (sqrt(L2^2 + |.|_1^2)) of a discrete field, by
/// element quadrature. Vector fields use the Euclidean/Frobenius pointwise norm.
struct FieldNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double h1_semi = 0.0;
};

[[nodiscard]] FieldNorms field_norms(const FieldCoeffs& field);

/// Integral of component `comp` over the domain.
[[nodiscard]] double integral(const FieldCoeffs& field, int comp = 0);

struct ExactScalar {
    std::function<double(double, double)> value;
    std::function<Point2(double, double)> grad;
};

struct ExactVector {
    std::function<Point2(double, double)> value;
    std::function<std::array<Point2, 2>(double, double)> grad;
};

/// Errors of a discrete field against an exact one. `h1` is the full H1 norm
/// of the error; `exact_l2` is the L2 norm of the exact field (for relative
/// errors). A missing `grad` callable skips the gradient part.
struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double exact_l2 = 0.0;
};

[[nodiscard]] ErrorNorms error_norms(const FieldCoeffs& field, const ExactScalar& exact);
[[nodiscard]] ErrorNorms error_norms(const FieldCoeffs& field, const ExactVector& exact);

/// L2 norm of an analytic function over a mesh.
[[nodiscard]] double l2_norm(const TriMesh& mesh, const std::function<double(double, double)>& f);
[[nodiscard]] double l2_norm(const TriMesh& mesh, const std::function<Point2(double, double)>& f);

} // namespace biocnlf
