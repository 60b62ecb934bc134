#include "biocnlf/norms.hpp"

#include <cmath>

namespace biocnlf {

namespace {

const QuadratureRule& norm_rule()
{
    static const QuadratureRule r = make_quadrature(kAssemblyDegree);
    return r;
}

// Visits every quadrature point as (element, bary, physical point, jxw).
template <class Fn>
void for_each_qp(const TriMesh& mesh, Fn&& fn)
{
    const auto& r = norm_rule();
    for (int k = 0; k < mesh.num_triangles(); ++k) {
        const double area = mesh.geometry(k).area;
        for (std::size_t q = 0; q < r.size(); ++q) {
            fn(k, r.points[q], mesh.map(k, r.points[q]), r.weights[q] * 2.0 * area);
        }
    }
}

} // namespace

FieldNorms field_norms(const FieldCoeffs& f)
{
    double l2 = 0.0;
    double semi = 0.0;
    const int nc = f.space->components();
    for_each_qp(f.space->mesh(), [&](int k, const Bary& b, const Point2&, double w) {
        for (int c = 0; c < nc; ++c) {
            const double v = f.value(k, b, c);
            const auto g = f.gradient(k, b, c);
            l2 += w * v * v;
            semi += w * (g.x * g.x + g.y * g.y);
        }
    });
    return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(semi)};
}

double integral(const FieldCoeffs& f, int comp)
{
    double s = 0.0;
    for_each_qp(f.space->mesh(), [&](int k, const Bary& b, const Point2&, double w) { s += w * f.value(k, b, comp); });
    return s;
}

ErrorNorms error_norms(const FieldCoeffs& f, const ExactScalar& exact)
{
    if (f.space->components() != 1) {
        throw Error("error_norms: scalar exact field for a vector discrete field");
    }
    double l2 = 0.0;
    double semi = 0.0;
    double ex = 0.0;
    for_each_qp(f.space->mesh(), [&](int k, const Bary& b, const Point2& p, double w) {
        const double ev = exact.value(p.x, p.y);
        const double d = ev - f.value(k, b);
        l2 += w * d * d;
        ex += w * ev * ev;
        if (exact.grad) {
            const auto eg = exact.grad(p.x, p.y);
            const auto g = f.gradient(k, b);
            semi += w * ((eg.x - g.x) * (eg.x - g.x) + (eg.y - g.y) * (eg.y - g.y));
        }
    });
    return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(ex)};
}

ErrorNorms error_norms(const FieldCoeffs& f, const ExactVector& exact)
{
    if (f.space->components() != 2) {
        throw Error("error_norms: vector exact field for a scalar discrete field");
    }
    double l2 = 0.0;
    double semi = 0.0;
    double ex = 0.0;
    for_each_qp(f.space->mesh(), [&](int k, const Bary& b, const Point2& p, double w) {
        const auto ev = exact.value(p.x, p.y);
        const double dx = ev.x - f.value(k, b, 0);
        const double dy = ev.y - f.value(k, b, 1);
        l2 += w * (dx * dx + dy * dy);
        ex += w * (ev.x * ev.x + ev.y * ev.y);
        if (exact.grad) {
            const auto eg = exact.grad(p.x, p.y);
            for (int c = 0; c < 2; ++c) {
                const auto g = f.gradient(k, b, c);
                const auto& e = eg[static_cast<std::size_t>(c)];
                semi += w * ((e.x - g.x) * (e.x - g.x) + (e.y - g.y) * (e.y - g.y));
            }
        }
    });
    return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(ex)};
}

double l2_norm(const TriMesh& mesh, const std::function<double(double, double)>& f)
{
    double s = 0.0;
    for_each_qp(mesh, [&](int, const Bary&, const Point2& p, double w) {
        const double v = f(p.x, p.y);
        s += w * v * v;
    });
    return std::sqrt(s);
}

double l2_norm(const TriMesh& mesh, const std::function<Point2(double, double)>& f)
{
    double s = 0.0;
    for_each_qp(mesh, [&](int, const Bary&, const Point2& p, double w) {
        const auto v = f(p.x, p.y);
        s += w * (v.x * v.x + v.y * v.y);
    });
    return std::sqrt(s);
}

} // namespace biocnlf
