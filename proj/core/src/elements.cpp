#include "biocnlf/elements.hpp"

#include <cmath>
#include <string>

namespace biocnlf {

namespace {

// Weights below are normalized to sum to 1 and halved at the end.
void add_orbit_center(QuadratureRule& r, double w)
{
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(w);
}

void add_orbit_aab(QuadratureRule& r, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    r.points.push_back({b, a, a});
    r.points.push_back({a, b, a});
    r.points.push_back({a, a, b});
    for (int i = 0; i < 3; ++i) {
        r.weights.push_back(w);
    }
}

void add_orbit_abc(QuadratureRule& r, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    r.points.push_back({a, b, c});
    r.points.push_back({a, c, b});
    r.points.push_back({b, a, c});
    r.points.push_back({b, c, a});
    r.points.push_back({c, a, b});
    r.points.push_back({c, b, a});
    for (int i = 0; i < 6; ++i) {
        r.weights.push_back(w);
    }
}

} // namespace

QuadratureRule make_quadrature(int exact_degree)
{
    QuadratureRule r;
    switch (exact_degree) {
    case 1:
        add_orbit_center(r, 1.0);
        r.exact_degree = 1;
        break;
    case 2:
        add_orbit_aab(r, 1.0 / 6.0, 1.0 / 3.0);
        r.exact_degree = 2;
        break;
    case 3:
    case 4:
        // Dunavant, 6 points
        add_orbit_aab(r, 0.445948490915965, 0.223381589678011);
        add_orbit_aab(r, 0.091576213509771, 0.109951743655322);
        r.exact_degree = 4;
        break;
    case 5: {
        // Radon's 7-point rule in closed form.
        const double s = std::sqrt(15.0);
        add_orbit_center(r, 9.0 / 40.0);
        add_orbit_aab(r, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
        add_orbit_aab(r, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
        r.exact_degree = 5;
        break;
    }
    case 6:
        // Dunavant, 12 points
        add_orbit_aab(r, 0.249286745170910, 0.116786275726379);
        add_orbit_aab(r, 0.063089014491502, 0.050844906370207);
        add_orbit_abc(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
        r.exact_degree = 6;
        break;
    default:
        throw Error("make_quadrature: unsupported degree " + std::to_string(exact_degree) + " (supported: 1..6)");
    }
    for (double& w : r.weights) {
        w *= 0.5;
    }
    return r;
}

BasisEval eval_basis(BasisKind kind, const Bary& l)
{
    BasisEval e;
    switch (kind) {
    case BasisKind::P1:
        e.values = {l[0], l[1], l[2]};
        e.dbary = {{{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}}, {{0.0, 0.0, 1.0}}};
        break;
    case BasisKind::Bubble:
        e.values = {27.0 * l[0] * l[1] * l[2]};
        e.dbary = {{{27.0 * l[1] * l[2], 27.0 * l[0] * l[2], 27.0 * l[0] * l[1]}}};
        break;
    }
    return e;
}

ShapeTable::ShapeTable(const QuadratureRule& rule, bool with_bubble)
    : rule_(rule), nfun_(with_bubble ? 4 : 3)
{
    values_.reserve(rule_.size() * static_cast<std::size_t>(nfun_));
    dbary_.reserve(values_.capacity());
    for (const auto& p : rule_.points) {
        const auto lin = eval_basis(BasisKind::P1, p);
        for (int i = 0; i < 3; ++i) {
            values_.push_back(lin.values[static_cast<std::size_t>(i)]);
            dbary_.push_back(lin.dbary[static_cast<std::size_t>(i)]);
        }
        if (with_bubble) {
            const auto bub = eval_basis(BasisKind::Bubble, p);
            values_.push_back(bub.values[0]);
            dbary_.push_back(bub.dbary[0]);
        }
    }
}

} // namespace biocnlf
