#include "biocnlf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace biocnlf {

namespace {

bool on_rect_boundary(const Point2& p, const Rect& r)
{
    return std::abs(p.x - r.x0) <= kBoundaryTol || std::abs(p.x - r.x1) <= kBoundaryTol ||
           std::abs(p.y - r.y0) <= kBoundaryTol || std::abs(p.y - r.y1) <= kBoundaryTol;
}

double dist(const Point2& a, const Point2& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace

TriMesh::TriMesh(std::vector<Point2> nodes, std::vector<Triangle> triangles, Rect domain)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)), domain_(domain)
{
    if (!(domain_.width() > 0.0) || !(domain_.height() > 0.0)) {
        throw Error("TriMesh: degenerate domain");
    }
    const int n = num_nodes();
    on_boundary_.assign(nodes_.size(), 0);
    for (int i = 0; i < n; ++i) {
        if (on_rect_boundary(nodes_[static_cast<std::size_t>(i)], domain_)) {
            on_boundary_[static_cast<std::size_t>(i)] = 1;
            boundary_nodes_.push_back(i);
        }
    }
    for (int k = 0; k < num_triangles(); ++k) {
        for (int v : triangles_[static_cast<std::size_t>(k)]) {
            if (v < 0 || v >= n) {
                throw Error("TriMesh: triangle " + std::to_string(k) + " references node " +
                            std::to_string(v) + " out of range");
            }
        }
        const auto g = geometry(k);
        if (!(g.area > 0.0)) {
            throw Error("TriMesh: triangle " + std::to_string(k) + " is not counter-clockwise");
        }
        h_max_ = std::max(h_max_, diameter(k));
    }
}

ElementGeometry TriMesh::geometry(int k) const
{
    const auto& t = triangle(k);
    const Point2& a = nodes_[static_cast<std::size_t>(t[0])];
    const Point2& b = nodes_[static_cast<std::size_t>(t[1])];
    const Point2& c = nodes_[static_cast<std::size_t>(t[2])];

    // Twice the signed area.
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    ElementGeometry g;
    g.area = 0.5 * det;
    // grad lambda_i = rot90(opposite edge) / det
    g.grad_lambda[0] = {(b.y - c.y) / det, (c.x - b.x) / det};
    g.grad_lambda[1] = {(c.y - a.y) / det, (a.x - c.x) / det};
    g.grad_lambda[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
    return g;
}

double TriMesh::diameter(int k) const
{
    const auto& t = triangle(k);
    const Point2& a = nodes_[static_cast<std::size_t>(t[0])];
    const Point2& b = nodes_[static_cast<std::size_t>(t[1])];
    const Point2& c = nodes_[static_cast<std::size_t>(t[2])];
    return std::max({dist(a, b), dist(b, c), dist(c, a)});
}

Point2 TriMesh::map(int k, const std::array<double, 3>& bary) const
{
    const auto& t = triangle(k);
    Point2 p;
    for (int i = 0; i < 3; ++i) {
        const Point2& v = nodes_[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
        p.x += bary[static_cast<std::size_t>(i)] * v.x;
        p.y += bary[static_cast<std::size_t>(i)] * v.y;
    }
    return p;
}

bool operator==(const TriMesh& a, const TriMesh& b)
{
    if (a.nodes_.size() != b.nodes_.size() || a.triangles_ != b.triangles_) {
        return false;
    }
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        if (a.nodes_[i].x != b.nodes_[i].x || a.nodes_[i].y != b.nodes_[i].y) {
            return false;
        }
    }
    return a.boundary_nodes_ == b.boundary_nodes_ && a.h_max_ == b.h_max_;
}

TriMesh generate_uniform(int nx, int ny, const Rect& domain)
{
    if (nx < 1 || ny < 1) {
        throw Error("generate_uniform: nx and ny must be >= 1");
    }
    if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
        throw Error("generate_uniform: degenerate domain (zero width or height)");
    }

    std::vector<Point2> nodes;
    nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j) {
        // Endpoints are set exactly so boundary classification never depends on rounding.
        const double y = (j == ny) ? domain.y1 : domain.y0 + domain.height() * j / ny;
        for (int i = 0; i <= nx; ++i) {
            const double x = (i == nx) ? domain.x1 : domain.x0 + domain.width() * i / nx;
            nodes.push_back({x, y});
        }
    }

    const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int sw = id(i, j);
            const int se = id(i + 1, j);
            const int ne = id(i + 1, j + 1);
            const int nw = id(i, j + 1);
            tris.push_back({sw, se, ne});
            tris.push_back({sw, ne, nw});
        }
    }
    return TriMesh(std::move(nodes), std::move(tris), domain);
}

ElementGeometry element_geometry(const TriMesh& mesh, int k)
{
    if (k < 0 || k >= mesh.num_triangles()) {
        throw Error("element_geometry: element index " + std::to_string(k) + " out of range");
    }
    return mesh.geometry(k);
}

void write_mesh(std::ostream& os, const TriMesh& mesh)
{
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << "nodes " << mesh.num_nodes() << " triangles " << mesh.num_triangles() << '\n';
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const auto& p = mesh.node(i);
        buf << p.x << ' ' << p.y << ' ' << (mesh.is_boundary(i) ? 1 : 0) << '\n';
    }
    for (const auto& t : mesh.triangles()) {
        buf << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    os << buf.str();
}

} // namespace biocnlf
