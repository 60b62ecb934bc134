#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace biocnlf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;

    [[nodiscard]] double width() const noexcept { return x1 - x0; }
    [[nodiscard]] double height() const noexcept { return y1 - y0; }
    [[nodiscard]] double area() const noexcept { return width() * height(); }

    static Rect unit_square() noexcept { return {}; }
};

using Triangle = std::array<int, 3>;

/// Constant-per-element geometry of a linear triangle.
struct ElementGeometry {
    double area = 0.0;
    /// Gradients of the three barycentric coordinates.
    std::array<Point2, 3> grad_lambda{};
};

/// Conforming triangulation of a rectangle. Immutable once built.
class TriMesh {
public:
    TriMesh(std::vector<Point2> nodes, std::vector<Triangle> triangles, Rect domain);

    [[nodiscard]] const std::vector<Point2>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] const Point2& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const Triangle& triangle(int k) const { return triangles_.at(static_cast<std::size_t>(k)); }

    [[nodiscard]] int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }

    /// Sorted indices of nodes on the rectangle boundary.
    [[nodiscard]] const std::vector<int>& boundary_nodes() const noexcept { return boundary_nodes_; }
    [[nodiscard]] bool is_boundary(int node) const { return on_boundary_.at(static_cast<std::size_t>(node)) != 0; }

    [[nodiscard]] double h_max() const noexcept { return h_max_; }
    [[nodiscard]] const Rect& domain() const noexcept { return domain_; }

    [[nodiscard]] ElementGeometry geometry(int k) const;
    [[nodiscard]] double diameter(int k) const;

    /// Physical point of barycentric coordinates `bary` on element k.
    [[nodiscard]] Point2 map(int k, const std::array<double, 3>& bary) const;

    friend bool operator==(const TriMesh&, const TriMesh&);

private:
    std::vector<Point2> nodes_;
    std::vector<Triangle> triangles_;
    std::vector<int> boundary_nodes_;
    std::vector<char> on_boundary_;
    Rect domain_;
    double h_max_ = 0.0;
};

/// Structured mesh of nx x ny cells, each cut along its lower-left to
/// upper-right diagonal. Node (i, j) has index j*(nx+1) + i.
[[nodiscard]] TriMesh generate_uniform(int nx, int ny, const Rect& domain = Rect::unit_square());

/// Barycentric gradients and area of triangle k. Throws on a bad index.
[[nodiscard]] ElementGeometry element_geometry(const TriMesh& mesh, int k);

/// Debug dump: `nodes N triangles M`, N lines `x y is_boundary`, M lines `i j k`.
void write_mesh(std::ostream& os, const TriMesh& mesh);

inline constexpr double kBoundaryTol = 1e-12;

} // namespace biocnlf
