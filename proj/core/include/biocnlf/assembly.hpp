#pragma once

#include "biocnlf/elements.hpp"
#include "biocnlf/linalg.hpp"
#include "biocnlf/mesh.hpp"

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace biocnlf {

// ---------------------------------------------------------------------------
// Spaces and fields

enum class SpaceKind { P1Scalar, MiniVelocity, P1Pressure, P1Concentration };

/// Degree-of-freedom layout over a mesh.
///
/// Scalar P1 kinds number dofs by mesh node. MiniVelocity has two component
/// blocks of size (num_nodes + num_triangles); inside a block, vertex dofs
/// come first, then one bubble dof per triangle.
class FeSpace {
public:
    static FeSpace p1(std::shared_ptr<const TriMesh> mesh, SpaceKind kind = SpaceKind::P1Scalar,
                      bool dirichlet_on_boundary = false);
    static FeSpace mini_velocity(std::shared_ptr<const TriMesh> mesh, bool dirichlet_on_boundary = true);

    [[nodiscard]] SpaceKind kind() const noexcept { return kind_; }
    [[nodiscard]] const TriMesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const TriMesh>& mesh_ptr() const noexcept { return mesh_; }

    [[nodiscard]] int ndofs() const noexcept { return components_ * block_size_; }
    [[nodiscard]] int components() const noexcept { return components_; }
    [[nodiscard]] int block_size() const noexcept { return block_size_; }
    [[nodiscard]] bool has_bubble() const noexcept { return kind_ == SpaceKind::MiniVelocity; }
    /// Scalar shape functions per element and component (3, or 4 with bubble).
    [[nodiscard]] int local_size() const noexcept { return has_bubble() ? 4 : 3; }

    /// Global dof of local shape function `local` of component `comp` on element k.
    [[nodiscard]] int dof(int k, int local, int comp = 0) const
    {
        const int base = comp * block_size_;
        if (local < 3) {
            return base + mesh_->triangles()[static_cast<std::size_t>(k)][static_cast<std::size_t>(local)];
        }
        return base + mesh_->num_nodes() + k;
    }
    [[nodiscard]] bool is_bubble_dof(int d) const noexcept { return has_bubble() && (d % block_size_) >= mesh_->num_nodes(); }

    /// Sorted constrained dofs (vertex dofs on the boundary, or empty).
    [[nodiscard]] const std::vector<int>& dirichlet_dofs() const noexcept { return dirichlet_; }

    [[nodiscard]] std::string describe() const;

private:
    FeSpace(std::shared_ptr<const TriMesh> mesh, SpaceKind kind, int components, int block_size, bool dirichlet);

    std::shared_ptr<const TriMesh> mesh_;
    SpaceKind kind_;
    int components_;
    int block_size_;
    std::vector<int> dirichlet_;
};

enum class FieldRole { Velocity, Pressure, Concentration };

/// Coefficients of a discrete field in an FeSpace.
struct FieldCoeffs {
    std::shared_ptr<const FeSpace> space;
    DenseVector coeffs;
    FieldRole role = FieldRole::Concentration;

    FieldCoeffs() = default;
    FieldCoeffs(std::shared_ptr<const FeSpace> s, FieldRole r);
    FieldCoeffs(std::shared_ptr<const FeSpace> s, DenseVector c, FieldRole r);

    /// Value of component `comp` at barycentric point `bary` of element k.
    [[nodiscard]] double value(int k, const Bary& bary, int comp = 0) const;
    /// Physical gradient of component `comp` at a point of element k.
    [[nodiscard]] Point2 gradient(int k, const Bary& bary, int comp = 0) const;
};

using ScalarFn = std::function<double(double x, double y)>;
using VectorFn = std::function<Point2(double x, double y)>;

/// Nodal interpolant. For the bubble component, the coefficient makes the
/// interpolant exact at each element barycenter.
[[nodiscard]] FieldCoeffs interpolate(std::shared_ptr<const FeSpace> space, const ScalarFn& f, FieldRole role);
[[nodiscard]] FieldCoeffs interpolate(std::shared_ptr<const FeSpace> space, const VectorFn& f);

// ---------------------------------------------------------------------------
// Model parameters

/// Concentration-dependent kinematic viscosity.
struct ViscosityLaw {
    enum class Kind { Constant, Affine, Exponential };
    Kind kind = Kind::Constant;
    double a = 1.0; ///< nu0 for Constant, intercept for Affine
    double b = 0.0; ///< slope for Affine

    static ViscosityLaw constant(double nu0) { return {Kind::Constant, nu0, 0.0}; }
    static ViscosityLaw affine(double a, double b) { return {Kind::Affine, a, b}; }
    static ViscosityLaw exponential() { return {Kind::Exponential, 1.0, 0.0}; }

    [[nodiscard]] double operator()(double c) const noexcept;
    [[nodiscard]] double derivative(double c) const noexcept;
    /// Round-trips through parse_viscosity_law: "const:1", "affine:1:0.1", "exp".
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const ViscosityLaw&, const ViscosityLaw&) = default;
};

[[nodiscard]] ViscosityLaw parse_viscosity_law(const std::string& text);

struct ModelParams {
    ViscosityLaw nu = ViscosityLaw::constant(1.0);
    double theta = 1.0; ///< diffusivity
    double gamma = 1.0; ///< density ratio parameter
    double g = 1.0;     ///< gravity magnitude
    double U = 1.0;     ///< mean upward swimming speed
    double alpha = 0.0; ///< mean concentration
    double kappa = 1e-3; ///< viscosity must stay in [kappa, 1/kappa]

    /// Throws Error when theta <= 0, kappa outside (0, 1], or a value is not finite.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Raised when nu(c + alpha) leaves [kappa, 1/kappa] at a quadrature point.
class ViscosityBoundError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Forms. Matrices are indexed (test row, trial column).

/// Entry (i, j) = integral of phi_i . phi_j.
[[nodiscard]] CsrMatrix assemble_mass(const FeSpace& space);

/// Unit-coefficient stiffness, integral of grad phi_j : grad phi_i.
[[nodiscard]] CsrMatrix assemble_stiffness(const FeSpace& space);

/// (nu(c + alpha) grad u, grad v) with nu evaluated at each quadrature point
/// from the P1 concentration field.
[[nodiscard]] CsrMatrix assemble_stiffness_nu(const FeSpace& vel_space, const FieldCoeffs& c_field,
                                              const ModelParams& params);

/// Entry (i, j) = integral of div(Phi_j) psi_i, pressure rows by velocity columns.
[[nodiscard]] CsrMatrix assemble_divergence(const FeSpace& vel_space, const FeSpace& p_space);

/// Skew-symmetric convection for an advecting velocity w:
/// z^T N v = 1/2 (w.grad v, z) - 1/2 ((w.grad) z, v).
[[nodiscard]] CsrMatrix assemble_convection_B(const FeSpace& vel_space, const FieldCoeffs& w);

/// Scalar counterpart: r^T N c = 1/2 (w.grad c, r) - 1/2 (w.grad r, c).
[[nodiscard]] CsrMatrix assemble_convection_b_scalar(const FeSpace& c_space, const FieldCoeffs& w);

/// -g integral of (1 + gamma c) Phi_i . e2 (only second-component entries are nonzero).
[[nodiscard]] DenseVector assemble_buoyancy(const FeSpace& vel_space, const FieldCoeffs& c, const ModelParams& params);

struct SwimTerms {
    CsrMatrix matrix;     ///< (i, j) = U integral of phi_j d(phi_i)/dx2
    DenseVector constant; ///< i = U alpha integral of d(phi_i)/dx2
};

[[nodiscard]] SwimTerms assemble_swim(const FeSpace& c_space, const ModelParams& params);

/// Load vectors, integral of f . phi_i.
[[nodiscard]] DenseVector assemble_load(const FeSpace& space, const ScalarFn& f);
[[nodiscard]] DenseVector assemble_load(const FeSpace& space, const VectorFn& f);

/// Integral of each basis function (constant-function load, used for bordering).
[[nodiscard]] DenseVector assemble_unit_load(const FeSpace& space);

/// Symmetric elimination of prescribed dofs: constrained rows and columns are
/// zeroed (pattern kept), the diagonal set to 1 and the rhs adjusted so that the
/// solution attains `values` exactly.
void apply_dirichlet(CsrMatrix& a, DenseVector& rhs, std::span<const int> dofs, std::span<const double> values);

/// Appends one row and one column holding `weights` at positions
/// [offset, offset + weights.size()). Produces an (n+1) x (n+1) matrix whose
/// last unknown is the multiplier of the constraint weights . x = 0.
[[nodiscard]] CsrMatrix border(const CsrMatrix& a, std::span<const double> weights, int offset);

} // namespace biocnlf
