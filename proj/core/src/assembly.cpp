#include "biocnlf/assembly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace biocnlf {

// ---------------------------------------------------------------------------
// FeSpace

FeSpace::FeSpace(std::shared_ptr<const TriMesh> mesh, SpaceKind kind, int components, int block_size, bool dirichlet)
    : mesh_(std::move(mesh)), kind_(kind), components_(components), block_size_(block_size)
{
    if (dirichlet) {
        for (int c = 0; c < components_; ++c) {
            for (int v : mesh_->boundary_nodes()) {
                dirichlet_.push_back(c * block_size_ + v);
            }
        }
    }
}

FeSpace FeSpace::p1(std::shared_ptr<const TriMesh> mesh, SpaceKind kind, bool dirichlet_on_boundary)
{
    if (!mesh) {
        throw Error("FeSpace: null mesh");
    }
    if (kind == SpaceKind::MiniVelocity) {
        throw Error("FeSpace::p1: MiniVelocity is not a P1 kind");
    }
    const int n = mesh->num_nodes();
    return FeSpace(std::move(mesh), kind, 1, n, dirichlet_on_boundary);
}

FeSpace FeSpace::mini_velocity(std::shared_ptr<const TriMesh> mesh, bool dirichlet_on_boundary)
{
    if (!mesh) {
        throw Error("FeSpace: null mesh");
    }
    const int n = mesh->num_nodes() + mesh->num_triangles();
    return FeSpace(std::move(mesh), SpaceKind::MiniVelocity, 2, n, dirichlet_on_boundary);
}

std::string FeSpace::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case SpaceKind::P1Scalar: os << "P1"; break;
    case SpaceKind::MiniVelocity: os << "P1b^2"; break;
    case SpaceKind::P1Pressure: os << "P1 pressure"; break;
    case SpaceKind::P1Concentration: os << "P1 concentration"; break;
    }
    os << " (" << ndofs() << " dofs)";
    return os.str();
}

// ---------------------------------------------------------------------------
// Fields

FieldCoeffs::FieldCoeffs(std::shared_ptr<const FeSpace> s, FieldRole r)
    : space(std::move(s)), coeffs(static_cast<std::size_t>(space->ndofs()), 0.0), role(r)
{
}

FieldCoeffs::FieldCoeffs(std::shared_ptr<const FeSpace> s, DenseVector c, FieldRole r)
    : space(std::move(s)), coeffs(std::move(c)), role(r)
{
    if (coeffs.size() != static_cast<std::size_t>(space->ndofs())) {
        throw Error("FieldCoeffs: coefficient count does not match " + space->describe());
    }
}

double FieldCoeffs::value(int k, const Bary& l, int comp) const
{
    const FeSpace& s = *space;
    double v = 0.0;
    for (int i = 0; i < 3; ++i) {
        v += coeffs[static_cast<std::size_t>(s.dof(k, i, comp))] * l[static_cast<std::size_t>(i)];
    }
    if (s.has_bubble()) {
        v += coeffs[static_cast<std::size_t>(s.dof(k, 3, comp))] * 27.0 * l[0] * l[1] * l[2];
    }
    return v;
}

Point2 FieldCoeffs::gradient(int k, const Bary& l, int comp) const
{
    const FeSpace& s = *space;
    const auto g = s.mesh().geometry(k);
    std::array<double, 3> d{};
    for (int i = 0; i < 3; ++i) {
        d[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(s.dof(k, i, comp))];
    }
    if (s.has_bubble()) {
        const double b = 27.0 * coeffs[static_cast<std::size_t>(s.dof(k, 3, comp))];
        d[0] += b * l[1] * l[2];
        d[1] += b * l[0] * l[2];
        d[2] += b * l[0] * l[1];
    }
    return physical_gradient(d, g);
}

namespace {

constexpr Bary kCentroid{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

void interpolate_component(FieldCoeffs& out, int comp, const std::function<double(double, double)>& f)
{
    const FeSpace& s = *out.space;
    const TriMesh& mesh = s.mesh();
    for (int v = 0; v < mesh.num_nodes(); ++v) {
        const auto& p = mesh.node(v);
        out.coeffs[static_cast<std::size_t>(comp * s.block_size() + v)] = f(p.x, p.y);
    }
    if (s.has_bubble()) {
        for (int k = 0; k < mesh.num_triangles(); ++k) {
            const auto c = mesh.map(k, kCentroid);
            double lin = 0.0;
            for (int i = 0; i < 3; ++i) {
                lin += out.coeffs[static_cast<std::size_t>(s.dof(k, i, comp))] / 3.0;
            }
            out.coeffs[static_cast<std::size_t>(s.dof(k, 3, comp))] = f(c.x, c.y) - lin;
        }
    }
}

} // namespace

FieldCoeffs interpolate(std::shared_ptr<const FeSpace> space, const ScalarFn& f, FieldRole role)
{
    if (space->components() != 1) {
        throw Error("interpolate: scalar function on a vector space");
    }
    FieldCoeffs out(std::move(space), role);
    interpolate_component(out, 0, f);
    return out;
}

FieldCoeffs interpolate(std::shared_ptr<const FeSpace> space, const VectorFn& f)
{
    if (space->components() != 2) {
        throw Error("interpolate: vector function on a scalar space");
    }
    FieldCoeffs out(std::move(space), FieldRole::Velocity);
    interpolate_component(out, 0, [&f](double x, double y) { return f(x, y).x; });
    interpolate_component(out, 1, [&f](double x, double y) { return f(x, y).y; });
    return out;
}

// ---------------------------------------------------------------------------
// Model parameters

double ViscosityLaw::operator()(double c) const noexcept
{
    switch (kind) {
    case Kind::Constant: return a;
    case Kind::Affine: return a + b * c;
    case Kind::Exponential: return std::exp(c);
    }
    return a;
}

double ViscosityLaw::derivative(double c) const noexcept
{
    switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Affine: return b;
    case Kind::Exponential: return std::exp(c);
    }
    return 0.0;
}

std::string ViscosityLaw::to_string() const
{
    // Shortest text that parses back to the same double.
    const auto num = [](double v) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    };
    switch (kind) {
    case Kind::Constant: return "const:" + num(a);
    case Kind::Affine: return "affine:" + num(a) + ':' + num(b);
    case Kind::Exponential: return "exp";
    }
    return {};
}

namespace {

double parse_real(const std::string& s, const std::string& what)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) {
            throw Error("");
        }
        return v;
    } catch (const std::exception&) {
        throw Error("viscosity law: malformed " + what + " '" + s + "'");
    }
}

} // namespace

ViscosityLaw parse_viscosity_law(const std::string& text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts[0] == "const" && parts.size() == 2) {
        return ViscosityLaw::constant(parse_real(parts[1], "constant"));
    }
    if (parts[0] == "affine" && parts.size() == 3) {
        return ViscosityLaw::affine(parse_real(parts[1], "intercept"), parse_real(parts[2], "slope"));
    }
    if (parts[0] == "exp" && parts.size() == 1) {
        return ViscosityLaw::exponential();
    }
    throw Error("viscosity law: expected const:<nu0>, affine:<a>:<b> or exp, got '" + text + "'");
}

void ModelParams::validate() const
{
    for (double v : {theta, gamma, g, U, alpha, kappa, nu.a, nu.b}) {
        if (!std::isfinite(v)) {
            throw Error("ModelParams: non-finite parameter");
        }
    }
    if (!(theta > 0.0)) {
        throw Error("ModelParams: theta must be > 0");
    }
    if (!(kappa > 0.0 && kappa <= 1.0)) {
        throw Error("ModelParams: kappa must lie in (0, 1]");
    }
    if (gamma < 0.0) {
        throw Error("ModelParams: gamma must be >= 0");
    }
    if (U < 0.0) {
        throw Error("ModelParams: U must be >= 0");
    }
}

// ---------------------------------------------------------------------------
// Element loop machinery

namespace {

/// Per-element tabulation of scalar shape values and physical gradients at the
/// quadrature points of the assembly rule.
struct ElementShapes {
    const ShapeTable* table = nullptr;
    double area = 0.0;
    std::vector<double> jxw;          // weight * 2|K|
    std::vector<Point2> grads;        // [q * nfun + i]
    std::vector<Point2> points;       // physical quadrature points

    void reinit(const TriMesh& mesh, int k)
    {
        const auto g = mesh.geometry(k);
        area = g.area;
        const std::size_t nq = table->num_points();
        const int nf = table->num_functions();
        jxw.resize(nq);
        grads.resize(nq * static_cast<std::size_t>(nf));
        points.resize(nq);
        for (std::size_t q = 0; q < nq; ++q) {
            jxw[q] = table->rule().weights[q] * 2.0 * area;
            points[q] = mesh.map(k, table->rule().points[q]);
            for (int i = 0; i < nf; ++i) {
                grads[q * static_cast<std::size_t>(nf) + static_cast<std::size_t>(i)] =
                    physical_gradient(table->dbary(q, i), g);
            }
        }
    }

    [[nodiscard]] double val(std::size_t q, int i) const { return table->value(q, i); }
    [[nodiscard]] const Point2& grad(std::size_t q, int i) const
    {
        return grads[q * static_cast<std::size_t>(table->num_functions()) + static_cast<std::size_t>(i)];
    }
};

const ShapeTable& shape_table(bool bubble)
{
    static const ShapeTable p1(make_quadrature(kAssemblyDegree), false);
    static const ShapeTable p1b(make_quadrature(kAssemblyDegree), true);
    return bubble ? p1b : p1;
}

/// Evaluates a field (value and gradient per component) at the quadrature
/// points of the current element.
struct FieldAtQp {
    std::array<std::vector<double>, 2> val;
    std::array<std::vector<Point2>, 2> grad;

    void eval(const FieldCoeffs& f, int k, const TriMesh& mesh, std::size_t nq)
    {
        const FeSpace& s = *f.space;
        const ShapeTable& t = shape_table(s.has_bubble());
        const auto g = mesh.geometry(k);
        for (int c = 0; c < s.components(); ++c) {
            auto& vv = val[static_cast<std::size_t>(c)];
            auto& gg = grad[static_cast<std::size_t>(c)];
            vv.assign(nq, 0.0);
            gg.assign(nq, Point2{});
            for (int i = 0; i < s.local_size(); ++i) {
                const double coef = f.coeffs[static_cast<std::size_t>(s.dof(k, i, c))];
                if (coef == 0.0) {
                    continue;
                }
                for (std::size_t q = 0; q < nq; ++q) {
                    vv[q] += coef * t.value(q, i);
                    const auto gi = physical_gradient(t.dbary(q, i), g);
                    gg[q].x += coef * gi.x;
                    gg[q].y += coef * gi.y;
                }
            }
        }
    }
};

void require_same_mesh(const FeSpace& a, const FeSpace& b, const char* what)
{
    if (a.mesh_ptr() != b.mesh_ptr() && !(a.mesh() == b.mesh())) {
        throw Error(std::string(what) + ": spaces live on different meshes");
    }
}

/// Scatters a scalar local matrix (nf x nf) into every component block.
void scatter_blockdiag(CooBuilder& coo, const FeSpace& s, int k, const std::vector<double>& local)
{
    const int nf = s.local_size();
    for (int c = 0; c < s.components(); ++c) {
        for (int i = 0; i < nf; ++i) {
            const int gi = s.dof(k, i, c);
            for (int j = 0; j < nf; ++j) {
                coo.add(gi, s.dof(k, j, c), local[static_cast<std::size_t>(i * nf + j)]);
            }
        }
    }
}

template <class Kernel>
CsrMatrix assemble_scalar_blockdiag(const FeSpace& s, Kernel&& kernel)
{
    const TriMesh& mesh = s.mesh();
    ElementShapes es;
    es.table = &shape_table(s.has_bubble());
    const int nf = s.local_size();
    std::vector<double> local(static_cast<std::size_t>(nf * nf));
    CooBuilder coo(s.ndofs(), s.ndofs());
    coo.reserve(static_cast<std::size_t>(mesh.num_triangles() * nf * nf * s.components()));
    for (int k = 0; k < mesh.num_triangles(); ++k) {
        es.reinit(mesh, k);
        std::fill(local.begin(), local.end(), 0.0);
        kernel(k, es, local);
        scatter_blockdiag(coo, s, k, local);
    }
    return coo.finalize();
}

} // namespace

CsrMatrix assemble_mass(const FeSpace& space)
{
    return assemble_scalar_blockdiag(space, [](int, const ElementShapes& es, std::vector<double>& local) {
        const int nf = es.table->num_functions();
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            for (int i = 0; i < nf; ++i) {
                for (int j = 0; j < nf; ++j) {
                    local[static_cast<std::size_t>(i * nf + j)] += es.jxw[q] * es.val(q, i) * es.val(q, j);
                }
            }
        }
    });
}

CsrMatrix assemble_stiffness(const FeSpace& space)
{
    return assemble_scalar_blockdiag(space, [](int, const ElementShapes& es, std::vector<double>& local) {
        const int nf = es.table->num_functions();
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            for (int i = 0; i < nf; ++i) {
                for (int j = 0; j < nf; ++j) {
                    const auto& gi = es.grad(q, i);
                    const auto& gj = es.grad(q, j);
                    local[static_cast<std::size_t>(i * nf + j)] += es.jxw[q] * (gi.x * gj.x + gi.y * gj.y);
                }
            }
        }
    });
}

CsrMatrix assemble_stiffness_nu(const FeSpace& vel_space, const FieldCoeffs& c_field, const ModelParams& params)
{
    if (c_field.space->components() != 1 || c_field.space->has_bubble()) {
        throw Error("assemble_stiffness_nu: concentration must be a scalar P1 field");
    }
    require_same_mesh(vel_space, *c_field.space, "assemble_stiffness_nu");
    const double lo = params.kappa;
    const double hi = 1.0 / params.kappa;
    FieldAtQp cq;
    return assemble_scalar_blockdiag(vel_space, [&](int k, const ElementShapes& es, std::vector<double>& local) {
        const int nf = es.table->num_functions();
        cq.eval(c_field, k, vel_space.mesh(), es.jxw.size());
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            const double nu = params.nu(cq.val[0][q] + params.alpha);
            if (!(nu >= lo && nu <= hi)) {
                std::ostringstream msg;
                msg << "viscosity " << nu << " outside [" << lo << ", " << hi << "] on element " << k << " at ("
                    << es.points[q].x << ", " << es.points[q].y << ")";
                throw ViscosityBoundError(msg.str());
            }
            for (int i = 0; i < nf; ++i) {
                for (int j = 0; j < nf; ++j) {
                    const auto& gi = es.grad(q, i);
                    const auto& gj = es.grad(q, j);
                    local[static_cast<std::size_t>(i * nf + j)] += es.jxw[q] * nu * (gi.x * gj.x + gi.y * gj.y);
                }
            }
        }
    });
}

namespace {

CsrMatrix assemble_skew_convection(const FeSpace& space, const FieldCoeffs& w)
{
    if (w.space->components() != 2) {
        throw Error("convection: advecting field must be a velocity");
    }
    require_same_mesh(space, *w.space, "convection");
    FieldAtQp wq;
    return assemble_scalar_blockdiag(space, [&](int k, const ElementShapes& es, std::vector<double>& local) {
        const int nf = es.table->num_functions();
        wq.eval(w, k, space.mesh(), es.jxw.size());
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            const double wx = wq.val[0][q];
            const double wy = wq.val[1][q];
            for (int i = 0; i < nf; ++i) {
                const auto& gi = es.grad(q, i);
                const double wgi = wx * gi.x + wy * gi.y;
                for (int j = 0; j < nf; ++j) {
                    const auto& gj = es.grad(q, j);
                    const double wgj = wx * gj.x + wy * gj.y;
                    local[static_cast<std::size_t>(i * nf + j)] +=
                        0.5 * es.jxw[q] * (wgj * es.val(q, i) - wgi * es.val(q, j));
                }
            }
        }
    });
}

} // namespace

CsrMatrix assemble_convection_B(const FeSpace& vel_space, const FieldCoeffs& w)
{
    if (vel_space.components() != 2) {
        throw Error("assemble_convection_B: expected a velocity space");
    }
    return assemble_skew_convection(vel_space, w);
}

CsrMatrix assemble_convection_b_scalar(const FeSpace& c_space, const FieldCoeffs& w)
{
    if (c_space.components() != 1) {
        throw Error("assemble_convection_b_scalar: expected a scalar space");
    }
    return assemble_skew_convection(c_space, w);
}

CsrMatrix assemble_divergence(const FeSpace& vel_space, const FeSpace& p_space)
{
    if (vel_space.components() != 2 || p_space.components() != 1 || p_space.has_bubble()) {
        throw Error("assemble_divergence: expected (velocity, P1 pressure) spaces");
    }
    require_same_mesh(vel_space, p_space, "assemble_divergence");
    const TriMesh& mesh = vel_space.mesh();
    ElementShapes es;
    es.table = &shape_table(true);
    const ShapeTable& pt = shape_table(false);
    const int nf = vel_space.local_size();
    CooBuilder coo(p_space.ndofs(), vel_space.ndofs());
    coo.reserve(static_cast<std::size_t>(mesh.num_triangles() * 3 * nf * 2));
    std::vector<double> local(static_cast<std::size_t>(3 * nf * 2));
    for (int k = 0; k < mesh.num_triangles(); ++k) {
        es.reinit(mesh, k);
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            for (int i = 0; i < 3; ++i) {
                const double psi = pt.value(q, i) * es.jxw[q];
                for (int j = 0; j < nf; ++j) {
                    const auto& gj = es.grad(q, j);
                    local[static_cast<std::size_t>((i * nf + j) * 2)] += psi * gj.x;
                    local[static_cast<std::size_t>((i * nf + j) * 2 + 1)] += psi * gj.y;
                }
            }
        }
        for (int i = 0; i < 3; ++i) {
            const int gi = p_space.dof(k, i);
            for (int j = 0; j < nf; ++j) {
                for (int c = 0; c < 2; ++c) {
                    coo.add(gi, vel_space.dof(k, j, c), local[static_cast<std::size_t>((i * nf + j) * 2 + c)]);
                }
            }
        }
    }
    return coo.finalize();
}

DenseVector assemble_buoyancy(const FeSpace& vel_space, const FieldCoeffs& c, const ModelParams& params)
{
    if (vel_space.components() != 2 || c.space->components() != 1) {
        throw Error("assemble_buoyancy: expected (velocity space, scalar concentration)");
    }
    require_same_mesh(vel_space, *c.space, "assemble_buoyancy");
    const TriMesh& mesh = vel_space.mesh();
    ElementShapes es;
    es.table = &shape_table(true);
    FieldAtQp cq;
    DenseVector out(static_cast<std::size_t>(vel_space.ndofs()), 0.0);
    for (int k = 0; k < mesh.num_triangles(); ++k) {
        es.reinit(mesh, k);
        cq.eval(c, k, mesh, es.jxw.size());
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            const double s = -params.g * (1.0 + params.gamma * cq.val[0][q]) * es.jxw[q];
            for (int i = 0; i < vel_space.local_size(); ++i) {
                out[static_cast<std::size_t>(vel_space.dof(k, i, 1))] += s * es.val(q, i);
            }
        }
    }
    return out;
}

SwimTerms assemble_swim(const FeSpace& c_space, const ModelParams& params)
{
    if (c_space.components() != 1) {
        throw Error("assemble_swim: expected a scalar space");
    }
    const TriMesh& mesh = c_space.mesh();
    ElementShapes es;
    es.table = &shape_table(c_space.has_bubble());
    const int nf = c_space.local_size();
    CooBuilder coo(c_space.ndofs(), c_space.ndofs());
    DenseVector cst(static_cast<std::size_t>(c_space.ndofs()), 0.0);
    for (int k = 0; k < mesh.num_triangles(); ++k) {
        es.reinit(mesh, k);
        for (int i = 0; i < nf; ++i) {
            double ci = 0.0;
            for (int j = 0; j < nf; ++j) {
                double mij = 0.0;
                for (std::size_t q = 0; q < es.jxw.size(); ++q) {
                    mij += es.jxw[q] * es.val(q, j) * es.grad(q, i).y;
                }
                coo.add(c_space.dof(k, i), c_space.dof(k, j), params.U * mij);
            }
            for (std::size_t q = 0; q < es.jxw.size(); ++q) {
                ci += es.jxw[q] * es.grad(q, i).y;
            }
            cst[static_cast<std::size_t>(c_space.dof(k, i))] += params.U * params.alpha * ci;
        }
    }
    return {coo.finalize(), std::move(cst)};
}

namespace {

template <class Fn>
DenseVector assemble_load_impl(const FeSpace& space, Fn&& integrand_component)
{
    const TriMesh& mesh = space.mesh();
    ElementShapes es;
    es.table = &shape_table(space.has_bubble());
    DenseVector out(static_cast<std::size_t>(space.ndofs()), 0.0);
    std::array<double, 2> fv{};
    for (int k = 0; k < mesh.num_triangles(); ++k) {
        es.reinit(mesh, k);
        for (std::size_t q = 0; q < es.jxw.size(); ++q) {
            integrand_component(es.points[q], fv);
            for (int c = 0; c < space.components(); ++c) {
                const double s = fv[static_cast<std::size_t>(c)] * es.jxw[q];
                for (int i = 0; i < space.local_size(); ++i) {
                    out[static_cast<std::size_t>(space.dof(k, i, c))] += s * es.val(q, i);
                }
            }
        }
    }
    return out;
}

} // namespace

DenseVector assemble_load(const FeSpace& space, const ScalarFn& f)
{
    if (space.components() != 1) {
        throw Error("assemble_load: scalar function on a vector space");
    }
    return assemble_load_impl(space, [&f](const Point2& p, std::array<double, 2>& v) { v[0] = f(p.x, p.y); });
}

DenseVector assemble_load(const FeSpace& space, const VectorFn& f)
{
    if (space.components() != 2) {
        throw Error("assemble_load: vector function on a scalar space");
    }
    return assemble_load_impl(space, [&f](const Point2& p, std::array<double, 2>& v) {
        const auto r = f(p.x, p.y);
        v[0] = r.x;
        v[1] = r.y;
    });
}

DenseVector assemble_unit_load(const FeSpace& space)
{
    return assemble_load_impl(space, [](const Point2&, std::array<double, 2>& v) { v = {1.0, 1.0}; });
}

// ---------------------------------------------------------------------------
// Constraints

void apply_dirichlet(CsrMatrix& a, DenseVector& rhs, std::span<const int> dofs, std::span<const double> values)
{
    if (dofs.size() != values.size()) {
        throw Error("apply_dirichlet: dofs and values differ in length");
    }
    if (a.rows() != a.cols() || rhs.size() != static_cast<std::size_t>(a.rows())) {
        throw Error("apply_dirichlet: system shape mismatch");
    }
    const auto n = static_cast<std::size_t>(a.rows());
    std::vector<char> fixed(n, 0);
    std::vector<double> g(n, 0.0);
    bool missing_diag = false;
    for (std::size_t k = 0; k < dofs.size(); ++k) {
        const int d = dofs[k];
        if (d < 0 || static_cast<std::size_t>(d) >= n) {
            throw Error("apply_dirichlet: dof " + std::to_string(d) + " out of range");
        }
        fixed[static_cast<std::size_t>(d)] = 1;
        g[static_cast<std::size_t>(d)] = values[k];
        missing_diag = missing_diag || a.find(d, d) < 0;
    }
    if (missing_diag) {
        CooBuilder coo(a.rows(), a.cols());
        coo.add_block(a, 0, 0);
        for (int d : dofs) {
            coo.add(d, d, 0.0);
        }
        a = coo.finalize();
    }

    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    auto& v = a.values();
    for (std::size_t i = 0; i < n; ++i) {
        if (fixed[i]) {
            continue;
        }
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(ci[static_cast<std::size_t>(p)]);
            if (fixed[j]) {
                rhs[i] -= v[static_cast<std::size_t>(p)] * g[j];
                v[static_cast<std::size_t>(p)] = 0.0;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!fixed[i]) {
            continue;
        }
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            v[static_cast<std::size_t>(p)] = (static_cast<std::size_t>(ci[static_cast<std::size_t>(p)]) == i) ? 1.0 : 0.0;
        }
        rhs[i] = g[i];
    }
}

CsrMatrix border(const CsrMatrix& a, std::span<const double> weights, int offset)
{
    if (a.rows() != a.cols() || offset < 0 || static_cast<std::size_t>(offset) + weights.size() > static_cast<std::size_t>(a.rows())) {
        throw Error("border: weights do not fit the system");
    }
    const int n = a.rows();
    CooBuilder coo(n + 1, n + 1);
    coo.reserve(a.nnz() + 2 * weights.size());
    coo.add_block(a, 0, 0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const int r = offset + static_cast<int>(i);
        coo.add(r, n, weights[i]);
        coo.add(n, r, weights[i]);
    }
    return coo.finalize();
}

} // namespace biocnlf
