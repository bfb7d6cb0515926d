#include "qfem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "qfem/interp.hpp"
#include "qfem/manufactured.hpp"
#include "qfem/quadrature.hpp"
#include "qfem/sbfem.hpp"
#include "qfem/smoothing.hpp"

namespace qfem {

const char* treatment_name(TreatmentKind t) {
    switch (t) {
        case TreatmentKind::Fem: return "fem";
        case TreatmentKind::Pfem: return "pfem";
        case TreatmentKind::NsfemOne: return "nsfem1";
        case TreatmentKind::NsfemN: return "nsfemn";
        case TreatmentKind::Sbfem: return "sbfem";
    }
    return "?";
}

TreatmentKind parse_treatment(const std::string& name) {
    if (name == "fem") return TreatmentKind::Fem;
    if (name == "pfem") return TreatmentKind::Pfem;
    if (name == "nsfem1") return TreatmentKind::NsfemOne;
    if (name == "nsfemn") return TreatmentKind::NsfemN;
    if (name == "sbfem") return TreatmentKind::Sbfem;
    throw Error("unknown treatment: " + name);
}

namespace {

// Standard 4-gons use four quadrilateral subcells; hanging-node polygons use
// the requested scheme.
SubcellScheme nsfem_scheme(const PolygonElement& e, TreatmentKind t) {
    if (!e.has_hanging() && e.size() == 4) return SubcellScheme::FourQuads;
    return t == TreatmentKind::NsfemOne ? SubcellScheme::One : SubcellScheme::NTriangles;
}

ElementStiffness element_stiffness(const PolygonElement& e, TreatmentKind t, const Material& mat) {
    switch (t) {
        case TreatmentKind::Fem: return fem_element_stiffness(e, mat);
        case TreatmentKind::Pfem:
            // plain rectangular cells map affinely: the integrand is polynomial
            // and the degree-6 rule is exact without grading
            return pfem_element_stiffness(e, mat, 6, {}, e.has_hanging() ? 4 : 0);
        case TreatmentKind::NsfemOne:
        case TreatmentKind::NsfemN: return csfem_element_stiffness(e, mat, nsfem_scheme(e, t));
        case TreatmentKind::Sbfem: return sbfem_element_stiffness(e, mat);
    }
    throw Error("unreachable");
}

// consistent load on fan triangles with the degree-6 rule; the apex is the
// vertex average so the smoothed-element fan interpolant is linear per
// triangle; shape values per point supplied by the callback
template <typename ShapeFn>
void fan_load(const PolygonElement& e, const ScalarField& rhs, Eigen::VectorXd& f,
              const ShapeFn& shape_values) {
    const int n = e.size();
    const Vec2 c = e.vertex_mean();
    const QuadratureRule tri = dunavant_rule(6);
    for (int i = 0; i < n; ++i) {
        const Vec2 a = e.coords[i];
        const Vec2 b = e.coords[(i + 1) % n];
        const double area2 = cross(a - c, b - c);
        for (int q = 0; q < tri.size(); ++q) {
            const double xi = tri.points[q].x, eta = tri.points[q].y;
            const Vec2 p = (1.0 - xi - eta) * c + xi * a + eta * b;
            const Eigen::VectorXd N = shape_values(p, i, 1.0 - xi - eta, xi, eta);
            const double w = tri.weights[q] * area2 * rhs(p);
            for (int k = 0; k < n; ++k) f(e.node_ids[k]) += w * N(k);
        }
    }
}

void accumulate_load(const PolygonElement& e, TreatmentKind t, const Material& mat,
                     const ScalarField& rhs, Eigen::VectorXd& f) {
    const int n = e.size();
    switch (t) {
        case TreatmentKind::Fem: {
            // quadrant-split Gauss rule on the cell rectangle
            const Rect r = e.cell_bounds;
            const QuadratureRule rule = modified_gauss_rule(4);
            const double jac = r.area() / 4.0;
            // map element vertices to transition-element roles once
            std::array<bool, 4> mask{};
            std::array<int, 8> local_of{-1, -1, -1, -1, -1, -1, -1, -1};
            for (int i = 0; i < n; ++i) {
                const Vec2 mid = r.center();
                const Vec2 p = e.coords[i];
                int g = -1;
                if (p.x == r.lo.x && p.y == r.lo.y) g = 0;
                else if (p.x == r.hi.x && p.y == r.lo.y) g = 1;
                else if (p.x == r.hi.x && p.y == r.hi.y) g = 2;
                else if (p.x == r.lo.x && p.y == r.hi.y) g = 3;
                else if (p.y == r.lo.y && p.x == mid.x) g = 4;
                else if (p.x == r.hi.x && p.y == mid.y) g = 5;
                else if (p.y == r.hi.y && p.x == mid.x) g = 6;
                else if (p.x == r.lo.x && p.y == mid.y) g = 7;
                if (g < 0)
                    throw TreatmentNotApplicableError("fem load: unsupported hanging layout");
                local_of[g] = i;
                if (g >= 4) mask[g - 4] = true;
            }
            for (int q = 0; q < rule.size(); ++q) {
                const GuptaShape sh = gupta_shape(rule.points[q].x, rule.points[q].y, mask);
                const Vec2 p{r.lo.x + 0.5 * (rule.points[q].x + 1.0) * r.width(),
                             r.lo.y + 0.5 * (rule.points[q].y + 1.0) * r.height()};
                const double w = rule.weights[q] * jac * rhs(p);
                for (int g = 0; g < 8; ++g)
                    if (local_of[g] >= 0) f(e.node_ids[local_of[g]]) += w * sh.values[g];
            }
            break;
        }
        case TreatmentKind::Pfem: {
            // integrate on the reference polygon and map
            const std::vector<Vec2> ref = reference_polygon(n);
            const QuadratureRule tri = dunavant_rule(6);
            for (int i = 0; i < n; ++i) {
                const Vec2 a = ref[i], b = ref[(i + 1) % n];
                const double area2 = cross(a, b);
                for (int q = 0; q < tri.size(); ++q) {
                    const double xi = tri.points[q].x, eta = tri.points[q].y;
                    const MappedLaplaceShape sh =
                        mapped_laplace_shape(e, xi * a + eta * b);
                    const double w = tri.weights[q] * area2 * sh.jacobian * rhs(sh.x);
                    for (int k = 0; k < n; ++k) f(e.node_ids[k]) += w * sh.values(k);
                }
            }
            break;
        }
        case TreatmentKind::NsfemOne:
        case TreatmentKind::NsfemN: {
            // fan interpolant: linear per triangle, centroid value = vertex mean
            fan_load(e, rhs, f, [&](Vec2, int i, double lc, double li, double lj) {
                Eigen::VectorXd N = Eigen::VectorXd::Constant(n, lc / n);
                N(i) += li;
                N((i + 1) % n) += lj;
                return N;
            });
            break;
        }
        case TreatmentKind::Sbfem: {
            const Material scalar_mat = mat;  // scalar path only
            const SbfemElement se = sbfem_build_element(e, scalar_mat);
            BodyLoadSpec spec;
            spec.exponent = 0;
            spec.intensity = [&rhs](Vec2 p) {
                return Eigen::VectorXd::Constant(1, rhs(p)).eval();
            };
            const Eigen::VectorXd pb = sbfem_body_load(se, scalar_mat, spec);
            for (int k = 0; k < n; ++k) f(e.node_ids[k]) += pb(k);
            break;
        }
    }
}

}  // namespace

GlobalSystem assemble(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                      TreatmentKind treatment, const Material& material,
                      const ScalarField& source) {
    const int d = material.dofs_per_node();
    if (source && d != 1) throw Error("assemble: source terms are scalar-only");

    GlobalSystem sys;
    sys.dofs_per_node = d;
    sys.n_nodes = mesh.node_count();
    const int ndof = sys.n_nodes * d;
    sys.f = Eigen::VectorXd::Zero(ndof);

    std::vector<Eigen::Triplet<double>> trips;
    for (const PolygonElement& e : elements) {
        ElementStiffness ke;
        try {
            ke = element_stiffness(e, treatment, material);
        } catch (const TreatmentNotApplicableError& err) {
            throw TreatmentNotApplicableError(std::string(err.what()) + " (cell " +
                                              std::to_string(e.cell_index) + ")");
        }
        const int m = e.size();
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                for (int ca = 0; ca < d; ++ca) {
                    for (int cb = 0; cb < d; ++cb) {
                        trips.emplace_back(e.node_ids[a] * d + ca, e.node_ids[b] * d + cb,
                                           ke.K(a * d + ca, b * d + cb));
                    }
                }
            }
        }
        if (source) {
            // weak form of nabla^2 u = f: K u = int N (-f)
            accumulate_load(e, treatment, material, [&source](Vec2 p) { return -source(p); },
                            sys.f);
        }
    }
    sys.K.resize(ndof, ndof);
    sys.K.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

Eigen::VectorXd ReducedSystem::recover(const Eigen::VectorXd& reduced) const {
    Eigen::VectorXd u = prescribed;
    for (std::size_t i = 0; i < free_dofs.size(); ++i) u(free_dofs[i]) = reduced(i);
    return u;
}

ReducedSystem apply_dirichlet(const GlobalSystem& system, const std::map<int, double>& values,
                              const std::set<int>& required_nodes) {
    for (int node : required_nodes)
        if (values.find(node) == values.end())
            throw IncompleteBcError("apply_dirichlet: no boundary value for node " +
                                    std::to_string(node));
    if (system.dofs_per_node != 1)
        throw Error("apply_dirichlet: nodal value maps are scalar-only");

    const int ndof = system.n_dofs();
    ReducedSystem red;
    red.full_dofs = ndof;
    red.is_fixed.assign(ndof, 0);
    red.prescribed = Eigen::VectorXd::Zero(ndof);
    for (const auto& [node, value] : values) {
        red.is_fixed[node] = 1;
        red.prescribed(node) = value;
    }
    std::vector<int> reduced_index(ndof, -1);
    for (int i = 0; i < ndof; ++i) {
        if (!red.is_fixed[i]) {
            reduced_index[i] = static_cast<int>(red.free_dofs.size());
            red.free_dofs.push_back(i);
        }
    }
    const int nfree = static_cast<int>(red.free_dofs.size());

    Eigen::VectorXd rhs(nfree);
    for (int i = 0; i < nfree; ++i) rhs(i) = system.f(red.free_dofs[i]);

    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < system.K.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.K, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int c = static_cast<int>(it.col());
            if (!red.is_fixed[r] && !red.is_fixed[c]) {
                trips.emplace_back(reduced_index[r], reduced_index[c], it.value());
            } else if (!red.is_fixed[r] && red.is_fixed[c]) {
                rhs(reduced_index[r]) -= it.value() * red.prescribed(c);
            }
        }
    }
    red.K.resize(nfree, nfree);
    red.K.setFromTriplets(trips.begin(), trips.end());
    red.f = rhs;
    return red;
}

SolveResult solve(const ReducedSystem& system) {
    SolveResult out;
    if (system.free_dofs.empty()) {
        out.u = system.prescribed;
        out.residual = 0.0;
        return out;
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.K);
    if (ldlt.info() != Eigen::Success)
        throw SingularSystemError("solve: factorization failed (kernel leaked through BCs?)");
    const Eigen::VectorXd d = ldlt.vectorD();
    if (d.minCoeff() <= 0.0) {
        int worst = 0;
        d.minCoeff(&worst);
        throw SingularSystemError("solve: reduced matrix is not positive definite (pivot " +
                                  std::to_string(worst) + " = " + std::to_string(d(worst)) + ")");
    }
    const Eigen::VectorXd u_red = ldlt.solve(system.f);
    const double fn = system.f.norm();
    out.residual = fn > 0.0 ? (system.K * u_red - system.f).norm() / fn
                            : (system.K * u_red).norm();
    out.u = system.recover(u_red);
    return out;
}

namespace {

double gupta_value_at(const PolygonElement& e, Vec2 p, const Eigen::VectorXd& nodal) {
    const Rect r = e.cell_bounds;
    const Vec2 mid = r.center();
    std::array<bool, 4> mask{};
    std::array<int, 8> local_of{-1, -1, -1, -1, -1, -1, -1, -1};
    for (int i = 0; i < e.size(); ++i) {
        const Vec2 v = e.coords[i];
        int g = -1;
        if (v.x == r.lo.x && v.y == r.lo.y) g = 0;
        else if (v.x == r.hi.x && v.y == r.lo.y) g = 1;
        else if (v.x == r.hi.x && v.y == r.hi.y) g = 2;
        else if (v.x == r.lo.x && v.y == r.hi.y) g = 3;
        else if (v.y == r.lo.y && v.x == mid.x) g = 4;
        else if (v.x == r.hi.x && v.y == mid.y) g = 5;
        else if (v.y == r.hi.y && v.x == mid.x) g = 6;
        else if (v.x == r.lo.x && v.y == mid.y) g = 7;
        if (g < 0) throw TreatmentNotApplicableError("gupta reconstruction: bad hanging layout");
        local_of[g] = i;
        if (g >= 4) mask[g - 4] = true;
    }
    const double xi = 2.0 * (p.x - r.lo.x) / r.width() - 1.0;
    const double eta = 2.0 * (p.y - r.lo.y) / r.height() - 1.0;
    const GuptaShape sh = gupta_shape(xi, eta, mask);
    double val = 0.0;
    for (int g = 0; g < 8; ++g)
        if (local_of[g] >= 0) val += sh.values[g] * nodal(local_of[g]);
    return val;
}

}  // namespace

ErrorReport l2_error(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                     TreatmentKind treatment, const Eigen::VectorXd& u_h,
                     const ScalarField& exact) {
    const QuadratureRule tri = dunavant_rule(6);
    double num = 0.0, den = 0.0;
    for (const PolygonElement& e : elements) {
        const int n = e.size();
        Eigen::VectorXd nodal(n);
        for (int i = 0; i < n; ++i) nodal(i) = u_h(e.node_ids[i]);

        if (treatment == TreatmentKind::Pfem) {
            // interpolate with the element's own mapped shape functions,
            // integrating on the reference polygon
            const std::vector<Vec2> ref = reference_polygon(n);
            for (int i = 0; i < n; ++i) {
                const Vec2 a = ref[i], b = ref[(i + 1) % n];
                const double area2 = cross(a, b);
                for (int q = 0; q < tri.size(); ++q) {
                    const double xi = tri.points[q].x, eta = tri.points[q].y;
                    const MappedLaplaceShape sh = mapped_laplace_shape(e, xi * a + eta * b);
                    const double w = tri.weights[q] * area2 * sh.jacobian;
                    const double ue = exact(sh.x);
                    const double uh = sh.values.dot(nodal);
                    num += w * (uh - ue) * (uh - ue);
                    den += w * ue * ue;
                }
            }
            continue;
        }

        const double mean = nodal.mean();
        const Vec2 c = e.vertex_mean();  // fan apex; smoothed cells reconstruct linearly per triangle
        for (int i = 0; i < n; ++i) {
            const Vec2 a = e.coords[i];
            const Vec2 b = e.coords[(i + 1) % n];
            const double area2 = cross(a - c, b - c);
            for (int q = 0; q < tri.size(); ++q) {
                const double xi = tri.points[q].x, eta = tri.points[q].y;
                const Vec2 p = (1.0 - xi - eta) * c + xi * a + eta * b;
                double uh = 0.0;
                switch (treatment) {
                    case TreatmentKind::Fem:
                        uh = gupta_value_at(e, p, nodal);
                        break;
                    case TreatmentKind::Pfem:  // handled above
                    case TreatmentKind::Sbfem:
                        uh = laplace_shape(e, p).values.dot(nodal);
                        break;
                    case TreatmentKind::NsfemOne:
                    case TreatmentKind::NsfemN:
                        uh = (1.0 - xi - eta) * mean + xi * nodal(i) + eta * nodal((i + 1) % n);
                        break;
                }
                const double w = tri.weights[q] * area2;
                const double ue = exact(p);
                num += w * (uh - ue) * (uh - ue);
                den += w * ue * ue;
            }
        }
    }
    ErrorReport rep;
    rep.abs_l2 = std::sqrt(std::max(num, 0.0));
    if (den > 0.0) {
        rep.rel_l2 = rep.abs_l2 / std::sqrt(den);
    } else {
        rep.rel_l2 = rep.abs_l2;
        rep.absolute_fallback = true;
    }
    rep.n_dof = mesh.node_count();
    rep.treatment = treatment_name(treatment);
    return rep;
}

ErrorReport run_patch_test(PatchCase which, const QuadtreeMesh& mesh, TreatmentKind treatment) {
    const ScalarField g = which == PatchCase::LinearA ? ScalarField(patch_linear)
                                                      : ScalarField(patch_quadratic);
    const std::vector<PolygonElement> elements = extract_polygon_elements(mesh);
    const Material mat = Material::scalar(1.0);
    const GlobalSystem sys = assemble(mesh, elements, treatment, mat, nullptr);

    const std::set<int> bnd = boundary_nodes(mesh);
    std::map<int, double> values;
    for (int node : bnd) values[node] = g(mesh.nodes()[node]);

    const ReducedSystem red = apply_dirichlet(sys, values, bnd);
    const SolveResult sol = solve(red);
    ErrorReport rep = l2_error(mesh, elements, treatment, sol.u, g);
    rep.solver_residual = sol.residual;
    return rep;
}

ConvergenceResult run_poisson_convergence(const std::vector<QuadtreeMesh>& meshes,
                                          TreatmentKind treatment) {
    ConvergenceResult out;
    const Material mat = Material::scalar(1.0);
    for (const QuadtreeMesh& mesh : meshes) {
        const std::vector<PolygonElement> elements = extract_polygon_elements(mesh);
        const GlobalSystem sys = assemble(mesh, elements, treatment, mat, poisson_source);
        const std::set<int> bnd = boundary_nodes(mesh);
        std::map<int, double> values;
        for (int node : bnd) values[node] = poisson_exact(mesh.nodes()[node]);
        const ReducedSystem red = apply_dirichlet(sys, values, bnd);
        const SolveResult sol = solve(red);
        ErrorReport rep = l2_error(mesh, elements, treatment, sol.u, poisson_exact);
        rep.solver_residual = sol.residual;
        out.reports.push_back(std::move(rep));
        const double area = mesh.domain().width * mesh.domain().height;
        out.h.push_back(std::sqrt(area / mesh.leaf_count()));
    }
    // least-squares slope of log(err) vs log(h) over the last 3 levels
    const int n = static_cast<int>(out.reports.size());
    const int fit = std::min(3, n);
    if (fit >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = n - fit; i < n; ++i) {
            const double x = std::log(out.h[i]);
            const double y = std::log(out.reports[i].rel_l2);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        out.slope = (fit * sxy - sx * sy) / (fit * sxx - sx * sx);
    }
    return out;
}

}  // namespace qfem
