#include "qfem/sbfem.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>

#include "qfem/quadrature.hpp"

namespace qfem {

ScaledBoundaryGeometry scaled_boundary_geometry(const PolygonElement& element) {
    const double area = element.area();
    if (!(area > 1e-300))
        throw DegenerateGeometryError("scaled_boundary_geometry: zero-area polygon");

    ScaledBoundaryGeometry geom;
    geom.centre = element.centroid();
    geom.node_count = element.size();
    const int n = element.size();
    for (int i = 0; i < n; ++i) {
        ScaledBoundaryGeometry::Segment s;
        s.a = i;
        s.b = (i + 1) % n;
        s.pa = element.coords[s.a] - geom.centre;
        s.pb = element.coords[s.b] - geom.centre;
        const Vec2 mid = 0.5 * (s.pa + s.pb);
        const Vec2 half = 0.5 * (s.pb - s.pa);
        s.jacobian = cross(mid, half);
        if (!(s.jacobian > 0.0))
            throw DegenerateGeometryError(
                "scaled_boundary_geometry: boundary segment not visible CCW from the centre");
        geom.segments.push_back(s);
    }
    return geom;
}

namespace {

// radial (g1) and circumferential (g2) parts of the gradient operator at a
// boundary point r(eta) with tangent half-chord d: grad = g1 d/dxi + (1/xi) g2 d/deta
struct GradientFactors {
    Vec2 g1, g2;
};

GradientFactors gradient_factors(Vec2 r, Vec2 d, double jac) {
    return {{d.y / jac, -d.x / jac}, {-r.y / jac, r.x / jac}};
}

Eigen::MatrixXd strain_operator(const Material& material, Vec2 g, const Eigen::RowVectorXd& shape) {
    // scalar: 2 x (2*dpn...) built from g (2-vector) times shape row
    const int nn = static_cast<int>(shape.cols());
    if (material.kind() == Material::Kind::ScalarDiffusion) {
        Eigen::MatrixXd b(2, nn);
        b.row(0) = g.x * shape;
        b.row(1) = g.y * shape;
        return b;
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2 * nn);
    for (int i = 0; i < nn; ++i) {
        b(0, 2 * i) = g.x * shape(i);
        b(1, 2 * i + 1) = g.y * shape(i);
        b(2, 2 * i) = g.y * shape(i);
        b(2, 2 * i + 1) = g.x * shape(i);
    }
    return b;
}

}  // namespace

CoefficientMatrices coefficient_matrices(const ScaledBoundaryGeometry& geom,
                                         const Material& material, int gauss_order) {
    const int d = material.dofs_per_node();
    const int ndof = geom.node_count * d;
    CoefficientMatrices E;
    E.dofs_per_node = d;
    E.E0 = Eigen::MatrixXd::Zero(ndof, ndof);
    E.E1 = Eigen::MatrixXd::Zero(ndof, ndof);
    E.E2 = Eigen::MatrixXd::Zero(ndof, ndof);

    const GaussRule1d g = gauss_legendre(gauss_order);
    for (const auto& seg : geom.segments) {
        const Vec2 mid = 0.5 * (seg.pa + seg.pb);
        const Vec2 half = 0.5 * (seg.pb - seg.pa);
        std::vector<int> dofs;
        for (int c = 0; c < d; ++c) dofs.push_back(seg.a * d + c);
        for (int c = 0; c < d; ++c) dofs.push_back(seg.b * d + c);
        for (int q = 0; q < static_cast<int>(g.points.size()); ++q) {
            const double eta = g.points[q];
            const Vec2 r = mid + eta * half;
            const GradientFactors gf = gradient_factors(r, half, seg.jacobian);
            Eigen::RowVectorXd N(2), dN(2);
            N << 0.5 * (1.0 - eta), 0.5 * (1.0 + eta);
            dN << -0.5, 0.5;
            const Eigen::MatrixXd B1 = strain_operator(material, gf.g1, N);
            const Eigen::MatrixXd B2 = strain_operator(material, gf.g2, dN);
            const double w = g.weights[q] * seg.jacobian;
            const Eigen::MatrixXd e0 = w * B1.transpose() * material.D() * B1;
            const Eigen::MatrixXd e1 = w * B2.transpose() * material.D() * B1;
            const Eigen::MatrixXd e2 = w * B2.transpose() * material.D() * B2;
            const int m = static_cast<int>(dofs.size());
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) {
                    E.E0(dofs[a], dofs[b]) += e0(a, b);
                    E.E1(dofs[a], dofs[b]) += e1(a, b);
                    E.E2(dofs[a], dofs[b]) += e2(a, b);
                }
            }
        }
    }
    E.E0 = (0.5 * (E.E0 + E.E0.transpose())).eval();
    E.E2 = (0.5 * (E.E2 + E.E2.transpose())).eval();

    Eigen::LLT<Eigen::MatrixXd> llt(E.E0);
    if (llt.info() != Eigen::Success)
        throw DegenerateGeometryError("coefficient_matrices: E0 is not positive definite");
    return E;
}

HamiltonianResult hamiltonian(const CoefficientMatrices& E, const SbfemOptions& opts) {
    const int n = static_cast<int>(E.E0.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E.E0);
    const double emin = es.eigenvalues().minCoeff();
    const double emax = es.eigenvalues().maxCoeff();

    HamiltonianResult out;
    out.e0_condition = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    out.conditioning_warning = out.e0_condition > opts.e0_condition_warn;

    const Eigen::MatrixXd E0i = E.E0.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    out.Z.resize(2 * n, 2 * n);
    out.Z.topLeftCorner(n, n) = E0i * E.E1.transpose();
    out.Z.topRightCorner(n, n) = -E0i;
    out.Z.bottomLeftCorner(n, n) = E.E1 * E0i * E.E1.transpose() - E.E2;
    out.Z.bottomRightCorner(n, n) = -E.E1 * E0i;
    return out;
}

namespace {

void dump_spectrum(const Eigen::VectorXcd& ev, const std::string& path) {
    std::ofstream f(path);
    if (!f) return;
    f << "index,real,imag\n";
    for (int i = 0; i < ev.size(); ++i)
        f << i << "," << ev(i).real() << "," << ev(i).imag() << "\n";
}

}  // namespace

ModalSolution modal_solution(const HamiltonianResult& h, int dofs_per_node,
                             const SbfemOptions& opts) {
    const int two_nd = static_cast<int>(h.Z.rows());
    const int nd = two_nd / 2;
    const int d = dofs_per_node;

    Eigen::EigenSolver<Eigen::MatrixXd> es(h.Z);
    if (es.info() != Eigen::Success)
        throw NumericalFailureError("modal_solution: eigen decomposition failed");
    const Eigen::VectorXcd ev = es.eigenvalues();
    const Eigen::MatrixXcd V = es.eigenvectors();

    const double tol = opts.zero_tol_rel * ev.cwiseAbs().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < two_nd; ++i)
        if (ev(i).real() < -tol) keep.push_back(i);

    if (static_cast<int>(keep.size()) + d != nd) {
        dump_spectrum(ev, opts.spectrum_dump_path);
        throw ModeSelectionError(
            "modal_solution: retained " + std::to_string(keep.size()) + " decaying modes + " +
            std::to_string(d) + " constant modes != " + std::to_string(nd) +
            " boundary dofs (spectrum written to " + opts.spectrum_dump_path + ")");
    }

    ModalSolution out;
    out.phi_u.resize(nd, nd);
    out.phi_q.resize(nd, nd);
    out.lambda.resize(nd);
    out.constructed_zero_modes = d;

    double max_residual = 0.0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const Eigen::VectorXcd v = V.col(keep[k]);
        out.phi_u.col(k) = v.head(nd);
        out.phi_q.col(k) = v.tail(nd);
        out.lambda(k) = ev(keep[k]);
        const double res = (h.Z * v - ev(keep[k]) * v).norm() / v.norm();
        max_residual = std::max(max_residual, res);
    }
    out.max_eigen_residual = max_residual;

    // constant displacement modes, one per dof component: lambda = 0, zero force
    for (int c = 0; c < d; ++c) {
        const int col = nd - d + c;
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(nd);
        for (int node = 0; node < nd / d; ++node) phi(node * d + c) = 1.0;
        out.phi_u.col(col) = phi;
        out.phi_q.col(col).setZero();
        out.lambda(col) = 0.0;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.phi_u);
    const double smin = svd.singularValues().minCoeff();
    out.phi_condition = smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                                   : std::numeric_limits<double>::infinity();
    if (!(smin > 0.0))
        throw ModeSelectionError("modal_solution: modal displacement matrix is singular");
    return out;
}

Eigen::VectorXcd ModalSolution::integration_constants(const Eigen::VectorXd& ub) const {
    return phi_u.partialPivLu().solve(ub.cast<std::complex<double>>());
}

SbfemElement sbfem_build_element(const PolygonElement& element, const Material& material,
                                 const SbfemOptions& opts) {
    SbfemElement out;
    out.geom = scaled_boundary_geometry(element);
    out.E = coefficient_matrices(out.geom, material, opts.segment_gauss_order);
    const HamiltonianResult h = hamiltonian(out.E, opts);
    out.modal = modal_solution(h, material.dofs_per_node(), opts);

    // K = E1^T - E0 Phi Lambda Phi^-1; Lambda has Re < 0, so -E0 Phi Lambda Phi^-1
    // is the positive-semidefinite part and constant modes contribute nothing.
    const int nd = static_cast<int>(out.E.E0.rows());
    const Eigen::MatrixXcd M =
        out.modal.phi_u * out.modal.lambda.asDiagonal() *
        out.modal.phi_u.partialPivLu().solve(Eigen::MatrixXcd::Identity(nd, nd));
    Eigen::MatrixXd K = out.E.E1.transpose() - out.E.E0 * M.real();

    ElementStiffness& ek = out.stiffness;
    ek.nodes = element.node_ids;
    ek.dofs_per_node = material.dofs_per_node();
    ek.asymmetry = (K - K.transpose()).norm() / std::max(K.norm(), 1e-300);
    if (ek.asymmetry > opts.asymmetry_tol)
        throw NumericalFailureError("sbfem stiffness asymmetry " + std::to_string(ek.asymmetry) +
                                    " exceeds tolerance (bad mode selection?)");
    ek.K = 0.5 * (K + K.transpose());
    return out;
}

ElementStiffness sbfem_element_stiffness(const PolygonElement& element, const Material& material,
                                         const SbfemOptions& opts) {
    return sbfem_build_element(element, material, opts).stiffness;
}

Eigen::VectorXd sbfem_body_load(const SbfemElement& element, const Material& material,
                                const BodyLoadSpec& spec) {
    const int d = material.dofs_per_node();
    const int nd = static_cast<int>(element.E.E0.rows());
    Eigen::VectorXd F = Eigen::VectorXd::Zero(nd);

    const GaussRule1d g = gauss_legendre(2);
    for (const auto& seg : element.geom.segments) {
        const Vec2 mid = 0.5 * (seg.pa + seg.pb);
        const Vec2 half = 0.5 * (seg.pb - seg.pa);
        for (int q = 0; q < 2; ++q) {
            const double eta = g.points[q];
            const Vec2 r = mid + eta * half;
            const Vec2 global = element.geom.centre + r;
            const Eigen::VectorXd b = spec.intensity(global);
            const double n1 = 0.5 * (1.0 - eta), n2 = 0.5 * (1.0 + eta);
            const double w = g.weights[q] * seg.jacobian;
            for (int c = 0; c < d; ++c) {
                F(seg.a * d + c) += w * n1 * b(c);
                F(seg.b * d + c) += w * n2 * b(c);
            }
        }
    }

    // p_b = Phi^-T (-Lambda + (k+2) I)^-1 Phi^T F, integrating xi^(k+1-lambda)
    // analytically over [0, 1]
    Eigen::VectorXcd scale(nd);
    for (int i = 0; i < nd; ++i)
        scale(i) = 1.0 / (-element.modal.lambda(i) + double(spec.exponent + 2));
    const Eigen::VectorXcd t = element.modal.phi_u.transpose() * F.cast<std::complex<double>>();
    const Eigen::VectorXcd pb =
        element.modal.phi_u.transpose().partialPivLu().solve(
            Eigen::VectorXcd(scale.asDiagonal() * t));
    return pb.real();
}

}  // namespace qfem
