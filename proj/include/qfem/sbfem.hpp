#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "qfem/element.hpp"
#include "qfem/errors.hpp"
#include "qfem/material.hpp"

namespace qfem {

struct SbfemOptions {
    int segment_gauss_order = 2;    // exact for 2-node segments
    double zero_tol_rel = 1e-8;     // |Re(lambda)| <= tol * max|lambda| counts as zero
    double asymmetry_tol = 1e-6;    // relative stiffness asymmetry failure threshold
    double e0_condition_warn = 1e12;
    std::string spectrum_dump_path = "sbfem_spectrum_dump.csv";
};

/// Boundary discretization of a polygon around its area centroid. Vertex
/// coordinates are stored relative to the scaling centre; the radial
/// coordinate runs from 0 at the centre to 1 on the boundary. For a straight
/// 2-node segment the boundary Jacobian cross(r, dr/deta) is constant.
struct ScaledBoundaryGeometry {
    Vec2 centre;
    int node_count = 0;
    struct Segment {
        int a = 0, b = 0;  // local node indices, consecutive CCW
        Vec2 pa, pb;       // endpoints relative to the centre
        double jacobian = 0.0;
    };
    std::vector<Segment> segments;
};

ScaledBoundaryGeometry scaled_boundary_geometry(const PolygonElement& element);

/// E0 = sum_seg int B1^T D B1 |J| deta, E1 = int B2^T D B1, E2 = int B2^T D B2,
/// with B1(eta) carrying the radial and B2(eta) the circumferential part of
/// the gradient operator. E0 is SPD, E2 symmetric PSD; both are symmetrized
/// to machine precision.
struct CoefficientMatrices {
    Eigen::MatrixXd E0, E1, E2;
    int dofs_per_node = 1;
};

CoefficientMatrices coefficient_matrices(const ScaledBoundaryGeometry& geom,
                                         const Material& material, int gauss_order = 2);

struct HamiltonianResult {
    Eigen::MatrixXd Z;
    double e0_condition = 0.0;
    bool conditioning_warning = false;
};

/// Z = [[E0^-1 E1^T, -E0^-1], [E1 E0^-1 E1^T - E2, -E1 E0^-1]]. Attaches a
/// conditioning warning when cond(E0) exceeds the configured threshold.
HamiltonianResult hamiltonian(const CoefficientMatrices& E, const SbfemOptions& opts = {});

/// Retained modal basis: eigenpairs of Z with Re(lambda) < 0 plus explicitly
/// constructed constant modes (one per dof component, lambda = 0, zero force
/// part). Column k of phi_u is the displacement part of mode k.
struct ModalSolution {
    Eigen::MatrixXcd phi_u;
    Eigen::MatrixXcd phi_q;        // force parts (zero columns for constructed modes)
    Eigen::VectorXcd lambda;
    int constructed_zero_modes = 0;
    double phi_condition = 0.0;
    double max_eigen_residual = 0.0;  // ||Z v - lambda v|| / ||v|| over genuine modes

    /// Integration constants c with u_b = phi_u * c.
    Eigen::VectorXcd integration_constants(const Eigen::VectorXd& ub) const;
};

ModalSolution modal_solution(const HamiltonianResult& h, int dofs_per_node,
                             const SbfemOptions& opts = {});

/// Everything needed to reuse one element's semi-analytical solution.
struct SbfemElement {
    ScaledBoundaryGeometry geom;
    CoefficientMatrices E;
    ModalSolution modal;
    ElementStiffness stiffness;
};

SbfemElement sbfem_build_element(const PolygonElement& element, const Material& material,
                                 const SbfemOptions& opts = {});

ElementStiffness sbfem_element_stiffness(const PolygonElement& element, const Material& material,
                                         const SbfemOptions& opts = {});

/// Body force b(xi, eta) = xi^k b(eta); the circumferential intensity is
/// sampled at the boundary point (xi = 1) of each segment.
struct BodyLoadSpec {
    int exponent = 0;  // k >= 0
    std::function<Eigen::VectorXd(Vec2)> intensity;  // global point -> d components
};

Eigen::VectorXd sbfem_body_load(const SbfemElement& element, const Material& material,
                                const BodyLoadSpec& spec);

}  // namespace qfem
