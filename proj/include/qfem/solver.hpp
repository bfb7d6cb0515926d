#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qfem/material.hpp"
#include "qfem/mesh.hpp"

namespace qfem {

enum class TreatmentKind { Fem, Pfem, NsfemOne, NsfemN, Sbfem };

const char* treatment_name(TreatmentKind t);
TreatmentKind parse_treatment(const std::string& name);

using ScalarField = std::function<double(Vec2)>;

struct GlobalSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd f;
    int dofs_per_node = 1;
    int n_nodes = 0;

    int n_dofs() const { return static_cast<int>(K.rows()); }
};

/// Scatter element stiffnesses of the chosen treatment into a sparse global
/// system. `source` is the right-hand side f of nabla^2 u = f (may be null);
/// loads are integrated per treatment: transition elements with the
/// quadrant-split Gauss rule, polygonal/smoothed elements on centroid-fan
/// triangles with the degree-6 rule, scaled-boundary elements with the
/// semi-analytical body-load formula (k = 0).
GlobalSystem assemble(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                      TreatmentKind treatment, const Material& material,
                      const ScalarField& source = nullptr);

struct ReducedSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd f;
    std::vector<int> free_dofs;           // reduced index -> full dof
    Eigen::VectorXd prescribed;           // full-length, zeros on free dofs
    std::vector<char> is_fixed;           // per full dof
    int full_dofs = 0;

    Eigen::VectorXd recover(const Eigen::VectorXd& reduced) const;
};

/// Eliminate Dirichlet dofs by row/column removal with right-hand-side
/// correction. `values` maps node id -> prescribed value (scalar problems).
/// Every node in `required_nodes` must be present, otherwise an
/// IncompleteBcError naming the node is thrown.
ReducedSystem apply_dirichlet(const GlobalSystem& system, const std::map<int, double>& values,
                              const std::set<int>& required_nodes);

struct SolveResult {
    Eigen::VectorXd u;       // full-length solution with prescribed values re-inserted
    double residual = 0.0;   // ||K u - f|| / ||f|| on the reduced system
};

SolveResult solve(const ReducedSystem& system);

struct ErrorReport {
    double rel_l2 = 0.0;
    double abs_l2 = 0.0;
    bool absolute_fallback = false;  // exact-solution norm was zero
    int n_dof = 0;
    double solver_residual = 0.0;    // relative residual of the sparse solve
    std::string treatment;
    std::string mesh_id;
};

/// Relative L2 error of a nodal solution against an exact field, integrated
/// on centroid-fan triangles with the degree-6 rule. The in-cell
/// reconstruction uses the treatment's own shape functions; smoothed and
/// scaled-boundary cells are reconstructed from boundary nodal values (fan
/// interpolant and Laplace interpolant, respectively).
ErrorReport l2_error(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                     TreatmentKind treatment, const Eigen::VectorXd& u_h,
                     const ScalarField& exact);

enum class PatchCase { LinearA, QuadraticB };

/// Laplace problem with g imposed on the whole boundary; returns the
/// relative L2 error of the computed solution against g.
ErrorReport run_patch_test(PatchCase which, const QuadtreeMesh& mesh, TreatmentKind treatment);

struct ConvergenceResult {
    std::vector<ErrorReport> reports;
    std::vector<double> h;   // (domain area / leaf count)^(1/2) per level
    double slope = 0.0;      // least-squares slope over the last 3 levels
};

/// Poisson problem with the manufactured solution; meshes must be ordered
/// coarse to fine.
ConvergenceResult run_poisson_convergence(const std::vector<QuadtreeMesh>& meshes,
                                          TreatmentKind treatment);

}  // namespace qfem
