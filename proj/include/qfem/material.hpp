#pragma once

#include <Eigen/Dense>

#include "qfem/errors.hpp"

namespace qfem {

/// Constitutive data: scalar diffusion (1 dof/node, D = k I2) or
/// plane-strain elasticity (2 dofs/node, 3x3 D from E and nu).
class Material {
public:
    enum class Kind { ScalarDiffusion, PlaneStrain };

    static Material scalar(double conductivity) {
        if (conductivity <= 0.0) throw Error("Material: conductivity must be positive");
        Material m;
        m.kind_ = Kind::ScalarDiffusion;
        m.d_ = conductivity * Eigen::Matrix2d::Identity();
        return m;
    }

    static Material plane_strain(double young, double poisson) {
        if (young <= 0.0) throw Error("Material: Young's modulus must be positive");
        if (poisson < 0.0 || poisson >= 0.5) throw Error("Material: Poisson ratio must be in [0, 0.5)");
        Material m;
        m.kind_ = Kind::PlaneStrain;
        const double c = young / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
        Eigen::Matrix3d d;
        d << c * (1.0 - poisson), c * poisson, 0.0,
             c * poisson, c * (1.0 - poisson), 0.0,
             0.0, 0.0, c * (1.0 - 2.0 * poisson) / 2.0;
        m.d_ = d;
        return m;
    }

    Kind kind() const { return kind_; }
    int dofs_per_node() const { return kind_ == Kind::ScalarDiffusion ? 1 : 2; }
    int strain_components() const { return kind_ == Kind::ScalarDiffusion ? 2 : 3; }

    /// Constitutive matrix: 2x2 for scalar diffusion, 3x3 for plane strain.
    const Eigen::MatrixXd& D() const { return d_; }

    /// B-matrix from shape gradients: (strain_components x n*d), gradients as 2xn.
    Eigen::MatrixXd strain_displacement(const Eigen::Matrix2Xd& grads) const {
        const int n = static_cast<int>(grads.cols());
        if (kind_ == Kind::ScalarDiffusion) {
            return grads;
        }
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2 * n);
        for (int i = 0; i < n; ++i) {
            b(0, 2 * i) = grads(0, i);
            b(1, 2 * i + 1) = grads(1, i);
            b(2, 2 * i) = grads(1, i);
            b(2, 2 * i + 1) = grads(0, i);
        }
        return b;
    }

private:
    Kind kind_ = Kind::ScalarDiffusion;
    Eigen::MatrixXd d_ = Eigen::Matrix2d::Identity();
};

}  // namespace qfem
