#pragma once

#include <Eigen/Dense>
#include <functional>

namespace periodica {

struct SphereOptResult {
    Eigen::VectorXd x;
    double value = 0.0;
};

// Projected gradient ascent on the unit sphere with central-difference
// gradients and an adaptive step. f need not expose derivatives.
SphereOptResult sphere_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x0, int max_iters = 300,
                                double fd_step = 1e-6, double gtol = 1e-9);

struct SphereRootResult {
    Eigen::VectorXd x;
    double residual = 0.0;
};

// Levenberg-Marquardt root search for F: R^d -> R^d restricted to the sphere
// (iterates renormalized), Jacobian by forward differences.
SphereRootResult sphere_root(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, int max_iters = 60, double tol = 1e-10);

}  // namespace periodica
