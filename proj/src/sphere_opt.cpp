#include "periodica/sphere_opt.hpp"

#include <cmath>

namespace periodica {

SphereOptResult sphere_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x0, int max_iters, double fd_step,
                                double gtol) {
    const int dim = static_cast<int>(x0.size());
    Eigen::VectorXd x = x0 / x0.norm();
    double fx = f(x);
    double step = 0.1;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd g(dim);
        for (int i = 0; i < dim; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += fd_step;
            xm[i] -= fd_step;
            g[i] = (f(xp / xp.norm()) - f(xm / xm.norm())) / (2.0 * fd_step);
        }
        Eigen::VectorXd gt = g - g.dot(x) * x;
        double gn = gt.norm();
        if (gn <= gtol) break;
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            Eigen::VectorXd cand = x + step * gt;
            cand /= cand.norm();
            double fc = f(cand);
            if (fc > fx + 1e-16) {
                x = cand;
                fx = fc;
                step *= 1.5;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return {x, fx};
}

SphereRootResult sphere_root(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, int max_iters, double tol) {
    const int dim = static_cast<int>(x0.size());
    Eigen::VectorXd x = x0 / x0.norm();
    Eigen::VectorXd fx = f(x);
    double mu = 1e-6;
    const double h = 1e-7;
    for (int it = 0; it < max_iters && fx.norm() > tol; ++it) {
        Eigen::MatrixXd jac(dim, dim);
        for (int i = 0; i < dim; ++i) {
            Eigen::VectorXd xp = x;
            xp[i] += h;
            xp /= xp.norm();
            jac.col(i) = (f(xp) - fx) / h;
        }
        Eigen::MatrixXd a = jac.transpose() * jac + mu * Eigen::MatrixXd::Identity(dim, dim);
        Eigen::VectorXd delta = a.ldlt().solve(-jac.transpose() * fx);
        Eigen::VectorXd cand = x + delta;
        double cn = cand.norm();
        if (cn < 1e-12) {
            mu *= 10.0;
            continue;
        }
        cand /= cn;
        Eigen::VectorXd fc = f(cand);
        if (fc.norm() < fx.norm()) {
            x = cand;
            fx = fc;
            mu = std::max(mu * 0.3, 1e-12);
        } else {
            mu *= 10.0;
            if (mu > 1e8) break;
        }
    }
    return {x, fx.norm()};
}

}  // namespace periodica
