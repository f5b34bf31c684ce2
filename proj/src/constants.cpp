#include "periodica/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "periodica/rng.hpp"

namespace periodica {

namespace {
constexpr double kPi = std::numbers::pi;
}

ExtremalLengths extremal_lengths(int p, int n) {
    if (p < 2) throw std::invalid_argument("extremal_lengths: period must be >= 2");
    if (n < 1) throw std::invalid_argument("extremal_lengths: dimension must be >= 1");
    ExtremalLengths e;
    e.p = p;
    e.n = n;
    e.rho_p = 2.0 * std::sin(kPi / p);
    // Diameter of the regular p-gon: the antipodal diagonal for even p,
    // the longest chord 2 sin(k*pi/p) for p = 2k+1.
    e.d_p = (p % 2 == 0) ? 2.0 : 2.0 * std::sin((p / 2) * kPi / p);
    e.t_n = std::sqrt(2.0 * (n + 2) / (n + 1));
    e.delta_n = std::sqrt(2.0 * n / (n + 1));
    return e;
}

std::vector<Eigen::VectorXd> regular_configuration(ConfigKind kind, int size, int embedding_dim,
                                                   std::uint64_t seed) {
    std::vector<Eigen::VectorXd> pts;
    if (kind == ConfigKind::Pgon) {
        const int p = size;
        if (p < 2) throw std::invalid_argument("regular_configuration: pgon needs p >= 2");
        if (embedding_dim < 2)
            throw std::invalid_argument("regular_configuration: embedding dimension too small");
        for (int j = 0; j < p; ++j) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(embedding_dim);
            v[0] = std::cos(2.0 * kPi * j / p);
            v[1] = std::sin(2.0 * kPi * j / p);
            pts.push_back(v);
        }
    } else {
        const int n = size;
        if (n < 1) throw std::invalid_argument("regular_configuration: simplex needs n >= 1");
        if (embedding_dim < n + 1)
            throw std::invalid_argument("regular_configuration: embedding dimension too small");
        // Centered standard-basis construction: e_i - barycenter in R^{n+2}
        // lives in the hyperplane orthogonal to the all-ones vector; map it
        // down with an orthonormal basis of that hyperplane and normalize.
        const int m = n + 2;
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(m) / std::sqrt(double(m));
        // Householder reflector sending ones -> e_1; its columns 2..m span
        // the complement of ones.
        Eigen::VectorXd w = ones;
        w[0] -= 1.0;
        Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m);
        if (w.norm() > 1e-14) H -= 2.0 * (w * w.transpose()) / w.squaredNorm();
        Eigen::MatrixXd basis = H.rightCols(m - 1);  // m x (n+1)
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd c = -Eigen::VectorXd::Ones(m) / m;
            c[i] += 1.0;
            Eigen::VectorXd v = basis.transpose() * c;
            v /= v.norm();
            Eigen::VectorXd out = Eigen::VectorXd::Zero(embedding_dim);
            out.head(n + 1) = v;
            pts.push_back(out);
        }
    }
    auto rng = make_rng(seed);
    Eigen::MatrixXd rot = haar_orthogonal(embedding_dim, rng);
    for (auto& v : pts) v = rot * v;
    return pts;
}

}  // namespace periodica
