#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace periodica {

// splitmix64 step; used to derive independent per-sample seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::VectorXd gaussian_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v;
}

inline Eigen::VectorXd random_unit_vector(int dim, std::mt19937_64& rng) {
    Eigen::VectorXd v;
    do {
        v = gaussian_vector(dim, rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
// of diag(R) folded into Q.
inline Eigen::MatrixXd haar_orthogonal(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

}  // namespace periodica
