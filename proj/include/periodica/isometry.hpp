#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace periodica {

// Combinatorial description of a periodic orthogonal map: identity on a
// fixed subspace plus one 2-plane rotation by 2*pi*k_i/p per multiplier.
struct RotationSpectrum {
    int n = 0;          // sphere dimension, ambient dimension is n+1
    int p = 0;          // period
    int fixed_dim = 0;  // dimension of the fixed subspace
    std::vector<int> multipliers;

    void validate() const;
    nlohmann::json to_json() const;
    static RotationSpectrum from_json(const nlohmann::json& j);
};

struct PeriodicIsometry {
    Eigen::MatrixXd matrix;  // (n+1)x(n+1) orthogonal, period p
    RotationSpectrum spectrum;
    std::optional<Eigen::MatrixXd> conjugator;  // frame scrambling, if any
};

// Block-diagonal realization of a spectrum in the canonical frame.
PeriodicIsometry build_block_isometry(const RotationSpectrum& spec);

// The rotation r = r_1 + ... + r_{(p-1)/2} with angles 2*pi*i/p on R^{p-1},
// together with the base point whose orbit is a regular (p-1)-simplex.
struct SimplexRotation {
    PeriodicIsometry map;
    Eigen::VectorXd base;
};
SimplexRotation canonical_simplex_rotation(int p);

// Random admissible spectrum, conjugated by a seeded Haar-random orthogonal
// matrix. Deterministic given the seed.
PeriodicIsometry random_periodic_isometry(int n, int p, std::uint64_t seed);

// Sup over the sphere of ||Qx - x||: max over blocks of 2 sin(pi k*/p) with
// the multiplier folded to [1, p/2].
double shift_exact(const PeriodicIsometry& q);

// Smallest m >= 1 with ||M^m - I|| <= m*1e-10, re-orthonormalizing every 32
// steps; nullopt if none up to p_max.
std::optional<int> minimal_period(const Eigen::MatrixXd& m, int p_max);

bool is_prime(int p);

}  // namespace periodica
