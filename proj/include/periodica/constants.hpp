#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace periodica {

// Closed-form extremal chordal lengths for period p and sphere dimension n:
//   rho_p   side of a regular p-gon inscribed in the unit circle
//   d_p     diameter of that p-gon
//   t_n     edge of a regular (n+1)-simplex inscribed in S^n
//   delta_n chordal radius of the Jung cap, delta_n^2 + t_n^2 = 4
struct ExtremalLengths {
    int p = 0;
    int n = 0;
    double rho_p = 0.0;
    double d_p = 0.0;
    double t_n = 0.0;
    double delta_n = 0.0;
};

ExtremalLengths extremal_lengths(int p, int n);

enum class ConfigKind { Pgon, Simplex };

// Vertices of a regular p-gon on a great circle (kind=Pgon, size=p) or of a
// regular (n+1)-simplex inscribed in S^n (kind=Simplex, size=n), generated in
// a canonical frame and rotated by a seeded Haar-random orthogonal matrix of
// the embedding dimension.
std::vector<Eigen::VectorXd> regular_configuration(ConfigKind kind, int size, int embedding_dim,
                                                   std::uint64_t seed);

}  // namespace periodica
