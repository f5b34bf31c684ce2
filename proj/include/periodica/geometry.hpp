#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace periodica {

using Point = Eigen::VectorXd;
using PointSet = std::vector<Point>;

// Renormalizes onto the unit sphere; rejects near-zero vectors.
Point sphere_point(const Point& v);

struct CapCover {
    Point center;
    double chordal_radius = 0.0;
};

struct HullWitness {
    double distance = 0.0;       // Euclidean distance from the origin to conv(F)
    Eigen::VectorXd coeffs;      // minimizing convex combination over the (deduplicated) set
    PointSet support;            // points carrying nonzero weight
    bool contains_origin = false;  // distance < 1e-8
};

struct PgonDiagnostics {
    bool regular = false;
    double planarity_residual = 0.0;  // max distance to the best 2-plane through the origin
    double chord_spread = 0.0;        // max - min consecutive chord after angular ordering
    double min_separation = 0.0;      // smallest pairwise distance
};

// Max chordal distance over pairs; 0 for a singleton.
double set_diameter(const PointSet& f);

// Distance from the origin to conv(F) with a certifying convex combination.
// Support-point descent with corrective affine re-solves (Wolfe min-norm
// point); terminates at duality gap <= 1e-10, iteration cap 1e5.
HullWitness origin_hull_distance(const PointSet& f);

// Constructive Caratheodory: given 0 in conv(F) (distance < 1e-8), returns a
// subset of at most n+2 points whose hull still contains the origin.
PointSet caratheodory_reduce(const PointSet& f);

// Minimax enclosing spherical cap (chordal radius). Exact via hull duality
// when the origin is outside conv(F); multi-start projected subgradient
// otherwise. Always feasible: the returned radius is the achieved maximum.
CapCover smallest_enclosing_cap(const PointSet& f, std::uint64_t seed = 0);

// True iff the points are, in some cyclic order, the vertices of a regular
// convex p-gon on a great circle, up to tol.
PgonDiagnostics is_regular_pgon(const PointSet& f, double tol);

}  // namespace periodica
