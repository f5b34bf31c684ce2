#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "periodica/geometry.hpp"
#include "periodica/isometry.hpp"

namespace periodica {

class BalancedOrbitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class MapKind { Isometry, ProjectiveConjugate, CircleHomeo };

// Self-map of S^n with a declared period; the evaluator must map unit
// vectors to unit vectors.
struct PeriodicMap {
    int n = 0;
    int p = 0;
    MapKind kind = MapKind::Isometry;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
    nlohmann::json provenance;
};

struct Orbit {
    Point base;
    PointSet points;  // h^1(x) .. h^p(x)
    double balance_residual = 0.0;
    double diameter = 0.0;
};

PeriodicMap as_map(const PeriodicIsometry& iso);

// x -> normalize(M Q M^{-1} x): the conjugation of Q by g_M(x) = Mx/||Mx||.
// Non-isometric for non-orthogonal M, same period as Q.
PeriodicMap projective_conjugate(const PeriodicIsometry& q, const Eigen::MatrixXd& m);

Orbit orbit(const PeriodicMap& h, const Point& x);

// Normalized orbit sum; throws BalancedOrbitError when the orbit sum is
// below eps_bal (default 1e-9 * p).
Point barycentric(const PeriodicMap& h, const Point& x, double eps_bal = -1.0);

struct Lemma24Solution {
    Point x;
    double lambda = 1.0;
    double residual = 0.0;  // || lambda*x + sum_{i=1}^{p-1} h^i(x) ||
    bool converged = false;
};

// Multi-start search for x, lambda >= 1 with lambda*x + sum_1^{p-1} h^i(x) = 0.
Lemma24Solution solve_lemma24(const PeriodicMap& h, int budget, std::uint64_t seed);

struct DiameterEstimate {
    Point maximizer;
    double value = 0.0;
};

// Lower bound on the orbital diameter: random starts, annealed log-sum-exp
// smoothing of the pairwise max, then a polish on the active pair.
DiameterEstimate maximize_orbit_diameter(const PeriodicMap& h, int budget, std::uint64_t seed);

struct CircleDegree {
    int degree = 0;
    bool divisible_by_p = false;
};

// Winding number of the barycentric map of a period-p map of the circle.
CircleDegree circle_degree(const PeriodicMap& h, int resolution = 4096);

// CSV export, header "i,x0,...,xn", one row per iterate.
void write_orbit_csv(std::ostream& os, const Orbit& orb);

}  // namespace periodica
