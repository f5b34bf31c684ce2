#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "periodica/orbit.hpp"

namespace periodica {

// Period-p circle homeomorphism realized as g o R_{q/p} o g^{-1} with g a
// strictly increasing piecewise-linear bijection of [0,1), g(0) = 0. Angles
// are stored in turns (fractions of a full revolution).
struct CircleHomeo {
    int q = 1;
    int p = 2;
    // Graph of g: breakpoints (u_i, v_i), u_0 = v_0 = 0, strictly increasing,
    // implicit closing segment to (1, 1). Slopes stay within [1/64, 64].
    std::vector<std::pair<double, double>> breakpoints;

    double g(double u) const;
    double g_inv(double v) const;
    double apply(double theta) const;        // one application of h, in turns
    double iterate(double theta, int m) const;

    nlohmann::json to_json(std::uint64_t seed = 0) const;
    static CircleHomeo from_json(const nlohmann::json& j);
};

CircleHomeo build_pl_conjugacy(int q, int p, std::vector<std::pair<double, double>> breakpoints);

// Random conjugator with 8..32 breakpoints; slopes land in [1/16, 16].
CircleHomeo random_pl_conjugacy(int q, int p, std::uint64_t seed);

PeriodicMap as_map(const CircleHomeo& h);

Eigen::VectorXd circle_point(double theta);
double circle_angle(const Eigen::VectorXd& x);  // in turns, [0, 1)

// Circular-order arc gaps of an orbit on S^1, in radians; they partition the
// circle, so they sum to 2*pi.
std::vector<double> arc_gaps(const Orbit& orb);

struct WitnessChord {
    double base = 0.0;  // base point actually used, in turns (may differ from
                        // the query when the antipodal fallback engages)
    int iterate_a = 0;  // applications of h to base giving the chord endpoints
    int iterate_b = 0;
    double chord = 0.0;
    double window_sum = 0.0;  // radians
};

// The arc-window argument made executable for odd p = 2k+1: some length-k
// window of consecutive gaps realizes a chord >= d_p; when every window
// misses the admissible band, a bisection on the base point locates the
// antipodal orbit pair the continuity argument guarantees (chord 2).
WitnessChord witness_chord(const CircleHomeo& h, double theta);

// For even period 2k, a point x with h^k(x) = -x, found by bisection on the
// lift; returns theta in turns.
double antipodal_search(const CircleHomeo& h);

}  // namespace periodica
