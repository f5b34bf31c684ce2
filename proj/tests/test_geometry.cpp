#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "periodica/constants.hpp"
#include "periodica/geometry.hpp"
#include "periodica/isometry.hpp"
#include "periodica/orbit.hpp"
#include "periodica/rng.hpp"

using namespace periodica;

namespace {

// Exhaustive KKT oracle for small instances: minimize ||sum c_i x_i|| over
// the simplex by enumerating support subsets and solving the equality system
// on each affine hull, keeping solutions with nonnegative coefficients.
double brute_force_hull_distance(const PointSet& f) {
    const int m = static_cast<int>(f.size());
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        const int k = static_cast<int>(idx.size());
        // Minimize ||X c||^2 s.t. 1'c = 1 via KKT.
        Eigen::MatrixXd x(f[0].size(), k);
        for (int i = 0; i < k; ++i) x.col(i) = f[idx[i]];
        Eigen::MatrixXd kkt(k + 1, k + 1);
        kkt.topLeftCorner(k, k) = 2.0 * x.transpose() * x;
        kkt.topRightCorner(k, 1).setOnes();
        kkt.bottomLeftCorner(1, k).setOnes();
        kkt(k, k) = 0.0;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
        rhs[k] = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd sol = lu.solve(rhs);
        bool feasible = true;
        for (int i = 0; i < k; ++i)
            if (sol[i] < -1e-12) feasible = false;
        if (!feasible) continue;
        best = std::min(best, (x * sol.head(k)).norm());
    }
    return best;
}

}  // namespace

TEST_CASE("set diameter basics") {
    Eigen::Vector2d a(1, 0), b(-1, 0);
    CHECK(set_diameter({a}) == 0.0);
    CHECK(set_diameter({a, b}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("origin-hull distance on closed-form instances") {
    Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);

    auto single = origin_hull_distance({e1});
    CHECK(single.distance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(single.contains_origin);

    auto pair = origin_hull_distance({e1, Eigen::Vector3d(-1, 0, 0)});
    CHECK(pair.distance <= 1e-10);
    CHECK(pair.contains_origin);

    auto tri = origin_hull_distance({e1, e2, e3});
    CHECK(tri.distance == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
    CHECK_FALSE(tri.contains_origin);
}

TEST_CASE("hull witness certifies its distance") {
    auto rng = make_rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + int(trial % 3);
        int m = 2 + int(trial % 5);
        PointSet f;
        for (int i = 0; i < m; ++i) f.push_back(random_unit_vector(dim, rng));
        auto w = origin_hull_distance(f);
        REQUIRE(w.coeffs.size() == m);
        double csum = 0.0;
        Eigen::VectorXd combo = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < m; ++i) {
            CHECK(w.coeffs[i] >= -1e-12);
            csum += w.coeffs[i];
            combo += w.coeffs[i] * f[i];
        }
        CHECK(csum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(combo.norm() - w.distance) <= 1e-9);
    }
}

TEST_CASE("hull solver agrees with the exhaustive oracle") {
    auto rng = make_rng(777);
    for (int trial = 0; trial < 300; ++trial) {
        int dim = 2 + int(trial % 3);
        int m = 2 + int(trial % 5);
        PointSet f;
        for (int i = 0; i < m; ++i) f.push_back(random_unit_vector(dim, rng));
        double got = origin_hull_distance(f).distance;
        double want = brute_force_hull_distance(f);
        CHECK(std::abs(got - want) <= 1e-8);
    }
}

TEST_CASE("caratheodory reduction keeps the origin with few points") {
    auto rng = make_rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 2 + trial % 3;
        // Many points plus an antipodal pair so the hull surely contains 0.
        PointSet f;
        for (int i = 0; i < 10; ++i) f.push_back(random_unit_vector(dim, rng));
        Eigen::VectorXd v = random_unit_vector(dim, rng);
        f.push_back(v);
        f.push_back(-v);
        REQUIRE(origin_hull_distance(f).contains_origin);
        PointSet r = caratheodory_reduce(f);
        CHECK(int(r.size()) <= dim + 1);
        CHECK(origin_hull_distance(r).distance <= 1e-7);
    }
}

TEST_CASE("smallest enclosing cap on closed-form instances") {
    Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0);
    auto cap = smallest_enclosing_cap({e1, e2});
    Eigen::Vector3d mid = (e1 + e2).normalized();
    CHECK((cap.center - mid).norm() <= 1e-9);
    CHECK(cap.chordal_radius == doctest::Approx((e1 - mid).norm()).epsilon(1e-9));

    auto point_cap = smallest_enclosing_cap({e1});
    CHECK(point_cap.chordal_radius <= 1e-12);
    CHECK((point_cap.center - e1).norm() <= 1e-12);
}

TEST_CASE("enclosing cap is feasible and near-optimal on random sets") {
    auto rng = make_rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        int dim = 3 + trial % 2;
        PointSet f;
        Eigen::VectorXd c0 = random_unit_vector(dim, rng);
        for (int i = 0; i < 6; ++i) {
            Eigen::VectorXd v = (c0 + 0.45 * gaussian_vector(dim, rng)).normalized();
            f.push_back(v);
        }
        auto cap = smallest_enclosing_cap(f, 7);
        double worst = 0.0;
        for (const auto& v : f) worst = std::max(worst, (v - cap.center).norm());
        CHECK(worst <= cap.chordal_radius + 1e-9);
        // No strictly better center among random probes.
        for (int probe = 0; probe < 200; ++probe) {
            Eigen::VectorXd c = (cap.center + 0.1 * gaussian_vector(dim, rng)).normalized();
            double r = 0.0;
            for (const auto& v : f) r = std::max(r, (v - c).norm());
            CHECK(r >= cap.chordal_radius - 1e-6);
        }
    }
}

TEST_CASE("regular gon recognizer accepts gons and rejects perturbations") {
    for (int p : {3, 5, 8}) {
        auto pts = regular_configuration(ConfigKind::Pgon, p, 4, 11u + p);
        auto diag = is_regular_pgon(pts, 1e-6);
        CHECK(diag.regular);
        CHECK(diag.chord_spread <= 1e-9);
        CHECK(diag.planarity_residual <= 1e-9);

        auto bad = pts;
        bad[0] = (bad[0] + Eigen::Vector4d(0.01, 0, 0, 0)).normalized();
        CHECK_FALSE(is_regular_pgon(bad, 1e-6).regular);
    }
}

TEST_CASE("single-block isometry orbit is a regular 5-gon") {
    RotationSpectrum spec;
    spec.n = 2;
    spec.p = 5;
    spec.fixed_dim = 1;
    spec.multipliers = {1};
    auto iso = build_block_isometry(spec);
    Eigen::Vector3d x(0, 1, 0);  // inside the rotating 2-plane
    auto orb = orbit(as_map(iso), x);
    CHECK(is_regular_pgon(orb.points, 1e-6).regular);
}
