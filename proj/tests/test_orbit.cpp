#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "periodica/circle.hpp"
#include "periodica/constants.hpp"
#include "periodica/orbit.hpp"
#include "periodica/rng.hpp"

using namespace periodica;

namespace {

PeriodicIsometry z_rotation_s2(int p) {
    RotationSpectrum s;
    s.n = 2;
    s.p = p;
    s.fixed_dim = 1;
    s.multipliers = {1};
    return build_block_isometry(s);
}

}  // namespace

TEST_CASE("orbit of a fixed point is degenerate") {
    auto h = as_map(z_rotation_s2(3));
    Eigen::Vector3d pole(1, 0, 0);  // fixed axis comes first in the block layout
    auto orb = orbit(h, pole);
    CHECK(orb.diameter == 0.0);
    CHECK(orb.balance_residual == doctest::Approx(3.0));
}

TEST_CASE("orbit closes and knows its balance") {
    auto h = as_map(random_periodic_isometry(3, 5, 42));
    auto rng = make_rng(1);
    for (int i = 0; i < 10; ++i) {
        auto orb = orbit(h, random_unit_vector(4, rng));
        CHECK((orb.points.back() - orb.base).norm() <= 1e-9);
        Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
        for (const auto& x : orb.points) s += x;
        CHECK(std::abs(s.norm() - orb.balance_residual) <= 1e-12);
    }
}

TEST_CASE("barycentric map is orbit-constant") {
    auto h = as_map(random_periodic_isometry(2, 3, 7));
    auto rng = make_rng(2);
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd x = random_unit_vector(3, rng);
        try {
            Eigen::VectorXd bx = barycentric(h, x);
            Eigen::VectorXd bh = barycentric(h, h.eval(x));
            CHECK((bx - bh).norm() <= 1e-9);
            CHECK(std::abs(bx.norm() - 1.0) <= 1e-12);
        } catch (const BalancedOrbitError&) {
            // balanced probes are legitimately rejected
        }
    }
}

TEST_CASE("antipodal map: balanced everywhere, orbital diameter 2") {
    RotationSpectrum s;
    s.n = 1;
    s.p = 2;
    s.fixed_dim = 0;
    s.multipliers = {1};
    auto h = as_map(build_block_isometry(s));
    Eigen::Vector2d x(1, 0);
    CHECK_THROWS_AS(barycentric(h, x), BalancedOrbitError);
    CHECK(orbit(h, x).diameter == doctest::Approx(2.0));
    CHECK(maximize_orbit_diameter(h, 4, 3).value == doctest::Approx(2.0));
}

TEST_CASE("projective conjugate keeps the period and rejects bad matrices") {
    auto iso = random_periodic_isometry(2, 5, 11);
    Eigen::MatrixXd good = Eigen::MatrixXd::Identity(3, 3);
    good(0, 1) = 0.4;
    auto h = projective_conjugate(iso, good);
    auto rng = make_rng(5);
    Eigen::VectorXd x = random_unit_vector(3, rng);
    Eigen::VectorXd y = x;
    for (int i = 0; i < 5; ++i) y = h.eval(y);
    CHECK((y - x).norm() <= 1e-9);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(2, 2) = 1e-4;
    CHECK_THROWS_AS(projective_conjugate(iso, bad), std::invalid_argument);
}

TEST_CASE("balance-equation solver output re-substitutes to a small residual") {
    for (int trial = 0; trial < 6; ++trial) {
        int n = 1 + trial % 3;
        int p = (trial % 2 == 0) ? 3 : 5;
        auto iso = random_periodic_isometry(n, p, 300 + trial);
        auto h = as_map(iso);
        auto sol = solve_lemma24(h, 16, 100 + trial);
        REQUIRE(sol.converged);
        CHECK(sol.lambda >= 1.0);
        Eigen::VectorXd partial = Eigen::VectorXd::Zero(n + 1);
        Eigen::VectorXd cur = sol.x;
        for (int i = 0; i < p - 1; ++i) {
            cur = h.eval(cur);
            partial += cur;
        }
        CHECK((sol.lambda * sol.x + partial).norm() <= 1e-7);
    }
}

TEST_CASE("balance-equation solver never worsens with a larger budget at the same seed") {
    auto h = as_map(random_periodic_isometry(3, 7, 9));
    double r4 = solve_lemma24(h, 4, 5).residual;
    double r32 = solve_lemma24(h, 32, 5).residual;
    CHECK(r32 <= r4 + 1e-15);
}

TEST_CASE("diameter maximization reaches d_p for a planar rotation") {
    for (int p : {3, 5, 7}) {
        RotationSpectrum s;
        s.n = 1;
        s.p = p;
        s.fixed_dim = 0;
        s.multipliers = {1};
        auto h = as_map(build_block_isometry(s));
        double dp = extremal_lengths(p, 1).d_p;
        auto est = maximize_orbit_diameter(h, 8, 21u + p);
        CHECK(std::abs(est.value - dp) <= 1e-6);
        CHECK(orbit(h, est.maximizer).diameter == doctest::Approx(est.value).epsilon(1e-12));
    }
}

TEST_CASE("diameter estimate is monotone in the budget at the same seed") {
    auto h = as_map(random_periodic_isometry(4, 7, 70));
    double v4 = maximize_orbit_diameter(h, 4, 8).value;
    double v16 = maximize_orbit_diameter(h, 16, 8).value;
    CHECK(v16 >= v4 - 1e-12);
}

TEST_CASE("circle degree of conjugated rotations is divisible by p") {
    for (int p : {3, 5}) {
        auto homeo = random_pl_conjugacy(1, p, 1234u + p);
        auto deg = circle_degree(as_map(homeo));
        CHECK(deg.divisible_by_p);
        CHECK(deg.degree % p == 0);
    }
}

TEST_CASE("circle degree rejects balanced families") {
    // A pure rotation has every orbit balanced, so the barycentric winding
    // number is undefined.
    RotationSpectrum s;
    s.n = 1;
    s.p = 5;
    s.fixed_dim = 0;
    s.multipliers = {1};
    auto h = as_map(build_block_isometry(s));
    CHECK_THROWS_AS(circle_degree(h), BalancedOrbitError);
}

TEST_CASE("orbit CSV format") {
    auto h = as_map(z_rotation_s2(3));
    auto orb = orbit(h, Eigen::Vector3d(0, 1, 0));
    std::ostringstream os;
    write_orbit_csv(os, orb);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "i,x0,x1,x2");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
}
