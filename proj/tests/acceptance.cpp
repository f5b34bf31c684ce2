// Acceptance gate: run as `acceptance <criterion>` with criterion in 1..10.
// Each criterion prints exactly one line: PASS/FAIL, its worst margin, and
// the wall-clock runtime (also checked against the per-criterion limit).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "periodica/checks.hpp"
#include "periodica/circle.hpp"
#include "periodica/constants.hpp"
#include "periodica/geometry.hpp"
#include "periodica/isometry.hpp"
#include "periodica/orbit.hpp"
#include "periodica/rng.hpp"

using namespace periodica;

namespace {

constexpr double kPi = std::numbers::pi;

struct Gate {
    bool pass = true;
    double margin = std::numeric_limits<double>::max();

    // Positive slack keeps the gate open; negative slack fails it.
    void require(double slack) {
        margin = std::min(margin, slack);
        if (slack < 0) pass = false;
    }
    void require(bool ok) { require(ok ? 0.0 : -1.0); }

    void fold(const VerificationReport& rep) {
        margin = std::min(margin, rep.min_margin);
        if (!rep.pass) pass = false;
    }
};

CheckConfig cfg_of(const std::string& id, int n, int p, int samples, int budget,
                   std::uint64_t seed) {
    CheckConfig c;
    c.check_id = id;
    c.n = n;
    c.p = p;
    c.samples = samples;
    c.budget = budget;
    c.seed = seed;
    return c;
}

// Exhaustive KKT oracle over support subsets; exact for small instances.
double brute_force_hull_distance(const PointSet& f) {
    const int m = static_cast<int>(f.size());
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        const int k = static_cast<int>(idx.size());
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

// --- criterion 1: closed-form constants vs measured regular configurations
Gate criterion1() {
    Gate g;
    for (int p = 2; p <= 64; ++p)
        for (int n = 1; n <= 16; ++n) {
            auto e = extremal_lengths(p, n);
            g.require(1e-12 - std::abs(e.delta_n * e.delta_n + e.t_n * e.t_n - 4.0));
        }
    g.require(1e-15 - std::abs(extremal_lengths(3, 1).d_p - std::sqrt(3.0)));

    for (int p : {3, 4, 5, 8, 13, 64}) {
        auto e = extremal_lengths(p, 1);
        auto pts = regular_configuration(ConfigKind::Pgon, p, 3, 100u + p);
        for (int i = 0; i < p; ++i)
            g.require(1e-12 - std::abs((pts[(i + 1) % p] - pts[i]).norm() - e.rho_p));
        g.require(1e-12 - std::abs(set_diameter(pts) - e.d_p));
    }
    for (int n : {1, 2, 3, 7, 16}) {
        auto e = extremal_lengths(2, n);
        auto pts = regular_configuration(ConfigKind::Simplex, n, n + 1, 200u + n);
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j)
                g.require(1e-12 - std::abs((pts[i] - pts[j]).norm() - e.t_n));
        // delta measured: circumradius of the vertex-deleted simplex.
        pts.pop_back();
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
        for (const auto& v : pts) c += v;
        c /= c.norm();
        for (const auto& v : pts) g.require(1e-12 - std::abs((v - c).norm() - e.delta_n));
    }
    return g;
}

// --- criterion 2: shift floor and equality clause over random isometries
Gate criterion2() {
    Gate g;
    for (int n = 1; n <= 7; ++n) {
        for (int p : {2, 3, 5, 7, 11, 13}) {
            double rho = extremal_lengths(p, n).rho_p;
            for (int s = 0; s < 200; ++s) {
                std::uint64_t seed = mix_seed(2222, 1000u * n + 10u * p + s);
                PeriodicIsometry iso;
                if (s == 0) {
                    // Force one all-multipliers-1 sample per configuration so
                    // the equality clause is always exercised.
                    RotationSpectrum spec;
                    spec.n = n;
                    spec.p = p;
                    spec.fixed_dim = n - 1;
                    spec.multipliers = {1};
                    iso = build_block_isometry(spec);
                    auto rng = make_rng(seed);
                    Eigen::MatrixXd c = haar_orthogonal(n + 1, rng);
                    iso.matrix = c * iso.matrix * c.transpose();
                } else {
                    iso = random_periodic_isometry(n, p, seed);
                }
                double shift = shift_exact(iso);
                g.require(shift - rho + 1e-9);
                bool ones = true;
                for (int k : iso.spectrum.multipliers)
                    if (std::min(k, p - k) != 1) ones = false;
                if (!ones) continue;
                g.require(1e-9 - std::abs(shift - rho));
                Eigen::MatrixXd d =
                    iso.matrix - Eigen::MatrixXd::Identity(n + 1, n + 1);
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullV);
                Orbit orb = orbit(as_map(iso), svd.matrixV().col(0));
                if (p >= 3)
                    g.require(is_regular_pgon(orb.points, 1e-6).regular);
                else
                    g.require(1e-9 - std::abs(orb.diameter - 2.0));
            }
        }
    }
    return g;
}

Gate criterion3() {
    Gate g;
    g.fold(run_check(cfg_of("C3.1", 3, 5, 50, 64, 333)));
    return g;
}

Gate criterion4() {
    Gate g;
    for (int p : {3, 5, 7, 11}) g.fold(run_check(cfg_of("T1.4", 1, p, 100, 8, 444u + p)));
    for (int p : {2, 4, 6}) g.fold(run_check(cfg_of("T1.4", 1, p, 100, 8, 454u + p)));
    return g;
}

Gate criterion5() {
    Gate g;
    for (int p : {3, 5, 7}) g.fold(run_check(cfg_of("L2.2", 1, p, 100, 8, 555u + p)));
    return g;
}

Gate criterion6() {
    Gate g;
    g.fold(run_check(cfg_of("L2.4", 1, 3, 25, 24, 661)));
    g.fold(run_check(cfg_of("L2.4", 2, 5, 25, 24, 662)));
    g.fold(run_check(cfg_of("L2.4", 3, 7, 25, 24, 663)));
    g.fold(run_check(cfg_of("L2.4", 4, 7, 25, 24, 664)));
    return g;
}

Gate criterion7() {
    Gate g;
    g.fold(run_check(cfg_of("L2.6", 1, 3, 1, 250, 771)));
    g.fold(run_check(cfg_of("L2.6", 2, 5, 1, 250, 772)));
    g.fold(run_check(cfg_of("L2.6", 3, 7, 1, 250, 773)));
    g.fold(run_check(cfg_of("L2.6", 4, 8, 1, 250, 774)));
    return g;
}

Gate criterion8() {
    Gate g;
    for (int n = 1; n <= 7; ++n) g.fold(run_check(cfg_of("L2.7", n, 2, 143, 8, 880u + n)));

    auto rng = make_rng(8888);
    for (int trial = 0; trial < 1000; ++trial) {
        int dim = 2 + trial % 3;  // spheres up to S^3
        int m = 2 + trial % 5;    // at most 6 points
        PointSet f;
        for (int i = 0; i < m; ++i) f.push_back(random_unit_vector(dim, rng));
        double got = origin_hull_distance(f).distance;
        double want = brute_force_hull_distance(f);
        g.require(1e-8 - std::abs(got - want));
    }
    return g;
}

Gate criterion9() {
    Gate g;
    for (auto id : {"T1.1", "L2.4", "T1.4"}) {
        int n = std::string(id) == "T1.4" ? 1 : 2;
        auto a = run_check(cfg_of(id, n, 3, 8, 8, 909));
        auto b = run_check(cfg_of(id, n, 3, 8, 8, 909));
        json ra = a.report, rb = b.report;
        ra.erase("runtime_ms");
        rb.erase("runtime_ms");
        g.require(ra.dump() == rb.dump());
        std::ostringstream log;
        g.require(replay_report(a.report, log));
    }
    return g;
}

Gate criterion10() {
    Gate g;
    auto open_scan = conjecture_scan(3, 5, 50, 24, 1010);
    g.require(open_scan.report.at("asserted").get<bool>() == false);
    bool has_stats = true;
    for (const auto& s : open_scan.report.at("per_sample_stats"))
        if (!s.contains("margin_vs_dp") || !s.contains("simplex_fraction")) has_stats = false;
    g.require(has_stats);

    auto floor_circle = conjecture_scan(1, 5, 50, 24, 1011);
    g.require(floor_circle.pass);
    g.require(floor_circle.min_margin + 1e-6);
    auto floor_s2 = conjecture_scan(2, 3, 50, 24, 1012);
    g.require(floor_s2.pass);
    g.require(floor_s2.min_margin + 1e-6);
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
        return 2;
    }
    int crit = std::atoi(argv[1]);
    double limit_s[] = {0, 1, 30, 60, 20, 30, 60, 60, 60, 10, 300};
    if (crit < 1 || crit > 10) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    Gate g;
    switch (crit) {
        case 1: g = criterion1(); break;
        case 2: g = criterion2(); break;
        case 3: g = criterion3(); break;
        case 4: g = criterion4(); break;
        case 5: g = criterion5(); break;
        case 6: g = criterion6(); break;
        case 7: g = criterion7(); break;
        case 8: g = criterion8(); break;
        case 9: g = criterion9(); break;
        case 10: g = criterion10(); break;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < limit_s[crit];
    bool pass = g.pass && in_time;
    std::printf("criterion %d: %s (min margin %.3e, %.2f s%s)\n", crit,
                pass ? "PASS" : "FAIL", g.margin, secs,
                in_time ? "" : ", over time limit");
    return pass ? 0 : 1;
}
