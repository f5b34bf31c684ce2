#include "periodica/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "periodica/rng.hpp"
#include "periodica/sphere_opt.hpp"

namespace periodica {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd orbit_sum(const PeriodicMap& h, const Point& x) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(x.size());
    Point cur = x;
    for (int i = 0; i < h.p; ++i) {
        cur = h.eval(cur);
        s += cur;
    }
    return s;
}

double orbit_diameter_at(const PeriodicMap& h, const Point& x) {
    PointSet pts;
    Point cur = x;
    for (int i = 0; i < h.p; ++i) {
        cur = h.eval(cur);
        pts.push_back(cur);
    }
    return set_diameter(pts);
}

}  // namespace

PeriodicMap as_map(const PeriodicIsometry& iso) {
    PeriodicMap m;
    m.n = iso.spectrum.n;
    m.p = iso.spectrum.p;
    m.kind = MapKind::Isometry;
    Eigen::MatrixXd q = iso.matrix;
    m.eval = [q](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = q * x;
        return Eigen::VectorXd(y / y.norm());
    };
    m.provenance = {{"kind", "isometry"}, {"spectrum", iso.spectrum.to_json()}};
    return m;
}

PeriodicMap projective_conjugate(const PeriodicIsometry& q, const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 100.0)
        throw std::invalid_argument("projective_conjugate: condition number exceeds 100");
    Eigen::MatrixXd a = m * q.matrix * m.inverse();
    PeriodicMap out;
    out.n = q.spectrum.n;
    out.p = q.spectrum.p;
    out.kind = MapKind::ProjectiveConjugate;
    out.eval = [a](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = a * x;
        return Eigen::VectorXd(y / y.norm());
    };
    out.provenance = {{"kind", "projective"}, {"spectrum", q.spectrum.to_json()}};
    return out;
}

Orbit orbit(const PeriodicMap& h, const Point& x_in) {
    Orbit o;
    o.base = sphere_point(x_in);
    Point cur = o.base;
    for (int i = 0; i < h.p; ++i) {
        cur = h.eval(cur);
        o.points.push_back(cur);
    }
    if ((o.points.back() - o.base).norm() > 1e-6)
        throw std::runtime_error("orbit: map violates its declared period");
    Eigen::VectorXd s = Eigen::VectorXd::Zero(o.base.size());
    for (const auto& pt : o.points) s += pt;
    o.balance_residual = s.norm();
    o.diameter = set_diameter(o.points);
    return o;
}

Point barycentric(const PeriodicMap& h, const Point& x, double eps_bal) {
    if (eps_bal < 0.0) eps_bal = 1e-9 * h.p;
    Eigen::VectorXd s = orbit_sum(h, sphere_point(x));
    double r = s.norm();
    if (r <= eps_bal) throw BalancedOrbitError("barycentric: orbit is balanced");
    return s / r;
}

Lemma24Solution solve_lemma24(const PeriodicMap& h, int budget, std::uint64_t seed) {
    const int dim = h.n + 1;
    // lambda*x + sum_1^{p-1} h^i(x) = 0 with lambda >= 1 is equivalent to
    // S(x) = -mu*x with mu >= 0 for the full orbit sum S; both the balanced
    // branch (S = 0, lambda = 1) and the beta(x) = -x branch are zeros of
    // F(x) = S(x) + ||S(x)||*x.
    auto feq = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd s = orbit_sum(h, x);
        return Eigen::VectorXd(s + s.norm() * x);
    };
    auto finish = [&](const Point& x) {
        Lemma24Solution sol;
        sol.x = sphere_point(x);
        Eigen::VectorXd s = orbit_sum(h, sol.x);
        Point cur = sol.x;
        Eigen::VectorXd partial = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < h.p - 1; ++i) {
            cur = h.eval(cur);
            partial += cur;
        }
        double bal = s.norm();
        if (bal <= 1e-9 * h.p) {
            sol.lambda = 1.0;
        } else {
            sol.lambda = 1.0 + bal;
        }
        sol.residual = (sol.lambda * sol.x + partial).norm();
        // The balanced branch with lambda = 1 may be the better reading.
        double res1 = (sol.x + partial).norm();
        if (res1 < sol.residual) {
            sol.lambda = 1.0;
            sol.residual = res1;
        }
        sol.converged = sol.residual <= 1e-7;
        return sol;
    };

    auto rng = make_rng(mix_seed(seed, 0x124ULL));
    Lemma24Solution best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(budget, 1); ++r) {
        Point x0 = random_unit_vector(dim, rng);
        // Quick exit on balanced starts.
        if (orbit_sum(h, x0).norm() <= 1e-9 * h.p) return finish(x0);
        SphereRootResult rr = sphere_root(feq, x0, 80, 1e-10);
        Lemma24Solution sol = finish(rr.x);
        if (sol.residual < best.residual) best = sol;
        if (best.converged) break;
    }
    return best;
}

DiameterEstimate maximize_orbit_diameter(const PeriodicMap& h, int budget, std::uint64_t seed) {
    const int dim = h.n + 1;
    auto rng = make_rng(mix_seed(seed, 0xd1aULL));
    auto diam = [&](const Eigen::VectorXd& x) { return orbit_diameter_at(h, x); };

    if (h.p <= 1) {
        Point x = random_unit_vector(dim, rng);
        return {x, 0.0};
    }

    // Phase 1: seeded random starts.
    std::vector<std::pair<double, Point>> ranked;
    const int nstarts = std::max(2 * budget, 4);
    for (int i = 0; i < nstarts; ++i) {
        Point x = random_unit_vector(dim, rng);
        ranked.emplace_back(diam(x), x);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const int keep = std::min<int>(4, static_cast<int>(ranked.size()));

    Point best_x = ranked[0].second;
    double best_v = ranked[0].first;

    for (int s = 0; s < keep; ++s) {
        Point x = ranked[s].second;
        // Phase 2: ascent on a log-sum-exp smoothing of the pairwise max,
        // temperature annealed 1e-1 -> 1e-4.
        for (double temp : {1e-1, 1e-2, 1e-3, 1e-4}) {
            auto lse = [&](const Eigen::VectorXd& y) {
                PointSet pts;
                Point cur = y;
                for (int i = 0; i < h.p; ++i) {
                    cur = h.eval(cur);
                    pts.push_back(cur);
                }
                double mx = 0.0;
                for (size_t a = 0; a < pts.size(); ++a)
                    for (size_t b = a + 1; b < pts.size(); ++b)
                        mx = std::max(mx, (pts[a] - pts[b]).norm());
                double acc = 0.0;
                for (size_t a = 0; a < pts.size(); ++a)
                    for (size_t b = a + 1; b < pts.size(); ++b)
                        acc += std::exp(((pts[a] - pts[b]).norm() - mx) / temp);
                return mx + temp * std::log(acc);
            };
            x = sphere_maximize(lse, x, 60).x;
        }
        // Phase 3: polish on the active pair.
        PointSet pts;
        Point cur = x;
        for (int i = 0; i < h.p; ++i) {
            cur = h.eval(cur);
            pts.push_back(cur);
        }
        int ia = 0, ib = 1;
        double mx = 0.0;
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = a + 1; b < pts.size(); ++b)
                if ((pts[a] - pts[b]).norm() > mx) {
                    mx = (pts[a] - pts[b]).norm();
                    ia = static_cast<int>(a);
                    ib = static_cast<int>(b);
                }
        auto pair_obj = [&](const Eigen::VectorXd& y) {
            Point cur2 = y;
            Point pa, pb;
            for (int i = 0; i < h.p; ++i) {
                cur2 = h.eval(cur2);
                if (i == ia) pa = cur2;
                if (i == ib) pb = cur2;
            }
            return (pa - pb).norm();
        };
        x = sphere_maximize(pair_obj, x, 400, 1e-6, 1e-10).x;
        double v = diam(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

CircleDegree circle_degree(const PeriodicMap& h, int resolution) {
    if (h.n != 1) throw std::invalid_argument("circle_degree: map must act on S^1");
    const double eps_bal = 1e-9 * h.p;
    constexpr int kSampleCap = 1 << 20;
    int evals = 0;

    auto beta_angle = [&](double theta) {
        Eigen::VectorXd x(2);
        x << std::cos(2.0 * kPi * theta), std::sin(2.0 * kPi * theta);
        Eigen::VectorXd s = orbit_sum(h, x);
        if (s.norm() <= eps_bal) throw BalancedOrbitError("circle_degree: balanced probe orbit");
        ++evals;
        return std::atan2(s[1], s[0]);
    };
    auto wrap = [](double a) {
        while (a > kPi) a -= 2.0 * kPi;
        while (a <= -kPi) a += 2.0 * kPi;
        return a;
    };

    double total = 0.0;
    // Adaptive accumulation: split any interval whose angle increment
    // exceeds pi/4, up to the sample cap.
    std::function<double(double, double, double, double, int)> accumulate =
        [&](double t0, double t1, double a0, double a1, int depth) -> double {
        double d = wrap(a1 - a0);
        if (std::abs(d) <= kPi / 4.0) return d;
        if (depth > 24 || evals > kSampleCap) {
            if (std::abs(d) > kPi / 2.0)
                throw std::runtime_error("circle_degree: resolution insufficient");
            return d;
        }
        double tm = 0.5 * (t0 + t1);
        double am = beta_angle(tm);
        return accumulate(t0, tm, a0, am, depth + 1) + accumulate(tm, t1, am, a1, depth + 1);
    };

    std::vector<double> angles(resolution + 1);
    for (int i = 0; i <= resolution; ++i) angles[i] = beta_angle(double(i) / resolution);
    for (int i = 0; i < resolution; ++i)
        total += accumulate(double(i) / resolution, double(i + 1) / resolution, angles[i],
                            angles[i + 1], 0);

    int degree = static_cast<int>(std::lround(total / (2.0 * kPi)));
    CircleDegree out;
    out.degree = degree;
    out.divisible_by_p = (((degree % h.p) + h.p) % h.p) == 0;
    return out;
}

void write_orbit_csv(std::ostream& os, const Orbit& orb) {
    const int dim = static_cast<int>(orb.base.size());
    os << "i";
    for (int j = 0; j < dim; ++j) os << ",x" << j;
    os << "\n";
    os.precision(17);
    for (size_t i = 0; i < orb.points.size(); ++i) {
        os << (i + 1);
        for (int j = 0; j < dim; ++j) os << "," << orb.points[i][j];
        os << "\n";
    }
}

}  // namespace periodica
