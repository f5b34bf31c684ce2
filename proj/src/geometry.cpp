#include "periodica/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "periodica/rng.hpp"

namespace periodica {

namespace {

constexpr double kContainTol = 1e-8;
constexpr double kGapTol = 1e-10;
constexpr int kHullIterCap = 100000;

PointSet deduplicate(const PointSet& f, double tol = 1e-10) {
    PointSet out;
    for (const auto& x : f) {
        bool dup = false;
        for (const auto& y : out)
            if ((x - y).norm() <= tol) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(x);
    }
    return out;
}

// Minimum over the affine hull of the active columns of ||X w|| with sum w = 1.
Eigen::VectorXd affine_min_norm(const Eigen::MatrixXd& x) {
    const int m = static_cast<int>(x.cols());
    Eigen::MatrixXd kkt(m + 1, m + 1);
    kkt.topLeftCorner(m, m) = x.transpose() * x;
    kkt.topRightCorner(m, 1).setOnes();
    kkt.bottomLeftCorner(1, m).setOnes();
    kkt(m, m) = 0.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs[m] = 1.0;
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    return sol.head(m);
}

}  // namespace

Point sphere_point(const Point& v) {
    double n = v.norm();
    if (n < 1e-12) throw std::invalid_argument("sphere_point: zero vector");
    return v / n;
}

double set_diameter(const PointSet& f) {
    if (f.empty()) throw std::invalid_argument("set_diameter: empty set");
    double d = 0.0;
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j) d = std::max(d, (f[i] - f[j]).norm());
    return d;
}

HullWitness origin_hull_distance(const PointSet& f_in) {
    if (f_in.empty()) throw std::invalid_argument("origin_hull_distance: empty set");
    PointSet f = deduplicate(f_in);
    const int m = static_cast<int>(f.size());
    const int dim = static_cast<int>(f[0].size());
    Eigen::MatrixXd x(dim, m);
    for (int i = 0; i < m; ++i) x.col(i) = f[i];

    // Active-set min-norm point: start from the shortest input point, add the
    // most violating support point, re-solve the affine subproblem, and walk
    // back into the simplex when a coefficient leaves it.
    std::vector<int> active;
    int start = 0;
    for (int i = 1; i < m; ++i)
        if (f[i].norm() < f[start].norm()) start = i;
    active.push_back(start);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd z = f[start];

    int iters = 0;
    while (true) {
        if (++iters > kHullIterCap)
            throw std::runtime_error("origin_hull_distance: iteration cap exceeded");
        // Support point minimizing <z, x_i>; duality gap <z,z> - <z,x_s>.
        int s = 0;
        double best = z.dot(x.col(0));
        for (int i = 1; i < m; ++i) {
            double v = z.dot(x.col(i));
            if (v < best) {
                best = v;
                s = i;
            }
        }
        double gap = z.squaredNorm() - best;
        if (gap <= 1e-10) break;
        if (std::find(active.begin(), active.end(), s) == active.end()) {
            active.push_back(s);
            Eigen::VectorXd w2(active.size());
            w2.head(w.size()) = w;
            w2[w.size()] = 0.0;
            w = w2;
        }
        // Minor cycle: move toward the affine minimizer, dropping coordinates
        // that hit zero, until the affine minimizer is feasible.
        while (true) {
            Eigen::MatrixXd xa(dim, active.size());
            for (size_t i = 0; i < active.size(); ++i) xa.col(i) = x.col(active[i]);
            Eigen::VectorXd v = affine_min_norm(xa);
            if (v.minCoeff() > -1e-14) {
                w = v;
                z = xa * w;
                break;
            }
            double t = 1.0;
            for (int i = 0; i < v.size(); ++i)
                if (v[i] < w[i]) t = std::min(t, w[i] / (w[i] - v[i]));
            w = w + t * (v - w);
            std::vector<int> keep;
            Eigen::VectorXd wk(w.size());
            int cnt = 0;
            for (int i = 0; i < w.size(); ++i)
                if (w[i] > 1e-12) {
                    keep.push_back(active[i]);
                    wk[cnt++] = w[i];
                }
            if (keep.empty()) {  // numerical corner: restart from the new support point
                keep.push_back(s);
                wk[0] = 1.0;
                cnt = 1;
            }
            active = keep;
            w = wk.head(cnt);
            w /= w.sum();
        }
    }

    HullWitness out;
    out.distance = z.norm();
    out.contains_origin = out.distance < kContainTol;
    out.coeffs = Eigen::VectorXd::Zero(m);
    for (size_t i = 0; i < active.size(); ++i) {
        out.coeffs[active[i]] = w[i];
        out.support.push_back(f[active[i]]);
    }
    return out;
}

PointSet caratheodory_reduce(const PointSet& f_in) {
    PointSet f = deduplicate(f_in);
    HullWitness hw = origin_hull_distance(f);
    if (!hw.contains_origin)
        throw std::invalid_argument("caratheodory_reduce: origin not in convex hull");
    const int dim = static_cast<int>(f[0].size());
    const int target = dim + 1;  // n+2 points in R^{n+1}

    std::vector<int> idx;
    std::vector<double> w;
    for (int i = 0; i < hw.coeffs.size(); ++i)
        if (hw.coeffs[i] > 1e-12) {
            idx.push_back(i);
            w.push_back(hw.coeffs[i]);
        }

    while (static_cast<int>(idx.size()) > target) {
        const int m = static_cast<int>(idx.size());
        // Affine dependence: nonzero c with sum c_i = 0 and sum c_i x_i = 0.
        Eigen::MatrixXd a(dim + 1, m);
        for (int i = 0; i < m; ++i) {
            a.col(i).head(dim) = f[idx[i]];
            a(dim, i) = 1.0;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
        Eigen::VectorXd c = svd.matrixV().col(m - 1);
        if (c.maxCoeff() < -c.minCoeff()) c = -c;  // ensure a positive entry
        double t = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
            if (c[i] > 1e-14) t = std::min(t, w[i] / c[i]);
        std::vector<int> nidx;
        std::vector<double> nw;
        double dropped = std::numeric_limits<double>::infinity();
        int drop = -1;
        for (int i = 0; i < m; ++i) {
            double wi = w[i] - t * c[i];
            if (wi < dropped) {
                dropped = wi;
                drop = i;
            }
            w[i] = wi;
        }
        for (int i = 0; i < m; ++i) {
            if (i == drop || w[i] <= 1e-13) continue;
            nidx.push_back(idx[i]);
            nw.push_back(w[i]);
        }
        double s = std::accumulate(nw.begin(), nw.end(), 0.0);
        for (auto& v : nw) v /= s;
        idx = nidx;
        w = nw;
    }

    PointSet out;
    for (int i : idx) out.push_back(f[i]);
    return out;
}

CapCover smallest_enclosing_cap(const PointSet& f, std::uint64_t seed) {
    if (f.empty()) throw std::invalid_argument("smallest_enclosing_cap: empty set");
    const int dim = static_cast<int>(f[0].size());
    auto radius_at = [&](const Point& c) {
        double r = 0.0;
        for (const auto& x : f) r = std::max(r, (c - x).norm());
        return r;
    };
    auto min_dot = [&](const Point& c) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& x : f) v = std::min(v, c.dot(x));
        return v;
    };
    if (f.size() == 1) return {f[0], 0.0};
    if (set_diameter(f) >= 2.0 - 1e-9)
        throw std::invalid_argument("smallest_enclosing_cap: set has diameter 2");

    std::vector<Point> starts;
    HullWitness hw = origin_hull_distance(f);
    if (hw.distance > 1e-9) {
        // Duality: max_c min_i <c,x_i> over the sphere equals the hull
        // distance, attained at the normalized min-norm point.
        Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
        PointSet fd = deduplicate(f);
        for (int i = 0; i < hw.coeffs.size(); ++i) z += hw.coeffs[i] * fd[i];
        starts.push_back(z / z.norm());
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (const auto& x : f) centroid += x;
    if (centroid.norm() > 1e-9) starts.push_back(centroid / centroid.norm());
    auto rng = make_rng(mix_seed(seed, 0x5ecaULL));
    while (starts.size() < 16) starts.push_back(random_unit_vector(dim, rng));

    Point best_c = starts[0];
    double best_v = min_dot(best_c);
    for (const auto& s0 : starts) {
        Point c = s0;
        double step = 0.25;
        double v = min_dot(c);
        for (int it = 0; it < 400; ++it) {
            // Supergradient of min_i <c,x_i>: the farthest point, tangent part.
            int worst = 0;
            double mv = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < f.size(); ++i) {
                double d = c.dot(f[i]);
                if (d < mv) {
                    mv = d;
                    worst = static_cast<int>(i);
                }
            }
            Point g = f[worst] - c.dot(f[worst]) * c;
            if (g.norm() < 1e-12) break;
            Point cand = sphere_point(c + step * g);
            double vc = min_dot(cand);
            if (vc > v) {
                c = cand;
                v = vc;
                step *= 1.3;
            } else {
                step *= 0.5;
                if (step < 1e-10) break;
            }
        }
        if (v > best_v) {
            best_v = v;
            best_c = c;
        }
    }
    return {best_c, radius_at(best_c)};
}

PgonDiagnostics is_regular_pgon(const PointSet& f, double tol) {
    const int p = static_cast<int>(f.size());
    if (p < 3) throw std::invalid_argument("is_regular_pgon: need at least 3 points");
    const int dim = static_cast<int>(f[0].size());
    PgonDiagnostics d;

    d.min_separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            d.min_separation = std::min(d.min_separation, (f[i] - f[j]).norm());

    // Best 2-plane through the origin: top eigenvectors of the second moment.
    Eigen::MatrixXd mom = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& x : f) mom += x * x.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mom);
    Eigen::VectorXd e1 = es.eigenvectors().col(dim - 1);
    Eigen::VectorXd e2 = dim >= 2 ? es.eigenvectors().col(dim - 2) : Eigen::VectorXd();
    d.planarity_residual = 0.0;
    for (const auto& x : f) {
        Eigen::VectorXd proj = e1.dot(x) * e1 + e2.dot(x) * e2;
        d.planarity_residual = std::max(d.planarity_residual, (x - proj).norm());
    }

    // Angular order in the plane, ties broken by input index (stable sort).
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ang(p);
    for (int i = 0; i < p; ++i) ang[i] = std::atan2(e2.dot(f[i]), e1.dot(f[i]));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (int i = 0; i < p; ++i) {
        double c = (f[order[i]] - f[order[(i + 1) % p]]).norm();
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    d.chord_spread = cmax - cmin;
    d.regular = d.planarity_residual <= tol && d.chord_spread <= tol &&
                d.min_separation > std::max(tol, kGapTol);
    return d;
}

}  // namespace periodica
