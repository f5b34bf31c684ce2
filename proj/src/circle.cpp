#include "periodica/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "periodica/rng.hpp"

namespace periodica {

namespace {

constexpr double kPi = std::numbers::pi;

double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

// Piecewise-linear evaluation over breakpoints (a_i, b_i) extended with the
// closing segment to (1, 1).
double pl_eval(const std::vector<std::pair<double, double>>& bp, double x, bool inverse) {
    const int m = static_cast<int>(bp.size());
    auto key = [&](int i) { return inverse ? bp[i].second : bp[i].first; };
    auto val = [&](int i) { return inverse ? bp[i].first : bp[i].second; };
    int lo = 0, hi = m;  // segment index: last breakpoint with key <= x
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (key(mid) <= x)
            lo = mid;
        else
            hi = mid;
    }
    double x0 = key(lo), y0 = val(lo);
    double x1 = (lo + 1 < m) ? key(lo + 1) : 1.0;
    double y1 = (lo + 1 < m) ? val(lo + 1) : 1.0;
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

int gcd_int(int a, int b) { return std::gcd(a, b); }

}  // namespace

double CircleHomeo::g(double u) const { return pl_eval(breakpoints, frac(u), false); }
double CircleHomeo::g_inv(double v) const { return pl_eval(breakpoints, frac(v), true); }

double CircleHomeo::apply(double theta) const {
    double u = g_inv(frac(theta));
    double w = u + double(q) / p;
    if (w >= 1.0) w -= 1.0;
    return g(w);
}

double CircleHomeo::iterate(double theta, int m) const {
    double t = frac(theta);
    for (int i = 0; i < m; ++i) t = apply(t);
    return t;
}

nlohmann::json CircleHomeo::to_json(std::uint64_t seed) const {
    nlohmann::json bps = nlohmann::json::array();
    for (const auto& [u, v] : breakpoints) bps.push_back({u, v});
    return {{"q", q}, {"p", p}, {"breakpoints", bps}, {"seed", seed}};
}

CircleHomeo CircleHomeo::from_json(const nlohmann::json& j) {
    std::vector<std::pair<double, double>> bps;
    if (j.contains("breakpoints") && !j.at("breakpoints").empty()) {
        for (const auto& e : j.at("breakpoints")) bps.emplace_back(e[0].get<double>(), e[1].get<double>());
        return build_pl_conjugacy(j.at("q").get<int>(), j.at("p").get<int>(), std::move(bps));
    }
    return random_pl_conjugacy(j.at("q").get<int>(), j.at("p").get<int>(),
                               j.value("seed", std::uint64_t{0}));
}

CircleHomeo build_pl_conjugacy(int q, int p, std::vector<std::pair<double, double>> breakpoints) {
    if (p < 2) throw std::invalid_argument("build_pl_conjugacy: period must be >= 2");
    q = ((q % p) + p) % p;
    if (q == 0 || gcd_int(q, p) != 1)
        throw std::invalid_argument("build_pl_conjugacy: q and p must be coprime");
    if (breakpoints.empty()) breakpoints = {{0.0, 0.0}};
    if (breakpoints.front() != std::pair<double, double>{0.0, 0.0})
        throw std::invalid_argument("build_pl_conjugacy: conjugator must fix 0");
    const int m = static_cast<int>(breakpoints.size());
    for (int i = 0; i < m; ++i) {
        double u0 = breakpoints[i].first, v0 = breakpoints[i].second;
        double u1 = (i + 1 < m) ? breakpoints[i + 1].first : 1.0;
        double v1 = (i + 1 < m) ? breakpoints[i + 1].second : 1.0;
        if (!(u1 > u0 && v1 > v0))
            throw std::invalid_argument("build_pl_conjugacy: conjugator must be increasing");
        double slope = (v1 - v0) / (u1 - u0);
        if (slope < 1.0 / 64.0 || slope > 64.0)
            throw std::invalid_argument("build_pl_conjugacy: conjugator slope outside [1/64, 64]");
    }
    CircleHomeo h;
    h.q = q;
    h.p = p;
    h.breakpoints = std::move(breakpoints);
    return h;
}

CircleHomeo random_pl_conjugacy(int q, int p, std::uint64_t seed) {
    auto rng = make_rng(mix_seed(seed, 0xc17cULL));
    std::uniform_int_distribution<int> nseg(8, 32);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int m = nseg(rng);
    std::vector<double> du(m), dv(m);
    double su = 0.0, sv = 0.0;
    for (int i = 0; i < m; ++i) {
        du[i] = 0.2 + 1.6 * unif(rng);
        double s = std::exp((2.0 * unif(rng) - 1.0) * std::log(4.0));
        dv[i] = du[i] * s;
        su += du[i];
        sv += dv[i];
    }
    std::vector<std::pair<double, double>> bps;
    double u = 0.0, v = 0.0;
    for (int i = 0; i < m; ++i) {
        bps.emplace_back(u, v);
        u += du[i] / su;
        v += dv[i] / sv;
    }
    return build_pl_conjugacy(q, p, std::move(bps));
}

PeriodicMap as_map(const CircleHomeo& h) {
    PeriodicMap m;
    m.n = 1;
    m.p = h.p;
    m.kind = MapKind::CircleHomeo;
    CircleHomeo copy = h;
    m.eval = [copy](const Eigen::VectorXd& x) { return circle_point(copy.apply(circle_angle(x))); };
    m.provenance = {{"kind", "circle"}, {"homeo", h.to_json()}};
    return m;
}

Eigen::VectorXd circle_point(double theta) {
    Eigen::VectorXd x(2);
    x << std::cos(2.0 * kPi * theta), std::sin(2.0 * kPi * theta);
    return x;
}

double circle_angle(const Eigen::VectorXd& x) {
    return frac(std::atan2(x[1], x[0]) / (2.0 * kPi));
}

namespace {

struct SortedOrbit {
    std::vector<double> thetas;   // sorted, in turns
    std::vector<int> iterates;    // 1-based iterate index at each position
    std::vector<double> gaps;     // radians, gaps[i] between position i and i+1
};

SortedOrbit sort_orbit(const std::vector<double>& orbit_thetas) {
    const int p = static_cast<int>(orbit_thetas.size());
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return orbit_thetas[a] < orbit_thetas[b]; });
    SortedOrbit s;
    for (int i = 0; i < p; ++i) {
        s.thetas.push_back(orbit_thetas[order[i]]);
        s.iterates.push_back(order[i] + 1);
    }
    for (int i = 0; i < p; ++i) {
        double gap = (i + 1 < p) ? s.thetas[i + 1] - s.thetas[i] : 1.0 + s.thetas[0] - s.thetas[p - 1];
        if (gap <= 1e-12) throw std::invalid_argument("arc_gaps: coincident orbit points");
        s.gaps.push_back(2.0 * kPi * gap);
    }
    return s;
}

}  // namespace

std::vector<double> arc_gaps(const Orbit& orb) {
    if (orb.base.size() != 2) throw std::invalid_argument("arc_gaps: orbit must live on S^1");
    std::vector<double> thetas;
    for (const auto& pt : orb.points) thetas.push_back(circle_angle(pt));
    return sort_orbit(thetas).gaps;
}

namespace {

// Orbit of t with t itself in first position (as iterate p), sorted.
SortedOrbit base_sorted_orbit(const CircleHomeo& h, double t) {
    std::vector<double> thetas{frac(t)};
    double cur = frac(t);
    for (int i = 1; i < h.p; ++i) {
        cur = h.apply(cur);
        thetas.push_back(cur);
    }
    return sort_orbit(thetas);
}

// Sum of the k sorted gaps starting at the base point's own position.
double base_window_sum(const CircleHomeo& h, double t, int k) {
    SortedOrbit s = base_sorted_orbit(h, t);
    int j = 0;
    while (s.iterates[j] != 1) ++j;
    double sum = 0.0;
    for (int m = 0; m < k; ++m) sum += s.gaps[(j + m) % h.p];
    return sum;
}

WitnessChord chord_at(const CircleHomeo& h, double t, int k, int start) {
    SortedOrbit s = base_sorted_orbit(h, t);
    const int p = h.p;
    WitnessChord w;
    w.base = frac(t);
    for (int m = 0; m < k; ++m) w.window_sum += s.gaps[(start + m) % p];
    w.iterate_a = s.iterates[start] - 1;
    w.iterate_b = s.iterates[(start + k) % p] - 1;
    w.chord = (circle_point(s.thetas[start]) - circle_point(s.thetas[(start + k) % p])).norm();
    return w;
}

}  // namespace

WitnessChord witness_chord(const CircleHomeo& h, double theta) {
    if (h.p % 2 == 0)
        throw std::invalid_argument("witness_chord: even period, use antipodal_search");
    const int p = h.p;
    const int k = (p - 1) / 2;
    const double dp = 2.0 * std::sin(kPi * k / p);
    double t0 = frac(theta);
    SortedOrbit s = base_sorted_orbit(h, t0);

    // Counting argument: some k-window sums to >= 2*pi*k/p. Its endpoint
    // chord is 2 sin(min(S, 2pi - S)/2), so any window with S in
    // [2*pi*k/p, 2*pi*(k+1)/p] already realizes a chord >= d_p; scan for the
    // best chord and remember the start of the maximal-sum window.
    WitnessChord best;
    best.base = t0;
    int max_start = 0;
    double max_sum = -1.0;
    for (int i = 0; i < p; ++i) {
        double sum = 0.0;
        for (int j = 0; j < k; ++j) sum += s.gaps[(i + j) % p];
        if (sum > max_sum) {
            max_sum = sum;
            max_start = i;
        }
        double chord = (circle_point(s.thetas[i]) - circle_point(s.thetas[(i + k) % p])).norm();
        if (chord > best.chord) {
            best.chord = chord;
            best.window_sum = sum;
            best.iterate_a = s.iterates[i] - 1;
            best.iterate_b = s.iterates[(i + k) % p] - 1;
        }
    }
    if (best.chord >= dp - 1e-12) return best;

    // Every window misses the band, so the maximal one exceeds pi while the
    // window starting k positions later stays below pi. Sliding the base
    // point between those two orbit points, the base-anchored window sum
    // crosses pi by continuity: an antipodal orbit pair, chord 2.
    double a = s.thetas[max_start];
    double b = s.thetas[(max_start + k) % p];
    double arc = frac(b - a);
    double lo = 0.0, hi = 1.0;
    double flo = base_window_sum(h, a, k);
    if (flo <= kPi) return best;  // numerical tie; keep the direct chord
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = base_window_sum(h, frac(a + mid * arc), k);
        if (fm > kPi)
            lo = mid;
        else
            hi = mid;
    }
    double tstar = frac(a + 0.5 * (lo + hi) * arc);
    SortedOrbit ss = base_sorted_orbit(h, tstar);
    int j = 0;
    while (ss.iterates[j] != 1) ++j;
    return chord_at(h, tstar, k, j);
}

double antipodal_search(const CircleHomeo& h) {
    if (h.p % 2 != 0) throw std::invalid_argument("antipodal_search: period must be even");
    const int k = h.p / 2;
    // Displacement of one application, continuous and valued in (0,1) since a
    // conjugated rotation has no fixed points.
    auto disp = [&](double u) {
        double d = h.apply(u) - u;
        if (d <= 0.0) d += 1.0;
        return d;
    };
    // omega(theta): total forward displacement over k steps; h^k(x) = -x
    // exactly when omega is a half-integer offset, i.e. omega - 1/2 integral.
    auto f = [&](double theta) {
        double t = frac(theta);
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            double d = disp(t);
            total += d;
            t = frac(t + d);
        }
        return total - 0.5;
    };

    for (int grid = 1024; grid <= (1 << 16); grid *= 4) {
        std::vector<double> vals(grid + 1);
        for (int i = 0; i <= grid; ++i) vals[i] = f(double(i) / grid);
        for (int i = 0; i <= grid; ++i)
            if (std::abs(vals[i] - std::round(vals[i])) < 1e-13) return frac(double(i) / grid);
        for (int i = 0; i < grid; ++i) {
            double j = std::round(0.5 * (vals[i] + vals[i + 1]));
            double a = vals[i] - j, b = vals[i + 1] - j;
            if (a == 0.0) return double(i) / grid;
            if (a * b < 0.0) {
                double lo = double(i) / grid, hi = double(i + 1) / grid;
                double flo = a;
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double fm = f(mid) - j;
                    if (std::abs(fm) < 1e-14 || hi - lo < 1e-15) return frac(mid);
                    if ((fm < 0) == (flo < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return frac(0.5 * (lo + hi));
            }
        }
    }
    throw std::runtime_error("antipodal_search: no sign change found");
}

}  // namespace periodica
