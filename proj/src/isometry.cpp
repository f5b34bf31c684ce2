#include "periodica/isometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "periodica/rng.hpp"

namespace periodica {

namespace {
constexpr double kPi = std::numbers::pi;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void RotationSpectrum::validate() const {
    if (n < 1) throw std::invalid_argument("RotationSpectrum: n must be >= 1");
    if (p < 2) throw std::invalid_argument("RotationSpectrum: p must be >= 2");
    if (fixed_dim < 0) throw std::invalid_argument("RotationSpectrum: fixed_dim must be >= 0");
    if (multipliers.empty())
        throw std::invalid_argument("RotationSpectrum: at least one rotation block required");
    if (fixed_dim + 2 * static_cast<int>(multipliers.size()) != n + 1)
        throw std::invalid_argument("RotationSpectrum: fixed_dim + 2*blocks must equal n+1");
    for (int k : multipliers)
        if (k % p == 0 || k < 1 || k > p - 1)
            throw std::invalid_argument("RotationSpectrum: multipliers must lie in 1..p-1");
}

nlohmann::json RotationSpectrum::to_json() const {
    return {{"n", n}, {"p", p}, {"fixed_dim", fixed_dim}, {"multipliers", multipliers}};
}

RotationSpectrum RotationSpectrum::from_json(const nlohmann::json& j) {
    RotationSpectrum s;
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<int>();
    s.fixed_dim = j.at("fixed_dim").get<int>();
    s.multipliers = j.at("multipliers").get<std::vector<int>>();
    s.validate();
    return s;
}

PeriodicIsometry build_block_isometry(const RotationSpectrum& spec) {
    spec.validate();
    const int dim = spec.n + 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
    int off = spec.fixed_dim;
    for (int k : spec.multipliers) {
        double a = 2.0 * kPi * k / spec.p;
        m(off, off) = std::cos(a);
        m(off, off + 1) = -std::sin(a);
        m(off + 1, off) = std::sin(a);
        m(off + 1, off + 1) = std::cos(a);
        off += 2;
    }
    return {m, spec, std::nullopt};
}

SimplexRotation canonical_simplex_rotation(int p) {
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("canonical_simplex_rotation: p must be an odd prime");
    RotationSpectrum spec;
    spec.n = p - 2;
    spec.p = p;
    spec.fixed_dim = 0;
    for (int i = 1; i <= (p - 1) / 2; ++i) spec.multipliers.push_back(i);
    PeriodicIsometry iso = build_block_isometry(spec);
    Eigen::VectorXd base = Eigen::VectorXd::Zero(p - 1);
    for (int i = 0; i < p - 1; i += 2) base[i] = 1.0;
    base /= base.norm();
    return {iso, base};
}

PeriodicIsometry random_periodic_isometry(int n, int p, std::uint64_t seed) {
    if (n < 1 || p < 2) throw std::invalid_argument("random_periodic_isometry: need n>=1, p>=2");
    const int dim = n + 1;
    auto rng = make_rng(mix_seed(seed, 0x150ULL));
    const int max_blocks = dim / 2;
    std::uniform_int_distribution<int> pick_blocks(1, max_blocks);
    std::uniform_int_distribution<int> pick_k(1, p - 1);
    RotationSpectrum spec;
    spec.n = n;
    spec.p = p;
    int blocks = pick_blocks(rng);
    spec.fixed_dim = dim - 2 * blocks;
    for (int b = 0; b < blocks; ++b) spec.multipliers.push_back(pick_k(rng));
    PeriodicIsometry iso = build_block_isometry(spec);
    Eigen::MatrixXd c = haar_orthogonal(dim, rng);
    iso.matrix = c * iso.matrix * c.transpose();
    iso.conjugator = c;
    return iso;
}

double shift_exact(const PeriodicIsometry& q) {
    double s = 0.0;
    for (int k : q.spectrum.multipliers) {
        int folded = std::min(k % q.spectrum.p, q.spectrum.p - k % q.spectrum.p);
        s = std::max(s, 2.0 * std::sin(kPi * folded / q.spectrum.p));
    }
    return s;
}

std::optional<int> minimal_period(const Eigen::MatrixXd& m, int p_max) {
    const int dim = static_cast<int>(m.rows());
    if ((m.transpose() * m - Eigen::MatrixXd::Identity(dim, dim)).norm() > 1e-10)
        throw std::invalid_argument("minimal_period: matrix is not orthogonal");
    Eigen::MatrixXd pw = m;
    for (int k = 1; k <= p_max; ++k) {
        if ((pw - Eigen::MatrixXd::Identity(dim, dim)).norm() <= k * 1e-10) return k;
        pw = pw * m;
        if (k % 32 == 0) {
            // Project back onto the orthogonal group to stop drift.
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(pw, Eigen::ComputeFullU | Eigen::ComputeFullV);
            pw = svd.matrixU() * svd.matrixV().transpose();
        }
    }
    return std::nullopt;
}

}  // namespace periodica
