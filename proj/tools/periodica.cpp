// Command-line front end: constants, verification checks, conjecture scans,
// orbit export, and report replay. All randomized subcommands require an
// explicit --seed so every emitted report is reproducible.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "periodica/checks.hpp"
#include "periodica/circle.hpp"
#include "periodica/constants.hpp"
#include "periodica/isometry.hpp"
#include "periodica/orbit.hpp"
#include "periodica/rng.hpp"

namespace {

using periodica::json;

void emit(const json& j, const std::string& out_path) {
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << std::endl;
}

std::map<std::string, double> parse_tols(const std::vector<std::string>& kvs) {
    std::map<std::string, double> tols;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--tol", "expected key=value, got '" + kv + "'");
        tols[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return tols;
}

Eigen::VectorXd parse_coords(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    Eigen::VectorXd x(v.size());
    for (size_t i = 0; i < v.size(); ++i) x[i] = v[i];
    return x;
}

// A map spec file is one of:
//  - a rotation spectrum {n, p, fixed_dim, multipliers, seed}: block isometry,
//    conjugated by the seeded Haar-random frame (identity when seed = 0);
//  - a circle homeomorphism {q, p, breakpoints, seed};
//  - a witness-style payload {kind, ...} as stored in reports.
periodica::PeriodicMap load_map(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open map file: " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.contains("kind")) return periodica::map_from_payload(j);
    if (j.contains("multipliers")) {
        auto spec = periodica::RotationSpectrum::from_json(j);
        auto iso = periodica::build_block_isometry(spec);
        std::uint64_t seed = j.value("seed", std::uint64_t{0});
        if (seed != 0) {
            auto rng = periodica::make_rng(periodica::mix_seed(seed, 0x150ULL));
            Eigen::MatrixXd c = periodica::haar_orthogonal(spec.n + 1, rng);
            iso.matrix = c * iso.matrix * c.transpose();
            iso.conjugator = c;
        }
        return as_map(iso);
    }
    if (j.contains("breakpoints") || j.contains("q"))
        return as_map(periodica::CircleHomeo::from_json(j));
    throw std::runtime_error("unrecognized map spec in " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic self-maps of spheres: metric bounds and witnesses"};
    app.require_subcommand(1);

    // constants
    auto* c_cmd = app.add_subcommand("constants", "print the extremal lengths for (p, n)");
    int c_p = 0, c_n = 0;
    c_cmd->add_option("--p", c_p, "period")->required();
    c_cmd->add_option("--n", c_n, "sphere dimension")->required();

    // check
    auto* k_cmd = app.add_subcommand("check", "run one verification sweep");
    periodica::CheckConfig cfg;
    std::uint64_t k_seed = 0;
    std::vector<std::string> k_tols;
    std::string k_out;
    k_cmd->add_option("--id", cfg.check_id,
                      "one of T1.1 T1.2 T1.3 T1.4 L2.2 L2.4 L2.6 L2.7 C3.1 conjecture")
        ->required();
    k_cmd->add_option("--n", cfg.n, "sphere dimension")->required();
    k_cmd->add_option("--p", cfg.p, "period")->required();
    k_cmd->add_option("--samples", cfg.samples, "sample count");
    k_cmd->add_option("--budget", cfg.budget, "optimizer restarts");
    k_cmd->add_option("--seed", k_seed, "base seed")->required();
    k_cmd->add_option("--tol", k_tols, "tolerance override, key=value")->take_all();
    k_cmd->add_option("--out", k_out, "write the report here as well");

    // scan
    auto* s_cmd = app.add_subcommand("scan", "conjecture scan over projective conjugates");
    int s_n = 0, s_p = 0, s_fam = 50, s_budget = 32;
    std::uint64_t s_seed = 0;
    std::string s_out;
    s_cmd->add_option("--n", s_n, "sphere dimension")->required();
    s_cmd->add_option("--p", s_p, "prime period")->required();
    s_cmd->add_option("--families", s_fam, "number of conjugate families");
    s_cmd->add_option("--budget", s_budget, "optimizer restarts per family");
    s_cmd->add_option("--seed", s_seed, "base seed")->required();
    s_cmd->add_option("--out", s_out, "write the report here as well");

    // orbit
    auto* o_cmd = app.add_subcommand("orbit", "export the orbit of a point as CSV");
    std::string o_map, o_x, o_out;
    o_cmd->add_option("--map", o_map, "JSON map spec file")->required();
    o_cmd->add_option("--x", o_x, "comma-separated coordinates of the base point")->required();
    o_cmd->add_option("--out", o_out, "CSV output path")->required();

    // replay
    auto* r_cmd = app.add_subcommand("replay", "re-verify every witness in a report");
    std::string r_report;
    r_cmd->add_option("--report", r_report, "report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 2;
    }

    try {
        if (*c_cmd) {
            auto e = periodica::extremal_lengths(c_p, c_n);
            json j = {{"p", e.p}, {"n", e.n}, {"rho_p", e.rho_p}, {"d_p", e.d_p},
                      {"t_n", e.t_n}, {"delta_n", e.delta_n}};
            emit(j, "");
            return 0;
        }
        if (*k_cmd) {
            cfg.seed = k_seed;
            cfg.tolerances = parse_tols(k_tols);
            auto rep = periodica::run_check(cfg);
            emit(rep.report, k_out);
            return rep.pass ? 0 : 1;
        }
        if (*s_cmd) {
            auto rep = periodica::conjecture_scan(s_n, s_p, s_fam, s_budget, s_seed);
            emit(rep.report, s_out);
            return rep.pass ? 0 : 1;
        }
        if (*o_cmd) {
            auto h = load_map(o_map);
            auto orb = periodica::orbit(h, parse_coords(o_x));
            std::ofstream f(o_out);
            if (!f) throw std::runtime_error("cannot open output file: " + o_out);
            periodica::write_orbit_csv(f, orb);
            std::cerr << "wrote " << orb.points.size() << " rows to " << o_out << "\n";
            return 0;
        }
        if (*r_cmd) {
            std::ifstream f(r_report);
            if (!f) throw std::runtime_error("cannot open report file: " + r_report);
            nlohmann::json rep = nlohmann::json::parse(f);
            return periodica::replay_report(rep, std::cerr) ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
