#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "periodica/checks.hpp"

using namespace periodica;

namespace {

json strip_runtime(json r) {
    r.erase("runtime_ms");
    return r;
}

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

}  // namespace

TEST_CASE("reports are bit-identical for the same seed") {
    for (auto id : {"T1.1", "L2.4", "T1.4"}) {
        int n = std::string(id) == "T1.4" ? 1 : 2;
        auto a = run_check(cfg_of(id, n, 3, 6, 8, 31415));
        auto b = run_check(cfg_of(id, n, 3, 6, 8, 31415));
        CHECK(strip_runtime(a.report).dump() == strip_runtime(b.report).dump());
    }
}

TEST_CASE("a different seed changes the sampled statistics") {
    auto a = run_check(cfg_of("L2.4", 2, 3, 6, 8, 1));
    auto b = run_check(cfg_of("L2.4", 2, 3, 6, 8, 2));
    CHECK(strip_runtime(a.report).dump() != strip_runtime(b.report).dump());
}

TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(run_check(cfg_of("T1.4", 2, 5, 5, 8, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_check(cfg_of("T1.3", 2, 5, 5, 8, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_check(cfg_of("T1.1", 2, 4, 5, 8, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_check(cfg_of("nope", 2, 3, 5, 8, 1)), std::invalid_argument);
    CHECK_THROWS_AS(conjecture_scan(2, 4, 5, 8, 1), std::invalid_argument);
}

TEST_CASE("small sweeps pass across all check ids") {
    struct Row {
        const char* id;
        int n, p;
    };
    for (auto [id, n, p] : {Row{"T1.1", 2, 3}, Row{"T1.2", 2, 3}, Row{"T1.3", 2, 3},
                            Row{"T1.4", 1, 5}, Row{"T1.4", 1, 4}, Row{"L2.2", 1, 3},
                            Row{"L2.4", 3, 5}, Row{"L2.6", 2, 5}, Row{"L2.7", 3, 2},
                            Row{"C3.1", 2, 3}}) {
        auto rep = run_check(cfg_of(id, n, p, 5, 16, 99));
        INFO(id << " n=" << n << " p=" << p);
        CHECK(rep.pass);
        CHECK(rep.report.at("schema").get<int>() == 1);
        CHECK(rep.report.at("pass").get<bool>() == rep.pass);
    }
}

TEST_CASE("witnesses re-verify and tampering is caught") {
    auto rep = run_check(cfg_of("L2.4", 2, 5, 6, 16, 7));
    REQUIRE(!rep.report.at("witnesses").empty());
    for (const auto& w : rep.report.at("witnesses")) {
        std::string why;
        CHECK(verify_witness(w, &why));
    }
    json tampered = rep.report.at("witnesses").at(0);
    tampered["metrics"]["hull_distance"] = 0.5;
    std::string why;
    CHECK_FALSE(verify_witness(tampered, &why));
    CHECK(!why.empty());
}

TEST_CASE("replay of a full report flags a corrupted witness") {
    auto rep = run_check(cfg_of("T1.1", 2, 5, 8, 8, 13));
    std::ostringstream log;
    CHECK(replay_report(rep.report, log));

    json bad = rep.report;
    REQUIRE(!bad.at("witnesses").empty());
    bad["witnesses"][0]["metrics"]["shift"] = 0.0;
    std::ostringstream log2;
    CHECK_FALSE(replay_report(bad, log2));
    CHECK(log2.str().find("MISMATCH") != std::string::npos);
}

TEST_CASE("conjecture scan reports margins and the simplex statistic") {
    auto rep = conjecture_scan(3, 5, 3, 8, 2718);
    CHECK(rep.report.at("asserted").get<bool>() == false);
    CHECK(rep.pass);  // never asserted for open parameters
    for (const auto& s : rep.report.at("per_sample_stats")) {
        CHECK(s.contains("margin_vs_dp"));
        CHECK(s.contains("simplex_fraction"));
    }

    auto floor1 = conjecture_scan(1, 5, 3, 8, 5);
    CHECK(floor1.report.at("asserted").get<bool>());
    CHECK(floor1.pass);
    CHECK(floor1.min_margin >= -1e-6);
}

TEST_CASE("tolerance overrides flow into the report") {
    auto cfg = cfg_of("T1.2", 2, 3, 4, 8, 3);
    cfg.tolerances["optimizer"] = 1e-4;
    auto rep = run_check(cfg);
    CHECK(rep.report.at("tolerances").at("optimizer").get<double>() == 1e-4);
}
