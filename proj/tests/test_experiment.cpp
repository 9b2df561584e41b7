#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "carlab/experiment.hpp"
#include "carlab/occupancy.hpp"

using namespace carlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

/// Results payload without the header line (the header carries the timestamp).
std::string payload(const std::string& path) {
    const std::string all = slurp(path);
    const size_t nl = all.find('\n');
    REQUIRE(nl != std::string::npos);
    return all.substr(nl + 1);
}

struct TempDir {
    std::string base;
    explicit TempDir(const std::string& tag) {
        base = std::string("/tmp/carlab_test_") + tag + "_" + std::to_string(::getpid());
        std::remove((base + ".jsonl").c_str());
        std::remove((base + ".idx").c_str());
    }
};

} // namespace

TEST_CASE("config parsing, defaults and rejection of unknown keys") {
    std::istringstream good(R"(
# a small campaign
[experiment]
kind = carleson_trend
depths = 2 4
trials = 3
base_seed = 99
out = /tmp/carlab_cfg_demo

[profile]
dim = 1
beta = 0.5
placement = uniform
)");
    const ExperimentConfig cfg = parse_config(good);
    CHECK(cfg.kind == ExperimentKind::CarlesonTrend);
    CHECK(cfg.id == "carleson_trend");
    CHECK(cfg.depths == std::vector<int>{2, 4});
    CHECK(cfg.trials == 3);
    CHECK(cfg.base_seed == 99);
    CHECK(cfg.placement == Placement::UniformInBand);
    CHECK(cfg.profile_c == 1.0);

    std::istringstream typo(R"(
[experiment]
kind = carleson_trend
depths = 2 4
trials = 1
out = /tmp/x
[profile]
bta = 0.5
)");
    CHECK_THROWS_WITH_AS(parse_config(typo), doctest::Contains("unknown key 'bta'"), InvalidInput);

    std::istringstream badsec("[nonsense]\nx = 1\n");
    CHECK_THROWS_WITH_AS(parse_config(badsec), doctest::Contains("unknown section"), InvalidInput);

    std::istringstream decreasing(R"(
[experiment]
kind = carleson_trend
depths = 4 2
trials = 1
out = /tmp/x
)");
    CHECK_THROWS_AS(parse_config(decreasing), InvalidInput);

    std::istringstream nokind("[experiment]\ndepths = 1 2\nout = /tmp/x\n");
    CHECK_THROWS_AS(parse_config(nokind), InvalidInput);
}

TEST_CASE("run_experiment row contract, determinism and resume") {
    TempDir tmp("run");
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::CarlesonTrend;
    cfg.id = "ct_demo";
    cfg.base_seed = 20250810;
    cfg.depths = {2, 3, 4};
    cfg.trials = 5;
    cfg.out = tmp.base;
    cfg.profile_beta = 0.5;
    cfg.norm_tol = 1e-9;

    const RunOutcome first = run_experiment(cfg, 2);
    CHECK(first.computed == 15); // row-count contract
    CHECK(first.resumed == 0);
    const std::string pay1 = payload(first.results_path);

    // deterministic rerun into a fresh file
    TempDir tmp2("run2");
    ExperimentConfig cfg2 = cfg;
    cfg2.out = tmp2.base;
    const RunOutcome second = run_experiment(cfg2, 1); // thread count must not matter
    CHECK(payload(second.results_path) == pay1);

    // crash-resume: drop the last two rows and rerun
    {
        std::istringstream all(slurp(first.results_path));
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(all, line)) lines.push_back(line);
        REQUIRE(lines.size() == 16); // header + 15 rows
        std::ofstream os(first.results_path, std::ios::trunc);
        for (size_t i = 0; i + 2 < lines.size(); ++i) os << lines[i] << "\n";
    }
    const RunOutcome resumed = run_experiment(cfg, 2);
    CHECK(resumed.resumed == 13);
    CHECK(resumed.computed == 2);
    CHECK(payload(resumed.results_path) == pay1);

    // every row's seed reproduces that trial standalone
    const auto rows = read_results(first.results_path);
    for (const TrialResult& r : rows) {
        CHECK(r.seed == trial_seed(cfg, r.depth, r.trial));
        const TrialResult again = run_trial(cfg, r.depth, r.trial, 1);
        CHECK(again.metrics.at("gram_norm") == r.metrics.at("gram_norm"));
    }
}

TEST_CASE("occupancy ratio experiment rows") {
    TempDir tmp("occ");
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::OccupancyRatio;
    cfg.id = "occ_demo";
    cfg.depths = {2, 3};
    cfg.trials = 1;
    cfg.out = tmp.base;
    cfg.occ_r = 2;
    const RunOutcome out = run_experiment(cfg, 1);
    REQUIRE(out.rows.size() == 2);
    CHECK(out.rows[0].metrics.at("N") == 100.0);
    CHECK(out.rows[0].metrics.at("n") == 10.0);
    CHECK(out.rows[1].metrics.at("N") == 1000.0);
    CHECK(out.rows[1].metrics.at("ratio") ==
          doctest::Approx(ratio_check({32, 1000, 2})).epsilon(1e-15));
}

TEST_CASE("summarize: IQR, slopes, flags") {
    std::vector<TrialResult> rows;
    for (int depth : {1, 2, 3}) {
        for (int t = 0; t < 4; ++t) {
            TrialResult r;
            r.experiment = "synthetic";
            r.depth = depth;
            r.trial = t;
            r.metrics["constant"] = 7.0;
            r.metrics["doubling"] = std::exp2(depth); // slope log 2 per depth
            rows.push_back(r);
        }
    }
    const Summary s = summarize(rows);
    CHECK(s.depths == std::vector<int>{1, 2, 3});
    const MetricStats& c = s.metrics.at("constant");
    CHECK(c.median[0] == 7.0);
    CHECK(c.q75[0] - c.q25[0] == 0.0); // zero IQR
    const MetricStats& d = s.metrics.at("doubling");
    REQUIRE(d.slope_defined);
    CHECK(d.slope == doctest::Approx(std::log(2.0)).epsilon(1e-9));

    // single depth: slope undefined, flagged
    std::vector<TrialResult> single(rows.begin(), rows.begin() + 4);
    const Summary s1 = summarize(single);
    CHECK(!s1.metrics.at("doubling").slope_defined);

    CHECK_THROWS_AS(summarize({}), InvalidInput);
}

TEST_CASE("emit/parse round-trip") {
    std::vector<TrialResult> rows;
    for (int depth : {1, 2}) {
        TrialResult r;
        r.experiment = "rt";
        r.depth = depth;
        r.trial = 0;
        r.metrics["m"] = 1.5 * depth;
        rows.push_back(r);
    }
    const Summary s = summarize(rows);
    const Summary back = parse_summary(summary_to_json(s));
    CHECK(summary_to_json(back) == summary_to_json(s));

    TempDir tmp("emit");
    emit_plotdata(s, tmp.base);
    const std::string csv = slurp(tmp.base + ".csv");
    CHECK(csv.rfind("metric,depth,count,q25,median,q75\n", 0) == 0);
    // 1 header + one row per (metric, depth)
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    const Summary from_file = parse_summary(slurp(tmp.base + ".json"));
    CHECK(summary_to_json(from_file) == summary_to_json(s));
    std::remove((tmp.base + ".csv").c_str());
    std::remove((tmp.base + ".json").c_str());
    std::remove((tmp.base + ".schema.json").c_str());
}

TEST_CASE("expected entry experiment matches its own closed form") {
    TempDir tmp("ee");
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::ExpectedEntry;
    cfg.id = "ee_demo";
    cfg.depths = {0, 1, 2};
    cfg.trials = 1;
    cfg.out = tmp.base;
    cfg.dim = 1;
    cfg.entry_draws = 20000;
    const RunOutcome out = run_experiment(cfg, 2);
    for (const TrialResult& r : out.rows) {
        CHECK(std::abs(r.metrics.at("mc_mean") - r.metrics.at("exact")) <=
              3.0 * r.metrics.at("mc_se") + 1e-12);
    }
}

TEST_CASE("per-trial resource failures are recorded, not fatal") {
    TempDir tmp("cap");
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::CarlesonTrend;
    cfg.id = "cap_demo";
    cfg.depths = {2, 14};
    cfg.trials = 1;
    cfg.out = tmp.base;
    cfg.profile_beta = 1.0;
    cfg.point_cap = 100; // depth 14 exceeds this
    const RunOutcome out = run_experiment(cfg, 1);
    REQUIRE(out.rows.size() == 2);
    CHECK(out.rows[0].error.empty());
    CHECK(!out.rows[1].error.empty());
    CHECK(out.rows[1].metrics.empty());
    // summarize skips failed rows
    const Summary s = summarize(out.rows);
    CHECK(s.metrics.at("gram_norm").count[1] == 0);
}
