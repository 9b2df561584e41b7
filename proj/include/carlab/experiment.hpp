#pragma once

#include <map>
#include <optional>
#include <string>

#include "carlab/carleson_disc.hpp"
#include "carlab/gramian.hpp"
#include "carlab/occupancy.hpp"
#include "carlab/separation.hpp"

namespace carlab {

enum class ExperimentKind {
    CarlesonTrend,   ///< ||G|| of Szego Gramians vs truncation depth
    SeparationLaw,   ///< rectangle collisions and clusters vs depth
    OccupancyRatio,  ///< exact P(mu_r=1)/(N p_r) over N = 10^depth
    ChernoffTail,    ///< empirical tail of ||T^L|| vs the matrix Chernoff bound
    ExpectedEntry,   ///< Monte Carlo vs closed-form squared-entry expectations
    BallTrend,       ///< ||G|| of ball Gramians vs truncation depth
    DirichletTrend,  ///< ||G|| of Dirichlet-kernel Gramians vs truncation depth
    BlochLaw,        ///< classifier verdict plus one-box constants over a gamma grid
};

const char* experiment_kind_name(ExperimentKind k) noexcept;
ExperimentKind experiment_kind_from_name(const std::string& name);

/// Parsed from a sectioned key-value config file; unknown sections or keys
/// are errors. The meaning of `depths` is per kind: profile truncation degree
/// for the trend/separation/bloch kinds, log10(N) for occupancy_ratio, the
/// monomial cutoff L for chernoff_tail, and the radius-pair index for
/// expected_entry.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::CarlesonTrend;
    std::string id;
    std::uint64_t base_seed = 1;
    std::vector<int> depths;
    int trials = 1;
    std::string out;

    // [profile]
    int dim = 1;
    double profile_c = 1.0;
    double profile_beta = 0.5;
    Placement placement = Placement::Midpoint;

    // [kernel]
    double kernel_a = 0.0;

    // [norm]
    double norm_tol = 1e-6;
    int norm_max_iter = 2000;
    long dense_cap = 11000;
    long point_cap = kDefaultPointCap;

    // [separation]
    int sep_m = 1;
    int cluster_scale = 2;
    int collision_min_degree = 13;

    // [occupancy]
    int occ_r = 2;
    std::string occ_n_rule = "sqrt";

    // [chernoff]
    long chernoff_points = 200;
    double chernoff_radius = 0.5;
    std::vector<double> chernoff_deltas = {1.0, 2.0, 4.0};

    // [expected_entry]
    long entry_draws = 100000;
    double entry_radius_max = 0.95;

    // [bloch]
    std::vector<double> bloch_gammas = {0.70, 0.75, 0.80, 0.85, 0.90, 0.95};

    void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

/// One (depth, trial) cell; reproducible from the config and indices alone.
struct TrialResult {
    std::string experiment;
    int depth = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> metrics;
    std::string error; ///< per-trial failure (resource caps), empty if ok
};

/// The derived per-trial seed: derive_seed(base, hash_str(id), depth, trial).
std::uint64_t trial_seed(const ExperimentConfig& cfg, int depth, int trial);

/// Compute one cell (exposed for reproducing single trials).
TrialResult run_trial(const ExperimentConfig& cfg, int depth, int trial, int threads);

struct RunOutcome {
    std::vector<TrialResult> rows;
    long computed = 0;
    long resumed = 0;
    std::string results_path;
};

/// Run the campaign: rows are written incrementally to <out>.jsonl in
/// (depth, trial) order, with an index sidecar at <out>.idx. Cells already
/// present in the results file are not recomputed.
RunOutcome run_experiment(const ExperimentConfig& cfg, int threads = 1);

std::vector<TrialResult> read_results(const std::string& path);

struct MetricStats {
    std::vector<double> q25, median, q75;
    std::vector<long> count;
    double slope = 0.0;     ///< least-squares slope of log(median) vs depth
    bool slope_defined = false;
};

struct Summary {
    std::string experiment;
    std::vector<int> depths;
    std::map<std::string, MetricStats> metrics;
};

Summary summarize(const std::vector<TrialResult>& rows);

/// CSV plus JSON mirrors plus a sidecar schema file: <base>.csv, <base>.json,
/// <base>.schema.json.
void emit_plotdata(const Summary& summary, const std::string& base_path);

/// JSON mirror used by emit_plotdata; parse_summary(emit) round-trips.
std::string summary_to_json(const Summary& summary);
Summary parse_summary(const std::string& json_text);

} // namespace carlab
