#include "carlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "carlab/parallel.hpp"
#include "carlab/rng.hpp"

namespace carlab {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

const char* experiment_kind_name(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::CarlesonTrend: return "carleson_trend";
        case ExperimentKind::SeparationLaw: return "separation_law";
        case ExperimentKind::OccupancyRatio: return "occupancy_ratio";
        case ExperimentKind::ChernoffTail: return "chernoff_tail";
        case ExperimentKind::ExpectedEntry: return "expected_entry";
        case ExperimentKind::BallTrend: return "ball_trend";
        case ExperimentKind::DirichletTrend: return "dirichlet_trend";
        case ExperimentKind::BlochLaw: return "bloch_law";
    }
    return "?";
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::CarlesonTrend, ExperimentKind::SeparationLaw,
          ExperimentKind::OccupancyRatio, ExperimentKind::ChernoffTail,
          ExperimentKind::ExpectedEntry, ExperimentKind::BallTrend,
          ExperimentKind::DirichletTrend, ExperimentKind::BlochLaw}) {
        if (name == experiment_kind_name(k)) return k;
    }
    throw InvalidInput("unknown experiment kind '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (depths.empty()) throw InvalidInput("config: depths must be nonempty");
    for (size_t i = 1; i < depths.size(); ++i)
        if (depths[i] <= depths[i - 1])
            throw InvalidInput("config: depths must be strictly increasing");
    if (trials < 1) throw InvalidInput("config: trials must be >= 1");
    if (out.empty()) throw InvalidInput("config: out path is required");
    if (dim < 1) throw InvalidInput("config: dim must be >= 1");
    if (!(profile_c > 0.0)) throw InvalidInput("config: profile c must be positive");
    if (occ_n_rule != "sqrt") throw InvalidInput("config: unknown occupancy n rule '" + occ_n_rule + "'");
}

namespace {

struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;
};

RawConfig read_raw_config(std::istream& is) {
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto ltrim = line.find_first_not_of(" \t\r");
        if (ltrim == std::string::npos) continue;
        auto rtrim = line.find_last_not_of(" \t\r");
        line = line.substr(ltrim, rtrim - ltrim + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidInput("config line " + std::to_string(lineno) + ": unterminated section");
            section = line.substr(1, line.size() - 2);
            raw.sections[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(val);
        if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
        auto& sec = raw.sections[section];
        if (sec.count(key))
            throw InvalidInput("config: duplicate key '" + key + "' in section [" + section + "]");
        sec[key] = val;
    }
    return raw;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::istringstream is(s);
    std::vector<int> out;
    int v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) throw InvalidInput("config: bad integer list '" + s + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) throw InvalidInput("config: bad number list '" + s + "'");
    return out;
}

double parse_double(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw InvalidInput("config: bad number '" + s + "'");
    return v;
}

long parse_long(const std::string& s) {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw InvalidInput("config: bad integer '" + s + "'");
    return v;
}

} // namespace

ExperimentConfig parse_config(std::istream& is) {
    const RawConfig raw = read_raw_config(is);
    ExperimentConfig cfg;

    // reject unknown sections and keys before extracting anything: silent
    // typos must not half-configure a study
    static const std::map<std::string, std::set<std::string>> registry = {
        {"experiment", {"kind", "id", "base_seed", "depths", "trials", "out"}},
        {"profile", {"dim", "c", "beta", "placement"}},
        {"kernel", {"a"}},
        {"norm", {"tol", "max_iter", "dense_cap", "point_cap"}},
        {"separation", {"m", "cluster_scale", "collision_min_degree"}},
        {"occupancy", {"r", "n_rule"}},
        {"chernoff", {"points", "radius", "deltas"}},
        {"expected_entry", {"draws", "radius_max"}},
        {"bloch", {"gammas"}},
    };
    for (const auto& [sec, keys] : raw.sections) {
        auto ri = registry.find(sec);
        if (ri == registry.end())
            throw InvalidInput("config: unknown section [" + sec + "]");
        for (const auto& [key, val] : keys)
            if (!ri->second.count(key))
                throw InvalidInput("config: unknown key '" + key + "' in section [" + sec + "]");
    }

    auto get = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
        auto si = raw.sections.find(sec);
        if (si == raw.sections.end()) return std::nullopt;
        auto ki = si->second.find(key);
        if (ki == si->second.end()) return std::nullopt;
        return ki->second;
    };

    if (auto v = get("experiment", "kind")) cfg.kind = experiment_kind_from_name(*v);
    else throw InvalidInput("config: [experiment] kind is required");
    cfg.id = experiment_kind_name(cfg.kind);
    if (auto v = get("experiment", "id")) cfg.id = *v;
    if (auto v = get("experiment", "base_seed")) cfg.base_seed = static_cast<std::uint64_t>(std::stoull(*v));
    if (auto v = get("experiment", "depths")) cfg.depths = parse_int_list(*v);
    if (auto v = get("experiment", "trials")) cfg.trials = static_cast<int>(parse_long(*v));
    if (auto v = get("experiment", "out")) cfg.out = *v;

    if (auto v = get("profile", "dim")) cfg.dim = static_cast<int>(parse_long(*v));
    if (auto v = get("profile", "c")) cfg.profile_c = parse_double(*v);
    if (auto v = get("profile", "beta")) cfg.profile_beta = parse_double(*v);
    if (auto v = get("profile", "placement")) {
        if (*v == "midpoint") cfg.placement = Placement::Midpoint;
        else if (*v == "uniform") cfg.placement = Placement::UniformInBand;
        else throw InvalidInput("config: unknown placement '" + *v + "'");
    }

    if (auto v = get("kernel", "a")) cfg.kernel_a = parse_double(*v);

    if (auto v = get("norm", "tol")) cfg.norm_tol = parse_double(*v);
    if (auto v = get("norm", "max_iter")) cfg.norm_max_iter = static_cast<int>(parse_long(*v));
    if (auto v = get("norm", "dense_cap")) cfg.dense_cap = parse_long(*v);
    if (auto v = get("norm", "point_cap")) cfg.point_cap = parse_long(*v);

    if (auto v = get("separation", "m")) cfg.sep_m = static_cast<int>(parse_long(*v));
    if (auto v = get("separation", "cluster_scale")) cfg.cluster_scale = static_cast<int>(parse_long(*v));
    if (auto v = get("separation", "collision_min_degree"))
        cfg.collision_min_degree = static_cast<int>(parse_long(*v));

    if (auto v = get("occupancy", "r")) cfg.occ_r = static_cast<int>(parse_long(*v));
    if (auto v = get("occupancy", "n_rule")) cfg.occ_n_rule = *v;

    if (auto v = get("chernoff", "points")) cfg.chernoff_points = parse_long(*v);
    if (auto v = get("chernoff", "radius")) cfg.chernoff_radius = parse_double(*v);
    if (auto v = get("chernoff", "deltas")) cfg.chernoff_deltas = parse_double_list(*v);

    if (auto v = get("expected_entry", "draws")) cfg.entry_draws = parse_long(*v);
    if (auto v = get("expected_entry", "radius_max")) cfg.entry_radius_max = parse_double(*v);

    if (auto v = get("bloch", "gammas")) cfg.bloch_gammas = parse_double_list(*v);

    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open config file '" + path + "'");
    return parse_config(is);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, int depth, int trial) {
    return derive_seed(cfg.base_seed, hash_str(cfg.id), static_cast<std::uint64_t>(depth),
                       static_cast<std::uint64_t>(trial));
}

namespace {

void run_gram_trend(const ExperimentConfig& cfg, int depth, std::uint64_t seed, int threads,
                    TrialResult& out) {
    const bool ball = cfg.kind == ExperimentKind::BallTrend;
    const Domain domain = ball ? Domain::Ball : Domain::Polydisc;
    const CountingProfile profile =
        CountingProfile::exponential(domain, cfg.dim, cfg.profile_c, cfg.profile_beta, depth);
    const RandomSequence seq =
        ball ? sample_ball(profile, cfg.dim, cfg.placement, seed, cfg.point_cap)
             : sample_polydisc(profile, cfg.placement, seed, cfg.point_cap);
    KernelSpec spec = ball ? KernelSpec::besov_sobolev(cfg.dim, cfg.kernel_a)
                           : (cfg.kind == ExperimentKind::DirichletTrend
                                  ? KernelSpec::dirichlet(cfg.dim, cfg.kernel_a)
                                  : KernelSpec::szego(cfg.dim));
    GramNormOptions opts;
    opts.tol = cfg.norm_tol;
    opts.max_iter = cfg.norm_max_iter;
    opts.dense_cap = cfg.dense_cap;
    opts.point_cap = cfg.point_cap;
    opts.threads = threads;
    const NormResult res = gram_operator_norm(spec, seq, opts);
    out.metrics["points"] = static_cast<double>(seq.size());
    out.metrics["gram_norm"] = res.value;
    out.metrics["norm_converged"] = res.converged ? 1.0 : 0.0;
    out.metrics["norm_iterations"] = res.iterations;
}

void run_separation_law(const ExperimentConfig& cfg, int depth, std::uint64_t seed,
                        TrialResult& out) {
    const CountingProfile profile = CountingProfile::exponential(
        Domain::Polydisc, cfg.dim, cfg.profile_c, cfg.profile_beta, depth);
    const RandomSequence seq = sample_polydisc(profile, cfg.placement, seed, cfg.point_cap);
    const auto events = rectangle_collisions(seq, cfg.sep_m);
    long deep = 0;
    for (const auto& ev : events)
        if (ev.region.degree >= cfg.collision_min_degree) ++deep;
    out.metrics["points"] = static_cast<double>(seq.size());
    out.metrics["collisions"] = static_cast<double>(events.size());
    out.metrics["collisions_deep"] = static_cast<double>(deep);
    out.metrics["clusters"] =
        static_cast<double>(cluster_count(seq, cfg.sep_m, cfg.cluster_scale));
}

void run_occupancy_ratio(const ExperimentConfig& cfg, int depth, TrialResult& out) {
    long N = 1;
    for (int i = 0; i < depth; ++i) N *= 10;
    const long n = std::llround(std::sqrt(static_cast<double>(N)));
    const OccupancyProblem prob{n, N, cfg.occ_r};
    out.metrics["N"] = static_cast<double>(N);
    out.metrics["n"] = static_cast<double>(n);
    out.metrics["p_r"] = prob.p_r();
    out.metrics["exact_p1"] = exact_prob(prob, 1);
    out.metrics["ratio"] = ratio_check(prob);
    // support cap of the conditioned-Poisson pmf, recorded for audit
    out.metrics["pmf_support_cap"] =
        static_cast<double>(truncated_poisson_pmf(prob.alpha(), prob.r).size() - 1);
}

void run_chernoff_tail(const ExperimentConfig& cfg, int depth, std::uint64_t seed,
                       TrialResult& out) {
    const int L = depth;
    Rng rng(derive_seed(seed, hash_str("chernoff-angles")));
    RandomSequence seq;
    seq.domain = Domain::Polydisc;
    seq.dim = 1;
    seq.seed = seed;
    for (long i = 0; i < cfg.chernoff_points; ++i) {
        const Complex z = std::polar(cfg.chernoff_radius, kTwoPi * rng.uniform01());
        seq.points.push_back(Point::disc(z));
        seq.region_of.push_back(region_of_point(seq.points.back()));
    }
    const TruncatedFrame frame = truncated_frame(seq, 0, 1 << 20, L);
    const NormResult norm = operator_norm(frame.matrix, 1e-10, 10000);
    const std::vector<double> diag = expected_frame_diagonal(seq.radii(), L);
    const double mu = *std::max_element(diag.begin(), diag.end());
    out.metrics["norm_tl"] = norm.value;
    out.metrics["mu"] = mu;
    const double ldim = static_cast<double>(frame.matrix.rows());
    for (double delta : cfg.chernoff_deltas) {
        out.metrics["exceed_" + fmt_g(delta)] = norm.value >= (1.0 + delta) * mu ? 1.0 : 0.0;
        out.metrics["bound_" + fmt_g(delta)] = chernoff_bound({delta, mu, ldim});
    }
}

void run_expected_entry(const ExperimentConfig& cfg, int depth, std::uint64_t seed,
                        TrialResult& out) {
    // depth indexes the radius pair; the pair itself depends only on
    // (base_seed, id, depth) so every trial sees the same pair
    Rng pair_rng(derive_seed(cfg.base_seed, hash_str(cfg.id), hash_str("pair"),
                             static_cast<std::uint64_t>(depth)));
    std::vector<double> rn(static_cast<size_t>(cfg.dim)), rj(static_cast<size_t>(cfg.dim));
    for (int i = 0; i < cfg.dim; ++i) {
        rn[static_cast<size_t>(i)] = pair_rng.uniform(0.0, cfg.entry_radius_max);
        rj[static_cast<size_t>(i)] = pair_rng.uniform(0.0, cfg.entry_radius_max);
    }
    Rng draw_rng(derive_seed(seed, hash_str("entry-draws")));
    double sum = 0.0, sum2 = 0.0;
    for (long t = 0; t < cfg.entry_draws; ++t) {
        double v = 1.0;
        for (int i = 0; i < cfg.dim; ++i) {
            const double r = rn[static_cast<size_t>(i)], s = rj[static_cast<size_t>(i)];
            const double phi = kTwoPi * (draw_rng.uniform01() - draw_rng.uniform01());
            const double dr = 1.0 - r * s * std::cos(phi);
            const double di = -r * s * std::sin(phi);
            v *= (1.0 - r * r) * (1.0 - s * s) / (dr * dr + di * di);
        }
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(cfg.entry_draws);
    const double var = std::max(0.0, sum2 / static_cast<double>(cfg.entry_draws) - mean * mean);
    const SzegoEntryMoment closed = expected_sq_entry_szego(rn, rj);
    out.metrics["mc_mean"] = mean;
    out.metrics["mc_se"] = std::sqrt(var / static_cast<double>(cfg.entry_draws));
    out.metrics["exact"] = closed.value;
    out.metrics["comparable_form"] = closed.comparable_form;
    out.metrics["draws"] = static_cast<double>(cfg.entry_draws);
}

void run_bloch_law(const ExperimentConfig& cfg, int depth, std::uint64_t seed,
                   TrialResult& out) {
    const CountingProfile profile = CountingProfile::exponential(
        Domain::Polydisc, 1, cfg.profile_c, cfg.profile_beta, depth);
    const BlochReport rep = bloch_profile_classifier(profile);
    out.metrics["verdict_almost_surely"] =
        rep.verdict == BlochVerdict::AlmostSurely ? 1.0 : 0.0;
    const RandomSequence seq = sample_polydisc(profile, cfg.placement, seed, cfg.point_cap);
    out.metrics["points"] = static_cast<double>(seq.size());
    for (double g : cfg.bloch_gammas) {
        const OneBoxReport ob = onebox_constant(seq, g);
        out.metrics["onebox_g" + std::to_string(static_cast<int>(std::llround(g * 100)))] =
            ob.constant;
    }
}

} // namespace

TrialResult run_trial(const ExperimentConfig& cfg, int depth, int trial, int threads) {
    TrialResult res;
    res.experiment = cfg.id;
    res.depth = depth;
    res.trial = trial;
    res.seed = trial_seed(cfg, depth, trial);
    try {
        switch (cfg.kind) {
            case ExperimentKind::CarlesonTrend:
            case ExperimentKind::BallTrend:
            case ExperimentKind::DirichletTrend:
                run_gram_trend(cfg, depth, res.seed, threads, res);
                break;
            case ExperimentKind::SeparationLaw:
                run_separation_law(cfg, depth, res.seed, res);
                break;
            case ExperimentKind::OccupancyRatio:
                run_occupancy_ratio(cfg, depth, res);
                break;
            case ExperimentKind::ChernoffTail:
                run_chernoff_tail(cfg, depth, res.seed, res);
                break;
            case ExperimentKind::ExpectedEntry:
                run_expected_entry(cfg, depth, res.seed, res);
                break;
            case ExperimentKind::BlochLaw:
                run_bloch_law(cfg, depth, res.seed, res);
                break;
        }
    } catch (const ResourceLimit& e) {
        res.error = e.what(); // caps surface per trial, never abort the campaign
    }
    return res;
}

namespace {

json row_to_json(const TrialResult& r) {
    json row;
    row["experiment"] = r.experiment;
    row["depth"] = r.depth;
    row["trial"] = r.trial;
    row["seed"] = r.seed;
    row["metrics"] = r.metrics;
    if (!r.error.empty()) row["error"] = r.error;
    return row;
}

TrialResult row_from_json(const json& row) {
    TrialResult r;
    r.experiment = row.at("experiment").get<std::string>();
    r.depth = row.at("depth").get<int>();
    r.trial = row.at("trial").get<int>();
    r.seed = row.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : row.at("metrics").items()) r.metrics[k] = v.get<double>();
    if (row.contains("error")) r.error = row["error"].get<std::string>();
    return r;
}

bool heavy_kind(ExperimentKind k) {
    return k == ExperimentKind::CarlesonTrend || k == ExperimentKind::BallTrend ||
           k == ExperimentKind::DirichletTrend;
}

} // namespace

std::vector<TrialResult> read_results(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("read_results: cannot open '" + path + "'");
    std::vector<TrialResult> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        if (j.contains("schema")) continue; // header line
        rows.push_back(row_from_json(j));
    }
    return rows;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    if (threads < 1) threads = 1;
    RunOutcome outcome;
    outcome.results_path = cfg.out + ".jsonl";
    const std::string idx_path = cfg.out + ".idx";
    const auto parent = std::filesystem::path(cfg.out).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);

    std::vector<TrialResult> existing;
    bool file_existed = false;
    {
        std::ifstream probe(outcome.results_path);
        if (probe.good()) {
            file_existed = true;
            probe.close();
            existing = read_results(outcome.results_path);
        }
    }
    std::map<std::pair<int, int>, bool> done;
    for (const TrialResult& r : existing) done[{r.depth, r.trial}] = true;
    outcome.resumed = static_cast<long>(existing.size());
    outcome.rows = existing;

    struct Cell {
        int depth;
        int trial;
    };
    std::vector<Cell> missing;
    for (int depth : cfg.depths)
        for (int t = 0; t < cfg.trials; ++t)
            if (!done.count({depth, t})) missing.push_back({depth, t});

    std::ofstream os(outcome.results_path, std::ios::app);
    if (!os) throw InvalidInput("run_experiment: cannot open '" + outcome.results_path + "'");
    std::ofstream idx(idx_path, std::ios::app);
    if (!file_existed) {
        json header;
        header["schema"] = "carlab-results-1";
        header["experiment"] = cfg.id;
        header["kind"] = experiment_kind_name(cfg.kind);
        header["created"] = iso_now(); // excluded from byte comparisons
        os << header.dump() << "\n";
        os.flush();
    }

    // heavy kinds: one cell at a time, threads inside the norm computation;
    // light kinds: cells in parallel, flushed in canonical order per chunk
    const bool heavy = heavy_kind(cfg.kind);
    const size_t chunk = heavy ? 1 : static_cast<size_t>(std::max(4 * threads, 8));
    for (size_t base = 0; base < missing.size(); base += chunk) {
        const size_t hi = std::min(missing.size(), base + chunk);
        std::vector<TrialResult> results(hi - base);
        if (heavy) {
            results[0] = run_trial(cfg, missing[base].depth, missing[base].trial, threads);
        } else {
            parallel_blocks(static_cast<int>(hi - base), threads, [&](int i) {
                const Cell& c = missing[base + static_cast<size_t>(i)];
                results[static_cast<size_t>(i)] = run_trial(cfg, c.depth, c.trial, 1);
            });
        }
        for (TrialResult& r : results) {
            os << row_to_json(r).dump() << "\n";
            idx << r.depth << " " << r.trial << "\n";
            outcome.rows.push_back(std::move(r));
            ++outcome.computed;
        }
        os.flush();
        idx.flush();
    }
    return outcome;
}

Summary summarize(const std::vector<TrialResult>& rows) {
    if (rows.empty()) throw InvalidInput("summarize: no results");
    Summary s;
    s.experiment = rows.front().experiment;
    std::map<int, bool> depth_set;
    for (const TrialResult& r : rows) depth_set[r.depth] = true;
    for (const auto& [d, b] : depth_set) s.depths.push_back(d);

    std::map<std::string, std::map<int, std::vector<double>>> values;
    for (const TrialResult& r : rows) {
        if (!r.error.empty()) continue;
        for (const auto& [k, v] : r.metrics) values[k][r.depth].push_back(v);
    }
    auto quantile = [](std::vector<double>& v, double q) {
        // linear interpolation between order statistics
        const double pos = q * static_cast<double>(v.size() - 1);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return v[lo] * (1.0 - frac) + v[hi] * frac;
    };
    for (auto& [metric, per_depth] : values) {
        MetricStats st;
        for (int d : s.depths) {
            auto it = per_depth.find(d);
            if (it == per_depth.end() || it->second.empty()) {
                st.q25.push_back(std::numeric_limits<double>::quiet_NaN());
                st.median.push_back(std::numeric_limits<double>::quiet_NaN());
                st.q75.push_back(std::numeric_limits<double>::quiet_NaN());
                st.count.push_back(0);
                continue;
            }
            std::vector<double>& v = it->second;
            std::sort(v.begin(), v.end());
            st.q25.push_back(quantile(v, 0.25));
            st.median.push_back(quantile(v, 0.5));
            st.q75.push_back(quantile(v, 0.75));
            st.count.push_back(static_cast<long>(v.size()));
        }
        // least-squares slope of log(median) against depth
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        long np = 0;
        for (size_t i = 0; i < s.depths.size(); ++i) {
            if (st.count[i] == 0 || !(st.median[i] > 0.0)) continue;
            const double x = s.depths[i];
            const double y = std::log(st.median[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++np;
        }
        if (np >= 2) {
            const double denom = np * sxx - sx * sx;
            if (denom != 0.0) {
                st.slope = (np * sxy - sx * sy) / denom;
                st.slope_defined = true;
            }
        }
        s.metrics[metric] = std::move(st);
    }
    return s;
}

std::string summary_to_json(const Summary& summary) {
    json j;
    j["experiment"] = summary.experiment;
    j["depths"] = summary.depths;
    json metrics = json::object();
    for (const auto& [name, st] : summary.metrics) {
        json m;
        m["q25"] = st.q25;
        m["median"] = st.median;
        m["q75"] = st.q75;
        m["count"] = st.count;
        if (st.slope_defined)
            m["log_median_slope"] = st.slope;
        else
            m["log_median_slope"] = nullptr;
        metrics[name] = m;
    }
    j["metrics"] = metrics;
    return j.dump(2);
}

Summary parse_summary(const std::string& json_text) {
    const json j = json::parse(json_text);
    Summary s;
    s.experiment = j.at("experiment").get<std::string>();
    s.depths = j.at("depths").get<std::vector<int>>();
    for (const auto& [name, m] : j.at("metrics").items()) {
        MetricStats st;
        st.q25 = m.at("q25").get<std::vector<double>>();
        st.median = m.at("median").get<std::vector<double>>();
        st.q75 = m.at("q75").get<std::vector<double>>();
        st.count = m.at("count").get<std::vector<long>>();
        if (!m.at("log_median_slope").is_null()) {
            st.slope = m.at("log_median_slope").get<double>();
            st.slope_defined = true;
        }
        s.metrics[name] = std::move(st);
    }
    return s;
}

void emit_plotdata(const Summary& summary, const std::string& base_path) {
    const auto parent = std::filesystem::path(base_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    {
        std::ofstream os(base_path + ".csv");
        if (!os) throw InvalidInput("emit_plotdata: cannot open '" + base_path + ".csv'");
        os << "metric,depth,count,q25,median,q75\n";
        char buf[48];
        for (const auto& [name, st] : summary.metrics) {
            for (size_t i = 0; i < summary.depths.size(); ++i) {
                os << name << "," << summary.depths[i] << "," << st.count[i];
                for (double v : {st.q25[i], st.median[i], st.q75[i]}) {
                    std::snprintf(buf, sizeof buf, "%.17g", v);
                    os << "," << buf;
                }
                os << "\n";
            }
        }
    }
    {
        std::ofstream os(base_path + ".json");
        os << summary_to_json(summary) << "\n";
    }
    {
        json schema;
        schema["csv"] = base_path + ".csv";
        schema["columns"] = {
            {{"name", "metric"}, {"type", "string"}, {"doc", "metric key from the trial rows"}},
            {{"name", "depth"}, {"type", "int"}, {"doc", "campaign depth parameter"}},
            {{"name", "count"}, {"type", "int"}, {"doc", "trials contributing at this depth"}},
            {{"name", "q25"}, {"type", "float"}, {"doc", "lower quartile (linear interpolation)"}},
            {{"name", "median"}, {"type", "float"}, {"doc", "median"}},
            {{"name", "q75"}, {"type", "float"}, {"doc", "upper quartile"}},
        };
        schema["json_mirror"] = base_path + ".json";
        std::ofstream os(base_path + ".schema.json");
        os << schema.dump(2) << "\n";
    }
}

} // namespace carlab
