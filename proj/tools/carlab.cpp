// Command-line front end: sequence generation, Gram norms, separation and
// one-box reports, occupancy statistics, and config-driven experiment
// campaigns. Exit codes: 0 ok, 2 invalid input or config, 3 resource cap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "carlab/carleson_disc.hpp"
#include "carlab/experiment.hpp"
#include "carlab/gramian.hpp"
#include "carlab/occupancy.hpp"
#include "carlab/separation.hpp"

using namespace carlab;
using nlohmann::json;

namespace {

struct GenOpts {
    std::string domain = "polydisc";
    int dim = 1;
    double c = 1.0;
    double beta = 0.5;
    int depth = 8;
    std::string placement = "midpoint";
};

Placement placement_of(const std::string& s) {
    if (s == "midpoint") return Placement::Midpoint;
    if (s == "uniform") return Placement::UniformInBand;
    throw InvalidInput("unknown placement '" + s + "'");
}

RandomSequence generate(const GenOpts& g, std::uint64_t seed, long point_cap) {
    if (g.domain == "polydisc") {
        const auto profile =
            CountingProfile::exponential(Domain::Polydisc, g.dim, g.c, g.beta, g.depth);
        return sample_polydisc(profile, placement_of(g.placement), seed, point_cap);
    }
    if (g.domain == "ball") {
        const auto profile =
            CountingProfile::exponential(Domain::Ball, g.dim, g.c, g.beta, g.depth);
        return sample_ball(profile, g.dim, placement_of(g.placement), seed, point_cap);
    }
    throw InvalidInput("unknown domain '" + g.domain + "'");
}

void add_gen_options(CLI::App* cmd, GenOpts& g) {
    cmd->add_option("--domain", g.domain, "polydisc or ball")->capture_default_str();
    cmd->add_option("--dim", g.dim, "ambient dimension d")->capture_default_str();
    cmd->add_option("--c", g.c, "profile constant C")->capture_default_str();
    cmd->add_option("--beta", g.beta, "profile exponent: N_m = ceil(C 2^(beta |m|))")
        ->capture_default_str();
    cmd->add_option("--depth", g.depth, "profile truncation degree")->capture_default_str();
    cmd->add_option("--placement", g.placement, "midpoint or uniform")->capture_default_str();
}

RandomSequence sequence_from(const std::string& in, const GenOpts& g, std::uint64_t seed,
                             long point_cap) {
    if (!in.empty()) return load_sequence(in);
    return generate(g, seed, point_cap);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random Carleson sequence laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
    app.add_option("--seed", seed, "base seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
    app.add_option("--out", out, "output path");

    long point_cap = kDefaultPointCap;
    app.add_option("--point-cap", point_cap, "max points per sequence")->capture_default_str();

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "sample a sequence and write it as text");
    GenOpts gen;
    add_gen_options(gen_cmd, gen);

    // gram-norm
    auto* gram_cmd = app.add_subcommand("gram-norm", "operator norm of the Gram matrix");
    GenOpts gramgen;
    std::string gram_in, gram_family = "szego", gram_dump;
    double gram_a = 0.0, gram_tol = 1e-8;
    int gram_max_iter = 10000;
    add_gen_options(gram_cmd, gramgen);
    gram_cmd->add_option("--in", gram_in, "read a sequence file instead of sampling");
    gram_cmd->add_option("--family", gram_family, "szego, dirichlet or ball")->capture_default_str();
    gram_cmd->add_option("--a", gram_a, "kernel parameter a")->capture_default_str();
    gram_cmd->add_option("--tol", gram_tol, "power iteration tolerance")->capture_default_str();
    gram_cmd->add_option("--max-iter", gram_max_iter, "power iteration cap")->capture_default_str();
    gram_cmd->add_option("--dump-gram", gram_dump, "write the Gram matrix container here");

    // separation
    auto* sep_cmd = app.add_subcommand("separation", "separation constants, partitions, collisions");
    GenOpts sepgen;
    std::string sep_in;
    double sep_delta = 0.5;
    int sep_m = 1, sep_l = 2;
    add_gen_options(sep_cmd, sepgen);
    sep_cmd->add_option("--in", sep_in, "read a sequence file instead of sampling");
    sep_cmd->add_option("--delta", sep_delta, "partition threshold")->capture_default_str();
    sep_cmd->add_option("--m", sep_m, "separated-sequence count M")->capture_default_str();
    sep_cmd->add_option("--l", sep_l, "cluster scale l (radius 2^-l)")->capture_default_str();

    // occupancy
    auto* occ_cmd = app.add_subcommand("occupancy", "balls-in-boxes statistics");
    long occ_n = 2, occ_N = 2;
    int occ_r = 2;
    long occ_k = -1, occ_sim = 0;
    occ_cmd->add_option("--n", occ_n, "points")->required();
    occ_cmd->add_option("--N", occ_N, "boxes")->required();
    occ_cmd->add_option("--r", occ_r, "occupancy r")->capture_default_str();
    occ_cmd->add_option("--k", occ_k, "evaluate P(mu_r = k); -1 = full summary");
    occ_cmd->add_option("--simulate", occ_sim, "Monte Carlo trials to add");

    // onebox
    auto* ob_cmd = app.add_subcommand("onebox", "one-box Carleson constant in the disc");
    GenOpts obgen;
    std::string ob_in;
    double ob_gamma = 1.0;
    add_gen_options(ob_cmd, obgen);
    ob_cmd->add_option("--in", ob_in, "read a sequence file instead of sampling");
    ob_cmd->add_option("--gamma", ob_gamma, "exponent gamma in (0,1]")->capture_default_str();

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "config-driven campaigns");
    exp_cmd->require_subcommand(1);
    auto* run_cmd = exp_cmd->add_subcommand("run", "run (or resume) a campaign");
    std::string run_config;
    run_cmd->add_option("config", run_config, "config file")->required();
    auto* sum_cmd = exp_cmd->add_subcommand("summarize", "summarize a results file");
    std::string sum_results;
    sum_cmd->add_option("results", sum_results, "results .jsonl file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // bad usage is an invalid-config error
    }

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;

    try {
        if (gen_cmd->parsed()) {
            const RandomSequence seq = generate(gen, seed, point_cap);
            if (out.empty()) {
                write_sequence(std::cout, seq);
            } else {
                save_sequence(out, seq);
                std::cout << "wrote " << seq.size() << " points to " << out << "\n";
            }
        } else if (gram_cmd->parsed()) {
            const RandomSequence seq = sequence_from(gram_in, gramgen, seed, point_cap);
            KernelSpec spec = gram_family == "szego" ? KernelSpec::szego(seq.dim)
                              : gram_family == "dirichlet" ? KernelSpec::dirichlet(seq.dim, gram_a)
                              : gram_family == "ball"
                                  ? KernelSpec::besov_sobolev(seq.dim, gram_a)
                                  : throw InvalidInput("unknown family '" + gram_family + "'");
            GramNormOptions opts;
            opts.tol = gram_tol;
            opts.max_iter = gram_max_iter;
            opts.threads = threads;
            opts.point_cap = point_cap;
            const NormResult res = gram_operator_norm(spec, seq, opts);
            json j{{"points", seq.size()},
                   {"family", spec.family_name()},
                   {"a", spec.a()},
                   {"norm", res.value},
                   {"converged", res.converged},
                   {"iterations", res.iterations}};
            std::cout << j.dump(2) << "\n";
            if (!gram_dump.empty()) {
                const GramMatrix g = build_gram(spec, seq, point_cap);
                std::ofstream os(gram_dump, std::ios::binary);
                if (!os) throw InvalidInput("cannot open '" + gram_dump + "'");
                write_gram(os, g);
            }
        } else if (sep_cmd->parsed()) {
            const RandomSequence seq = sequence_from(sep_in, sepgen, seed, point_cap);
            const auto events = rectangle_collisions(seq, sep_m);
            const auto partition = greedy_partition(seq, sep_delta, Metric::Rho);
            json j{{"points", seq.size()},
                   {"separation_rho", separation_constant(seq, Metric::Rho)},
                   {"partition_parts", partition.parts_used},
                   {"collisions", events.size()},
                   {"clusters", cluster_count(seq, sep_m, sep_l)},
                   {"uniform_separation_min", uniform_separation_min(seq)}};
            std::cout << j.dump(2) << "\n";
            if (!out.empty()) {
                std::ofstream os(out);
                if (!os) throw InvalidInput("cannot open '" + out + "'");
                write_collisions_jsonl(os, events);
                write_partition_jsonl(os, partition);
            }
        } else if (occ_cmd->parsed()) {
            const OccupancyProblem prob{occ_n, occ_N, occ_r};
            json j{{"n", occ_n}, {"N", occ_N}, {"r", occ_r}, {"alpha", prob.alpha()},
                   {"p_r", prob.p_r()}};
            if (occ_k >= 0) {
                j["k"] = occ_k;
                j["exact_prob"] = exact_prob(prob, occ_k);
            } else {
                j["exact_p1"] = exact_prob(prob, 1);
                j["ratio"] = ratio_check(prob);
            }
            if (occ_sim > 0) {
                const OccupancyHistogram h = simulate_occupancy(prob, occ_sim, seed);
                j["simulated_pmf"] = h.pmf;
                j["trials"] = h.trials;
            }
            std::cout << j.dump(2) << "\n";
        } else if (ob_cmd->parsed()) {
            const RandomSequence seq = sequence_from(ob_in, obgen, seed, point_cap);
            const OneBoxReport rep = onebox_constant(seq, ob_gamma);
            json j{{"points", seq.size()},
                   {"gamma", ob_gamma},
                   {"constant", rep.constant},
                   {"level", rep.level},
                   {"shifted", rep.shifted},
                   {"grid_comparability", rep.grid_comparability}};
            std::cout << j.dump(2) << "\n";
            if (!out.empty()) {
                std::ofstream os(out);
                if (!os) throw InvalidInput("cannot open '" + out + "'");
                write_onebox_csv(os, onebox_level_table(seq, ob_gamma));
            }
        } else if (run_cmd->parsed()) {
            ExperimentConfig cfg = parse_config_file(run_config);
            const RunOutcome res = run_experiment(cfg, threads);
            std::cout << "experiment " << cfg.id << ": " << res.computed << " cells computed, "
                      << res.resumed << " resumed, results in " << res.results_path << "\n";
        } else if (sum_cmd->parsed()) {
            const auto rows = read_results(sum_results);
            const Summary s = summarize(rows);
            const std::string base = out.empty() ? sum_results + ".summary" : out;
            emit_plotdata(s, base);
            std::cout << summary_to_json(s) << "\n";
        }
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
