#include "wormcov/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "wormcov/chain_exact.hpp"
#include "wormcov/errors.hpp"
#include "wormcov/fpras.hpp"
#include "wormcov/gadget.hpp"
#include "wormcov/json_io.hpp"
#include "wormcov/learner.hpp"
#include "wormcov/oracle.hpp"
#include "wormcov/worm.hpp"

namespace wormcov {

namespace {

std::string version_banner() {
    std::string banner = "wormcov 1.0.0";
#if defined(__VERSION__)
    banner += std::string(" (gcc ") + __VERSION__ + ")";
#endif
#if defined(_OPENMP)
    banner += " with OpenMP";
#endif
    return banner;
}

int env_cap(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (!v) return fallback;
    char* end = nullptr;
    const long parsed = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || parsed <= 0)
        throw std::invalid_argument(std::string(name) + ": positive integer required");
    return static_cast<int>(parsed);
}

std::vector<Vertex> parse_vertex_list(const std::string& text) {
    std::vector<Vertex> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(pos, comma - pos);
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse vertex list '" + text + "'");
        }
        pos = comma + 1;
    }
    return out;
}

Json weights_to_json(const SubsetWeighting& w) {
    Json pairs = Json::array();
    for (Vertex u = 0; u < w.vertex_count(); ++u) {
        for (Vertex v = u + 1; v < w.vertex_count(); ++v) {
            Json entry;
            entry["u"] = u;
            entry["v"] = v;
            entry["w"] = w.weight(u, v);
            pairs.push_back(std::move(entry));
        }
    }
    return pairs;
}

SubsetWeighting weights_from_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("weights file " + path + ": cannot open");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::invalid_argument("weights file " + path + ": " + err.what());
    }
    if (!doc.contains("pairs") || !doc.at("pairs").is_array())
        throw std::invalid_argument("weights file " + path + ": missing array field 'pairs'");
    SubsetWeighting w(n);
    for (const Json& entry : doc.at("pairs")) {
        if (!entry.contains("u") || !entry.contains("v") || !entry.contains("w"))
            throw std::invalid_argument("weights file " + path + ": entries need u, v, w");
        w.set(entry.at("u").get<int>(), entry.at("v").get<int>(), entry.at("w").get<double>());
    }
    return w;
}

Json stage_diagnostics_json(const std::vector<StageDiagnostics>& stages) {
    Json out = Json::array();
    for (const StageDiagnostics& st : stages) {
        Json pairs = Json::array();
        for (const PairEstimate& p : st.pairs) {
            Json entry;
            entry["u"] = p.u;
            entry["v"] = p.v;
            entry["r_hat"] = p.r_hat;
            entry["w"] = p.weight;
            pairs.push_back(std::move(entry));
        }
        Json stage;
        stage["stage"] = st.stage;
        stage["lambda_min"] = st.lambda_min;
        stage["chains_per_phase"] = st.chains_per_phase;
        stage["steps_per_chain"] = st.steps_per_chain;
        stage["pairs"] = std::move(pairs);
        out.push_back(std::move(stage));
    }
    return out;
}

struct CommonOptions {
    std::string graph_path;
    uint64_t seed = 0;
    double c_mix = 1.0;
    double sample_scale = 1.0;
    double learn_sample_scale = 0.0;
    int threads = 0;
    int spin_cap = 0;
    int edge_cap = 0;
    bool timing = false;
};

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"weighted-worm covariance estimation for the ferromagnetic Ising model,\n"
                 "exact desk-scale oracles, and the antiferromagnetic sign-oracle reduction"};
    app.name("wormcov");
    app.set_version_flag("--version", version_banner());
    app.require_subcommand(1);

    CommonOptions opt;
    try {
        opt.spin_cap = env_cap("WORMCOV_SPIN_CAP", 20);
        opt.edge_cap = env_cap("WORMCOV_EDGE_CAP", 24);
    } catch (const std::invalid_argument& e) {
        err << "wormcov: " << e.what() << "\n";
        return 2;
    }

    // exact
    auto* cmd_exact = app.add_subcommand("exact", "exact oracle report for a small instance");
    Vertex ex_s = 0, ex_t = 1;
    std::vector<std::string> ex_sets;
    cmd_exact->add_option("--graph", opt.graph_path, "graph JSON file")->required();
    cmd_exact->add_option("--s", ex_s, "first query vertex")->required();
    cmd_exact->add_option("--t", ex_t, "second query vertex")->required();
    cmd_exact->add_option("--even-set", ex_sets,
                          "extra even vertex set \"u,v\" or \"u,v,w,x\" for Z_S (repeatable)");
    cmd_exact->add_option("--spin-cap", opt.spin_cap, "spin enumeration cap");
    cmd_exact->add_option("--edge-cap", opt.edge_cap, "edge-subset enumeration cap");

    // estimate
    auto* cmd_estimate = app.add_subcommand("estimate", "FPRAS covariance estimate");
    Vertex es_s = 0, es_t = 1;
    double es_epsilon = 0.2, es_delta = 0.25;
    cmd_estimate->add_option("--graph", opt.graph_path, "graph JSON file")->required();
    cmd_estimate->add_option("--s", es_s, "first query vertex")->required();
    cmd_estimate->add_option("--t", es_t, "second query vertex")->required();
    cmd_estimate->add_option("--epsilon", es_epsilon, "multiplicative accuracy")->required();
    cmd_estimate->add_option("--delta", es_delta, "failure probability")->required();
    cmd_estimate->add_option("--seed", opt.seed, "master seed")->required();
    cmd_estimate->add_option("--c-mix", opt.c_mix, "mixing budget multiplier");
    cmd_estimate->add_option("--sample-scale", opt.sample_scale, "chain count multiplier");
    cmd_estimate->add_option("--learn-sample-scale", opt.learn_sample_scale,
                             "chain count multiplier for the learning phase (0 = same)");
    cmd_estimate->add_option("--threads", opt.threads, "worker threads (0 = default)");
    cmd_estimate->add_flag("--timing", opt.timing, "include wall-clock in the report");

    // learn-weights
    auto* cmd_learn = app.add_subcommand("learn-weights", "learn the subset weighting");
    double lw_delta = 0.1;
    cmd_learn->add_option("--graph", opt.graph_path, "graph JSON file")->required();
    cmd_learn->add_option("--delta", lw_delta, "failure probability")->required();
    cmd_learn->add_option("--seed", opt.seed, "master seed")->required();
    cmd_learn->add_option("--c-mix", opt.c_mix, "mixing budget multiplier");
    cmd_learn->add_option("--sample-scale", opt.sample_scale, "chain count multiplier");
    cmd_learn->add_option("--threads", opt.threads, "worker threads (0 = default)");

    // sample-worm
    auto* cmd_sample = app.add_subcommand("sample-worm", "chain ensemble diagnostics");
    uint64_t sw_chains = 100, sw_steps = 1000;
    std::string sw_weights_path;
    cmd_sample->add_option("--graph", opt.graph_path, "graph JSON file")->required();
    cmd_sample->add_option("--chains", sw_chains, "number of independent chains")->required();
    cmd_sample->add_option("--steps", sw_steps, "steps per chain")->required();
    cmd_sample->add_option("--seed", opt.seed, "master seed")->required();
    cmd_sample->add_option("--weights", sw_weights_path,
                           "subset weighting JSON (default: all ones)");
    cmd_sample->add_option("--threads", opt.threads, "worker threads (0 = default)");

    // gadget
    auto* cmd_gadget = app.add_subcommand("gadget", "build a parallel-path implementation");
    std::string gd_b = "1/2", gd_target, gd_acc = "1/1000000", gd_out;
    int gd_n = 3;
    cmd_gadget->add_option("--b", gd_b, "edge weight b = p/q in (0,1)")->required();
    cmd_gadget->add_option("--target", gd_target, "target ratio beta' = p/q")->required();
    cmd_gadget->add_option("--n", gd_n, "range parameter (target within [b^n, b^-n])")
        ->required();
    cmd_gadget->add_option("--acc", gd_acc, "accuracy (rational)");
    cmd_gadget->add_option("--out", gd_out, "also write the realized graph to this file");

    // reduce-demo
    auto* cmd_reduce = app.add_subcommand(
        "reduce-demo", "recover Z of the uniform-b model exactly from sign queries");
    std::string rd_b = "1/2";
    bool rd_audit = false;
    cmd_reduce->add_option("--graph", opt.graph_path, "graph JSON file (topology)")->required();
    cmd_reduce->add_option("--b", rd_b, "edge weight b = p/q in (0,1)")->required();
    cmd_reduce->add_flag("--audit", rd_audit, "cross-check every nu_hat against the oracle");
    cmd_reduce->add_option("--spin-cap", opt.spin_cap, "spin enumeration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        app.exit(e, out, err);
        return 2;
    }

    const OracleLimits limits{opt.spin_cap, opt.edge_cap};
    try {
        if (cmd_exact->parsed()) {
            const IsingInstance g = read_graph_file(opt.graph_path);
            Json config;
            config["subcommand"] = "exact";
            config["graph"] = opt.graph_path;
            config["s"] = ex_s;
            config["t"] = ex_t;
            config["even_sets"] = ex_sets;
            config["spin_cap"] = opt.spin_cap;
            config["edge_cap"] = opt.edge_cap;
            Json report;
            report["config"] = std::move(config);
            report["z_ising"] = rational_to_json(ising_partition(g, limits));
            const FourCorner corners = four_corner(g, ex_s, ex_t, limits);
            Json fc;
            fc["z_pp"] = rational_to_json(corners.z_pp);
            fc["z_pm"] = rational_to_json(corners.z_pm);
            fc["z_mp"] = rational_to_json(corners.z_mp);
            fc["z_mm"] = rational_to_json(corners.z_mm);
            report["four_corner"] = std::move(fc);
            report["covariance"] = rational_to_json(ising_covariance_exact(g, ex_s, ex_t, limits));
            if (g.mode() == Mode::ferromagnetic) {
                const EdgeLambda lam = lambda_of_beta(g);
                Json z_even = Json::array();
                std::vector<std::vector<Vertex>> sets{{}};
                sets.push_back({ex_s, ex_t});
                for (const std::string& text : ex_sets) sets.push_back(parse_vertex_list(text));
                for (const auto& set : sets) {
                    Json entry;
                    entry["S"] = set;
                    entry["value"] = rational_to_json(even_partition(g, lam.lambda, set, limits));
                    z_even.push_back(std::move(entry));
                }
                report["z_even"] = std::move(z_even);
            } else if (!ex_sets.empty()) {
                throw std::invalid_argument(
                    "exact: --even-set needs a ferromagnetic instance");
            }
            out << report.dump(2) << "\n";
        } else if (cmd_estimate->parsed()) {
            const IsingInstance g = read_graph_file(opt.graph_path);
            const FprasOptions options{opt.c_mix, opt.sample_scale, opt.learn_sample_scale,
                                       opt.threads};
            const EstimateReport rep =
                estimate_covariance(g, es_s, es_t, es_epsilon, es_delta, opt.seed, options);
            Json config;
            config["subcommand"] = "estimate";
            config["graph"] = opt.graph_path;
            config["s"] = es_s;
            config["t"] = es_t;
            config["epsilon"] = es_epsilon;
            config["delta"] = es_delta;
            config["seed"] = opt.seed;
            config["c_mix"] = opt.c_mix;
            config["sample_scale"] = opt.sample_scale;
            config["learn_sample_scale"] = opt.learn_sample_scale;
            config["threads"] = opt.threads;
            Json report;
            report["config"] = std::move(config);
            report["estimate"] = rep.estimate;
            report["disconnected"] = rep.disconnected;
            report["component_size"] = rep.component_size;
            report["w_pair"] = rep.w_pair;
            report["r_hat"] = rep.r_hat;
            report["q_hat"] = rep.q_hat;
            report["hits_empty"] = rep.hits_empty;
            report["hits_pair"] = rep.hits_pair;
            report["learn_stages"] = rep.learn_stage_count;
            report["total_chains"] = rep.total_chains;
            report["total_steps"] = rep.total_steps;
            if (opt.timing) report["wall_seconds"] = rep.wall_seconds;
            out << report.dump(2) << "\n";
        } else if (cmd_learn->parsed()) {
            const IsingInstance g = read_graph_file(opt.graph_path);
            const EdgeLambda lam = lambda_of_beta(g);
            const LearnOptions options{opt.c_mix, opt.sample_scale, opt.threads, {}};
            const LearnResult learned = learn_weights(g, lam, lw_delta, opt.seed, options);
            Json config;
            config["subcommand"] = "learn-weights";
            config["graph"] = opt.graph_path;
            config["delta"] = lw_delta;
            config["seed"] = opt.seed;
            config["c_mix"] = opt.c_mix;
            config["sample_scale"] = opt.sample_scale;
            config["threads"] = opt.threads;
            Json report;
            report["config"] = std::move(config);
            report["stages"] = stage_diagnostics_json(learned.stages);
            report["pairs"] = weights_to_json(learned.weights);
            report["total_chains"] = learned.total_chains;
            report["total_steps"] = learned.total_steps;
            out << report.dump(2) << "\n";
        } else if (cmd_sample->parsed()) {
            const IsingInstance g = read_graph_file(opt.graph_path);
            const EdgeLambda lam = lambda_of_beta(g);
            SubsetWeighting w = sw_weights_path.empty()
                                    ? SubsetWeighting::all_ones(g.vertex_count())
                                    : weights_from_file(sw_weights_path, g.vertex_count());
            const ChainContext ctx = make_context(g, lam, std::move(w));
            std::vector<OddSet> finals(sw_chains);
            const int64_t count = static_cast<int64_t>(sw_chains);
#pragma omp parallel for schedule(static)
            for (int64_t i = 0; i < count; ++i)
                finals[static_cast<size_t>(i)] = run_chain_from_empty(
                    ctx, sw_steps, chain_seed(opt.seed, 0, static_cast<uint64_t>(i)));
            std::map<std::vector<Vertex>, uint64_t> occupancy;
            Json chains = Json::array();
            for (const OddSet& s : finals) {
                std::vector<Vertex> key;
                if (!s.is_empty()) key = {s.first(), s.second()};
                ++occupancy[key];
                chains.push_back(Json(key));
            }
            Json config;
            config["subcommand"] = "sample-worm";
            config["graph"] = opt.graph_path;
            config["chains"] = sw_chains;
            config["steps"] = sw_steps;
            config["seed"] = opt.seed;
            config["weights"] = sw_weights_path;
            config["threads"] = opt.threads;
            Json occ = Json::array();
            for (const auto& [key, hits] : occupancy) {
                Json entry;
                entry["S"] = key;
                entry["count"] = hits;
                occ.push_back(std::move(entry));
            }
            Json report;
            report["config"] = std::move(config);
            report["occupancy"] = std::move(occ);
            report["finals"] = std::move(chains);
            out << report.dump(2) << "\n";
        } else if (cmd_gadget->parsed()) {
            const Rational b = rational_from_arg(gd_b);
            const Rational target = rational_from_arg(gd_target);
            const Rational acc = rational_from_arg(gd_acc);
            const GadgetSpec spec = build_gadget(gd_n, target, acc, b);
            const IsingInstance realized = realize_gadget(spec);
            Json config;
            config["subcommand"] = "gadget";
            config["b"] = gd_b;
            config["target"] = gd_target;
            config["n"] = gd_n;
            config["acc"] = gd_acc;
            config["out"] = gd_out;
            Json mult = Json::array();
            for (size_t j = 2; j < spec.d.size(); ++j) {
                if (spec.d[j] == 0) continue;
                Json entry;
                entry["length"] = j;
                entry["count"] = spec.d[j];
                mult.push_back(std::move(entry));
            }
            Json report;
            report["config"] = std::move(config);
            report["beta_hat"] = rational_to_json(spec.beta_hat);
            report["error"] = rational_to_json(spec.beta_hat - spec.target);
            report["L"] = spec.big_l;
            report["multiplicities"] = std::move(mult);
            report["total_edges"] = spec.total_edges();
            report["internal_vertices"] = spec.internal_vertices();
            report["graph"] = graph_to_json(realized);
            if (!gd_out.empty()) write_graph_file(gd_out, realized);
            out << report.dump(2) << "\n";
        } else if (cmd_reduce->parsed()) {
            const IsingInstance g = read_graph_file(opt.graph_path);
            const Rational b = rational_from_arg(rd_b);
            const OracleLimits sign_limits{opt.spin_cap, opt.edge_cap};
            const ReductionResult res = recover_partition(
                g, b, make_contracted_sign_oracle(sign_limits), rd_audit, sign_limits);
            Json config;
            config["subcommand"] = "reduce-demo";
            config["graph"] = opt.graph_path;
            config["b"] = rd_b;
            config["audit"] = rd_audit;
            config["spin_cap"] = opt.spin_cap;
            Json edges = Json::array();
            for (const EdgeRecovery& er : res.edges) {
                Json entry;
                entry["u"] = er.e.u;
                entry["v"] = er.e.v;
                entry["nu_hat"] = rational_to_json(er.nu_hat);
                entry["alpha_hat"] = rational_to_json(er.alpha_hat);
                entry["queries"] = er.queries;
                edges.push_back(std::move(entry));
            }
            Json report;
            report["config"] = std::move(config);
            report["m_prime"] = res.m_prime;
            report["delta"] = rational_to_json(res.delta);
            report["delta_prime"] = rational_to_json(res.delta_prime);
            report["edges"] = std::move(edges);
            report["z_estimate"] = rational_to_json(res.z_estimate);
            report["z"] = rational_to_json(res.z);
            report["oracle_queries"] = res.oracle_queries;
            out << report.dump(2) << "\n";
        }
        return 0;
    } catch (const SamplingError& e) {
        err << "wormcov: sampling failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "wormcov: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "wormcov: internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace wormcov
