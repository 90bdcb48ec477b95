#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adjustmcmc/experiments.hpp"
#include "adjustmcmc/io.hpp"

using namespace adjustmcmc;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-")
        std::cout << text;
    else
        write_text_file(g.out, text);
}

NodeId resolve_node(const Dataset& data, const std::string& key) {
    for (int c = 0; c < data.cols(); ++c)
        if (data.names.size() == static_cast<std::size_t>(data.cols()) && data.names[c] == key) return c;
    int idx = -1;
    auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
    if (ec == std::errc{} && p == key.data() + key.size() && idx >= 0 && idx < data.cols()) return idx;
    throw std::invalid_argument("unknown column: " + key);
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size()) throw std::invalid_argument("bad number: " + tok);
        out.push_back(v);
    }
    return out;
}

std::vector<double> range(double lo, double hi, double step) {
    std::vector<double> out;
    for (int i = 0;; ++i) {
        double v = lo + i * step;
        if (v > hi + 1e-9) break;
        out.push_back(v);
    }
    return out;
}

// Resolves --skeleton true|estimate|file:PATH
Skeleton load_skeleton(const std::string& spec, const Dataset& data, const std::string& sem_path,
                       const SkeletonConfig& cfg) {
    if (spec == "true") {
        if (sem_path.empty()) throw std::invalid_argument("--skeleton true needs --sem");
        Sem sem = sem_from_json(read_json_file(sem_path));
        if (sem.n() != data.cols()) throw std::invalid_argument("SEM size differs from data width");
        return skeleton_of(sem.dag);
    }
    if (spec == "estimate") return estimate_skeleton(data, cfg);
    if (spec.rfind("file:", 0) == 0) {
        Skeleton s = skeleton_from_json(read_json_file(spec.substr(5)));
        if (s.n() != data.cols()) throw std::invalid_argument("skeleton size differs from data width");
        return s;
    }
    throw std::invalid_argument("--skeleton must be true, estimate or file:PATH");
}

std::string set_names(const NodeSet& s, const std::vector<std::string>& names) {
    std::string out;
    for (NodeId v : s) out += (out.empty() ? "" : ";") + names.at(v);
    return out;
}

struct SamplerArgs {
    int iterations = 100;
    int depth = 1;
    std::string thresholds = "1,0.8,0.5,0.3,0";
    std::string tally_mode = "paper";
    int burnin = 0;
    int init_restarts = 10;
    double accept_scale = 1.0;
    double alpha = 0.01;
    int max_cond = 3;

    void add(CLI::App* app) {
        app->add_option("-M,--iterations", iterations, "MH iterations");
        app->add_option("--depth", depth, "near-optimal search depth");
        app->add_option("--thresholds", thresholds, "comma-separated thresholds in [0,1]");
        app->add_option("--tally-mode", tally_mode, "paper or on-accept");
        app->add_option("--burnin", burnin, "untallied leading iterations");
        app->add_option("--init-restarts", init_restarts, "greedy climbs for the initial DAG");
        app->add_option("--accept-scale", accept_scale, "multiplier on the acceptance ratio");
        app->add_option("--alpha", alpha, "Fisher-z level for skeleton estimation");
        app->add_option("--max-cond", max_cond, "largest conditioning set for skeleton estimation");
    }
    SamplerConfig config(std::uint64_t seed) const {
        SamplerConfig c;
        c.iterations = iterations;
        c.depth = depth;
        c.thresholds = parse_doubles(thresholds);
        c.tally_mode = parse_tally_mode(tally_mode);
        c.burnin = burnin;
        c.init_restarts = init_restarts;
        c.accept_scale = accept_scale;
        c.seed = seed;
        c.validate();
        return c;
    }
    SkeletonConfig skeleton() const {
        SkeletonConfig s{alpha, max_cond};
        s.validate();
        return s;
    }
};

struct ExperimentArgs {
    std::string n_list = "10";
    int dags = 100;
    int rows = 100;
    int iterations = 100;
    int depth = 1;
    std::string thresholds = "1,0.8,0.5,0.3,0";
    std::string sources = "true,estimate";
    double degree = 3.0;
    std::string tally_mode = "paper";
    double accept_scale = 1.0;
    int init_restarts = 10;
    int budget = 10000;
    double alpha = 0.01;
    int max_cond = 3;

    void add(CLI::App* app) {
        app->add_option("--n", n_list, "comma-separated graph sizes");
        app->add_option("--dags", dags, "ground-truth DAGs per size");
        app->add_option("--rows", rows, "sample size N");
        app->add_option("-M,--iterations", iterations, "MH iterations");
        app->add_option("--depth", depth, "near-optimal search depth");
        app->add_option("--thresholds", thresholds, "comma-separated thresholds");
        app->add_option("--skeleton", sources, "comma-separated skeleton sources (true, estimate)");
        app->add_option("--degree", degree, "expected node degree");
        app->add_option("--tally-mode", tally_mode, "paper or on-accept");
        app->add_option("--accept-scale", accept_scale, "multiplier on the acceptance ratio");
        app->add_option("--budget", budget, "ground-truth draws allowed per replicate");
        app->add_option("--init-restarts", init_restarts, "greedy climbs for the initial DAG");
        app->add_option("--alpha", alpha, "Fisher-z level for skeleton estimation");
        app->add_option("--max-cond", max_cond, "largest conditioning set for skeleton estimation");
    }
    ExperimentSpec spec(const Globals& g, Amenability filter) const {
        ExperimentSpec s;
        s.n_nodes.clear();
        for (double v : parse_doubles(n_list)) s.n_nodes.push_back(static_cast<int>(v));
        s.n_dags = dags;
        s.rows = rows;
        s.iterations = iterations;
        s.depth = depth;
        s.thresholds = parse_doubles(thresholds);
        s.skeleton_sources.clear();
        std::stringstream ss(sources);
        std::string tok;
        while (std::getline(ss, tok, ',')) s.skeleton_sources.push_back(parse_skeleton_source(tok));
        s.expected_degree = degree;
        s.tally_mode = parse_tally_mode(tally_mode);
        s.accept_scale = accept_scale;
        s.rejection_budget = budget;
        s.init_restarts = init_restarts;
        s.skeleton_cfg = SkeletonConfig{alpha, max_cond};
        s.amenability = filter;
        s.seed = g.seed;
        s.jobs = g.jobs;
        s.validate();
        return s;
    }
};

void fail(const std::string& kind, const std::string& message, int code) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
    std::exit(code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covariate adjustment set search by MCMC over topological orderings"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output path (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "draw a random linear SEM and sample data from it");
    int sim_n = 10, sim_rows = 100;
    double sim_degree = 3.0;
    std::string sim_sem, sim_amen = "any";
    sim->add_option("--n", sim_n, "number of nodes");
    sim->add_option("--rows", sim_rows, "sample size N");
    sim->add_option("--degree", sim_degree, "expected node degree");
    sim->add_option("--amenability", sim_amen, "any, amenable or non-amenable");
    sim->add_option("--sem-out", sim_sem, "write the SEM (with x and y) as JSON here");

    // run
    auto* run_cmd = app.add_subcommand("run", "sample adjustment sets on a dataset");
    std::string data_path, x_key, y_key, skel_spec = "estimate", sem_path;
    int subsample = 0, repeats = 20;
    SamplerArgs sargs;
    run_cmd->add_option("--data", data_path, "CSV with a header row")->required();
    run_cmd->add_option("--x", x_key, "treatment column name or index")->required();
    run_cmd->add_option("--y", y_key, "outcome column name or index")->required();
    run_cmd->add_option("--skeleton", skel_spec, "true, estimate or file:PATH");
    run_cmd->add_option("--sem", sem_path, "SEM JSON used by --skeleton true");
    run_cmd->add_option("--subsample", subsample, "rows per subsampled run (0 = no subsampling)");
    run_cmd->add_option("--repeats", repeats, "subsampled runs");
    sargs.add(run_cmd);

    // real
    auto* real = app.add_subcommand("real", "subsample-and-vote on a real dataset, CSV of vote counts");
    int real_subsample = 100, real_repeats = 20;
    SamplerArgs rargs;
    std::string real_data, real_x, real_y, real_skel = "estimate", real_sem;
    real->add_option("--data", real_data, "CSV with a header row")->required();
    real->add_option("--x", real_x, "treatment column")->required();
    real->add_option("--y", real_y, "outcome column")->required();
    real->add_option("--skeleton", real_skel, "true, estimate or file:PATH");
    real->add_option("--sem", real_sem, "SEM JSON used by --skeleton true");
    real->add_option("--subsample", real_subsample, "rows per run");
    real->add_option("--repeats", real_repeats, "number of runs");
    rargs.add(real);

    // experiments
    auto* exp1 = app.add_subcommand("exp1", "precision and MSE against baselines");
    ExperimentArgs e1;
    bool e1_timing = false;
    e1.add(exp1);
    exp1->add_flag("--timing", e1_timing, "append mean sampler runtime per DAG");

    auto* exp2 = app.add_subcommand("exp2", "as exp1 with an amenability filter on the ground truth");
    ExperimentArgs e2;
    std::string e2_amen = "amenable";
    bool e2_timing = false;
    e2.add(exp2);
    exp2->add_option("--amenability", e2_amen, "amenable or non-amenable");
    exp2->add_flag("--timing", e2_timing, "append mean sampler runtime per DAG");

    auto* exp3 = app.add_subcommand("exp3", "precision against sample size and against sampling time");
    ExperimentArgs e3;
    e3.dags = 20;
    e3.sources = "true";
    std::string e3_logn = "3:10:0.5", e3_m = "1:29:2";
    int e3_sweep_m = 40, e3_sweep_rows = 100;
    e3.add(exp3);
    exp3->add_option("--log-n", e3_logn, "lo:hi:step for log N");
    exp3->add_option("--sweep-iterations", e3_sweep_m, "M used in the sample-size sweep");
    exp3->add_option("--m-values", e3_m, "lo:hi:step for M");
    exp3->add_option("--sweep-rows", e3_sweep_rows, "N used in the sampling-time sweep");

    auto* mot = app.add_subcommand("motivation", "SHD against valid-set overlap for random DAGs");
    std::string mot_n = "6,7,8,9";
    int mot_repeats = 100, mot_per = 300;
    double mot_degree = 3.0;
    mot->add_option("--n", mot_n, "comma-separated graph sizes");
    mot->add_option("--repeats", mot_repeats, "baseline DAGs per size");
    mot->add_option("--per-baseline", mot_per, "random DAGs compared with each baseline");
    mot->add_option("--degree", mot_degree, "expected node degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("usage", e.what(), 2);
    }

    auto parse_range = [](const std::string& s) {
        auto parts = s;
        for (char& c : parts)
            if (c == ':') c = ',';
        auto v = parse_doubles(parts);
        if (v.size() != 3 || v[2] <= 0) throw std::invalid_argument("range must be lo:hi:step");
        return range(v[0], v[1], v[2]);
    };

    try {
        if (sim->parsed()) {
            Replicate rep = draw_replicate(sim_n, sim_degree, parse_amenability(sim_amen), derive_seed(g.seed, 1), 10000);
            Rng rng(derive_seed(g.seed, 2));
            Dataset data = simulate(rep.sem, sim_rows, rng);
            data.names = default_names(sim_n);
            std::ostringstream os;
            write_csv(os, data);
            emit(g, os.str());
            if (!sim_sem.empty()) {
                auto j = sem_to_json(rep.sem, data.names);
                j["x"] = data.names[rep.x];
                j["y"] = data.names[rep.y];
                j["amenable"] = rep.amenable;
                j["total_effect"] = total_effect(rep.sem, rep.x, rep.y);
                j["seed"] = g.seed;
                write_text_file(sim_sem, j.dump(2) + "\n");
            }
        } else if (run_cmd->parsed()) {
            Dataset data = read_csv_file(data_path);
            NodeId x = resolve_node(data, x_key), y = resolve_node(data, y_key);
            Skeleton skel = load_skeleton(skel_spec, data, sem_path, sargs.skeleton());
            SamplerConfig cfg = sargs.config(g.seed);
            nlohmann::json j;
            if (subsample > 0) {
                VoteResult v = subsample_vote(data, x, y, skel, cfg, subsample, repeats, g.jobs);
                j["repeats"] = v.repeats;
                j["votes"] = nlohmann::json::array();
                for (const auto& [set, count] : v.votes)
                    j["votes"].push_back({{"set", node_set_to_json(set)}, {"count", count}});
            } else {
                RunResult res = run(data, x, y, skel, cfg);
                j = run_result_to_json(res.tally, res.lists);
                j["initial"] = dag_to_json(res.initial);
                j["accepted"] = res.accepted;
            }
            j["names"] = data.names;
            j["x"] = x;
            j["y"] = y;
            j["seed"] = g.seed;
            emit(g, j.dump(2) + "\n");
        } else if (real->parsed()) {
            Dataset data = read_csv_file(real_data);
            NodeId x = resolve_node(data, real_x), y = resolve_node(data, real_y);
            Skeleton skel = load_skeleton(real_skel, data, real_sem, rargs.skeleton());
            VoteResult v = subsample_vote(data, x, y, skel, rargs.config(g.seed), real_subsample, real_repeats, g.jobs);
            std::ostringstream os;
            os << "set,votes,repeats,seed\n";
            for (const auto& [set, count] : v.votes)
                os << '"' << set_names(set, data.names) << "\"," << count << ',' << v.repeats << ',' << g.seed << '\n';
            emit(g, os.str());
        } else if (exp1->parsed() || exp2->parsed()) {
            bool first = exp1->parsed();
            const ExperimentArgs& a = first ? e1 : e2;
            Amenability filter = first ? Amenability::any : parse_amenability(e2_amen);
            if (!first && filter == Amenability::any) throw std::invalid_argument("exp2 needs a filter");
            auto rows = run_comparison(a.spec(g, filter), &std::cerr);
            std::ostringstream os;
            write_metrics_csv(os, rows, first ? e1_timing : e2_timing);
            emit(g, os.str());
        } else if (exp3->parsed()) {
            ExperimentSpec s = e3.spec(g, Amenability::any);
            std::vector<int> ms;
            for (double v : parse_range(e3_m)) ms.push_back(static_cast<int>(std::lround(v)));
            auto rows = run_sweeps(s, parse_range(e3_logn), e3_sweep_m, ms, e3_sweep_rows, &std::cerr);
            std::ostringstream os;
            write_sweep_csv(os, rows);
            emit(g, os.str());
        } else if (mot->parsed()) {
            std::vector<int> ns;
            for (double v : parse_doubles(mot_n)) ns.push_back(static_cast<int>(v));
            auto rows = run_motivation(ns, mot_repeats, mot_per, mot_degree, g.seed, g.jobs);
            std::ostringstream os;
            write_motivation_csv(os, rows);
            emit(g, os.str());
        }
    } catch (const FormatError& e) {
        fail("format", e.what(), 1);
    } catch (const std::invalid_argument& e) {
        fail("invalid_argument", e.what(), 1);
    } catch (const std::exception& e) {
        fail("runtime", e.what(), 1);
    }
    return 0;
}
