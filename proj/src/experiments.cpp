#include "adjustmcmc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "adjustmcmc/io.hpp"
#include "adjustmcmc/parallel.hpp"

namespace adjustmcmc {

std::optional<double> precision(const std::vector<NodeSet>& sets, const Dag& truth, NodeId x, NodeId y) {
    if (sets.empty()) return std::nullopt;
    AdjCache cache = build_adj_cache(truth, x, y);
    int valid = 0;
    for (const NodeSet& a : sets) valid += is_valid_adjustment(cache, a) ? 1 : 0;
    return static_cast<double>(valid) / static_cast<double>(sets.size());
}

std::optional<double> mse(const std::vector<NodeSet>& sets, const Dataset& data, const Sem& sem, NodeId x, NodeId y) {
    double truth = total_effect(sem, x, y);
    double sum = 0.0;
    int used = 0;
    for (const NodeSet& a : sets) {
        try {
            double e = estimate_effect_ols(data, x, y, a) - truth;
            sum += e * e;
            ++used;
        } catch (const SingularRegression&) {
        }
    }
    if (used == 0) return std::nullopt;
    return sum / used;
}

Amenability parse_amenability(const std::string& s) {
    if (s == "any") return Amenability::any;
    if (s == "amenable") return Amenability::amenable;
    if (s == "non-amenable") return Amenability::non_amenable;
    throw std::invalid_argument("unknown amenability filter: " + s);
}

std::string to_string(Amenability a) {
    switch (a) {
        case Amenability::any: return "any";
        case Amenability::amenable: return "amenable";
        case Amenability::non_amenable: return "non-amenable";
    }
    return "?";
}

SkeletonSource parse_skeleton_source(const std::string& s) {
    if (s == "true") return SkeletonSource::truth;
    if (s == "estimate") return SkeletonSource::estimate;
    throw std::invalid_argument("unknown skeleton source: " + s);
}

std::string to_string(SkeletonSource s) { return s == SkeletonSource::truth ? "true" : "estimate"; }

void ExperimentSpec::validate() const {
    if (n_nodes.empty()) throw std::invalid_argument("no graph sizes given");
    for (int n : n_nodes)
        if (n < 2) throw std::invalid_argument("graph size must be at least 2");
    if (n_dags < 1) throw std::invalid_argument("n_dags must be positive");
    if (rows < 3) throw std::invalid_argument("rows must be at least 3");
    if (expected_degree < 0) throw std::invalid_argument("expected degree must be non-negative");
    if (jobs < 1) throw std::invalid_argument("jobs must be positive");
    if (rejection_budget < 1) throw std::invalid_argument("rejection budget must be positive");
    if (skeleton_sources.empty()) throw std::invalid_argument("no skeleton source given");
    SamplerConfig sc;
    sc.iterations = iterations;
    sc.depth = depth;
    sc.thresholds = thresholds;
    sc.accept_scale = accept_scale;
    sc.init_restarts = init_restarts;
    sc.validate();
    skeleton_cfg.validate();
}

Replicate draw_replicate(int n, double expected_degree, Amenability filter, std::uint64_t seed, int budget) {
    Rng rng(seed);
    for (int attempt = 0; attempt < budget; ++attempt) {
        Sem sem = random_sem(n, expected_degree, rng);
        std::vector<Edge> pairs;
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b : descendants_of(sem.dag, NodeSet{a}))
                if (b != a) pairs.emplace_back(a, b);
        if (pairs.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
        auto [x, y] = pairs[pick(rng)];
        bool am = is_amenable(cpdag_of(sem.dag), x, y);
        if (filter == Amenability::amenable && !am) continue;
        if (filter == Amenability::non_amenable && am) continue;
        if (!ancestors_of(sem.dag, NodeSet{y}).contains(x)) throw std::logic_error("treatment is not an ancestor");
        return Replicate{std::move(sem), x, y, am, seed};
    }
    throw std::runtime_error("no ground truth satisfying the amenability filter within budget");
}

namespace {

SamplerConfig sampler_config(const ExperimentSpec& spec, std::uint64_t seed, int iterations) {
    SamplerConfig sc;
    sc.iterations = iterations;
    sc.depth = spec.depth;
    sc.thresholds = spec.thresholds;
    sc.accept_scale = spec.accept_scale;
    sc.tally_mode = spec.tally_mode;
    sc.init_restarts = spec.init_restarts;
    sc.seed = seed;
    return sc;
}

// Per-method outcome on one replicate
struct Outcome {
    bool ok = false;
    std::optional<double> precision;
    std::optional<double> mse;
};

struct Accumulator {
    double precision_sum = 0.0;
    int precision_n = 0;
    double mse_sum = 0.0;
    int mse_n = 0;
    int empty = 0;
    int dags = 0;
    int mec_hits = 0;
    double runtime = 0.0;

    void add(const Outcome& o) {
        if (!o.ok) return;
        ++dags;
        if (o.precision) {
            precision_sum += *o.precision;
            ++precision_n;
        } else {
            ++empty;
        }
        if (o.mse) {
            mse_sum += *o.mse;
            ++mse_n;
        }
    }
    std::optional<double> mean_precision() const {
        if (precision_n == 0) return std::nullopt;
        return precision_sum / precision_n;
    }
    std::optional<double> mean_mse() const {
        if (mse_n == 0) return std::nullopt;
        return mse_sum / mse_n;
    }
    double empty_rate() const { return dags == 0 ? 0.0 : static_cast<double>(empty) / dags; }
};

Outcome evaluate(const std::vector<NodeSet>& sets, const Replicate& rep, const Dataset& data) {
    return Outcome{true, precision(sets, rep.sem.dag, rep.x, rep.y), mse(sets, data, rep.sem, rep.x, rep.y)};
}

struct ComparisonResult {
    // [source][threshold]
    std::vector<std::vector<Outcome>> sampler;
    std::vector<Outcome> opadj_g;
    std::vector<int> mec;  // -1 when the run failed
    std::vector<double> runtime;
    Outcome opadj_r;
};

void log_line(std::ostream* log, std::mutex& mu, const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(mu);
    *log << msg << '\n';
}

}  // namespace

std::vector<MetricsRow> run_comparison(const ExperimentSpec& spec, std::ostream* log) {
    spec.validate();
    std::vector<MetricsRow> rows;
    std::mutex log_mu;
    const std::size_t sources = spec.skeleton_sources.size();
    const std::size_t nt = spec.thresholds.size();

    for (std::size_t ni = 0; ni < spec.n_nodes.size(); ++ni) {
        const int n = spec.n_nodes[ni];
        const std::uint64_t group_seed = derive_seed(spec.seed, 100 + static_cast<std::uint64_t>(n));
        std::vector<ComparisonResult> results(spec.n_dags);

        parallel_for(spec.n_dags, spec.jobs, [&](int i) {
            ComparisonResult& out = results[i];
            out.sampler.assign(sources, std::vector<Outcome>(nt));
            out.opadj_g.assign(sources, Outcome{});
            out.mec.assign(sources, -1);
            out.runtime.assign(sources, 0.0);

            std::uint64_t rep_seed = derive_seed(group_seed, 0, static_cast<std::uint64_t>(i));
            Replicate rep;
            Dataset data;
            try {
                rep = draw_replicate(n, spec.expected_degree, spec.amenability, derive_seed(rep_seed, 1),
                                     spec.rejection_budget);
                Rng data_rng(derive_seed(rep_seed, 2));
                data = simulate(rep.sem, spec.rows, data_rng);
            } catch (const std::runtime_error& e) {
                log_line(log, log_mu, "replicate " + std::to_string(i) + " skipped: " + e.what());
                return;
            }

            Skeleton truth_skel = skeleton_of(rep.sem.dag);
            Cpdag truth_cpdag = cpdag_of(rep.sem.dag);

            Rng orient_rng(derive_seed(rep_seed, 4));
            Dag random_dag_r = orient(truth_skel, random_order(n, rep.x, rep.y, orient_rng));
            out.opadj_r = evaluate({optimal_adjustment_set(random_dag_r, rep.x, rep.y)}, rep, data);

            for (std::size_t s = 0; s < sources; ++s) {
                try {
                    Skeleton skel = spec.skeleton_sources[s] == SkeletonSource::truth
                                        ? truth_skel
                                        : estimate_skeleton(data, spec.skeleton_cfg);
                    auto t0 = std::chrono::steady_clock::now();
                    RunResult res = run(data, rep.x, rep.y, skel,
                                        sampler_config(spec, derive_seed(rep_seed, 3, s), spec.iterations));
                    out.runtime[s] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    for (std::size_t t = 0; t < nt; ++t) out.sampler[s][t] = evaluate(res.lists[t].sets, rep, data);
                    out.opadj_g[s] = evaluate({optimal_adjustment_set(res.initial, rep.x, rep.y)}, rep, data);
                    out.mec[s] = cpdag_of(res.initial) == truth_cpdag ? 1 : 0;
                } catch (const std::exception& e) {
                    log_line(log, log_mu,
                             "replicate " + std::to_string(i) + " (" + to_string(spec.skeleton_sources[s]) +
                                 " skeleton) failed: " + e.what());
                }
            }
        });

        for (std::size_t s = 0; s < sources; ++s) {
            std::vector<Accumulator> acc(nt);
            Accumulator g_acc;
            for (const ComparisonResult& r : results) {
                if (r.sampler.empty()) continue;
                for (std::size_t t = 0; t < nt; ++t) acc[t].add(r.sampler[s][t]);
                g_acc.add(r.opadj_g[s]);
                if (r.mec[s] >= 0) g_acc.mec_hits += r.mec[s];
                if (r.opadj_g[s].ok) g_acc.runtime += r.runtime[s];
            }
            const std::string src = to_string(spec.skeleton_sources[s]);
            double mean_runtime = g_acc.dags ? g_acc.runtime / g_acc.dags : 0.0;
            for (std::size_t t = 0; t < nt; ++t) {
                MetricsRow row;
                row.n = n;
                row.skeleton = src;
                row.method = "sampler";
                row.threshold = spec.thresholds[t];
                row.precision = acc[t].mean_precision();
                row.mse = acc[t].mean_mse();
                row.empty_rate = acc[t].empty_rate();
                row.dags = acc[t].dags;
                row.runtime_s = mean_runtime;
                row.seed = group_seed;
                rows.push_back(row);
            }
            MetricsRow g;
            g.n = n;
            g.skeleton = src;
            g.method = "opadj_g";
            g.precision = g_acc.mean_precision();
            g.mse = g_acc.mean_mse();
            g.empty_rate = g_acc.empty_rate();
            if (g_acc.dags) g.mec_rate = static_cast<double>(g_acc.mec_hits) / g_acc.dags;
            g.dags = g_acc.dags;
            g.seed = group_seed;
            rows.push_back(g);
        }
        Accumulator r_acc;
        for (const ComparisonResult& r : results)
            if (!r.sampler.empty()) r_acc.add(r.opadj_r);
        MetricsRow rr;
        rr.n = n;
        rr.skeleton = "true";
        rr.method = "opadj_r";
        rr.precision = r_acc.mean_precision();
        rr.mse = r_acc.mean_mse();
        rr.empty_rate = r_acc.empty_rate();
        rr.dags = r_acc.dags;
        rr.seed = group_seed;
        rows.push_back(rr);
    }
    return rows;
}

std::vector<SweepRow> run_sweeps(const ExperimentSpec& spec, const std::vector<double>& log_n_values,
                                 int sweep_iterations, const std::vector<int>& iteration_values, int sweep_rows,
                                 std::ostream* log) {
    spec.validate();
    if (sweep_iterations < 1 || sweep_rows < 3) throw std::invalid_argument("invalid sweep settings");
    for (int m : iteration_values)
        if (m < 1) throw std::invalid_argument("iteration values must be positive");
    for (double v : log_n_values)
        if (std::lround(std::exp(v)) < 3) throw std::invalid_argument("log N too small");

    const int n = spec.n_nodes.front();
    const std::size_t nt = spec.thresholds.size();
    std::mutex log_mu;
    std::vector<SweepRow> rows;

    struct Point {
        std::string sweep;
        double value;
        int rows;
        int iterations;
    };
    std::vector<Point> points;
    for (double v : log_n_values)
        points.push_back({"log_n", v, static_cast<int>(std::lround(std::exp(v))), sweep_iterations});
    for (int m : iteration_values) points.push_back({"iterations", static_cast<double>(m), sweep_rows, m});

    for (Amenability filter : {Amenability::amenable, Amenability::non_amenable}) {
        const std::uint64_t group_seed = derive_seed(spec.seed, 200 + static_cast<std::uint64_t>(filter));
        std::vector<std::optional<Replicate>> truths(spec.n_dags);
        parallel_for(spec.n_dags, spec.jobs, [&](int i) {
            try {
                truths[i] = draw_replicate(n, spec.expected_degree, filter,
                                           derive_seed(group_seed, 1, static_cast<std::uint64_t>(i)),
                                           spec.rejection_budget);
            } catch (const std::runtime_error& e) {
                log_line(log, log_mu, "ground truth " + std::to_string(i) + " skipped: " + e.what());
            }
        });

        // Paired design: one dataset per ground truth, each point uses a prefix
        // of it, and every point reuses the same sampler seed.
        int max_rows = 0;
        for (const Point& pt : points) max_rows = std::max(max_rows, pt.rows);
        std::vector<Dataset> full(spec.n_dags);
        parallel_for(spec.n_dags, spec.jobs, [&](int i) {
            if (!truths[i]) return;
            Rng data_rng(derive_seed(group_seed, 2, static_cast<std::uint64_t>(i)));
            full[i] = simulate(truths[i]->sem, max_rows, data_rng);
        });

        for (std::size_t p = 0; p < points.size(); ++p) {
            const Point& pt = points[p];
            std::vector<std::vector<Outcome>> outcomes(spec.n_dags, std::vector<Outcome>(nt));
            parallel_for(spec.n_dags, spec.jobs, [&](int i) {
                if (!truths[i]) return;
                const Replicate& rep = *truths[i];
                try {
                    Dataset data;
                    data.values = full[i].values.topRows(pt.rows);
                    data.names = full[i].names;
                    RunResult res = run(data, rep.x, rep.y, skeleton_of(rep.sem.dag),
                                        sampler_config(spec, derive_seed(group_seed, 3, static_cast<std::uint64_t>(i)),
                                                       pt.iterations));
                    for (std::size_t t = 0; t < nt; ++t) outcomes[i][t] = evaluate(res.lists[t].sets, rep, data);
                } catch (const std::exception& e) {
                    log_line(log, log_mu, pt.sweep + "=" + std::to_string(pt.value) + " replicate " +
                                              std::to_string(i) + " failed: " + e.what());
                }
            });
            for (std::size_t t = 0; t < nt; ++t) {
                Accumulator acc;
                for (const auto& o : outcomes) acc.add(o[t]);
                SweepRow row;
                row.sweep = pt.sweep;
                row.value = pt.value;
                row.amenability = to_string(filter);
                row.threshold = spec.thresholds[t];
                row.precision = acc.mean_precision();
                row.mse = acc.mean_mse();
                row.empty_rate = acc.empty_rate();
                row.dags = acc.dags;
                row.seed = group_seed;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<MotivationRow> run_motivation(const std::vector<int>& n_list, int repeats, int per_baseline,
                                          double expected_degree, std::uint64_t seed, int jobs) {
    if (repeats < 1 || per_baseline < 1) throw std::invalid_argument("repeats and per_baseline must be positive");
    for (int n : n_list)
        if (n < 2 || n > 16) throw std::invalid_argument("motivation graph size must lie in [2, 16]");
    std::vector<MotivationRow> rows;
    for (int n : n_list) {
        std::vector<std::vector<MotivationRow>> parts(repeats);
        parallel_for(repeats, jobs, [&](int r) {
            std::uint64_t s = derive_seed(seed, 300 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
            Replicate base = draw_replicate(n, expected_degree, Amenability::any, s, 10000);
            auto base_valid = enumerate_all_valid(base.sem.dag, base.x, base.y, 16);
            std::set<NodeSet> valid_set(base_valid.begin(), base_valid.end());
            Rng rng(derive_seed(s, 1));
            for (int k = 0; k < per_baseline; ++k) {
                Dag other = random_dag(n, expected_degree, rng);
                auto sets = enumerate_all_valid(other, base.x, base.y, 16);
                if (sets.empty()) continue;
                int hit = 0;
                for (const NodeSet& a : sets) hit += valid_set.count(a) ? 1 : 0;
                parts[r].push_back(MotivationRow{n, r, shd(base.sem.dag, other),
                                                 static_cast<double>(hit) / static_cast<double>(sets.size()), s});
            }
        });
        for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
    }
    return rows;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("spearman needs paired samples");
    auto ra = ranks(a);
    auto rb = ranks(b);
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0 || sbb == 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows, bool with_runtime) {
    out << "n,skeleton,method,threshold,precision,mse,empty_rate,mec_rate,dags,seed";
    if (with_runtime) out << ",runtime_s";
    out << '\n';
    for (const MetricsRow& r : rows) {
        out << r.n << ',' << r.skeleton << ',' << r.method << ','
            << (r.threshold ? format_threshold(*r.threshold) : std::string{}) << ',' << fmt(r.precision) << ','
            << fmt(r.mse) << ',' << fmt(r.empty_rate) << ',' << fmt(r.mec_rate) << ',' << r.dags << ',' << r.seed;
        if (with_runtime) out << ',' << fmt(r.runtime_s);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "sweep,value,amenability,threshold,precision,mse,empty_rate,dags,seed\n";
    for (const SweepRow& r : rows)
        out << r.sweep << ',' << fmt(r.value) << ',' << r.amenability << ',' << format_threshold(r.threshold) << ','
            << fmt(r.precision) << ',' << fmt(r.mse) << ',' << fmt(r.empty_rate) << ',' << r.dags << ',' << r.seed
            << '\n';
}

void write_motivation_csv(std::ostream& out, const std::vector<MotivationRow>& rows) {
    out << "n,baseline,shd,precision,seed\n";
    for (const MotivationRow& r : rows)
        out << r.n << ',' << r.baseline << ',' << r.shd << ',' << fmt(r.precision) << ',' << r.seed << '\n';
}

}  // namespace adjustmcmc
