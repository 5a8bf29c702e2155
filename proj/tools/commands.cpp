#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fastrp/engine.hpp"
#include "fastrp/errors.hpp"
#include "fastrp/eval.hpp"
#include "fastrp/io.hpp"
#include "fastrp/manifest.hpp"
#include "fastrp/parallel.hpp"
#include "fastrp/timing.hpp"

namespace fastrp::cli {

namespace {

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(token, &pos));
            if (pos != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("invalid ") + what + " value: " + token);
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + " list is empty");
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text, const char* what) {
    std::vector<std::uint64_t> out;
    for (const double v : parse_double_list(text, what)) {
        if (v < 0 || v != std::floor(v))
            throw std::invalid_argument(std::string(what) + " values must be non-negative integers");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

std::vector<double> resolve_weights(const std::string& text, std::uint32_t k) {
    if (text.empty()) {
        if (k == 4) return {0.0, 0.0, 1.0, 1.0};
        throw std::invalid_argument("--weights is required when --k is not 4");
    }
    std::vector<double> w = parse_double_list(text, "weight");
    if (w.size() != k)
        throw std::invalid_argument("expected " + std::to_string(k) + " weights, got " +
                                    std::to_string(w.size()));
    return w;
}

void print_timing(const char* stage, const StageTiming& t) {
    std::printf("  %-10s wall %8.3f s   cpu %8.3f s\n", stage, t.wall_seconds, t.cpu_seconds);
}

void write_embedding(const EmbeddingMatrix& emb, const std::string& path,
                     const std::string& format) {
    if (format == "binary")
        write_embedding_binary(emb, path);
    else if (format == "text")
        write_embedding_text(emb, path);
    else
        throw std::invalid_argument("unknown embedding format: " + format);
}

double available_memory_bytes() {
    std::ifstream in("/proc/meminfo");
    std::string key;
    double kb = 0.0;
    while (in >> key >> kb) {
        if (key == "MemAvailable:") return kb * 1024.0;
        in.ignore(256, '\n');
    }
    return 0.0;  // unknown
}

}  // namespace

int run_embed(const EmbedOptions& opt) {
    const unsigned threads = resolve_threads(opt.threads);

    std::string graph_path = opt.graph_path;
    bool header = opt.header;
    FastRpConfig cfg;
    RunManifest manifest;

    const StageTimer ingest_timer;
    CsrGraph g = [&] {
        if (!opt.from_manifest.empty()) {
            manifest = RunManifest::load(opt.from_manifest);
            graph_path = manifest.graph_path;
            header = manifest.graph_header;
            cfg = manifest.to_config();
            CsrGraph loaded = load_graph(graph_path, header);
            if (file_digest(graph_path) != manifest.graph_digest)
                std::cerr << "warning: graph digest differs from manifest\n";
            return loaded;
        }
        CsrGraph loaded = load_graph(graph_path, header);
        cfg.d = opt.dim;
        cfg.k = opt.k;
        cfg.beta = opt.beta;
        cfg.weights = resolve_weights(opt.weights, opt.k);
        cfg.s = opt.sparsity > 0.0 ? opt.sparsity : default_sparsity(loaded.num_nodes());
        cfg.kind = projection_kind_from_name(opt.kind);
        cfg.seed = opt.seed;
        cfg.l2_normalize_rows = opt.normalize;
        return loaded;
    }();
    const StageTiming ingest_time = ingest_timer.stop();

    std::printf("graph: n=%u m=%llu\n", g.num_nodes(),
                static_cast<unsigned long long>(g.num_edges()));

    EmbedTimings timings;
    const EmbeddingMatrix emb = fastrp_embed(g, cfg, threads, &timings);

    const StageTimer write_timer;
    const std::string out_path = opt.out_path;
    write_embedding(emb, out_path, opt.format);
    const StageTiming write_time = write_timer.stop();

    if (!opt.write_graph_cache.empty()) write_csr_binary(g, opt.write_graph_cache);

    print_timing("ingest", ingest_time);
    print_timing("project", timings.project);
    print_timing("propagate", timings.propagate);
    print_timing("merge", timings.merge);
    print_timing("write", write_time);
    print_timing("total", timings.total);

    manifest.command = "embed";
    manifest.graph_path = graph_path;
    manifest.graph_digest = file_digest(graph_path);
    manifest.graph_header = header;
    manifest.n = g.num_nodes();
    manifest.m = g.num_edges();
    manifest.set_config(cfg);
    manifest.threads = threads;
    manifest.output_path = out_path;
    manifest.output_format = opt.format;
    manifest.output_digest = file_digest(out_path);
    manifest.timings = {{"ingest", ingest_time.wall_seconds, ingest_time.cpu_seconds},
                        {"project", timings.project.wall_seconds, timings.project.cpu_seconds},
                        {"propagate", timings.propagate.wall_seconds,
                         timings.propagate.cpu_seconds},
                        {"merge", timings.merge.wall_seconds, timings.merge.cpu_seconds},
                        {"write", write_time.wall_seconds, write_time.cpu_seconds}};
    manifest.save(out_path + ".manifest.json");
    return 0;
}

int run_knn(const KnnOptions& opt) {
    if (opt.queries.empty()) throw std::invalid_argument("no query nodes given");
    const EmbeddingMatrix emb = read_embedding_file(opt.embedding_path);
    bool partial = false;
    for (const std::uint64_t q : opt.queries) {
        if (q >= emb.rows()) {
            std::printf("query %llu: error: unknown node id\n",
                        static_cast<unsigned long long>(q));
            partial = true;
            continue;
        }
        try {
            const KnnResult result = knn_query(emb, static_cast<NodeId>(q), opt.k);
            std::printf("query %u:\n", result.query);
            for (std::size_t r = 0; r < result.neighbors.size(); ++r)
                std::printf("  %2zu  node %-10u sim %+.6f\n", r + 1,
                            result.neighbors[r].id, result.neighbors[r].similarity);
        } catch (const std::invalid_argument& e) {
            std::printf("query %llu: error: %s\n", static_cast<unsigned long long>(q),
                        e.what());
            partial = true;
        }
    }
    return partial ? 5 : 0;
}

int run_eval(const EvalOptions& opt) {
    const unsigned threads = resolve_threads(opt.threads);
    const EmbeddingMatrix emb = read_embedding_file(opt.embedding_path);
    const LabelSet labels =
        read_labels_file(opt.labels_path, static_cast<NodeId>(emb.rows()));
    const std::vector<double> fractions = parse_double_list(opt.fractions, "fraction");
    for (const double f : fractions)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("train fractions must be in (0, 1)");

    std::vector<ClassificationReport> reports;
    std::printf("%10s %10s %10s %10s   (mean over %d trials)\n", "fraction", "macro-f1",
                "micro-f1", "accuracy", opt.trials);
    for (const double f : fractions) {
        reports.push_back(evaluate_classification(emb, labels, f, opt.trials, opt.seed,
                                                  opt.l2, threads, opt.standardize));
        const ClassificationReport& r = reports.back();
        std::printf("%10.4f %10.4f %10.4f %10.4f\n", f, r.macro_f1, r.micro_f1, r.accuracy);
    }

    std::ostringstream csv;
    csv << "train_fraction,trials,macro_f1,micro_f1,accuracy\n";
    for (const ClassificationReport& r : reports)
        csv << r.train_fraction << ',' << r.trials << ',' << r.macro_f1 << ',' << r.micro_f1
            << ',' << r.accuracy << '\n';
    if (opt.csv_path.empty()) {
        std::printf("\n%s", csv.str().c_str());
    } else {
        std::ofstream out(opt.csv_path);
        if (!out) throw IoError("cannot open " + opt.csv_path + " for writing");
        out << csv.str();
    }
    return 0;
}

int run_sweep(const SweepOptions& opt) {
    const unsigned threads = resolve_threads(opt.threads);
    const CsrGraph g = load_graph(opt.graph_path, opt.header);
    const LabelSet labels = read_labels_file(opt.labels_path, g.num_nodes());
    if (!(opt.validation_fraction > 0.0 && opt.validation_fraction < 1.0))
        throw std::invalid_argument("validation fraction must be in (0, 1)");

    const std::vector<double> betas = parse_double_list(opt.beta_grid, "beta");
    std::vector<std::vector<double>> weight_grid;
    if (!opt.weights_grid.empty()) {
        std::stringstream ss(opt.weights_grid);
        std::string vec;
        while (std::getline(ss, vec, ';'))
            if (!vec.empty()) weight_grid.push_back(parse_double_list(vec, "weight"));
    } else {
        for (const double a4 : parse_double_list(opt.alpha4_grid, "alpha4")) {
            std::vector<double> w(opt.k, 0.0);
            if (opt.k >= 2) w[opt.k - 2] = 1.0;
            w[opt.k - 1] = a4;
            weight_grid.push_back(std::move(w));
        }
    }
    if (weight_grid.empty()) throw std::invalid_argument("weight grid is empty");
    for (const auto& w : weight_grid)
        if (w.size() != opt.k)
            throw std::invalid_argument("every weight vector must have k entries");

    FastRpConfig base;
    base.d = opt.tune_dim;
    base.k = opt.k;
    base.weights = weight_grid.front();
    base.s = opt.sparsity > 0.0 ? opt.sparsity : default_sparsity(g.num_nodes());
    base.kind = projection_kind_from_name(opt.kind);
    base.seed = opt.seed;

    // Validation score: train on the small validation split, score
    // macro-F1 on the remaining labeled nodes. Single deterministic split.
    const EmbeddingEvaluator evaluator = [&](const EmbeddingMatrix& emb) {
        const TrainTestSplit split =
            split_train_test(labels, opt.validation_fraction, opt.seed);
        const OvrLogRegModel model =
            train_ovr_logreg(emb, labels, split.train, opt.l2, threads);
        return predict_and_score(model, emb, labels, split.test).macro_f1;
    };

    const SweepResult result = run_sweep(g, base, betas, weight_grid, evaluator, threads);
    std::printf("sweep: %zu power computations, %zu merges at d=%u\n",
                result.power_computations, result.merges, opt.tune_dim);
    std::printf("%10s %-24s %10s\n", "beta", "weights", "macro-f1");
    for (const SweepEntry& e : result.table) {
        std::ostringstream w;
        for (std::size_t i = 0; i < e.weights.size(); ++i)
            w << (i ? "," : "") << e.weights[i];
        std::printf("%10.3f %-24s %10.4f\n", e.beta, w.str().c_str(), e.score);
    }
    std::printf("best: beta=%.4f score=%.4f\n", result.best.beta, result.best.score);

    nlohmann::json report;
    report["tune_dim"] = opt.tune_dim;
    report["validation_fraction"] = opt.validation_fraction;
    report["power_computations"] = result.power_computations;
    report["merges"] = result.merges;
    report["best"] = {{"beta", result.best.beta},
                      {"weights", result.best.weights},
                      {"score", result.best.score}};
    nlohmann::json table = nlohmann::json::array();
    for (const SweepEntry& e : result.table)
        table.push_back({{"beta", e.beta}, {"weights", e.weights}, {"score", e.score}});
    report["table"] = table;

    if (!opt.out_path.empty()) {
        FastRpConfig final_cfg = base;
        final_cfg.d = opt.final_dim;
        final_cfg.beta = result.best.beta;
        final_cfg.weights = result.best.weights;

        // Tuning manifest: the winning config at tuning dimensionality.
        FastRpConfig tune_cfg = final_cfg;
        tune_cfg.d = opt.tune_dim;
        RunManifest tune_manifest;
        tune_manifest.command = "sweep";
        tune_manifest.graph_path = opt.graph_path;
        tune_manifest.graph_digest = file_digest(opt.graph_path);
        tune_manifest.graph_header = opt.header;
        tune_manifest.n = g.num_nodes();
        tune_manifest.m = g.num_edges();
        tune_manifest.set_config(tune_cfg);
        tune_manifest.threads = threads;
        tune_manifest.save(opt.out_path + ".tune.manifest.json");

        const EmbeddingMatrix final_emb = fastrp_embed(g, final_cfg, threads);
        write_embedding(final_emb, opt.out_path, opt.format);
        const double final_score = evaluator(final_emb);
        std::printf("final: d=%u score=%.4f (tuned at d=%u: %.4f)\n", opt.final_dim,
                    final_score, opt.tune_dim, result.best.score);
        report["final"] = {{"dim", opt.final_dim}, {"score", final_score}};

        RunManifest final_manifest;
        final_manifest.command = "embed";
        final_manifest.graph_path = opt.graph_path;
        final_manifest.graph_digest = tune_manifest.graph_digest;
        final_manifest.graph_header = opt.header;
        final_manifest.n = g.num_nodes();
        final_manifest.m = g.num_edges();
        final_manifest.set_config(final_cfg);
        final_manifest.threads = threads;
        final_manifest.output_path = opt.out_path;
        final_manifest.output_format = opt.format;
        final_manifest.output_digest = file_digest(opt.out_path);
        final_manifest.save(opt.out_path + ".manifest.json");
    }

    const std::string report_path =
        opt.report_path.empty()
            ? (opt.out_path.empty() ? "sweep_report.json" : opt.out_path + ".sweep.json")
            : opt.report_path;
    std::ofstream rout(report_path);
    if (!rout) throw IoError("cannot open " + report_path + " for writing");
    rout << report.dump(2) << '\n';
    return 0;
}

int run_bench(const BenchOptions& opt) {
    const unsigned threads = opt.threads == 0 ? 1 : opt.threads;
    const std::vector<std::uint64_t> ns = parse_u64_list(opt.n_list, "n");
    const std::vector<std::uint64_t> ms = parse_u64_list(opt.m_list, "m");

    std::ostringstream csv;
    csv << "n,m,generate_cpu_s,project_cpu_s,propagate_cpu_s,merge_cpu_s,embed_cpu_s,"
           "embed_wall_s\n";
    for (const std::uint64_t n : ns) {
        if (n > std::numeric_limits<NodeId>::max())
            throw std::invalid_argument("node count " + std::to_string(n) +
                                        " exceeds the 32-bit id range");
        for (const std::uint64_t m : ms) {
            if (n < 2 || m > n * (n - 1) / 2) {
                std::fprintf(stderr, "warning: skipping infeasible point n=%llu m=%llu\n",
                             static_cast<unsigned long long>(n),
                             static_cast<unsigned long long>(m));
                continue;
            }
            // Generator set + edge list + CSR + three dense buffers.
            const double estimate = 8.0 * static_cast<double>(m) * 5.0 +
                                    12.0 * static_cast<double>(n) +
                                    12.0 * static_cast<double>(n) * opt.dim;
            const double avail = available_memory_bytes();
            if (avail > 0.0 && estimate > 0.8 * avail) {
                std::fprintf(stderr,
                             "warning: skipping point n=%llu m=%llu (needs ~%.1f GB, "
                             "%.1f GB available)\n",
                             static_cast<unsigned long long>(n),
                             static_cast<unsigned long long>(m), estimate / 1e9,
                             avail / 1e9);
                continue;
            }

            const StageTimer gen_timer;
            const CsrGraph g =
                generate_erdos_renyi(static_cast<NodeId>(n), m, opt.seed);
            const StageTiming gen_time = gen_timer.stop();

            FastRpConfig cfg;
            cfg.d = opt.dim;
            cfg.k = opt.k;
            cfg.weights = std::vector<double>(opt.k, 1.0);
            cfg.s = default_sparsity(g.num_nodes());
            cfg.seed = opt.seed;
            EmbedTimings timings;
            const EmbeddingMatrix emb = fastrp_embed(g, cfg, threads, &timings);
            (void)emb;

            csv << n << ',' << m << ',' << gen_time.cpu_seconds << ','
                << timings.project.cpu_seconds << ',' << timings.propagate.cpu_seconds << ','
                << timings.merge.cpu_seconds << ',' << timings.total.cpu_seconds << ','
                << timings.total.wall_seconds << '\n';
            std::fprintf(stderr, "bench: n=%llu m=%llu embed cpu %.3f s\n",
                         static_cast<unsigned long long>(n),
                         static_cast<unsigned long long>(m), timings.total.cpu_seconds);
        }
    }
    if (opt.csv_path.empty()) {
        std::printf("%s", csv.str().c_str());
    } else {
        std::ofstream out(opt.csv_path);
        if (!out) throw IoError("cannot open " + opt.csv_path + " for writing");
        out << csv.str();
    }
    return 0;
}

}  // namespace fastrp::cli
