#include <cstdio>
#include <exception>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fastrp/errors.hpp"

namespace {

// Exit codes: 1 usage, 2 I/O, 3 parse, 4 numeric, 5 partial failure.
int dispatch(const std::function<int()>& command) {
    try {
        return command();
    } catch (const fastrp::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const fastrp::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 3;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 3;
    } catch (const fastrp::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fastrp::cli;

    CLI::App app{"FastRP graph embeddings: iterative very sparse random projection of "
                 "degree-normalized transition-matrix powers"};
    app.require_subcommand(1);

    EmbedOptions embed;
    CLI::App* embed_cmd = app.add_subcommand("embed", "Embed a graph and write the result");
    embed_cmd->add_option("--graph", embed.graph_path,
                          "Edge list file (text, or FRPG binary cache)");
    embed_cmd->add_flag("--header", embed.header, "Text edge list starts with an 'n m' line");
    embed_cmd->add_option("--out", embed.out_path, "Output embedding path")->required();
    embed_cmd->add_option("--format", embed.format, "Output format: binary or text")
        ->check(CLI::IsMember({"binary", "text"}));
    embed_cmd->add_option("--dim,-d", embed.dim, "Embedding dimensionality");
    embed_cmd->add_option("--k", embed.k, "Maximum transition power");
    embed_cmd->add_option("--beta", embed.beta, "Normalization strength");
    embed_cmd->add_option("--weights", embed.weights, "Comma list of k merge weights");
    embed_cmd->add_option("--sparsity", embed.sparsity,
                          "Projection sparsity s (0 = sqrt(n))");
    embed_cmd->add_option("--kind", embed.kind, "Projection kind")
        ->check(CLI::IsMember({"very-sparse", "gaussian"}));
    embed_cmd->add_option("--seed", embed.seed, "Random seed");
    embed_cmd->add_flag("--normalize", embed.normalize, "L2-normalize embedding rows");
    embed_cmd->add_option("--threads", embed.threads,
                          "Worker threads (0 = FASTRP_THREADS or all cores)");
    embed_cmd->add_option("--from-manifest", embed.from_manifest,
                          "Reproduce a previous run from its manifest");
    embed_cmd->add_option("--write-graph-cache", embed.write_graph_cache,
                          "Also write the graph as an FRPG binary cache");

    KnnOptions knn;
    CLI::App* knn_cmd = app.add_subcommand("knn", "Nearest neighbors by cosine similarity");
    knn_cmd->add_option("--embedding", knn.embedding_path, "Embedding file")->required();
    knn_cmd->add_option("--query", knn.queries, "Query node id (repeatable)")->required();
    knn_cmd->add_option("--k", knn.k, "Number of neighbors");

    EvalOptions eval;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Multi-label node classification evaluation");
    eval_cmd->add_option("--embedding", eval.embedding_path, "Embedding file")->required();
    eval_cmd->add_option("--labels", eval.labels_path, "Label file")->required();
    eval_cmd->add_option("--fractions", eval.fractions, "Comma list of train fractions");
    eval_cmd->add_option("--trials", eval.trials, "Trials per fraction");
    eval_cmd->add_option("--seed", eval.seed, "Base trial seed");
    eval_cmd->add_option("--l2", eval.l2, "L2 regularization strength");
    eval_cmd->add_flag("--standardize", eval.standardize,
                       "Fit a per-feature z-transform on each training split");
    eval_cmd->add_option("--csv", eval.csv_path, "Write the CSV report here");
    eval_cmd->add_option("--threads", eval.threads, "Worker threads");

    SweepOptions sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Grid search over beta and merge weights");
    sweep_cmd->add_option("--graph", sweep.graph_path, "Edge list or FRPG cache")->required();
    sweep_cmd->add_flag("--header", sweep.header, "Text edge list starts with an 'n m' line");
    sweep_cmd->add_option("--labels", sweep.labels_path, "Label file")->required();
    sweep_cmd->add_option("--beta-grid", sweep.beta_grid, "Comma list of beta values");
    sweep_cmd->add_option("--alpha4-grid", sweep.alpha4_grid,
                          "Comma list of last-power weights (builds 0,..,1,a vectors)");
    sweep_cmd->add_option("--weights-grid", sweep.weights_grid,
                          "Semicolon-separated weight vectors; overrides --alpha4-grid");
    sweep_cmd->add_option("--validation-fraction", sweep.validation_fraction,
                          "Labeled fraction used for validation training");
    sweep_cmd->add_option("--tune-dim", sweep.tune_dim, "Dimensionality during tuning");
    sweep_cmd->add_option("--dim", sweep.final_dim, "Dimensionality of the final embedding");
    sweep_cmd->add_option("--k", sweep.k, "Maximum transition power");
    sweep_cmd->add_option("--kind", sweep.kind, "Projection kind")
        ->check(CLI::IsMember({"very-sparse", "gaussian"}));
    sweep_cmd->add_option("--sparsity", sweep.sparsity, "Projection sparsity s (0 = sqrt(n))");
    sweep_cmd->add_option("--seed", sweep.seed, "Random seed");
    sweep_cmd->add_option("--l2", sweep.l2, "L2 regularization strength");
    sweep_cmd->add_option("--out", sweep.out_path,
                          "Re-embed at --dim with the winner and write here");
    sweep_cmd->add_option("--format", sweep.format, "Output format: binary or text")
        ->check(CLI::IsMember({"binary", "text"}));
    sweep_cmd->add_option("--report", sweep.report_path, "Sweep report JSON path");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads");

    BenchOptions bench;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Embedding runtime on synthetic G(n,m) graphs");
    bench_cmd->add_option("--n-list", bench.n_list, "Comma list of node counts");
    bench_cmd->add_option("--m-list", bench.m_list, "Comma list of edge counts");
    bench_cmd->add_option("--dim", bench.dim, "Embedding dimensionality");
    bench_cmd->add_option("--k", bench.k, "Maximum transition power");
    bench_cmd->add_option("--seed", bench.seed, "Random seed");
    bench_cmd->add_option("--csv", bench.csv_path, "Write CSV here instead of stdout");
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (embed_cmd->parsed()) {
        if (embed.graph_path.empty() && embed.from_manifest.empty()) {
            std::fprintf(stderr, "usage error: need --graph or --from-manifest\n");
            return 1;
        }
        return dispatch([&] { return run_embed(embed); });
    }
    if (knn_cmd->parsed()) return dispatch([&] { return run_knn(knn); });
    if (eval_cmd->parsed()) return dispatch([&] { return run_eval(eval); });
    if (sweep_cmd->parsed()) return dispatch([&] { return run_sweep(sweep); });
    if (bench_cmd->parsed()) return dispatch([&] { return run_bench(bench); });
    return 1;
}
