#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fastrp::cli {

struct EmbedOptions {
    std::string graph_path;
    bool header = false;
    std::string out_path;
    std::string format = "binary";
    std::uint32_t dim = 512;
    std::uint32_t k = 4;
    double beta = 0.0;
    std::string weights;  // comma list; empty means the k=4 default 0,0,1,1
    double sparsity = 0.0;  // 0 resolves to sqrt(n)
    std::string kind = "very-sparse";
    std::uint64_t seed = 1;
    bool normalize = false;
    unsigned threads = 0;
    std::string from_manifest;
    std::string write_graph_cache;
};

struct KnnOptions {
    std::string embedding_path;
    std::vector<std::uint64_t> queries;
    std::size_t k = 5;
};

struct EvalOptions {
    std::string embedding_path;
    std::string labels_path;
    std::string fractions = "0.1";
    int trials = 10;
    std::uint64_t seed = 7;
    double l2 = 1.0;
    bool standardize = false;
    std::string csv_path;
    unsigned threads = 0;
};

struct SweepOptions {
    std::string graph_path;
    bool header = false;
    std::string labels_path;
    std::string beta_grid = "-1,-0.75,-0.5,-0.25,0";
    std::string alpha4_grid = "0.125,0.25,0.5,1,2,4,8,16,32,64";
    std::string weights_grid;  // semicolon-separated vectors; overrides alpha4_grid
    double validation_fraction = 0.01;
    std::uint32_t tune_dim = 64;
    std::uint32_t final_dim = 512;
    std::uint32_t k = 4;
    std::string kind = "very-sparse";
    double sparsity = 0.0;
    std::uint64_t seed = 1;
    double l2 = 1.0;
    std::string out_path;
    std::string format = "binary";
    std::string report_path;
    unsigned threads = 0;
};

struct BenchOptions {
    std::string n_list = "100000";
    std::string m_list = "1000000";
    std::uint32_t dim = 32;
    std::uint32_t k = 4;
    std::uint64_t seed = 7;
    std::string csv_path;
    unsigned threads = 1;
};

int run_embed(const EmbedOptions& opt);
int run_knn(const KnnOptions& opt);
int run_eval(const EvalOptions& opt);
int run_sweep(const SweepOptions& opt);
int run_bench(const BenchOptions& opt);

}  // namespace fastrp::cli
