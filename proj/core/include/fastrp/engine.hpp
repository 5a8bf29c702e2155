#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fastrp/graph.hpp"
#include "fastrp/matrix.hpp"
#include "fastrp/projection.hpp"
#include "fastrp/timing.hpp"

namespace fastrp {

struct FastRpConfig {
    std::uint32_t d = 512;                 // embedding dimensionality
    std::uint32_t k = 4;                   // maximum transition power
    double beta = 0.0;                     // normalization strength, typically in [-1, 0]
    std::vector<double> weights = {0.0, 0.0, 1.0, 1.0};  // per-power merge weights
    double s = 1.0;                        // projection sparsity parameter
    ProjectionKind kind = ProjectionKind::kVerySparse;
    std::uint64_t seed = 1;
    bool l2_normalize_rows = false;        // optional post-merge row normalization

    /// d=512, k=4, weights (0,0,1,1), s=sqrt(n). beta stays 0 until tuned.
    static FastRpConfig defaults_for(NodeId n);

    /// Throws std::invalid_argument on violated invariants.
    void validate() const;
};

/// Diagonal degree normalizer: entry j = (deg_j / 2m)^beta, 0 for
/// isolated nodes. Right-multiplying the transition power by this
/// diagonal downweights high-degree target nodes.
struct NormalizerDiagonal {
    std::vector<double> entries;
};

NormalizerDiagonal compute_normalizer(const CsrGraph& g, double beta);

/// The k per-power projections N_1..N_k sharing one R and one L:
/// N_i = A^i * L * R. Immutable once built; merge-only sweeps reuse it.
struct PowerEmbeddings {
    std::vector<EmbeddingMatrix> powers;

    std::size_t count() const noexcept { return powers.size(); }
};

/// Builds N_1 = A*(L*R) and N_i = A*N_{i-1} for i = 2..k. The sqrt(s)
/// scale of the sparse projection is folded into the per-row seed
/// factors, so it is applied exactly once. Throws NumericError naming
/// the first power with a non-finite value.
PowerEmbeddings compute_power_embeddings(const CsrGraph& g, const FastRpConfig& cfg,
                                         unsigned threads = 1);

/// N = sum_i alpha_i * N_i. 32-bit accumulation in ascending power
/// order per element; zero weights are skipped.
EmbeddingMatrix merge_weighted(const PowerEmbeddings& powers,
                               const std::vector<double>& weights, unsigned threads = 1);

struct EmbedTimings {
    StageTiming project;    // normalizer + projection sampling + seed matrix
    StageTiming propagate;  // the k transition applications
    StageTiming merge;      // weighted combination
    StageTiming total;
};

/// The full pipeline; bit-identical to merging compute_power_embeddings
/// but keeps only two power buffers alive.
EmbeddingMatrix fastrp_embed(const CsrGraph& g, const FastRpConfig& cfg,
                             unsigned threads = 1, EmbedTimings* timings = nullptr);

/// Reference path: sum_i alpha_i * (A^i * L) * R with dense 64-bit
/// matrices and no iterative reuse. Refuses n > limit.
DenseMatrix<double> dense_oracle_embed(const CsrGraph& g, const FastRpConfig& cfg,
                                       const DenseMatrix<double>& r,
                                       std::size_t limit = 512);

using EmbeddingEvaluator = std::function<double(const EmbeddingMatrix&)>;

struct SweepEntry {
    double beta = 0.0;
    std::vector<double> weights;
    double score = 0.0;
};

struct SweepResult {
    SweepEntry best;
    std::vector<SweepEntry> table;
    std::size_t power_computations = 0;
    std::size_t merges = 0;
};

/// Scores each weight vector by re-merging the precomputed powers; no
/// transition applications happen here. Ties keep the earliest entry.
SweepResult sweep_weights(const PowerEmbeddings& powers,
                          const std::vector<std::vector<double>>& weight_grid,
                          double beta_fixed, const EmbeddingEvaluator& evaluator,
                          unsigned threads = 1);

/// Two-loop sweep: the outer beta loop recomputes powers (L sits inside
/// N_1), the inner weight loop only re-merges.
SweepResult run_sweep(const CsrGraph& g, const FastRpConfig& base,
                      const std::vector<double>& beta_grid,
                      const std::vector<std::vector<double>>& weight_grid,
                      const EmbeddingEvaluator& evaluator, unsigned threads = 1);

}  // namespace fastrp
