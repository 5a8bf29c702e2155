#include "fastrp/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fastrp/errors.hpp"
#include "fastrp/parallel.hpp"

namespace fastrp {

namespace {

/// Seed matrix X0 = L * R with the deferred sqrt(s) scale folded into
/// the per-row factor, so the sparse signs never see a multiply of
/// their own.
EmbeddingMatrix make_seed_matrix(const ProjectionMatrix& r, const NormalizerDiagonal& l,
                                 unsigned threads) {
    const std::uint64_t n = r.spec().n;
    const std::uint32_t d = r.spec().d;
    EmbeddingMatrix x(n, d);
    if (r.is_sparse()) {
        const double scale = r.sparse_scale();
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t row = begin; row < end; ++row) {
                const float factor = static_cast<float>(l.entries[row] * scale);
                const auto cols = r.row_columns(row);
                const auto signs = r.row_signs(row);
                auto out = x.row(row);
                for (std::size_t i = 0; i < cols.size(); ++i)
                    out[cols[i]] = signs[i] > 0 ? factor : -factor;
            }
        });
    } else {
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t row = begin; row < end; ++row) {
                const float factor = static_cast<float>(l.entries[row]);
                const auto src = r.dense_row(row);
                auto out = x.row(row);
                for (std::uint32_t c = 0; c < d; ++c) out[c] = factor * src[c];
            }
        });
    }
    return x;
}

void require_finite(const EmbeddingMatrix& m, std::uint32_t power) {
    if (!m.all_finite())
        throw NumericError("non-finite values in power " + std::to_string(power) +
                           " embedding (check beta for overflow)");
}

/// out += alpha * m, row-partitioned, 32-bit accumulation.
void add_scaled(EmbeddingMatrix& out, float alpha, const EmbeddingMatrix& m,
                unsigned threads) {
    const std::size_t d = out.cols();
    parallel_for(out.rows(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t row = begin; row < end; ++row) {
            auto dst = out.row(row);
            const auto src = m.row(row);
            for (std::size_t c = 0; c < d; ++c) dst[c] += alpha * src[c];
        }
    });
}

void normalize_rows(EmbeddingMatrix& m, unsigned threads) {
    const std::size_t d = m.cols();
    parallel_for(m.rows(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t row = begin; row < end; ++row) {
            auto r = m.row(row);
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c)
                sq += static_cast<double>(r[c]) * static_cast<double>(r[c]);
            if (sq == 0.0) continue;
            const float inv = static_cast<float>(1.0 / std::sqrt(sq));
            for (std::size_t c = 0; c < d; ++c) r[c] *= inv;
        }
    });
}

}  // namespace

FastRpConfig FastRpConfig::defaults_for(NodeId n) {
    FastRpConfig cfg;
    cfg.s = default_sparsity(n);
    return cfg;
}

void FastRpConfig::validate() const {
    if (d < 1) throw std::invalid_argument("embedding dimensionality must be >= 1");
    if (k < 1) throw std::invalid_argument("maximum power must be >= 1");
    if (weights.size() != k)
        throw std::invalid_argument("expected " + std::to_string(k) + " weights, got " +
                                    std::to_string(weights.size()));
    bool any = false;
    for (const double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weights must be finite and >= 0");
        if (w > 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("at least one weight must be positive");
    if (kind == ProjectionKind::kVerySparse && s < 1.0)
        throw std::invalid_argument("sparsity parameter must be >= 1");
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
}

NormalizerDiagonal compute_normalizer(const CsrGraph& g, double beta) {
    if (g.num_edges() == 0) throw std::invalid_argument("graph has no edges");
    const double inv_2m = 1.0 / (2.0 * static_cast<double>(g.num_edges()));
    NormalizerDiagonal l;
    l.entries.resize(g.num_nodes());
    for (NodeId j = 0; j < g.num_nodes(); ++j) {
        const std::uint32_t deg = g.degree(j);
        l.entries[j] = deg == 0 ? 0.0 : std::pow(static_cast<double>(deg) * inv_2m, beta);
    }
    return l;
}

PowerEmbeddings compute_power_embeddings(const CsrGraph& g, const FastRpConfig& cfg,
                                         unsigned threads) {
    cfg.validate();
    const NormalizerDiagonal l = compute_normalizer(g, cfg.beta);
    const ProjectionSpec spec{g.num_nodes(), cfg.d, cfg.s, cfg.kind, cfg.seed};
    const ProjectionMatrix r = sample_projection(spec);
    EmbeddingMatrix seed = make_seed_matrix(r, l, threads);

    PowerEmbeddings out;
    out.powers.reserve(cfg.k);
    out.powers.push_back(apply_transition(g, seed, threads));
    require_finite(out.powers.back(), 1);
    for (std::uint32_t i = 2; i <= cfg.k; ++i) {
        out.powers.push_back(apply_transition(g, out.powers.back(), threads));
        require_finite(out.powers.back(), i);
    }
    return out;
}

EmbeddingMatrix merge_weighted(const PowerEmbeddings& powers,
                               const std::vector<double>& weights, unsigned threads) {
    if (weights.size() != powers.count())
        throw std::invalid_argument("expected " + std::to_string(powers.count()) +
                                    " weights, got " + std::to_string(weights.size()));
    const EmbeddingMatrix& first = powers.powers.front();
    EmbeddingMatrix out(first.rows(), first.cols());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0.0) continue;
        add_scaled(out, static_cast<float>(weights[i]), powers.powers[i], threads);
    }
    if (!out.all_finite()) throw NumericError("non-finite values in merged embedding");
    return out;
}

EmbeddingMatrix fastrp_embed(const CsrGraph& g, const FastRpConfig& cfg, unsigned threads,
                             EmbedTimings* timings) {
    cfg.validate();
    const StageTimer total_timer;

    StageTimer project_timer;
    const NormalizerDiagonal l = compute_normalizer(g, cfg.beta);
    const ProjectionSpec spec{g.num_nodes(), cfg.d, cfg.s, cfg.kind, cfg.seed};
    const ProjectionMatrix r = sample_projection(spec);
    EmbeddingMatrix current = make_seed_matrix(r, l, threads);
    const StageTiming project_time = project_timer.stop();

    // Same per-element add sequence as merge_weighted over the full
    // PowerEmbeddings, but only one power buffer stays alive.
    StageTimer propagate_timer;
    EmbeddingMatrix out(current.rows(), current.cols());
    double merge_wall = 0.0, merge_cpu = 0.0;
    for (std::uint32_t i = 1; i <= cfg.k; ++i) {
        current = apply_transition(g, current, threads);
        require_finite(current, i);
        if (cfg.weights[i - 1] != 0.0) {
            StageTimer merge_timer;
            add_scaled(out, static_cast<float>(cfg.weights[i - 1]), current, threads);
            const StageTiming t = merge_timer.stop();
            merge_wall += t.wall_seconds;
            merge_cpu += t.cpu_seconds;
        }
    }
    const StageTiming propagate_time = propagate_timer.stop();
    if (!out.all_finite()) throw NumericError("non-finite values in merged embedding");

    if (cfg.l2_normalize_rows) normalize_rows(out, threads);

    if (timings) {
        timings->project = project_time;
        timings->propagate = {propagate_time.wall_seconds - merge_wall,
                              propagate_time.cpu_seconds - merge_cpu};
        timings->merge = {merge_wall, merge_cpu};
        timings->total = total_timer.stop();
    }
    return out;
}

DenseMatrix<double> dense_oracle_embed(const CsrGraph& g, const FastRpConfig& cfg,
                                       const DenseMatrix<double>& r, std::size_t limit) {
    cfg.validate();
    const std::size_t n = g.num_nodes();
    if (n > limit)
        throw std::invalid_argument("oracle refuses n=" + std::to_string(n) +
                                    " (limit " + std::to_string(limit) + ")");
    if (r.rows() != n || r.cols() != cfg.d)
        throw std::invalid_argument("projection matrix shape mismatch");

    const NormalizerDiagonal l = compute_normalizer(g, cfg.beta);
    DenseMatrix<double> out(n, cfg.d);
    for (std::uint32_t i = 1; i <= cfg.k; ++i) {
        const double alpha = cfg.weights[i - 1];
        if (alpha == 0.0) continue;
        const DenseMatrix<double> power = transition_power_dense(g, i);
        for (std::size_t row = 0; row < n; ++row) {
            for (std::size_t mid = 0; mid < n; ++mid) {
                const double v = power(row, mid) * l.entries[mid];
                if (v == 0.0) continue;
                const auto rrow = r.row(mid);
                auto orow = out.row(row);
                for (std::uint32_t c = 0; c < cfg.d; ++c) orow[c] += alpha * v * rrow[c];
            }
        }
    }
    return out;
}

SweepResult sweep_weights(const PowerEmbeddings& powers,
                          const std::vector<std::vector<double>>& weight_grid,
                          double beta_fixed, const EmbeddingEvaluator& evaluator,
                          unsigned threads) {
    if (weight_grid.empty()) throw std::invalid_argument("weight grid is empty");
    SweepResult result;
    for (const auto& weights : weight_grid) {
        const EmbeddingMatrix merged = merge_weighted(powers, weights, threads);
        ++result.merges;
        result.table.push_back({beta_fixed, weights, evaluator(merged)});
    }
    result.best = result.table.front();
    for (const SweepEntry& entry : result.table)
        if (entry.score > result.best.score) result.best = entry;
    return result;
}

SweepResult run_sweep(const CsrGraph& g, const FastRpConfig& base,
                      const std::vector<double>& beta_grid,
                      const std::vector<std::vector<double>>& weight_grid,
                      const EmbeddingEvaluator& evaluator, unsigned threads) {
    if (beta_grid.empty()) throw std::invalid_argument("beta grid is empty");
    if (weight_grid.empty()) throw std::invalid_argument("weight grid is empty");
    SweepResult result;
    bool first = true;
    for (const double beta : beta_grid) {
        FastRpConfig cfg = base;
        cfg.beta = beta;
        const PowerEmbeddings powers = compute_power_embeddings(g, cfg, threads);
        ++result.power_computations;
        SweepResult inner = sweep_weights(powers, weight_grid, beta, evaluator, threads);
        result.merges += inner.merges;
        for (SweepEntry& entry : inner.table) result.table.push_back(std::move(entry));
        if (first || inner.best.score > result.best.score) {
            result.best = inner.best;
            first = false;
        }
    }
    return result;
}

}  // namespace fastrp
