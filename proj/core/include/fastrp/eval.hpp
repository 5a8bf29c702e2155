#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fastrp/graph.hpp"
#include "fastrp/matrix.hpp"

namespace fastrp {

/// Multi-label assignment. Nodes with an empty label list are
/// unlabeled and excluded from train/test splits.
struct LabelSet {
    NodeId n = 0;
    std::uint32_t num_classes = 0;
    std::vector<std::vector<std::uint32_t>> labels;  // per node, sorted, deduped

    std::vector<NodeId> labeled_nodes() const;
};

struct KnnNeighbor {
    NodeId id;
    double similarity;
};

/// Exact top-K by cosine similarity, descending, ties broken by
/// ascending node id. The query and zero-embedding nodes are excluded.
struct KnnResult {
    NodeId query = 0;
    std::vector<KnnNeighbor> neighbors;
};

KnnResult knn_query(const EmbeddingMatrix& emb, NodeId query, std::size_t k);

struct TrainTestSplit {
    std::vector<NodeId> train;
    std::vector<NodeId> test;
    /// False when no redraw produced a training member for every class
    /// with at least two labeled members; the split is still usable.
    bool class_coverage = true;
};

/// Uniform split of the labeled nodes, deterministic per trial_seed.
TrainTestSplit split_train_test(const LabelSet& labels, double train_fraction,
                                std::uint64_t trial_seed);

/// One-vs-rest L2-regularized logistic regression. Classes with no
/// positive training example stay untrained and score -inf.
struct OvrLogRegModel {
    std::uint32_t num_classes = 0;
    std::size_t dim = 0;
    DenseMatrix<double> weights;         // num_classes x dim
    std::vector<double> bias;            // num_classes
    std::vector<std::uint8_t> trained;   // classes with >= 1 positive example
    // Per-feature affine transform fitted on the training rows; empty
    // unless standardization was requested.
    std::vector<double> feature_shift;
    std::vector<double> feature_scale;

    double score(const EmbeddingMatrix& emb, NodeId node, std::uint32_t cls) const;
};

/// Features are used raw by default; standardize fits a per-feature
/// z-transform on the training rows and applies it at prediction time.
OvrLogRegModel train_ovr_logreg(const EmbeddingMatrix& emb, const LabelSet& labels,
                                std::span<const NodeId> train_ids, double l2_strength,
                                unsigned threads = 1, bool standardize = false);

/// Mean logistic loss plus (l2/2)*|w|^2 over a binary problem, and its
/// gradient. wb packs [w_0..w_{d-1}, b]; the bias is not regularized.
/// Exposed so the gradient can be checked against finite differences.
double logreg_objective(const DenseMatrix<double>& x, std::span<const std::int8_t> y,
                        std::span<const double> wb, double l2,
                        std::span<double> grad_out);

/// Fits one binary problem from the given start point, to gradient
/// norm < tol or the iteration cap. The objective is convex, so the
/// result is optimizer- and initialization-independent up to tol.
std::vector<double> fit_binary_logreg(const DenseMatrix<double>& x,
                                      std::span<const std::int8_t> y, double l2,
                                      std::vector<double> wb_init, double tol = 1e-5,
                                      int max_iters = 1000);

/// Known-label-count protocol: a node with l true labels gets its
/// top-l classes by score. Returned lists are sorted ascending.
std::vector<std::vector<std::uint32_t>> predict_known_count(
    const OvrLogRegModel& model, const EmbeddingMatrix& emb, const LabelSet& labels,
    std::span<const NodeId> test_ids);

struct TrialScores {
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    double accuracy = 0.0;  // exact set match
};

TrialScores score_multilabel(const std::vector<std::vector<std::uint32_t>>& predicted,
                             const std::vector<std::vector<std::uint32_t>>& truth,
                             std::uint32_t num_classes);

TrialScores predict_and_score(const OvrLogRegModel& model, const EmbeddingMatrix& emb,
                              const LabelSet& labels, std::span<const NodeId> test_ids);

struct ClassificationReport {
    double train_fraction = 0.0;
    int trials = 0;
    std::vector<TrialScores> per_trial;
    double macro_f1 = 0.0;  // arithmetic means over trials
    double micro_f1 = 0.0;
    double accuracy = 0.0;
};

/// Repeats split/train/score `trials` times with seeds seed+0..trials-1
/// and reports per-trial scores plus their means.
ClassificationReport evaluate_classification(const EmbeddingMatrix& emb,
                                             const LabelSet& labels, double train_fraction,
                                             int trials, std::uint64_t seed,
                                             double l2_strength = 1.0, unsigned threads = 1,
                                             bool standardize = false);

}  // namespace fastrp
