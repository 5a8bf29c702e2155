#include "fastrp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fastrp/parallel.hpp"
#include "fastrp/rng.hpp"

namespace fastrp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double row_norm(const EmbeddingMatrix& emb, NodeId i) {
    const auto r = emb.row(i);
    double sq = 0.0;
    for (const float v : r) sq += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(sq);
}

double row_dot(const EmbeddingMatrix& emb, NodeId a, NodeId b) {
    const auto ra = emb.row(a);
    const auto rb = emb.row(b);
    double acc = 0.0;
    for (std::size_t c = 0; c < ra.size(); ++c)
        acc += static_cast<double>(ra[c]) * static_cast<double>(rb[c]);
    return acc;
}

/// Minimizes a smooth convex objective with L-BFGS (two-loop recursion,
/// Armijo backtracking). Objective reports f and fills the gradient.
template <typename Objective>
void lbfgs_minimize(std::vector<double>& x, const Objective& objective, double grad_tol,
                    int max_iters) {
    const std::size_t n = x.size();
    constexpr std::size_t kHistory = 8;

    std::vector<double> grad(n), new_grad(n), direction(n), new_x(n);
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    double f = objective(x, grad);
    for (int iter = 0; iter < max_iters; ++iter) {
        double gnorm = 0.0;
        for (const double g : grad) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm < grad_tol) return;

        // Two-loop recursion.
        direction = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] *
                       std::inner_product(s_hist[i].begin(), s_hist[i].end(),
                                          direction.begin(), 0.0);
            for (std::size_t j = 0; j < n; ++j) direction[j] -= alpha[i] * y_hist[i][j];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& y = y_hist.back();
            const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
            const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
            if (yy > 0.0) {
                const double gamma = sy / yy;
                for (double& v : direction) v *= gamma;
            }
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] *
                                std::inner_product(y_hist[i].begin(), y_hist[i].end(),
                                                   direction.begin(), 0.0);
            for (std::size_t j = 0; j < n; ++j)
                direction[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (double& v : direction) v = -v;

        double dg = std::inner_product(direction.begin(), direction.end(), grad.begin(), 0.0);
        if (dg >= 0.0) {  // not a descent direction; fall back to steepest descent
            for (std::size_t j = 0; j < n; ++j) direction[j] = -grad[j];
            dg = -gnorm * gnorm;
        }

        double step = iter == 0 ? 1.0 / std::max(1.0, gnorm) : 1.0;
        double new_f = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < n; ++j) new_x[j] = x[j] + step * direction[j];
            new_f = objective(new_x, new_grad);
            if (new_f <= f + 1e-4 * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return;  // step underflow; gradient is numerically flat

        std::vector<double> s(n), y(n);
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = new_x[j] - x[j];
            y[j] = new_grad[j] - grad[j];
        }
        const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
        if (sy > 1e-12) {
            if (s_hist.size() == kHistory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
        }
        x = new_x;
        grad = new_grad;
        f = new_f;
    }
}

}  // namespace

std::vector<NodeId> LabelSet::labeled_nodes() const {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < n; ++i)
        if (!labels[i].empty()) out.push_back(i);
    return out;
}

KnnResult knn_query(const EmbeddingMatrix& emb, NodeId query, std::size_t k) {
    if (query >= emb.rows()) throw std::invalid_argument("query node id out of range");
    const double qnorm = row_norm(emb, query);
    if (qnorm == 0.0)
        throw std::invalid_argument("node " + std::to_string(query) + " has a zero embedding");

    std::vector<KnnNeighbor> candidates;
    candidates.reserve(emb.rows());
    for (NodeId i = 0; i < emb.rows(); ++i) {
        if (i == query) continue;
        const double norm = row_norm(emb, i);
        if (norm == 0.0) continue;
        double sim = row_dot(emb, query, i) / (qnorm * norm);
        sim = std::clamp(sim, -1.0, 1.0);
        candidates.push_back({i, sim});
    }
    const auto by_similarity = [](const KnnNeighbor& a, const KnnNeighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.id < b.id;
    };
    const std::size_t keep = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(),
                      by_similarity);
    candidates.resize(keep);
    return {query, std::move(candidates)};
}

TrainTestSplit split_train_test(const LabelSet& labels, double train_fraction,
                                std::uint64_t trial_seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train fraction must be in (0, 1)");
    const std::vector<NodeId> labeled = labels.labeled_nodes();
    if (labeled.size() < 2) throw std::invalid_argument("need at least two labeled nodes");

    const std::size_t total = labeled.size();
    std::size_t train_count = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(total)));
    train_count = std::clamp<std::size_t>(train_count, 1, total - 1);

    // Classes with >= 2 labeled members must land at least one member
    // in train; redraw a bounded number of times, then give up.
    std::vector<std::uint32_t> class_counts(labels.num_classes, 0);
    for (const NodeId v : labeled)
        for (const std::uint32_t c : labels.labels[v]) ++class_counts[c];

    constexpr int kMaxAttempts = 20;
    TrainTestSplit split;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<NodeId> order = labeled;
        CounterRng rng(trial_seed, static_cast<std::uint64_t>(attempt));
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const std::size_t j = rng.next_below(i + 1);
            std::swap(order[i], order[j]);
        }
        split.train.assign(order.begin(), order.begin() + train_count);
        split.test.assign(order.begin() + train_count, order.end());

        std::vector<std::uint8_t> covered(labels.num_classes, 0);
        for (const NodeId v : split.train)
            for (const std::uint32_t c : labels.labels[v]) covered[c] = 1;
        split.class_coverage = true;
        for (std::uint32_t c = 0; c < labels.num_classes; ++c) {
            if (class_counts[c] >= 2 && !covered[c]) {
                split.class_coverage = false;
                break;
            }
        }
        if (split.class_coverage) return split;
    }
    std::cerr << "warning: no split with full class coverage after " << kMaxAttempts
              << " attempts; proceeding\n";
    return split;
}

double logreg_objective(const DenseMatrix<double>& x, std::span<const std::int8_t> y,
                        std::span<const double> wb, double l2, std::span<double> grad_out) {
    const std::size_t samples = x.rows();
    const std::size_t d = x.cols();
    std::fill(grad_out.begin(), grad_out.end(), 0.0);

    double loss = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto xi = x.row(i);
        double z = wb[d];
        for (std::size_t j = 0; j < d; ++j) z += wb[j] * xi[j];
        const double t = static_cast<double>(y[i]) * z;
        // log(1 + exp(-t)) evaluated stably.
        loss += t < 0.0 ? -t + std::log1p(std::exp(t)) : std::log1p(std::exp(-t));
        const double sigma = 1.0 / (1.0 + std::exp(t));  // d loss / d z = -y * sigma
        const double coeff = -static_cast<double>(y[i]) * sigma;
        for (std::size_t j = 0; j < d; ++j) grad_out[j] += coeff * xi[j];
        grad_out[d] += coeff;
    }
    const double inv = 1.0 / static_cast<double>(samples);
    loss *= inv;
    for (double& g : grad_out) g *= inv;

    double wsq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        wsq += wb[j] * wb[j];
        grad_out[j] += l2 * wb[j];
    }
    return loss + 0.5 * l2 * wsq;
}

std::vector<double> fit_binary_logreg(const DenseMatrix<double>& x,
                                      std::span<const std::int8_t> y, double l2,
                                      std::vector<double> wb_init, double tol,
                                      int max_iters) {
    if (wb_init.size() != x.cols() + 1)
        throw std::invalid_argument("start point must have d+1 entries");
    lbfgs_minimize(
        wb_init,
        [&](const std::vector<double>& v, std::vector<double>& g) {
            return logreg_objective(x, y, v, l2, g);
        },
        tol, max_iters);
    return wb_init;
}

OvrLogRegModel train_ovr_logreg(const EmbeddingMatrix& emb, const LabelSet& labels,
                                std::span<const NodeId> train_ids, double l2_strength,
                                unsigned threads, bool standardize) {
    if (train_ids.empty()) throw std::invalid_argument("empty training set");
    const std::size_t d = emb.cols();

    // Shared training feature block in double; every class reads it.
    DenseMatrix<double> x(train_ids.size(), d);
    for (std::size_t i = 0; i < train_ids.size(); ++i) {
        const auto src = emb.row(train_ids[i]);
        auto dst = x.row(i);
        for (std::size_t j = 0; j < d; ++j) dst[j] = static_cast<double>(src[j]);
    }

    OvrLogRegModel model;
    if (standardize) {
        model.feature_shift.assign(d, 0.0);
        model.feature_scale.assign(d, 1.0);
        const double inv_n = 1.0 / static_cast<double>(train_ids.size());
        for (std::size_t i = 0; i < train_ids.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) model.feature_shift[j] += x(i, j);
        for (double& v : model.feature_shift) v *= inv_n;
        std::vector<double> var(d, 0.0);
        for (std::size_t i = 0; i < train_ids.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double c = x(i, j) - model.feature_shift[j];
                var[j] += c * c;
            }
        for (std::size_t j = 0; j < d; ++j)
            model.feature_scale[j] = 1.0 / std::max(std::sqrt(var[j] * inv_n), 1e-12);
        for (std::size_t i = 0; i < train_ids.size(); ++i)
            for (std::size_t j = 0; j < d; ++j)
                x(i, j) = (x(i, j) - model.feature_shift[j]) * model.feature_scale[j];
    }
    model.num_classes = labels.num_classes;
    model.dim = d;
    model.weights = DenseMatrix<double>(labels.num_classes, d);
    model.bias.assign(labels.num_classes, 0.0);
    model.trained.assign(labels.num_classes, 0);

    parallel_for(labels.num_classes, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::int8_t> y(train_ids.size());
        for (std::size_t cls = begin; cls < end; ++cls) {
            bool any_positive = false;
            for (std::size_t i = 0; i < train_ids.size(); ++i) {
                const auto& node_labels = labels.labels[train_ids[i]];
                const bool has = std::binary_search(node_labels.begin(), node_labels.end(),
                                                    static_cast<std::uint32_t>(cls));
                y[i] = has ? 1 : -1;
                any_positive |= has;
            }
            if (!any_positive) continue;

            const std::vector<double> wb =
                fit_binary_logreg(x, y, l2_strength, std::vector<double>(d + 1, 0.0));
            auto wrow = model.weights.row(cls);
            std::copy(wb.begin(), wb.begin() + d, wrow.begin());
            model.bias[cls] = wb[d];
            model.trained[cls] = 1;
        }
    });

    for (std::uint32_t c = 0; c < labels.num_classes; ++c)
        if (!model.trained[c])
            std::cerr << "warning: class " << c
                      << " has no positive training examples; it will never be predicted\n";
    return model;
}

double OvrLogRegModel::score(const EmbeddingMatrix& emb, NodeId node,
                             std::uint32_t cls) const {
    if (!trained[cls]) return kNegInf;
    const auto xi = emb.row(node);
    const auto w = weights.row(cls);
    double z = bias[cls];
    if (feature_shift.empty()) {
        for (std::size_t j = 0; j < dim; ++j) z += w[j] * static_cast<double>(xi[j]);
    } else {
        for (std::size_t j = 0; j < dim; ++j)
            z += w[j] * (static_cast<double>(xi[j]) - feature_shift[j]) * feature_scale[j];
    }
    return z;
}

std::vector<std::vector<std::uint32_t>> predict_known_count(
    const OvrLogRegModel& model, const EmbeddingMatrix& emb, const LabelSet& labels,
    std::span<const NodeId> test_ids) {
    if (model.dim != emb.cols())
        throw std::invalid_argument("model was trained on " + std::to_string(model.dim) +
                                    "-dimensional embeddings, got " +
                                    std::to_string(emb.cols()));
    std::vector<std::vector<std::uint32_t>> predicted(test_ids.size());
    // Untrained classes score -inf and are never predicted, even when a
    // node carries more labels than there are trained classes.
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t c = 0; c < model.num_classes; ++c)
        if (model.trained[c]) candidates.push_back(c);

    std::vector<std::uint32_t> order;
    std::vector<double> scores(model.num_classes);
    for (std::size_t i = 0; i < test_ids.size(); ++i) {
        const NodeId node = test_ids[i];
        const std::size_t want =
            std::min<std::size_t>(labels.labels[node].size(), candidates.size());
        if (want == 0) continue;
        for (const std::uint32_t c : candidates) scores[c] = model.score(emb, node, c);
        order = candidates;
        std::partial_sort(order.begin(), order.begin() + want, order.end(),
                          [&](std::uint32_t a, std::uint32_t b) {
                              if (scores[a] != scores[b]) return scores[a] > scores[b];
                              return a < b;
                          });
        predicted[i].assign(order.begin(), order.begin() + want);
        std::sort(predicted[i].begin(), predicted[i].end());
    }
    return predicted;
}

TrialScores score_multilabel(const std::vector<std::vector<std::uint32_t>>& predicted,
                             const std::vector<std::vector<std::uint32_t>>& truth,
                             std::uint32_t num_classes) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("prediction/truth size mismatch");
    std::vector<std::uint64_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
    std::size_t exact = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto& p = predicted[i];
        const auto& t = truth[i];
        if (p == t) ++exact;
        for (const std::uint32_t c : p) {
            if (std::binary_search(t.begin(), t.end(), c))
                ++tp[c];
            else
                ++fp[c];
        }
        for (const std::uint32_t c : t)
            if (!std::binary_search(p.begin(), p.end(), c)) ++fn[c];
    }

    TrialScores s;
    double macro_sum = 0.0;
    std::uint64_t tp_all = 0, fp_all = 0, fn_all = 0;
    for (std::uint32_t c = 0; c < num_classes; ++c) {
        const std::uint64_t denom = 2 * tp[c] + fp[c] + fn[c];
        macro_sum += denom == 0 ? 0.0
                                : 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
        tp_all += tp[c];
        fp_all += fp[c];
        fn_all += fn[c];
    }
    const std::uint64_t micro_denom = 2 * tp_all + fp_all + fn_all;
    s.macro_f1 = num_classes == 0 ? 0.0 : macro_sum / num_classes;
    s.micro_f1 = micro_denom == 0
                     ? 0.0
                     : 2.0 * static_cast<double>(tp_all) / static_cast<double>(micro_denom);
    s.accuracy = predicted.empty()
                     ? 0.0
                     : static_cast<double>(exact) / static_cast<double>(predicted.size());
    return s;
}

TrialScores predict_and_score(const OvrLogRegModel& model, const EmbeddingMatrix& emb,
                              const LabelSet& labels, std::span<const NodeId> test_ids) {
    const auto predicted = predict_known_count(model, emb, labels, test_ids);
    std::vector<std::vector<std::uint32_t>> truth(test_ids.size());
    for (std::size_t i = 0; i < test_ids.size(); ++i) truth[i] = labels.labels[test_ids[i]];
    return score_multilabel(predicted, truth, labels.num_classes);
}

ClassificationReport evaluate_classification(const EmbeddingMatrix& emb,
                                             const LabelSet& labels, double train_fraction,
                                             int trials, std::uint64_t seed,
                                             double l2_strength, unsigned threads,
                                             bool standardize) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (labels.n != emb.rows())
        throw std::invalid_argument("label set covers " + std::to_string(labels.n) +
                                    " nodes, embedding has " + std::to_string(emb.rows()));
    ClassificationReport report;
    report.train_fraction = train_fraction;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const TrainTestSplit split =
            split_train_test(labels, train_fraction, seed + static_cast<std::uint64_t>(t));
        const OvrLogRegModel model = train_ovr_logreg(emb, labels, split.train, l2_strength,
                                                      threads, standardize);
        report.per_trial.push_back(predict_and_score(model, emb, labels, split.test));
    }
    for (const TrialScores& t : report.per_trial) {
        report.macro_f1 += t.macro_f1;
        report.micro_f1 += t.micro_f1;
        report.accuracy += t.accuracy;
    }
    report.macro_f1 /= trials;
    report.micro_f1 /= trials;
    report.accuracy /= trials;
    return report;
}

}  // namespace fastrp
