#include <cmath>

#include <doctest.h>

#include "fastrp/engine.hpp"
#include "fastrp/eval.hpp"
#include "fastrp/rng.hpp"
#include "test_util.hpp"

using namespace fastrp;

namespace {

LabelSet make_labels(NodeId n, std::uint32_t num_classes,
                     std::vector<std::pair<NodeId, std::vector<std::uint32_t>>> assignments) {
    LabelSet set;
    set.n = n;
    set.num_classes = num_classes;
    set.labels.resize(n);
    for (auto& [node, classes] : assignments) set.labels[node] = std::move(classes);
    return set;
}

}  // namespace

TEST_SUITE("knn_query") {
    TEST_CASE("orthogonal rows tie-break by ascending id") {
        EmbeddingMatrix emb(3, 3);
        for (std::size_t i = 0; i < 3; ++i) emb(i, i) = 1.0f;
        const KnnResult r = knn_query(emb, 0, 2);
        REQUIRE(r.neighbors.size() == 2);
        CHECK(r.neighbors[0].id == 1);
        CHECK(r.neighbors[1].id == 2);
        CHECK(r.neighbors[0].similarity == doctest::Approx(0.0));
        CHECK(r.neighbors[1].similarity == doctest::Approx(0.0));
    }

    TEST_CASE("cosine ignores row scale") {
        EmbeddingMatrix emb(3, 2);
        emb(0, 0) = 1.0f;
        emb(1, 0) = 2.0f;
        emb(2, 1) = 1.0f;
        const KnnResult r = knn_query(emb, 0, 1);
        REQUIRE(r.neighbors.size() == 1);
        CHECK(r.neighbors[0].id == 1);
        CHECK(r.neighbors[0].similarity == doctest::Approx(1.0));
    }

    TEST_CASE("path embeddings put the adjacent node first") {
        const CsrGraph g = test::make_path(5);
        FastRpConfig cfg = FastRpConfig::defaults_for(5);
        const EmbeddingMatrix emb = fastrp_embed(g, cfg);
        const KnnResult r = knn_query(emb, 0, 1);
        REQUIRE(r.neighbors.size() == 1);
        CHECK(r.neighbors[0].id == 1);

        // The dense reference ranks neighbors the same way.
        const auto rd =
            sample_projection({5, cfg.d, cfg.s, cfg.kind, cfg.seed}).materialize();
        const auto oracle = dense_oracle_embed(g, cfg, rd);
        const auto cosine = [&](NodeId a, NodeId b) {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t c = 0; c < oracle.cols(); ++c) {
                dot += oracle(a, c) * oracle(b, c);
                na += oracle(a, c) * oracle(a, c);
                nb += oracle(b, c) * oracle(b, c);
            }
            return dot / std::sqrt(na * nb);
        };
        for (const NodeId other : {NodeId{2}, NodeId{3}, NodeId{4}})
            CHECK(cosine(0, 1) > cosine(0, other));
    }

    TEST_CASE("zero-embedding queries and unknown ids are rejected") {
        EmbeddingMatrix emb(3, 2);
        emb(0, 0) = 1.0f;
        emb(1, 0) = 1.0f;
        CHECK_THROWS_AS(knn_query(emb, 2, 1), std::invalid_argument);  // zero row
        CHECK_THROWS_AS(knn_query(emb, 9, 1), std::invalid_argument);
    }

    TEST_CASE("large K saturates to all eligible nodes") {
        EmbeddingMatrix emb(4, 2);
        for (std::size_t i = 0; i < 3; ++i) emb(i, 0) = static_cast<float>(i + 1);
        // node 3 stays zero and must not appear
        const KnnResult r = knn_query(emb, 0, 100);
        CHECK(r.neighbors.size() == 2);
    }

    TEST_CASE("positive per-row scaling leaves results unchanged") {
        const CsrGraph g = generate_erdos_renyi(50, 200, 15);
        const EmbeddingMatrix emb = fastrp_embed(g, FastRpConfig::defaults_for(50));
        EmbeddingMatrix scaled = emb;
        for (NodeId i = 0; i < 50; ++i) {
            const float c = static_cast<float>(1 << (i % 5));  // exact powers of two
            for (float& v : scaled.row(i)) v *= c;
        }
        const KnnResult a = knn_query(emb, 7, 10);
        const KnnResult b = knn_query(scaled, 7, 10);
        REQUIRE(a.neighbors.size() == b.neighbors.size());
        for (std::size_t i = 0; i < a.neighbors.size(); ++i) {
            CHECK(a.neighbors[i].id == b.neighbors[i].id);
            CHECK(a.neighbors[i].similarity ==
                  doctest::Approx(b.neighbors[i].similarity).epsilon(1e-12));
        }
    }
}

TEST_SUITE("split_train_test") {
    TEST_CASE("counts follow the fraction") {
        LabelSet labels = make_labels(100, 2, {});
        for (NodeId i = 0; i < 100; ++i) labels.labels[i] = {i % 2u};
        const TrainTestSplit s = split_train_test(labels, 0.1, 3);
        CHECK(s.train.size() == 10);
        CHECK(s.test.size() == 90);
    }

    TEST_CASE("same seed reproduces the split") {
        LabelSet labels = make_labels(60, 3, {});
        for (NodeId i = 0; i < 60; ++i) labels.labels[i] = {i % 3u};
        const TrainTestSplit a = split_train_test(labels, 0.25, 11);
        const TrainTestSplit b = split_train_test(labels, 0.25, 11);
        CHECK(a.train == b.train);
        CHECK(a.test == b.test);
        const TrainTestSplit c = split_train_test(labels, 0.25, 12);
        CHECK(a.train != c.train);
    }

    TEST_CASE("two labeled nodes split one and one") {
        const LabelSet labels = make_labels(5, 2, {{1, {0}}, {3, {1}}});
        const TrainTestSplit s = split_train_test(labels, 0.5, 1);
        CHECK(s.train.size() == 1);
        CHECK(s.test.size() == 1);
    }

    TEST_CASE("one percent of a blogcatalog-sized label set") {
        LabelSet labels = make_labels(10312, 39, {});
        for (NodeId i = 0; i < 10312; ++i) labels.labels[i] = {i % 39u};
        const TrainTestSplit s = split_train_test(labels, 0.01, 5);
        CHECK(s.train.size() == 103);
    }

    TEST_CASE("classes with two or more members reach the training side") {
        LabelSet labels = make_labels(40, 4, {});
        for (NodeId i = 0; i < 40; ++i) labels.labels[i] = {i % 4u};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const TrainTestSplit s = split_train_test(labels, 0.25, seed);
            CHECK(s.class_coverage);
            std::vector<bool> seen(4, false);
            for (const NodeId v : s.train)
                for (const std::uint32_t c : labels.labels[v]) seen[c] = true;
            for (const bool b : seen) CHECK(b);
        }
    }

    TEST_CASE("infeasible coverage falls back with a cleared flag") {
        // 4 train slots cannot reliably cover 4 classes; the split must
        // still come back usable.
        LabelSet labels = make_labels(40, 4, {});
        for (NodeId i = 0; i < 40; ++i) labels.labels[i] = {i % 4u};
        bool saw_uncovered = false;
        for (std::uint64_t seed = 0; seed < 30 && !saw_uncovered; ++seed) {
            const TrainTestSplit s = split_train_test(labels, 0.1, seed);
            CHECK(s.train.size() == 4);
            CHECK(s.test.size() == 36);
            saw_uncovered |= !s.class_coverage;
        }
        CHECK(saw_uncovered);
    }

    TEST_CASE("unlabeled nodes never appear in either side") {
        const LabelSet labels = make_labels(10, 2, {{0, {0}}, {1, {1}}, {2, {0}}, {3, {1}}});
        const TrainTestSplit s = split_train_test(labels, 0.5, 7);
        for (const NodeId v : s.train) CHECK(v < 4);
        for (const NodeId v : s.test) CHECK(v < 4);
    }
}

TEST_SUITE("logistic regression") {
    TEST_CASE("separable one-dimensional problem") {
        EmbeddingMatrix emb(2, 1);
        emb(0, 0) = 1.0f;
        emb(1, 0) = -1.0f;
        const LabelSet labels = make_labels(2, 2, {{0, {1}}, {1, {0}}});
        const std::vector<NodeId> train = {0, 1};
        const OvrLogRegModel model = train_ovr_logreg(emb, labels, train, 1e-6);
        // Symmetric data puts the boundary at the origin.
        CHECK(std::abs(model.bias[0]) < 1e-3);
        CHECK(std::abs(model.bias[1]) < 1e-3);
        CHECK(model.weights(1, 0) > 0.0);
        CHECK(model.weights(0, 0) < 0.0);
        const auto predicted = predict_known_count(model, emb, labels, train);
        CHECK(predicted[0] == std::vector<std::uint32_t>{1});
        CHECK(predicted[1] == std::vector<std::uint32_t>{0});
    }

    TEST_CASE("heavy regularization shrinks weights to zero") {
        EmbeddingMatrix emb(4, 2);
        CounterRng rng(5);
        for (float& v : emb.values()) v = static_cast<float>(rng.next_double() - 0.5);
        const LabelSet labels =
            make_labels(4, 2, {{0, {0}}, {1, {0}}, {2, {1}}, {3, {1}}});
        const std::vector<NodeId> train = {0, 1, 2, 3};
        const OvrLogRegModel model = train_ovr_logreg(emb, labels, train, 1e9);
        for (std::uint32_t c = 0; c < 2; ++c)
            for (std::size_t j = 0; j < 2; ++j)
                CHECK(std::abs(model.weights(c, j)) < 1e-6);
    }

    TEST_CASE("analytic gradient matches central finite differences") {
        const std::size_t d = 5, samples = 20;
        DenseMatrix<double> x(samples, d);
        std::vector<std::int8_t> y(samples);
        CounterRng rng(123);
        for (std::size_t i = 0; i < samples; ++i) {
            for (std::size_t j = 0; j < d; ++j) x(i, j) = 2.0 * rng.next_double() - 1.0;
            y[i] = rng.next_bool() ? 1 : -1;
        }
        std::vector<double> wb(d + 1);
        for (double& v : wb) v = rng.next_double() - 0.5;

        std::vector<double> analytic(d + 1);
        logreg_objective(x, y, wb, 0.5, analytic);

        std::vector<double> scratch(d + 1);
        const double h = 1e-5;
        for (std::size_t j = 0; j <= d; ++j) {
            std::vector<double> lo = wb, hi = wb;
            lo[j] -= h;
            hi[j] += h;
            const double flo = logreg_objective(x, y, lo, 0.5, scratch);
            const double fhi = logreg_objective(x, y, hi, 0.5, scratch);
            const double numeric = (fhi - flo) / (2.0 * h);
            CHECK(std::abs(numeric - analytic[j]) <=
                  1e-6 * std::max(1.0, std::abs(analytic[j])));
        }
    }

    TEST_CASE("different initializations reach the same objective") {
        const std::size_t d = 4, samples = 30;
        DenseMatrix<double> x(samples, d);
        std::vector<std::int8_t> y(samples);
        CounterRng rng(77);
        for (std::size_t i = 0; i < samples; ++i) {
            for (std::size_t j = 0; j < d; ++j) x(i, j) = 2.0 * rng.next_double() - 1.0;
            y[i] = rng.next_bool() ? 1 : -1;
        }
        std::vector<double> init_a(d + 1, 0.0);
        std::vector<double> init_b(d + 1);
        for (double& v : init_b) v = 4.0 * rng.next_double() - 2.0;

        const std::vector<double> wa = fit_binary_logreg(x, y, 0.1, init_a, 1e-7, 2000);
        const std::vector<double> wb = fit_binary_logreg(x, y, 0.1, init_b, 1e-7, 2000);
        std::vector<double> scratch(d + 1);
        const double fa = logreg_objective(x, y, wa, 0.1, scratch);
        const double fb = logreg_objective(x, y, wb, 0.1, scratch);
        CHECK(std::abs(fa - fb) < 1e-6);
    }

    TEST_CASE("trained problems satisfy the gradient tolerance") {
        EmbeddingMatrix emb(30, 3);
        CounterRng rng(9);
        for (float& v : emb.values()) v = static_cast<float>(rng.next_double() - 0.5);
        LabelSet labels = make_labels(30, 2, {});
        for (NodeId i = 0; i < 30; ++i) labels.labels[i] = {i % 2u};
        std::vector<NodeId> train(30);
        for (NodeId i = 0; i < 30; ++i) train[i] = i;
        const OvrLogRegModel model = train_ovr_logreg(emb, labels, train, 1.0);

        DenseMatrix<double> x(30, 3);
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 3; ++j) x(i, j) = emb(i, j);
        for (std::uint32_t cls = 0; cls < 2; ++cls) {
            std::vector<std::int8_t> y(30);
            for (std::size_t i = 0; i < 30; ++i)
                y[i] = labels.labels[i][0] == cls ? 1 : -1;
            std::vector<double> wb(4);
            for (std::size_t j = 0; j < 3; ++j) wb[j] = model.weights(cls, j);
            wb[3] = model.bias[cls];
            std::vector<double> grad(4);
            logreg_objective(x, y, wb, 1.0, grad);
            double gnorm = 0.0;
            for (const double g : grad) gnorm += g * g;
            CHECK(std::sqrt(gnorm) < 1e-5);
        }
    }

    TEST_CASE("standardization makes predictions invariant to feature scaling") {
        EmbeddingMatrix emb(20, 3);
        CounterRng rng(61);
        LabelSet labels = make_labels(20, 2, {});
        for (NodeId i = 0; i < 20; ++i) {
            labels.labels[i] = {i % 2u};
            for (float& v : emb.row(i))
                v = static_cast<float>(rng.next_double() + (i % 2 ? 0.4 : -0.4));
        }
        EmbeddingMatrix skewed = emb;
        const double scale[3] = {1000.0, 0.001, 7.0};
        const double shift[3] = {-5.0, 2.0, 0.0};
        for (NodeId i = 0; i < 20; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                skewed(i, j) = static_cast<float>(emb(i, j) * scale[j] + shift[j]);

        std::vector<NodeId> train = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        std::vector<NodeId> test = {10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
        const OvrLogRegModel a = train_ovr_logreg(emb, labels, train, 0.1, 1, true);
        const OvrLogRegModel b = train_ovr_logreg(skewed, labels, train, 0.1, 1, true);
        CHECK_FALSE(a.feature_shift.empty());
        CHECK(predict_known_count(a, emb, labels, test) ==
              predict_known_count(b, skewed, labels, test));
    }

    TEST_CASE("classes without positive examples are never predicted") {
        EmbeddingMatrix emb(6, 2);
        CounterRng rng(31);
        for (float& v : emb.values()) v = static_cast<float>(rng.next_double() - 0.5);
        // class 2 exists only on test nodes
        const LabelSet labels = make_labels(
            6, 3, {{0, {0}}, {1, {1}}, {2, {0}}, {3, {1}}, {4, {0, 1, 2}}, {5, {2}}});
        const std::vector<NodeId> train = {0, 1, 2, 3};
        const std::vector<NodeId> test = {4, 5};
        const OvrLogRegModel model = train_ovr_logreg(emb, labels, train, 1.0);
        CHECK_FALSE(model.trained[2]);
        const auto predicted = predict_known_count(model, emb, labels, test);
        // node 4 wants three classes but only two are trained
        CHECK(predicted[0].size() == 2);
        for (const auto& p : predicted)
            for (const std::uint32_t c : p) CHECK(c != 2);
    }
}

TEST_SUITE("score_multilabel") {
    TEST_CASE("perfect predictions score one everywhere") {
        const std::vector<std::vector<std::uint32_t>> truth = {{0}, {1, 2}, {2}};
        const TrialScores s = score_multilabel(truth, truth, 3);
        CHECK(s.macro_f1 == 1.0);
        CHECK(s.micro_f1 == 1.0);
        CHECK(s.accuracy == 1.0);
    }

    TEST_CASE("disjoint predictions score zero") {
        const std::vector<std::vector<std::uint32_t>> truth = {{0}, {1}};
        const std::vector<std::vector<std::uint32_t>> predicted = {{1}, {0}};
        const TrialScores s = score_multilabel(predicted, truth, 2);
        CHECK(s.macro_f1 == 0.0);
        CHECK(s.micro_f1 == 0.0);
        CHECK(s.accuracy == 0.0);
    }

    TEST_CASE("macro is invariant to class relabeling") {
        const std::vector<std::vector<std::uint32_t>> truth = {{0, 1}, {1}, {2}, {0}};
        const std::vector<std::vector<std::uint32_t>> predicted = {{0, 2}, {1}, {1}, {0}};
        const TrialScores s = score_multilabel(predicted, truth, 3);
        // swap classes 0 <-> 2 everywhere
        const auto remap = [](std::vector<std::vector<std::uint32_t>> in) {
            for (auto& row : in) {
                for (auto& c : row) c = c == 0 ? 2 : (c == 2 ? 0 : c);
                std::sort(row.begin(), row.end());
            }
            return in;
        };
        const TrialScores swapped = score_multilabel(remap(predicted), remap(truth), 3);
        CHECK(s.macro_f1 == doctest::Approx(swapped.macro_f1).epsilon(1e-12));
        CHECK(s.micro_f1 == doctest::Approx(swapped.micro_f1).epsilon(1e-12));
    }

    TEST_CASE("scores stay within the unit interval") {
        CounterRng rng(55);
        std::vector<std::vector<std::uint32_t>> truth(50), predicted(50);
        for (std::size_t i = 0; i < 50; ++i) {
            truth[i] = {static_cast<std::uint32_t>(rng.next_below(5))};
            predicted[i] = {static_cast<std::uint32_t>(rng.next_below(5))};
        }
        const TrialScores s = score_multilabel(predicted, truth, 5);
        CHECK(s.macro_f1 >= 0.0);
        CHECK(s.macro_f1 <= 1.0);
        CHECK(s.micro_f1 >= 0.0);
        CHECK(s.micro_f1 <= 1.0);
    }
}

TEST_SUITE("evaluate_classification") {
    TEST_CASE("well-separated clusters classify cleanly") {
        // Two clusters far apart in embedding space, labels follow clusters.
        EmbeddingMatrix emb(40, 4);
        CounterRng rng(13);
        LabelSet labels = make_labels(40, 2, {});
        for (NodeId i = 0; i < 40; ++i) {
            const bool second = i >= 20;
            labels.labels[i] = {second ? 1u : 0u};
            for (float& v : emb.row(i))
                v = static_cast<float>((second ? 5.0 : -5.0) + rng.next_double());
        }
        const ClassificationReport report =
            evaluate_classification(emb, labels, 0.5, 3, 17, 0.01);
        CHECK(report.per_trial.size() == 3);
        CHECK(report.macro_f1 > 0.95);
        CHECK(report.micro_f1 > 0.95);
        CHECK(report.accuracy > 0.95);
        double mean = 0.0;
        for (const TrialScores& t : report.per_trial) mean += t.macro_f1;
        CHECK(report.macro_f1 == doctest::Approx(mean / 3.0).epsilon(1e-12));
    }

    TEST_CASE("rejects node-count mismatches") {
        EmbeddingMatrix emb(10, 2, 1.0f);
        const LabelSet labels = make_labels(8, 2, {{0, {0}}, {1, {1}}});
        CHECK_THROWS_AS(evaluate_classification(emb, labels, 0.5, 1, 1),
                        std::invalid_argument);
    }
}
