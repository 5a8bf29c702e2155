#include <cmath>

#include <doctest.h>

#include "fastrp/projection.hpp"

using namespace fastrp;

namespace {

struct Moments {
    double mean;
    double variance;
    double nonzero_fraction;
};

Moments sparse_moments(const ProjectionMatrix& r) {
    const auto& spec = r.spec();
    const double total = static_cast<double>(spec.n) * spec.d;
    const double scale = r.sparse_scale();
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t nnz = 0;
    for (std::uint64_t row = 0; row < spec.n; ++row) {
        for (const std::int8_t sign : r.row_signs(row)) {
            sum += sign > 0 ? scale : -scale;
            sum_sq += scale * scale;
            ++nnz;
        }
    }
    const double mean = sum / total;
    return {mean, sum_sq / total - mean * mean, static_cast<double>(nnz) / total};
}

}  // namespace

TEST_SUITE("sample_very_sparse") {
    TEST_CASE("nonzero fraction near 1/s") {
        const ProjectionSpec spec{10000, 100, 4.0, ProjectionKind::kVerySparse, 1};
        const auto r = sample_very_sparse(spec);
        const Moments m = sparse_moments(r);
        CHECK(m.nonzero_fraction > 0.24);
        CHECK(m.nonzero_fraction < 0.26);
    }

    TEST_CASE("entries have zero mean and unit variance") {
        const ProjectionSpec spec{10000, 100, 4.0, ProjectionKind::kVerySparse, 1};
        const Moments m = sparse_moments(sample_very_sparse(spec));
        CHECK(std::abs(m.mean) < 0.01);
        CHECK(std::abs(m.variance - 1.0) < 0.02);
    }

    TEST_CASE("same seed reproduces the matrix") {
        const ProjectionSpec spec{500, 64, 8.0, ProjectionKind::kVerySparse, 99};
        const auto a = sample_very_sparse(spec);
        const auto b = sample_very_sparse(spec);
        REQUIRE(a.nonzeros() == b.nonzeros());
        for (std::uint64_t row = 0; row < spec.n; ++row) {
            const auto ac = a.row_columns(row);
            const auto bc = b.row_columns(row);
            REQUIRE(std::equal(ac.begin(), ac.end(), bc.begin(), bc.end()));
            const auto as = a.row_signs(row);
            const auto bs = b.row_signs(row);
            REQUIRE(std::equal(as.begin(), as.end(), bs.begin(), bs.end()));
        }
    }

    TEST_CASE("column indices strictly increase within a row") {
        const ProjectionSpec spec{2000, 128, 3.0, ProjectionKind::kVerySparse, 5};
        const auto r = sample_very_sparse(spec);
        for (std::uint64_t row = 0; row < spec.n; ++row) {
            const auto cols = r.row_columns(row);
            for (std::size_t i = 1; i < cols.size(); ++i) CHECK(cols[i] > cols[i - 1]);
            if (!cols.empty()) CHECK(cols.back() < spec.d);
        }
    }

    TEST_CASE("s = 1 degenerates to dense sign flips") {
        const ProjectionSpec spec{50, 20, 1.0, ProjectionKind::kVerySparse, 3};
        const auto r = sample_very_sparse(spec);
        CHECK(r.nonzeros() == 50 * 20);
        CHECK(r.sparse_scale() == 1.0);
    }

    TEST_CASE("nonzero count concentrates around n*d/s") {
        const ProjectionSpec spec{10000, 100, 10.0, ProjectionKind::kVerySparse, 17};
        const auto r = sample_very_sparse(spec);
        const double total = 1e6;
        const double p = 1.0 / spec.s;
        const double expected = total * p;
        const double stderr3 = 3.0 * std::sqrt(total * p * (1.0 - p));
        CHECK(std::abs(static_cast<double>(r.nonzeros()) - expected) < stderr3);
    }

    TEST_CASE("any row regenerates in isolation") {
        const ProjectionSpec spec{100, 50, 5.0, ProjectionKind::kVerySparse, 1234};
        const auto full = sample_very_sparse(spec);
        std::vector<std::uint32_t> cols;
        std::vector<std::int8_t> signs;
        for (const std::uint64_t row : {std::uint64_t{0}, std::uint64_t{7}, std::uint64_t{99}}) {
            sample_very_sparse_row(spec, row, cols, signs);
            const auto fc = full.row_columns(row);
            const auto fs = full.row_signs(row);
            REQUIRE(std::equal(cols.begin(), cols.end(), fc.begin(), fc.end()));
            REQUIRE(std::equal(signs.begin(), signs.end(), fs.begin(), fs.end()));
        }
    }
}

TEST_SUITE("sample_gaussian") {
    TEST_CASE("per-entry variance near 1/d") {
        const ProjectionSpec spec{10000, 64, 1.0, ProjectionKind::kGaussian, 2};
        const auto r = sample_gaussian(spec);
        double sum = 0.0, sum_sq = 0.0;
        const double total = static_cast<double>(spec.n) * spec.d;
        for (std::uint64_t row = 0; row < spec.n; ++row)
            for (const float v : r.dense_row(row)) {
                sum += v;
                sum_sq += static_cast<double>(v) * v;
            }
        const double mean = sum / total;
        const double variance = sum_sq / total - mean * mean;
        CHECK(std::abs(mean) < 0.005);
        CHECK(variance > (1.0 / 64.0) * 0.95);
        CHECK(variance < (1.0 / 64.0) * 1.05);
    }

    TEST_CASE("fixed seed reproduces a small matrix") {
        const ProjectionSpec spec{2, 2, 1.0, ProjectionKind::kGaussian, 77};
        const auto a = sample_gaussian(spec);
        const auto b = sample_gaussian(spec);
        for (std::uint64_t row = 0; row < 2; ++row) {
            const auto ar = a.dense_row(row);
            const auto br = b.dense_row(row);
            CHECK(std::equal(ar.begin(), ar.end(), br.begin(), br.end()));
        }
    }
}

TEST_SUITE("default_sparsity") {
    TEST_CASE("square root of the input dimensionality") {
        CHECK(default_sparsity(10000) == doctest::Approx(100.0));
        CHECK(default_sparsity(1) == doctest::Approx(1.0));
        CHECK(default_sparsity(3) == doctest::Approx(std::sqrt(3.0)));
    }
}

TEST_SUITE("materialize") {
    TEST_CASE("sparse entries carry the scale") {
        const ProjectionSpec spec{20, 10, 4.0, ProjectionKind::kVerySparse, 8};
        const auto r = sample_very_sparse(spec);
        const auto dense = r.materialize();
        for (std::uint64_t row = 0; row < spec.n; ++row) {
            const auto cols = r.row_columns(row);
            const auto signs = r.row_signs(row);
            std::size_t at = 0;
            for (std::uint32_t c = 0; c < spec.d; ++c) {
                if (at < cols.size() && cols[at] == c) {
                    CHECK(dense(row, c) == (signs[at] > 0 ? 2.0 : -2.0));
                    ++at;
                } else {
                    CHECK(dense(row, c) == 0.0);
                }
            }
        }
    }
}
